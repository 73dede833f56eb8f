"""Monte-Carlo volume estimation inside an enclosing tropical ball, and rounding.

The estimator samples the enclosing ball (itself a tropical simplex) with
Hit-and-Run, counts the hits that land in the polytope and scales the ball
volume by the hit rate.  Rounding replaces the enclosing ball of a simplex
by the smaller ball around its (e-1)-trunk, found from the pseudo-vertices.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .balls import TropBall, ball_generators, ball_volume, max_inscribed, min_enclosing
from .core import TropPolytope, as_polytope, contains_many, normalize_rows
from .errors import DegenerateBall, NoTrunk, NotASimplex
from .hull import HRep, kleene_star, h_rep
from .sampler import RNG_NAME, HarChain, make_rng

DEFAULT_BURN_IN = 100
DEDUP_TOL = 1e-8


@dataclass
class VolumeEstimate:
    hits: int
    samples: int
    p: float
    enclosing_volume: float
    estimate: float
    seed: int
    lower_bound: float
    upper_bound: float
    enclosing_radius: float
    std_error: float
    burn_in: int
    thin: int
    sampler: str
    rounded: bool
    rng: str = RNG_NAME
    shard_seeds: list[int] = field(default_factory=list)

    @property
    def band(self) -> tuple[float, float]:
        """Three binomial standard errors around the estimate."""
        return self.estimate - 3 * self.std_error, self.estimate + 3 * self.std_error

    def to_dict(self) -> dict:
        d = asdict(self)
        d["band"] = list(self.band)
        return d


def acceptance_rate_bound(inner_radius: float, outer_radius: float, e: int) -> float:
    """Lower bound ``(R/r)^(e-1)`` on the fraction of enclosing-ball samples
    that land in the polytope."""
    if outer_radius <= 0:
        raise DegenerateBall("enclosing radius must be positive")
    if inner_radius < 0 or inner_radius > outer_radius * (1 + 1e-12):
        raise ValueError(f"need 0 <= R <= r, got R={inner_radius}, r={outer_radius}")
    return float((inner_radius / outer_radius) ** (e - 1))


def volume_bounds(p) -> tuple[float, float]:
    """``(Vol(B_R), Vol(B_r))`` from the inscribed and enclosing radii."""
    p = as_polytope(p)
    lower = ball_volume(max_inscribed(p).radius, p.e)
    upper = ball_volume(min_enclosing(p).radius, p.e)
    return lower, upper


def sample_ball_direct(ball: TropBall, n: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. uniform points of a tropical ball.

    The ball is the union of ``e`` unit-Jacobian hypercubes of side ``l``
    (the representatives whose k-th coordinate is the minimum), so a
    uniform cube followed by a uniform point in it is exact.
    """
    e = ball.e
    k = rng.integers(e, size=n)
    y = rng.random((n, e)) * ball.radius
    y[np.arange(n), k] = 0.0
    return normalize_rows(ball.center[None, :] + y)


def _shard_seeds(seed: int, chains: int) -> list[int]:
    if chains == 1:
        return [int(seed)]
    children = np.random.SeedSequence(seed).spawn(chains)
    return [int(c.generate_state(1, np.uint64)[0]) for c in children]


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("TROPIBALL_THREADS", "1")))
    except ValueError:
        return 1


def sample_in_ball(ball: TropBall, n: int, seed: int, burn_in: int = DEFAULT_BURN_IN,
                   thin: int = 1, sampler: str = "har", chains: int = 1) -> tuple[np.ndarray, list[int]]:
    """``n`` points of ``ball``, split over ``chains`` independent shards."""
    seeds = _shard_seeds(seed, chains)
    sizes = [n // chains + (1 if j < n % chains else 0) for j in range(chains)]

    def shard(j: int) -> np.ndarray:
        if sampler == "direct":
            return sample_ball_direct(ball, sizes[j], make_rng(seeds[j]))
        if sampler != "har":
            raise ValueError(f"unknown sampler {sampler!r}")
        chain = HarChain(ball_generators(ball), ball.center, seeds[j])
        return chain.run(sizes[j], burn_in=burn_in, thin=thin)

    workers = min(_workers(), chains)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(shard, range(chains)))
    else:
        parts = [shard(j) for j in range(chains)]
    return np.vstack(parts), seeds


def estimate_volume(p, samples: int, seed: int, burn_in: int = DEFAULT_BURN_IN, thin: int = 1,
                    sampler: str = "har", rounded: bool = False, chains: int = 1,
                    tol: float = 1e-9) -> VolumeEstimate:
    """Estimate ``Vol(P)`` as (hit rate) x (volume of the enclosing ball).

    With ``rounded=True`` the polytope must be a tropical simplex and the
    sampling ball is the one enclosing only its (e-1)-trunk.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    p = as_polytope(p)
    ball = round_polytope(p) if rounded else min_enclosing(p)
    pts, seeds = sample_in_ball(ball, samples, seed, burn_in, thin, sampler, chains)
    hits = int(contains_many(p, pts, tol).sum())
    prob = hits / samples
    vol_ball = ball_volume(ball.radius, p.e)
    try:
        lower = ball_volume(max_inscribed(p).radius, p.e)
    except NoTrunk:
        lower = 0.0
    return VolumeEstimate(
        hits=hits,
        samples=samples,
        p=prob,
        enclosing_volume=vol_ball,
        estimate=prob * vol_ball,
        seed=int(seed),
        lower_bound=lower,
        upper_bound=vol_ball,
        enclosing_radius=ball.radius,
        std_error=math.sqrt(prob * (1 - prob) / samples) * vol_ball,
        burn_in=burn_in,
        thin=thin,
        sampler=sampler,
        rounded=rounded,
        shard_seeds=seeds if chains > 1 else [],
    )


@dataclass(frozen=True)
class PseudoVertexSet:
    """Classical vertices of the h*-polytope of a simplex (rows, normalized)."""

    points: np.ndarray
    hrep: HRep

    def __len__(self) -> int:
        return len(self.points)

    def matrix(self) -> np.ndarray:
        """Pseudo-vertices as columns."""
        return self.points.T.copy()

    def active_counts(self, tol: float = 1e-8) -> np.ndarray:
        return (np.abs(self.hrep.slack(self.points)) <= tol).sum(axis=1)


def enumerate_pseudo_vertices(p) -> PseudoVertexSet:
    """Vertices of ``{y : y_j - y_i <= -m_ij, y_1 = 0}`` by active-set search.

    Every (e-1)-subset of the e(e-1) inequalities with a nonsingular matrix
    is solved as a linear system; feasible solutions are kept and merged
    within 1e-8.  Exponential in e, instant at the sizes used here.
    """
    p = as_polytope(p)
    if p.s != p.e:
        raise NotASimplex(f"pseudo-vertex enumeration needs a simplex ({p.e} vertices), got {p.s}")
    hr = h_rep(kleene_star(p))
    g, h = hr.matrix()
    d = p.e - 1
    combos = np.array(list(itertools.combinations(range(len(h)), d)))
    gs = g[combos]
    hs = h[combos]
    dets = np.linalg.det(gs)
    ok = np.abs(dets) > 1e-9
    ys = np.linalg.solve(gs[ok], hs[ok][..., None])[..., 0]
    feas = (ys @ g.T <= h[None, :] + DEDUP_TOL).all(axis=1)
    ys = ys[feas]
    found: list[np.ndarray] = []
    for y in ys:
        if not any(np.max(np.abs(y - q)) <= DEDUP_TOL for q in found):
            found.append(y)
    if not found:
        raise NoTrunk("the h*-representation is empty")
    pts = np.array(sorted(found, key=lambda y: tuple(np.round(y, 9))))
    pts = np.hstack([np.zeros((len(pts), 1)), pts])
    pts = np.where(np.abs(pts) < 1e-12, 0.0, pts)
    return PseudoVertexSet(pts, hr)


def round_polytope(p) -> TropBall:
    """Minimum enclosing ball of the (e-1)-trunk of a tropical simplex."""
    pv = enumerate_pseudo_vertices(p)
    return min_enclosing(TropPolytope(pv.points))
