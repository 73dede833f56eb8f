"""Vertex Hit-and-Run with extrapolation and boundary truncation.

One step from ``x``: pick a generator ``v^i`` uniformly, project ``x`` onto
the hull of the remaining generators, walk the max-plus segment from that
projection toward ``v^i``, cut it at the first interior bend lying on a
min-tropical hyperplane of the arrangement, then draw a point uniformly by
Euclidean arc length on what is left.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import TropPolytope, TropSegment, as_polytope, contains, normalize, project, trop_segment
from .errors import DimensionError, InvalidStart
from ._kernels import har_run
from .hull import MinHyperplane, arrangement, hyperplane_distances

#: RNG algorithm recorded in run manifests
RNG_NAME = "numpy.PCG64"

BOUNDARY_TOL = 1e-9
_CHUNK = 1 << 16
START_TOL = 1e-6


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def extrapolate(v_minus_i, x) -> np.ndarray:
    """Projection of ``x`` onto the tropical hull of ``v_minus_i``."""
    w = np.atleast_2d(np.asarray(v_minus_i, dtype=float))
    x = np.asarray(x, dtype=float)
    if w.shape[1] != x.shape[-1]:
        raise DimensionError(f"dimension mismatch: {w.shape[1]} vs {x.shape[-1]}")
    return project(w, x)


def _first_hit(bends: np.ndarray, omegas: np.ndarray, tol: float) -> int | None:
    """Index (into ``bends``) of the first interior bend on some hyperplane."""
    inner = bends[1:-1]
    if len(inner) == 0:
        return None
    hit = (hyperplane_distances(inner, omegas) <= tol).any(axis=1)
    k = np.flatnonzero(hit)
    return int(k[0]) + 1 if k.size else None


def truncate_segment(seg: TropSegment, hyperplanes, tol: float = BOUNDARY_TOL) -> TropSegment:
    """Cut ``seg`` at its first interior bend lying on any of ``hyperplanes``.

    Bends are visited from ``seg.start``; the endpoints themselves are not
    tested, so a segment whose interior bends all miss returns unchanged.
    """
    omegas = np.array([h.omega if isinstance(h, MinHyperplane) else h for h in hyperplanes], dtype=float)
    k = _first_hit(seg.bends, omegas, tol)
    return seg if k is None else seg.truncated(k)


def sample_on_segment(seg: TropSegment, rng: np.random.Generator) -> np.ndarray:
    """Point drawn uniformly by Euclidean arc length along ``seg``."""
    if seg.length <= 0.0:
        return seg.bends[0].copy()
    return seg.point_at(rng.random() * seg.length)


@dataclass
class HarChain:
    """Single Hit-and-Run chain on a tropical simplex.

    The chain owns its generator; two chains built with the same simplex,
    start point and seed produce identical sequences.
    """

    simplex: TropPolytope
    current: np.ndarray
    seed: int = 0
    rng: np.random.Generator = field(init=False, repr=False)
    iterations_done: int = 0
    tol: float = BOUNDARY_TOL

    def __post_init__(self):
        self.simplex = as_polytope(self.simplex)
        v = self.simplex.vertices
        self.current = normalize(self.current)
        if self.current.size != self.simplex.e:
            raise DimensionError(f"start point has {self.current.size} coordinates, simplex {self.simplex.e}")
        if not contains(self.simplex, self.current, START_TOL):
            raise InvalidStart(f"start point {self.current.tolist()} is outside the polytope")
        self.rng = make_rng(self.seed)
        self.arrangement = arrangement(self.simplex)
        self._v = np.array(v)
        self._omegas = -self._v
        self._others = [np.delete(self._v, i, axis=0) for i in range(len(v))]

    def segment(self, i: int) -> TropSegment:
        """Truncated segment toward generator ``i`` from the current point."""
        w = self._others[i]
        x = self.current
        lam = (x - w).min(axis=1)
        pi = (lam[:, None] + w).max(axis=0)
        pi = pi - pi[0]
        seg = trop_segment(pi, self._v[i])
        k = _first_hit(seg.bends, self._omegas, self.tol)
        return seg if k is None else seg.truncated(k)

    def step(self) -> np.ndarray:
        """One Hit-and-Run move; consumes two uniforms from the chain's RNG."""
        u_vertex, u_pos = self.rng.random(2)
        e = len(self._v)
        i = min(int(u_vertex * e), e - 1)
        seg = self.segment(i)
        self.current = seg.point_at(u_pos * seg.length) if seg.length > 0 else seg.bends[0].copy()
        self.iterations_done += 1
        return self.current

    def run(self, n: int, burn_in: int = 0, thin: int = 1) -> np.ndarray:
        """Advance ``burn_in + n*thin`` steps and keep every ``thin``-th point.

        Uses the compiled loop; the random stream and arithmetic match
        repeated :meth:`step` calls.
        """
        if thin < 1:
            raise ValueError("thin must be >= 1")
        if n < 0 or burn_in < 0:
            raise ValueError("n and burn_in must be non-negative")
        e = self.simplex.e
        out = np.empty((n, e))
        remaining = burn_in + n * thin
        done = 0  # steps taken in this call
        while remaining:
            size = min(remaining, _CHUNK)
            draws = self.rng.random((size, 2))
            pts = np.empty((size, e))
            self.current = har_run(self._v, self.current, draws, self.tol, pts)
            # absolute step numbers (1-based within this call) that are kept
            steps = np.arange(done + 1, done + size + 1)
            sel = (steps > burn_in) & ((steps - burn_in) % thin == 0)
            if sel.any():
                first = (steps[sel][0] - burn_in) // thin - 1
                out[first:first + sel.sum()] = pts[sel]
            done += size
            remaining -= size
        self.iterations_done += burn_in + n * thin
        return out


def har_step(chain: HarChain) -> np.ndarray:
    return chain.step()


def run_chain(simplex, x0, iterations: int, seed: int) -> np.ndarray:
    """``iterations`` successive Hit-and-Run points, shape ``(iterations, e)``."""
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    return HarChain(as_polytope(simplex), x0, seed).run(iterations)
