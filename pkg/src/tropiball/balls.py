"""Tropical balls: generators, maximum inscribed and minimum enclosing balls."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from .core import TropPolytope, as_polytope, normalize, trop_dist
from .errors import DegenerateSimplex, NoTrunk
from .hull import KleeneStar, kleene_star
from .lp import LpProblem, lp_solve

log = logging.getLogger(__name__)

# fallback for the second LP stage if pinning R at the optimum is infeasible
_RADIUS_SLACK = 1e-12


@dataclass(frozen=True)
class TropBall:
    """``B_l(c) = {y : d_tr(c, y) <= l}``.

    ``simplex`` records the vertex indices of the simplex an inscribed ball
    was computed for, when it came from :func:`max_inscribed`.
    """

    center: np.ndarray
    radius: float
    simplex: tuple[int, ...] | None = None

    def __post_init__(self):
        if not self.radius >= 0:
            raise ValueError(f"radius must be non-negative, got {self.radius}")
        object.__setattr__(self, "center", normalize(self.center))
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def e(self) -> int:
        return self.center.size

    def generators(self) -> TropPolytope:
        return ball_generators(self)

    def volume(self) -> float:
        return ball_volume(self.radius, self.e)

    def contains(self, y, tol: float = 1e-9) -> bool:
        return trop_dist(self.center, y) <= self.radius + tol


def ball_generators(b: TropBall, e: int | None = None) -> TropPolytope:
    """The ``e`` points ``c + l·e_i`` whose tropical hull is the ball.

    For ``i = 1`` the shift of the first coordinate is renormalized, giving
    ``(0, c_2 - l, ..., c_e - l)``.  With radius 0 every generator is the
    center, so the returned polytope collapses to one vertex.
    """
    e = b.e if e is None else e
    if e != b.e:
        raise ValueError(f"ball center has {b.e} coordinates, asked for e={e}")
    gens = np.tile(b.center, (e, 1)) + b.radius * np.eye(e)
    return TropPolytope(gens)


def ball_volume(radius: float, e: int) -> float:
    """Euclidean volume ``e · l^(e-1)`` of a tropical ball in R^e/R1."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    if e < 2:
        raise ValueError("e must be >= 2")
    return float(e * radius ** (e - 1))


def _inscribed_lp(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Inequalities ``G @ [x_2..x_e, R] <= h`` keeping all ball generators
    inside ``{y : y_j - y_i <= -m_ij}``."""
    e = m.shape[0]
    nv = e  # x_2..x_e and R
    rows, rhs = [], []

    def row():
        return np.zeros(nv)

    for i in range(1, e):
        # (x_i + R) - x_1 <= -m_1i
        g = row()
        g[i - 1] = 1.0
        g[-1] = 1.0
        rows.append(g)
        rhs.append(-m[0, i])
    for j in range(1, e):
        # x_1 - (x_j - R) <= -m_j1
        g = row()
        g[j - 1] = -1.0
        g[-1] = 1.0
        rows.append(g)
        rhs.append(-m[j, 0])
    for i in range(1, e):
        for j in range(1, e):
            if i == j:
                continue
            # (x_j + R) - x_i <= -m_ij
            g = row()
            g[j - 1] += 1.0
            g[i - 1] -= 1.0
            g[-1] = 1.0
            rows.append(g)
            rhs.append(-m[i, j])
    # R >= 0
    g = row()
    g[-1] = -1.0
    rows.append(g)
    rhs.append(0.0)
    return np.array(rows), np.array(rhs)


def inscribed_ball_from_kleene(ks: KleeneStar) -> TropBall:
    """Largest ball inside ``{y : y_j - y_i <= -m_ij, y_1 = 0}``.

    The radius comes from maximizing R.  The optimal center is usually not
    unique, so a second LP with R pinned at the optimum picks the center
    with the smallest coordinate sum, making the result canonical.
    """
    g, h = _inscribed_lp(np.asarray(ks.m, dtype=float))
    e = ks.e
    c = np.zeros(e)
    c[-1] = 1.0
    sol = lp_solve(LpProblem(c, g, h))
    if not sol.ok or sol.value <= 1e-12:
        raise NoTrunk("the simplex has no full-dimensional (e-1)-trunk")
    radius = sol.value

    # stage 2: radius pinned, minimize the sum of the free center coordinates
    x = sol.z[:-1]
    for r_fix in (radius, max(radius - _RADIUS_SLACK, 0.0)):
        sol2 = lp_solve(LpProblem(-np.ones(e - 1), g[:, :-1], h - g[:, -1] * r_fix))
        if sol2.ok:
            x = sol2.z
            break
    return TropBall(np.concatenate(([0.0], x)), radius)


def max_inscribed_simplex(p) -> TropBall:
    """Maximum inscribed tropical ball of a tropical simplex (``e`` vertices)."""
    p = as_polytope(p)
    return inscribed_ball_from_kleene(kleene_star(p))


def max_inscribed(p) -> TropBall:
    """Maximum inscribed ball of a general tropical polytope.

    Runs the simplex LP on every ``e``-subset of the generators and keeps the
    largest radius; degenerate or trunk-less subsets are skipped.  Ties go to
    the lexicographically first index subset.
    """
    p = as_polytope(p)
    if p.s < p.e:
        raise NoTrunk(f"{p.s} vertices cannot span a full-dimensional trunk in R^{p.e}/R1")
    best: TropBall | None = None
    for idx in itertools.combinations(range(p.s), p.e):
        try:
            ball = max_inscribed_simplex(p.subset(idx))
        except (DegenerateSimplex, NoTrunk) as exc:
            log.debug("skipping simplex %s: %s", idx, exc)
            continue
        if best is None or ball.radius > best.radius + 1e-12:
            best = TropBall(ball.center, ball.radius, simplex=idx)
    if best is None:
        raise NoTrunk("no simplex of the polytope has a full-dimensional trunk")
    return best


def min_enclosing(p) -> TropBall:
    """Minimum enclosing tropical ball of ``tconv(V)``.

    minimize r  s.t.  v_ij - y_j - v_ik + y_k <= r  for all vertices i and
    ordered coordinate pairs j != k, r >= 0, y_1 = 0.  For each pair (j, k)
    only the vertex maximizing ``v_ij - v_ik`` can be active, so one row per
    pair is kept.
    """
    p = as_polytope(p)
    v = p.vertices
    e = p.e
    rows, rhs = [], []
    for j in range(e):
        for k in range(e):
            if j == k:
                continue
            # -y_j + y_k - r <= -(max_i v_ij - v_ik)
            g = np.zeros(e)
            if j:
                g[j - 1] -= 1.0
            if k:
                g[k - 1] += 1.0
            g[-1] = -1.0
            rows.append(g)
            rhs.append(-float((v[:, j] - v[:, k]).max()))
    g = np.zeros(e)
    g[-1] = -1.0
    rows.append(g)
    rhs.append(0.0)
    c = np.zeros(e)
    c[-1] = -1.0
    sol = lp_solve(LpProblem(c, np.array(rows), np.array(rhs)))
    if not sol.ok:  # pragma: no cover - the LP is always feasible and bounded
        raise RuntimeError(f"enclosing-ball LP failed: {sol.status}")
    center = np.concatenate(([0.0], sol.z[:-1]))
    # the LP optimum and the realized max distance agree up to rounding
    radius = max(-sol.value, max(trop_dist(center, x) for x in v))
    return TropBall(center, radius)


def min_enclosing_lower_bound(p) -> float:
    """Half the largest pairwise tropical distance between generators."""
    p = as_polytope(p)
    v = p.vertices
    if p.s < 2:
        return 0.0
    d = v[:, None, :] - v[None, :, :]
    return float((d.max(axis=2) - d.min(axis=2)).max() / 2.0)
