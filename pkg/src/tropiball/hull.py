"""Half-space descriptions of tropical simplices and min-tropical hyperplanes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import TropPolytope, as_polytope, trop_det, trop_matpow
from .errors import DegenerateSimplex, DimensionError, NotASimplex


@dataclass(frozen=True)
class KleeneStar:
    """Weight matrix ``m`` (coordinates x coordinates) of a tropical simplex.

    ``m[j, k] = A'[j, k] - A'[k, k]`` where ``A'`` is the vertex matrix with
    its columns permuted so the tropical determinant sits on the diagonal.
    ``sigma`` is the 1-based maximizing permutation.
    """

    m: np.ndarray
    sigma: tuple[int, ...]

    @property
    def e(self) -> int:
        return self.m.shape[0]

    def has_positive_cycle(self, tol: float = 0.0) -> bool:
        closed = kleene_closure(self.m)
        return bool(np.any(np.diag(closed) > tol))

    def is_closed(self, tol: float = 0.0) -> bool:
        """True when ``m`` is its own max-plus closure (a polytrope)."""
        return bool(np.all(np.abs(kleene_closure(self.m) - self.m) <= tol))


def kleene_closure(m: np.ndarray) -> np.ndarray:
    """Max-weight path closure by Floyd-Warshall (zero diagonal kept).

    Assumes no positive cycles; the diagonal then stays at 0.
    """
    w = np.array(m, dtype=float)
    n = w.shape[0]
    np.fill_diagonal(w, np.maximum(np.diag(w), 0.0))
    for k in range(n):
        w = np.maximum(w, w[:, k:k + 1] + w[k:k + 1, :])
    return w


def kleene_power(m: np.ndarray) -> np.ndarray:
    """``m^{⊙(e-1)}`` with the zero diagonal included, the algebraic route."""
    w = np.array(m, dtype=float)
    np.fill_diagonal(w, np.maximum(np.diag(w), 0.0))
    n = w.shape[0]
    return w if n == 1 else trop_matpow(w, n - 1)


def kleene_star(vertices) -> KleeneStar:
    """Kleene star of the tropical simplex generated by ``vertices``.

    Raises :class:`NotASimplex` unless there are exactly ``e`` vertices and
    :class:`DegenerateSimplex` when their tropical determinant is singular.
    """
    p = as_polytope(vertices)
    if p.s != p.e:
        raise NotASimplex(f"a tropical simplex in R^{p.e}/R1 needs {p.e} vertices, got {p.s}")
    a = p.matrix()
    det = trop_det(a)
    if det.singular:
        raise DegenerateSimplex(
            f"vertex matrix is tropically singular (tdet={det.value}); "
            "the points lie in a tropical hyperplane"
        )
    e = p.e
    a_prime = np.empty_like(a)
    for i, row in enumerate(det.sigma):
        a_prime[:, row - 1] = a[:, i]
    m = a_prime - np.diag(a_prime)[None, :]
    m.setflags(write=False)
    return KleeneStar(m, det.sigma)


@dataclass(frozen=True)
class HRep:
    """``y_j - y_i <= bound`` for every ordered pair ``i != j`` plus ``y_1 = 0``.

    ``constraints`` holds 0-based ``(i, j, bound)`` triples.
    """

    e: int
    constraints: tuple[tuple[int, int, float], ...]

    def matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """``(G, h)`` with ``G @ y <= h`` over the free coordinates ``y_2..y_e``."""
        g = np.zeros((len(self.constraints), self.e))
        h = np.empty(len(self.constraints))
        for r, (i, j, bound) in enumerate(self.constraints):
            g[r, j] += 1.0
            g[r, i] -= 1.0
            h[r] = bound
        return g[:, 1:], h

    def slack(self, points) -> np.ndarray:
        """``h - G y`` for each row of ``points``; negative entries are violations."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        pts = pts - pts[:, :1]
        g, h = self.matrix()
        return h[None, :] - pts[:, 1:] @ g.T

    def satisfied(self, points, tol: float = 1e-9) -> np.ndarray:
        return (self.slack(points) >= -tol).all(axis=1)

    def lines(self) -> list[str]:
        out = [f"y{j + 1} - y{i + 1} <= {_fmt(b)}" for i, j, b in self.constraints]
        out.append("y1 = 0")
        return out


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def h_rep(ks: KleeneStar) -> HRep:
    """The inequalities ``y_j - y_i <= -m_ij`` of a Kleene star."""
    e = ks.e
    cons = []
    for i in range(e):
        for j in range(e):
            if i != j:
                cons.append((i, j, float(-ks.m[i, j]) + 0.0))
    return HRep(e, tuple(cons))


@dataclass(frozen=True)
class MinHyperplane:
    """Min-tropical hyperplane ``H^min_ω``: ``min_i(ω_i + x_i)`` attained twice.

    The apex sits at ``-ω``.
    """

    omega: np.ndarray

    @property
    def apex(self) -> np.ndarray:
        a = -np.asarray(self.omega, dtype=float)
        return a - a[0]


def hyperplane_distance(x, h: MinHyperplane) -> float:
    """Tropical distance from ``x`` to ``H^min_ω``.

    Shift by ω to reduce to the hyperplane at the origin; the distance to
    ``H^min_0`` is the gap between the two smallest coordinates.
    """
    x = np.asarray(x, dtype=float)
    w = np.asarray(h.omega, dtype=float)
    if x.shape != w.shape:
        raise DimensionError(f"dimension mismatch: {x.shape} vs {w.shape}")
    z = np.sort(x + w)
    return float(z[1] - z[0])


def hyperplane_distances(points, omegas) -> np.ndarray:
    """Distances from every point (rows) to every hyperplane (rows of ``omegas``)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    om = np.atleast_2d(np.asarray(omegas, dtype=float))
    if pts.shape[1] != om.shape[1]:
        raise DimensionError(f"dimension mismatch: {pts.shape[1]} vs {om.shape[1]}")
    z = np.sort(pts[:, None, :] + om[None, :, :], axis=2)
    return z[:, :, 1] - z[:, :, 0]


def arrangement(vertices) -> list[MinHyperplane]:
    """Min-tropical hyperplanes with apices at the generators, ``ω^i = -v^i``."""
    p = as_polytope(vertices)
    return [MinHyperplane(-v.copy()) for v in p.vertices]


def simplex_hrep(p: TropPolytope) -> HRep:
    return h_rep(kleene_star(p))
