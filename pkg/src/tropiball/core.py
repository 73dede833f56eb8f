"""Max-plus arithmetic on the tropical projective torus R^e / R1.

Points are plain ``numpy`` float arrays kept in a canonical representative
whose first coordinate is exactly zero (see :func:`normalize`).  Matrices
whose columns are points follow the usual convention of the literature:
row index = coordinate, column index = vertex.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, InvalidPoint

NEG_INF = -math.inf

#: default tolerance for membership and fixed-point tests
TOL = 1e-9

#: above this size trop_det switches to the assignment-problem fast path
_TDET_ENUM_MAX = 8


def trop_add(x: float, y: float) -> float:
    """Tropical sum ``x ⊕ y = max(x, y)``."""
    return x if x >= y else y


def trop_mul(x: float, y: float) -> float:
    """Tropical product ``x ⊙ y = x + y``; -inf is absorbing."""
    if x == NEG_INF or y == NEG_INF:
        return NEG_INF
    return x + y


def trop_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Max-plus matrix product ``(A ⊗ B)_ij = max_l (A_il + B_lj)``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return (a[:, :, None] + b[None, :, :]).max(axis=1)


def trop_matpow(a: np.ndarray, k: int) -> np.ndarray:
    """k-th max-plus power of a square matrix (k >= 1)."""
    if k < 1:
        raise ValueError("power must be >= 1")
    out = np.asarray(a, dtype=float)
    for _ in range(k - 1):
        out = trop_matmul(out, a)
    return out


def normalize(raw: Iterable[float]) -> np.ndarray:
    """Canonical representative of a torus point: subtract the first coordinate.

    >>> normalize([2, 3, 5]).tolist()
    [0.0, 1.0, 3.0]
    """
    x = np.array(raw, dtype=float).ravel()
    if x.size < 2:
        raise InvalidPoint(f"need at least 2 coordinates, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise InvalidPoint(f"non-finite coordinate in {x.tolist()}")
    return x - x[0]


def normalize_rows(points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    return pts - pts[..., :1]


def _check_dims(v: np.ndarray, w: np.ndarray) -> None:
    if v.shape[-1] != w.shape[-1]:
        raise DimensionError(f"dimension mismatch: {v.shape[-1]} vs {w.shape[-1]}")


def trop_dist(v, w) -> float:
    """Tropical (generalized Hilbert projective) distance.

    >>> trop_dist([0, 1, 0], [0, 0, 1])
    2.0
    """
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    _check_dims(v, w)
    d = v - w
    return float(d.max() - d.min())


def trop_dist_many(points: np.ndarray, w) -> np.ndarray:
    """Vectorized :func:`trop_dist` from each row of ``points`` to ``w``."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    w = np.asarray(w, dtype=float)
    _check_dims(pts, w)
    d = pts - w
    return d.max(axis=-1) - d.min(axis=-1)


@dataclass(frozen=True)
class TropPolytope:
    """Tropical convex hull of a finite generating set.

    ``vertices`` is an ``(s, e)`` array of normalized points.  Duplicate
    generators are dropped on construction (first occurrence kept), so
    vertex indices refer to the deduplicated list.
    """

    vertices: np.ndarray
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        pts = np.atleast_2d(np.array(self.vertices, dtype=float))
        if pts.ndim != 2 or pts.shape[0] < 1:
            raise InvalidPoint("a polytope needs at least one vertex")
        if pts.shape[1] < 2:
            raise InvalidPoint("points need at least 2 coordinates")
        if not np.all(np.isfinite(pts)):
            raise InvalidPoint("non-finite vertex coordinate")
        pts = normalize_rows(pts)
        keep = []
        for k, row in enumerate(pts):
            if not any(np.array_equal(row, pts[j]) for j in keep):
                keep.append(k)
        pts = pts[keep]
        pts.setflags(write=False)
        object.__setattr__(self, "vertices", pts)

    @property
    def e(self) -> int:
        return self.vertices.shape[1]

    @property
    def s(self) -> int:
        return self.vertices.shape[0]

    def __len__(self) -> int:
        return self.s

    def matrix(self) -> np.ndarray:
        """Vertices as columns (coordinates x vertices)."""
        return self.vertices.T.copy()

    def subset(self, indices: Sequence[int]) -> "TropPolytope":
        return TropPolytope(self.vertices[list(indices)])

    def project(self, x) -> np.ndarray:
        return project(self, x)

    def contains(self, x, tol: float = TOL) -> bool:
        return contains(self, x, tol)


def as_polytope(p) -> TropPolytope:
    return p if isinstance(p, TropPolytope) else TropPolytope(p)


def _project_rows(vertices: np.ndarray, x: np.ndarray) -> np.ndarray:
    # unnormalized projection of one point onto tconv(rows of `vertices`)
    lam = (x - vertices).min(axis=1)
    return (lam[:, None] + vertices).max(axis=0)


def project(p, x) -> np.ndarray:
    """Tropical projection of ``x`` onto ``p`` (nearest point in d_tr).

    ``π_P(x) = max_l (λ_l + v^l)`` with ``λ_l = min(x - v^l)``.
    """
    p = as_polytope(p)
    x = np.asarray(x, dtype=float)
    _check_dims(p.vertices, x)
    out = _project_rows(p.vertices, x)
    return out - out[0]


def project_many(p, points: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """Project every row of ``points`` onto ``p``."""
    p = as_polytope(p)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    _check_dims(p.vertices, pts)
    v = p.vertices
    out = np.empty_like(pts)
    for lo in range(0, len(pts), chunk):
        blk = pts[lo:lo + chunk]
        lam = (blk[:, None, :] - v[None, :, :]).min(axis=2)
        out[lo:lo + chunk] = (lam[:, :, None] + v[None, :, :]).max(axis=1)
    return normalize_rows(out)


def contains(p, x, tol: float = TOL) -> bool:
    """Membership by the projection fixed point: ``d_tr(x, π_P(x)) <= tol``."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    p = as_polytope(p)
    x = np.asarray(x, dtype=float)
    _check_dims(p.vertices, x)
    d = x - _project_rows(p.vertices, x)
    return bool(d.max() - d.min() <= tol)


def contains_many(p, points: np.ndarray, tol: float = TOL) -> np.ndarray:
    """Boolean membership mask for every row of ``points``."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    proj = project_many(p, pts)
    d = normalize_rows(pts) - proj
    return (d.max(axis=1) - d.min(axis=1)) <= tol


@dataclass(frozen=True)
class TropSegment:
    """Max-plus line segment as a chain of Euclidean pieces.

    ``bends`` runs from ``start`` to ``end`` inclusive; ``lengths`` holds the
    cumulative Euclidean arc length at each bend (``lengths[0] == 0``),
    measured in normalized coordinates.
    """

    start: np.ndarray
    end: np.ndarray
    bends: np.ndarray
    lengths: np.ndarray

    @property
    def length(self) -> float:
        return float(self.lengths[-1])

    @property
    def interior_bends(self) -> np.ndarray:
        return self.bends[1:-1]

    def point_at(self, s: float) -> np.ndarray:
        """Point at arc length ``s`` from ``start`` (clamped to the segment)."""
        if len(self.bends) == 1 or s <= 0.0:
            return self.bends[0].copy()
        if s >= self.lengths[-1]:
            return self.bends[-1].copy()
        k = int(np.searchsorted(self.lengths, s, side="right")) - 1
        piece = self.lengths[k + 1] - self.lengths[k]
        w = (s - self.lengths[k]) / piece
        return self.bends[k] + w * (self.bends[k + 1] - self.bends[k])

    def truncated(self, k: int) -> "TropSegment":
        """Sub-segment from ``start`` up to and including bend ``k``."""
        bends = self.bends[: k + 1]
        return TropSegment(self.start, bends[-1].copy(), bends, self.lengths[: k + 1])


def _arc_lengths(bends: np.ndarray) -> np.ndarray:
    steps = np.sqrt(((bends[1:] - bends[:-1]) ** 2).sum(axis=1))
    return np.concatenate(([0.0], np.cumsum(steps)))


def trop_segment(u, v) -> TropSegment:
    """Bend points of the max-plus segment from ``u`` to ``v``.

    With ``d = v - u`` the bends are ``max(u + d_k, v)`` over the distinct
    values ``d_k`` taken in decreasing order, so the list starts at ``u``
    (``d_k = max d``) and ends at ``v`` (``d_k = min d``).  At most ``e``
    bends, fewer when coordinate differences repeat.
    """
    u = normalize(u)
    v = normalize(v)
    _check_dims(u, v)
    d = v - u
    ts = np.unique(d)[::-1]
    bends = np.maximum(u[None, :] + ts[:, None], v[None, :])
    bends = normalize_rows(bends)
    # equal sorted differences were merged by np.unique; drop float near-duplicates
    keep = [0]
    for k in range(1, len(bends)):
        if np.max(np.abs(bends[k] - bends[keep[-1]])) > 1e-12:
            keep.append(k)
    bends = bends[keep]
    bends[0] = u
    bends[-1] = v
    if len(bends) == 1:
        bends = bends[:1]
    return TropSegment(u, v, bends, _arc_lengths(bends))


@dataclass(frozen=True)
class TropDet:
    value: float
    sigma: tuple[int, ...]  # 1-based: column i uses row sigma[i-1]
    singular: bool


def _exact(x: float):
    return None if x == NEG_INF else Fraction(x)


def trop_det(a) -> TropDet:
    """Tropical determinant ``max_σ Σ_i A[σ(i), i]`` with a maximizing σ.

    The matrix is *singular* when the maximum is -inf or attained by two or
    more permutations.  Ties are decided in exact rational arithmetic on the
    input floats.  Up to 8x8 every permutation is enumerated; larger inputs
    go through the linear assignment formulation.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"tropical determinant needs a square matrix, got {a.shape}")
    n = a.shape[0]
    if n > _TDET_ENUM_MAX:
        return _trop_det_assignment(a)

    cols = np.arange(n)
    perms = list(itertools.permutations(range(n)))
    sums = np.array([a[list(p), cols].sum() for p in perms])
    best_idx = int(np.argmax(sums))
    best_val = float(sums[best_idx])
    best_perm = perms[best_idx]
    if best_val == NEG_INF:
        return TropDet(NEG_INF, tuple(k + 1 for k in best_perm), True)

    # float sums can hide or fake a tie; settle candidates exactly
    window = 1e-9 * max(1.0, abs(best_val))
    near = [perms[k] for k in np.flatnonzero(sums >= best_val - window)]
    exact = []
    for p in near:
        terms = [_exact(a[p[i], i]) for i in range(n)]
        exact.append(None if any(t is None for t in terms) else sum(terms))
    top = max(x for x in exact if x is not None)
    winners = [p for p, x in zip(near, exact) if x == top]
    sigma = winners[0]
    return TropDet(float(top), tuple(k + 1 for k in sigma), len(winners) > 1)


def _trop_det_assignment(a: np.ndarray) -> TropDet:
    from scipy.optimize import linear_sum_assignment

    n = a.shape[0]
    finite = np.isfinite(a)
    if not finite.any():
        return TropDet(NEG_INF, tuple(range(1, n + 1)), True)
    big = 1.0 + np.abs(a[finite]).max() * (n + 1)
    w = np.where(finite, a, -big * (n + 1))
    rows, cols = linear_sum_assignment(w, maximize=True)
    if not finite[rows, cols].all():
        return TropDet(NEG_INF, tuple(int(r) + 1 for r in rows[np.argsort(cols)]), True)
    sigma = np.empty(n, dtype=int)
    sigma[cols] = rows
    value = float(w[sigma, np.arange(n)].sum())
    # a second optimum exists iff forbidding some used entry keeps the value
    singular = False
    for j in range(n):
        w2 = w.copy()
        w2[sigma[j], j] = -big * (n + 1)
        r2, c2 = linear_sum_assignment(w2, maximize=True)
        if np.isclose(w2[r2, c2].sum(), value, rtol=0, atol=1e-9 * max(1.0, abs(value))):
            singular = True
            break
    return TropDet(value, tuple(int(k) + 1 for k in sigma), singular)
