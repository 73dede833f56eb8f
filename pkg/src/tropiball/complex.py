"""Covering a tropical polytope by non-overlapping simplices and sampling its trunk.

``identify_cover`` samples the enclosing ball, keeps the points inside
``P`` and looks for a set of generator simplices that covers every kept
point while no point lies in two of them.  ``uniform_sample`` then mixes
one Hit-and-Run chain per selected simplex according to the weights.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from .balls import max_inscribed_simplex, min_enclosing
from .core import as_polytope, contains_many, trop_det
from .errors import InsufficientSamples, NoTrunk, TooFewVertices
from .sampler import HarChain, make_rng
from .volume import DEFAULT_BURN_IN, sample_in_ball

log = logging.getLogger(__name__)

# exhaustive cover search is skipped above this many candidate simplices
MAX_EXACT_SEARCH = 20


@dataclass(frozen=True)
class SimplexInfo:
    indices: tuple[int, ...]
    degenerate: bool


def enumerate_simplices(p) -> list[SimplexInfo]:
    """All ``e``-subsets of the generators, flagged by a singular tropical determinant."""
    p = as_polytope(p)
    if p.s < p.e:
        raise TooFewVertices(f"need at least e={p.e} vertices, got {p.s}")
    out = []
    for idx in itertools.combinations(range(p.s), p.e):
        det = trop_det(p.subset(idx).matrix())
        out.append(SimplexInfo(idx, det.singular))
    return out


@dataclass
class SimplexCover:
    simplices: list[tuple[int, ...]]
    weights: list[float]
    sample_size_used: int
    seed: int
    points_in_p: int = 0
    raw_fractions: list[float] = field(default_factory=list)
    overlap_points: int = 0
    method: str = "exact"

    def __post_init__(self):
        self.simplices = [tuple(int(i) for i in s) for s in self.simplices]
        w = np.asarray(self.weights, dtype=float)
        if len(w) != len(self.simplices):
            raise ValueError("one weight per simplex required")
        if (w < 0).any() or abs(w.sum() - 1.0) > 1e-6:
            raise ValueError(f"weights must be nonnegative and sum to 1, got {w.tolist()}")
        self.weights = w.tolist()

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SimplexCover":
        return cls(**d)


def _mask_bits(col: np.ndarray) -> int:
    return int.from_bytes(np.packbits(col, bitorder="little").tobytes(), "little")


def _select(members: np.ndarray, counts_order: list[int]) -> tuple[list[int], str]:
    """Indices (columns of ``members``) of the chosen covering simplices.

    Preferred: the smallest set covering every point with no point in two
    chosen simplices; among equal sizes the one with the most even split,
    then the lexicographically first.  If none exists or the search space
    is too large, fall back to greedy selection by descending count.
    """
    n_pts, k = members.shape
    full = (1 << n_pts) - 1
    bits = [_mask_bits(members[:, j]) for j in range(k)]
    if k <= MAX_EXACT_SEARCH:
        for size in range(1, k + 1):
            best, best_key = None, None
            for sub in itertools.combinations(range(k), size):
                union, overlap = 0, False
                for j in sub:
                    if union & bits[j]:
                        overlap = True
                        break
                    union |= bits[j]
                if overlap or union != full:
                    continue
                key = -min(bits[j].bit_count() for j in sub)
                if best_key is None or key < best_key:
                    best, best_key = list(sub), key
            if best is not None:
                return best, "exact"
    chosen, covered = [], 0
    for j in counts_order:
        if bits[j] & ~covered:
            chosen.append(j)
            covered |= bits[j]
        if covered == full:
            break
    return chosen, "greedy"


def identify_cover(p, samples: int, seed: int, burn_in: int = DEFAULT_BURN_IN,
                   tol: float = 1e-9) -> SimplexCover:
    """Choose simplices of ``P`` that tile its trunk, with mixture weights.

    ``samples`` Hit-and-Run points of the enclosing ball are drawn; those
    inside ``P`` are tested against every non-degenerate generator simplex.
    Each point is credited to the first selected simplex containing it, so
    the weights are an exact partition of the in-polytope sample.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    p = as_polytope(p)
    cands = [s.indices for s in enumerate_simplices(p) if not s.degenerate]
    if not cands:
        raise NoTrunk("every generator simplex is degenerate")
    pts, _ = sample_in_ball(min_enclosing(p), samples, seed, burn_in=burn_in)
    xp = pts[contains_many(p, pts, tol)]
    if len(xp) == 0:
        raise InsufficientSamples(f"none of {samples} sampled points fell inside the polytope")
    members = np.column_stack([contains_many(p.subset(c), xp, tol) for c in cands])
    counts = members.sum(axis=0)
    uncovered = ~members.any(axis=1)
    if uncovered.any():
        # the union of all simplices is P, so this is a tolerance artifact
        log.warning("%d points of P in no generator simplex; dropped", int(uncovered.sum()))
        xp, members = xp[~uncovered], members[~uncovered]
    order = sorted(range(len(cands)), key=lambda j: (-counts[j], cands[j]))
    chosen, method = _select(members, order)

    sub = members[:, chosen]
    owner = sub.argmax(axis=1)
    excl = np.bincount(owner, minlength=len(chosen))
    overlap = int((sub.sum(axis=1) > 1).sum())
    rank = sorted(range(len(chosen)), key=lambda t: (-excl[t], cands[chosen[t]]))
    n = len(xp)
    return SimplexCover(
        simplices=[cands[chosen[t]] for t in rank],
        weights=[excl[t] / n for t in rank],
        sample_size_used=samples,
        seed=int(seed),
        points_in_p=n,
        raw_fractions=[float(counts[chosen[t]] / n) for t in rank],
        overlap_points=overlap,
        method=method,
    )


def uniform_sample(cover: SimplexCover, p, points: int, seed: int,
                   burn_in: int = DEFAULT_BURN_IN, thin: int = 1) -> np.ndarray:
    """``points`` draws from the trunk of ``P`` as a weighted mixture of simplices.

    A categorical draw picks the simplex for each output point; each simplex
    keeps its own chain, started at its inscribed-ball center.  Chain seeds
    are derived from ``seed`` so the whole run is reproducible.
    """
    if points < 1:
        raise ValueError("points must be >= 1")
    p = as_polytope(p)
    k = len(cover.simplices)
    ss = np.random.SeedSequence(seed).spawn(k + 1)
    pick = make_rng(ss[0]).choice(k, size=points, p=np.asarray(cover.weights))
    need = np.bincount(pick, minlength=k)
    out = np.empty((points, p.e))
    for j, idx in enumerate(cover.simplices):
        if need[j] == 0:
            continue
        simplex = p.subset(idx)
        start = max_inscribed_simplex(simplex).center
        chain = HarChain(simplex, start, int(ss[j + 1].generate_state(1, np.uint64)[0]))
        out[pick == j] = chain.run(int(need[j]), burn_in=burn_in, thin=thin)
    return out

