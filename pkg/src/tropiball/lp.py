"""Dense two-phase simplex method for the small LPs behind the ball computations.

Problems here have at most a few dozen rows, so a plain tableau with
Bland's rule is fast enough and keeps results bit-for-bit reproducible.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

_EPS = 1e-10


class LpStatus(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass
class LpProblem:
    """maximize ``c @ z`` s.t. ``A_ub @ z <= b_ub``, ``A_eq @ z == b_eq``; z free."""

    c: np.ndarray
    A_ub: np.ndarray = field(default=None)
    b_ub: np.ndarray = field(default=None)
    A_eq: np.ndarray = field(default=None)
    b_eq: np.ndarray = field(default=None)

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).ravel()
        n = self.c.size
        self.A_ub, self.b_ub = _rows(self.A_ub, self.b_ub, n)
        self.A_eq, self.b_eq = _rows(self.A_eq, self.b_eq, n)
        for arr in (self.c, self.A_ub, self.b_ub, self.A_eq, self.b_eq):
            if not np.all(np.isfinite(arr)):
                raise ValueError("LP data must be finite")

    @property
    def n(self) -> int:
        return self.c.size


def _rows(a, b, n):
    if a is None:
        return np.zeros((0, n)), np.zeros(0)
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.asarray(b, dtype=float).ravel()
    if a.shape[1] != n or a.shape[0] != b.size:
        raise ValueError(f"constraint block {a.shape} does not match {n} variables / {b.size} bounds")
    return a, b


@dataclass
class LpSolution:
    status: LpStatus
    z: np.ndarray | None = None
    value: float | None = None

    @property
    def ok(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class _Tableau:
    """Row-reduced tableau ``T`` with the objective stored as the last row.

    The objective row holds reduced costs for a *minimization*; the final
    column is the right-hand side.
    """

    def __init__(self, t: np.ndarray, basis: list[int]):
        self.t = t
        self.basis = basis

    def pivot(self, r: int, c: int) -> None:
        t = self.t
        t[r] /= t[r, c]
        col = t[:, c].copy()
        col[r] = 0.0
        t -= np.outer(col, t[r])
        t[np.abs(t) < 1e-14] = 0.0
        self.basis[r] = c

    def run(self, allowed: int) -> bool:
        """Bland's rule iterations over columns ``< allowed``; False if unbounded."""
        t = self.t
        m = t.shape[0] - 1
        while True:
            obj = t[-1, :allowed]
            entering = np.flatnonzero(obj < -_EPS)
            if entering.size == 0:
                return True
            c = int(entering[0])
            col = t[:m, c]
            pos = np.flatnonzero(col > _EPS)
            if pos.size == 0:
                return False
            ratios = t[pos, -1] / col[pos]
            best = ratios.min()
            ties = pos[ratios <= best + _EPS * max(1.0, abs(best))]
            r = int(min(ties, key=lambda k: self.basis[k]))
            self.pivot(r, c)


def lp_solve(p: LpProblem) -> LpSolution:
    """Solve ``p`` with a two-phase dense simplex and Bland's anti-cycling rule."""
    n = p.n
    # free variables split as z = zp - zn
    a_ub = np.hstack([p.A_ub, -p.A_ub])
    a_eq = np.hstack([p.A_eq, -p.A_eq])
    m_ub, m_eq = a_ub.shape[0], a_eq.shape[0]
    m = m_ub + m_eq
    nv = 2 * n
    n_slack = m_ub

    # row layout: [structural | slacks | artificials | rhs]
    rows = np.zeros((m, nv + n_slack))
    rhs = np.zeros(m)
    rows[:m_ub, :nv] = a_ub
    rows[:m_ub, nv:nv + n_slack] = np.eye(m_ub)
    rhs[:m_ub] = p.b_ub
    rows[m_ub:, :nv] = a_eq
    rhs[m_ub:] = p.b_eq
    neg = rhs < 0
    rows[neg] *= -1.0
    rhs[neg] *= -1.0

    basis: list[int] = []
    need_art = []
    for r in range(m):
        if r < m_ub and not neg[r]:
            basis.append(nv + r)
        else:
            basis.append(-1)
            need_art.append(r)
    n_art = len(need_art)
    total = nv + n_slack + n_art
    t = np.zeros((m + 1, total + 1))
    t[:m, :nv + n_slack] = rows
    t[:m, -1] = rhs
    for k, r in enumerate(need_art):
        t[r, nv + n_slack + k] = 1.0
        basis[r] = nv + n_slack + k
    tab = _Tableau(t, basis)

    if n_art:
        # phase 1: minimize the sum of artificials
        t[-1, :] = 0.0
        t[-1, nv + n_slack:total] = 1.0
        for r in need_art:
            t[-1] -= t[r]
        tab.run(total)
        if -t[-1, -1] > 1e-8 * max(1.0, np.abs(rhs).max(initial=0.0)):
            return LpSolution(LpStatus.INFEASIBLE)
        # drive zero-level artificials out of the basis
        for r in range(m):
            if tab.basis[r] >= nv + n_slack:
                cand = np.flatnonzero(np.abs(t[r, :nv + n_slack]) > _EPS)
                if cand.size:
                    tab.pivot(r, int(cand[0]))
        keep = [r for r in range(m) if tab.basis[r] < nv + n_slack]
        t = np.vstack([t[keep], t[-1:]])
        t = np.delete(t, np.s_[nv + n_slack:total], axis=1)
        tab = _Tableau(t, [tab.basis[r] for r in keep])
        total = nv + n_slack

    # phase 2: minimize -c.z
    cost = np.zeros(total)
    cost[:nv] = np.concatenate([-p.c, p.c])
    t = tab.t
    t[-1, :] = 0.0
    t[-1, :total] = cost
    for r, b in enumerate(tab.basis):
        if cost[b] != 0.0:
            t[-1] -= cost[b] * t[r]
    if not tab.run(total):
        return LpSolution(LpStatus.UNBOUNDED)

    x = np.zeros(total)
    for r, b in enumerate(tab.basis):
        x[b] = t[r, -1]
    z = x[:n] - x[n:nv]
    return LpSolution(LpStatus.OPTIMAL, z, float(p.c @ z))
