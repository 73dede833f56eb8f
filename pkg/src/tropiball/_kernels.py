"""Compiled inner loop of the Hit-and-Run sampler.

Mirrors :meth:`tropiball.sampler.HarChain.step` operation for operation.
Each step consumes one row ``(u_vertex, u_position)`` of ``draws``.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _sort_desc_unique(d):
    e = d.size
    vals = np.sort(d)[::-1]
    out = np.empty(e)
    n = 0
    for k in range(e):
        if n == 0 or vals[k] != out[n - 1]:
            out[n] = vals[k]
            n += 1
    return out[:n]


@njit(cache=True, nogil=True)
def har_run(v, x0, draws, tol, out):
    e = v.shape[0]
    x = x0.copy()
    pi = np.empty(e)
    bends = np.empty((e, e))
    keep = np.empty((e, e))
    lengths = np.empty(e)
    z = np.empty(e)
    for n in range(draws.shape[0]):
        i = int(draws[n, 0] * e)
        if i > e - 1:
            i = e - 1

        # projection onto the hull of the other generators
        for k in range(e):
            pi[k] = -np.inf
        for l in range(e):
            if l == i:
                continue
            lam = np.inf
            for k in range(e):
                t = x[k] - v[l, k]
                if t < lam:
                    lam = t
            for k in range(e):
                t = lam + v[l, k]
                if t > pi[k]:
                    pi[k] = t
        p0 = pi[0]
        for k in range(e):
            pi[k] = pi[k] - p0

        # bends of the max-plus segment pi -> v[i]
        ts = _sort_desc_unique(v[i] - pi)
        nb = ts.size
        for b in range(nb):
            for k in range(e):
                a = pi[k] + ts[b]
                c = v[i, k]
                bends[b, k] = a if a > c else c
            b0 = bends[b, 0]
            for k in range(e):
                bends[b, k] = bends[b, k] - b0
        m = 0
        for b in range(nb):
            if m > 0:
                diff = 0.0
                for k in range(e):
                    dk = abs(bends[b, k] - keep[m - 1, k])
                    if dk > diff:
                        diff = dk
                if diff <= 1e-12:
                    continue
            for k in range(e):
                keep[m, k] = bends[b, k]
            m += 1
        for k in range(e):
            keep[0, k] = pi[k]
            keep[m - 1, k] = v[i, k]

        # truncate at the first interior bend on a min-tropical hyperplane
        last = m - 1
        for b in range(1, m - 1):
            hit = False
            for h in range(e):
                for k in range(e):
                    z[k] = keep[b, k] - v[h, k]
                lo1 = np.inf
                lo2 = np.inf
                for k in range(e):
                    if z[k] < lo1:
                        lo2 = lo1
                        lo1 = z[k]
                    elif z[k] < lo2:
                        lo2 = z[k]
                if lo2 - lo1 <= tol:
                    hit = True
                    break
            if hit:
                last = b
                break

        # uniform point by arc length on keep[0..last]
        lengths[0] = 0.0
        for b in range(1, last + 1):
            sq = 0.0
            for k in range(e):
                dk = keep[b, k] - keep[b - 1, k]
                sq += dk * dk
            lengths[b] = lengths[b - 1] + np.sqrt(sq)
        total = lengths[last]
        s = draws[n, 1] * total
        if last == 0 or s <= 0.0:
            for k in range(e):
                x[k] = keep[0, k]
        elif s >= total:
            for k in range(e):
                x[k] = keep[last, k]
        else:
            b = 0
            while b + 1 <= last and lengths[b + 1] <= s:
                b += 1
            w = (s - lengths[b]) / (lengths[b + 1] - lengths[b])
            for k in range(e):
                x[k] = keep[b, k] + w * (keep[b + 1, k] - keep[b, k])
        for k in range(e):
            out[n, k] = x[k]
    return x
