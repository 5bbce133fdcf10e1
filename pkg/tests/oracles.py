"""Slow, obviously-correct reference implementations used only by tests.

Everything here loops over explicit indices; nothing calls into pptdisc.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def _digits(index: int, dims) -> tuple[int, ...]:
    out = []
    for d in reversed(dims):
        out.append(index % d)
        index //= d
    return tuple(reversed(out))


def _index(digits, dims) -> int:
    i = 0
    for x, d in zip(digits, dims):
        i = i * d + x
    return i


def kron_loop(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def partial_transpose_loop(x: np.ndarray, dims, factors) -> np.ndarray:
    n = x.shape[0]
    out = np.zeros_like(x, dtype=complex)
    for r in range(n):
        for c in range(n):
            rd, cd = list(_digits(r, dims)), list(_digits(c, dims))
            for f in factors:
                rd[f], cd[f] = cd[f], rd[f]
            out[_index(rd, dims), _index(cd, dims)] = x[r, c]
    return out


def partial_trace_loop(x: np.ndarray, dims, factors) -> np.ndarray:
    keep = [i for i in range(len(dims)) if i not in set(factors)]
    kdims = [dims[i] for i in keep]
    size = math.prod(kdims) if keep else 1
    out = np.zeros((size, size), dtype=complex)
    n = x.shape[0]
    for r in range(n):
        for c in range(n):
            rd, cd = _digits(r, dims), _digits(c, dims)
            if all(rd[f] == cd[f] for f in factors):
                out[_index([rd[i] for i in keep], kdims), _index([cd[i] for i in keep], kdims)] += x[r, c]
    return out


def lp_vertex_enumeration(cost, a_ub, b_ub, bounds):
    """min cost.x over {a_ub x <= b_ub, lo <= x <= hi} by enumerating every basic point.

    Returns (value, x) or (None, None) if infeasible.  Bounds must be finite.
    """
    cost = np.asarray(cost, float)
    nvar = cost.size
    rows = [np.asarray(r, float) for r in a_ub]
    rhs = list(map(float, b_ub))
    for i, (lo, hi) in enumerate(bounds):
        e = np.zeros(nvar)
        e[i] = 1.0
        rows += [e, -e]
        rhs += [hi, -lo]
    g = np.array(rows)
    h = np.array(rhs)
    best = (None, None)
    for idx in itertools.combinations(range(len(rows)), nvar):
        sub = g[list(idx)]
        if abs(np.linalg.det(sub)) < 1e-10:
            continue
        x = np.linalg.solve(sub, h[list(idx)])
        if np.all(g @ x <= h + 1e-9):
            val = float(cost @ x)
            if best[0] is None or val < best[0] - 1e-12:
                best = (val, x)
    return best


def q_matrix_from_operators(n: int, d: int) -> np.ndarray:
    """Column k holds the coordinates of the partially transposed k-word sum.

    Words are n-fold tensor products over {Phi, 1 - Phi} (k copies of Phi),
    partially transposed on every B factor by index loops, then expanded by
    least squares in the words over {Pi_sym, Pi_anti} (l copies of Pi_sym).
    """
    phi = np.zeros(d * d)
    for i in range(d):
        phi[i * d + i] = 1 / math.sqrt(d)
    pphi = np.outer(phi, phi)
    flip = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            flip[i * d + j, j * d + i] = 1.0
    sym = (np.eye(d * d) + flip) / 2
    anti = (np.eye(d * d) - flip) / 2

    def words(k, first, second):
        total = np.zeros(((d * d) ** n,) * 2)
        for pos in itertools.combinations(range(n), k):
            op = np.ones((1, 1))
            for t in range(n):
                op = np.kron(op, first if t in pos else second)
            total += op
        return total

    dims = [d] * (2 * n)
    b_side = list(range(1, 2 * n, 2))
    mat = np.array([words(l, sym, anti).reshape(-1) for l in range(n + 1)]).T
    q = np.zeros((n + 1, n + 1))
    for k in range(n + 1):
        target = partial_transpose_loop(words(k, pphi, np.eye(d * d) - pphi), dims, b_side).real.reshape(-1)
        q[:, k] = np.linalg.lstsq(mat, target, rcond=None)[0]
    return q
