"""Dense bounded-variable simplex method.

Solves

    minimize    cost . x + offset
    subject to  A x (>=, <=, =) rhs   row by row
                lo <= x <= hi

Box bounds are handled natively (nonbasic variables sit at either bound),
so they add no rows.  Phase I uses one artificial per row; Bland's rule
(smallest eligible index for entering and leaving) prevents cycling.  The
basis system is re-solved from scratch each pivot: the problems here have
at most a few dozen columns and robustness matters more than speed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np


class LPStatus(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration_limit"


class SolverError(RuntimeError):
    """The LP solver did not reach an optimal basis."""

    def __init__(self, status: LPStatus, message: str = ""):
        super().__init__(message or f"LP solver stopped with status {status.value}")
        self.status = status


@dataclass(frozen=True, eq=False)
class LinearProgram:
    cost: np.ndarray
    constraint_matrix: np.ndarray
    rhs: np.ndarray
    bounds: tuple[tuple[float, float], ...]
    senses: tuple[str, ...] = field(default=())
    offset: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.cost, dtype=float).reshape(-1)
        a = np.asarray(self.constraint_matrix, dtype=float)
        b = np.asarray(self.rhs, dtype=float).reshape(-1)
        if a.size == 0:
            a = a.reshape(0, c.size)
        if a.ndim != 2 or a.shape != (b.size, c.size):
            raise ValueError(f"constraint matrix shape {a.shape} inconsistent with {b.size} rows, {c.size} columns")
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        if len(bounds) != c.size:
            raise ValueError("one (lo, hi) pair per variable is required")
        if any(lo > hi for lo, hi in bounds):
            raise ValueError("lower bound above upper bound")
        senses = tuple(self.senses) or (">=",) * b.size
        if len(senses) != b.size or any(s not in (">=", "<=", "=") for s in senses):
            raise ValueError("senses must be one of '>=', '<=', '=' per row")
        for name, val in (("cost", c), ("constraint_matrix", a), ("rhs", b), ("bounds", bounds), ("senses", senses)):
            if isinstance(val, np.ndarray):
                val.setflags(write=False)
            object.__setattr__(self, name, val)

    @property
    def num_vars(self) -> int:
        return self.cost.size

    def objective(self, x) -> float:
        return float(self.cost @ np.asarray(x, dtype=float) + self.offset)

    def is_feasible(self, x, tol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        lo = np.array([b[0] for b in self.bounds])
        hi = np.array([b[1] for b in self.bounds])
        if np.any(x < lo - tol) or np.any(x > hi + tol):
            return False
        r = self.constraint_matrix @ x - self.rhs
        for s, ri in zip(self.senses, r):
            if (s == ">=" and ri < -tol) or (s == "<=" and ri > tol) or (s == "=" and abs(ri) > tol):
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "cost": self.cost.tolist(),
            "constraint_matrix": self.constraint_matrix.tolist(),
            "rhs": self.rhs.tolist(),
            "bounds": [list(b) for b in self.bounds],
            "senses": list(self.senses),
            "offset": self.offset,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LinearProgram":
        return cls(
            np.array(data["cost"]),
            np.array(data["constraint_matrix"]),
            np.array(data["rhs"]),
            tuple(tuple(b) for b in data["bounds"]),
            tuple(data.get("senses", ())),
            float(data.get("offset", 0.0)),
        )


@dataclass(frozen=True, eq=False)
class LPResult:
    x: np.ndarray | None
    value: float
    status: LPStatus
    iterations: int

    @property
    def optimal(self) -> bool:
        return self.status is LPStatus.OPTIMAL


class _Tableau:
    """Equality-form working state: A z = b, lo <= z <= hi."""

    def __init__(self, a, b, lo, hi, basis, at_upper, tol):
        self.a, self.b, self.lo, self.hi = a, b, lo, hi
        self.basis = list(basis)
        self.at_upper = at_upper  # meaningful for nonbasic columns only
        self.tol = tol

    def nonbasic_values(self) -> np.ndarray:
        z = np.where(self.at_upper, self.hi, self.lo)
        z[self.basis] = 0.0
        return z

    def point(self) -> np.ndarray:
        z = self.nonbasic_values()
        bmat = self.a[:, self.basis]
        z[self.basis] = np.linalg.solve(bmat, self.b - self.a @ z)
        return z

    def run(self, cost: np.ndarray, max_iter: int) -> tuple[LPStatus, int]:
        a, tol = self.a, self.tol
        m, ncols = a.shape
        for it in range(max_iter):
            bmat = a[:, self.basis]
            z = self.point()
            y = np.linalg.solve(bmat.T, cost[self.basis])
            reduced = cost - y @ a
            is_basic = np.zeros(ncols, dtype=bool)
            is_basic[self.basis] = True
            entering = None
            for j in range(ncols):
                if is_basic[j] or self.hi[j] - self.lo[j] <= 0:
                    continue
                if (not self.at_upper[j] and reduced[j] < -tol) or (self.at_upper[j] and reduced[j] > tol):
                    entering = j
                    break
            if entering is None:
                return LPStatus.OPTIMAL, it
            j = entering
            sign = -1.0 if self.at_upper[j] else 1.0
            alpha = np.linalg.solve(bmat, a[:, j])
            # Candidates (room, variable, row); row None means the entering bound flip.
            best = (self.hi[j] - self.lo[j], j, None, False)
            for i in range(m):
                rate = sign * alpha[i]
                var = self.basis[i]
                if rate > tol:
                    cand = (max((z[var] - self.lo[var]) / rate, 0.0), var, i, False)
                elif rate < -tol:
                    cand = (max((self.hi[var] - z[var]) / -rate, 0.0), var, i, True)
                else:
                    continue
                if math.isinf(best[0]) or cand[0] < best[0] - tol or (
                    abs(cand[0] - best[0]) <= tol and cand[1] < best[1]
                ):
                    best = cand
            step, _, leave_row, leave_to_upper = best
            if not math.isfinite(step):
                return LPStatus.UNBOUNDED, it
            if leave_row is None:
                self.at_upper[j] = not self.at_upper[j]
                continue
            out = self.basis[leave_row]
            self.basis[leave_row] = j
            self.at_upper[out] = leave_to_upper
        return LPStatus.ITERATION_LIMIT, max_iter


def simplex_solve(lp: LinearProgram, max_iter: int = 10_000, tol: float = 1e-11) -> LPResult:
    m, n = lp.constraint_matrix.shape
    lo = np.array([b[0] for b in lp.bounds])
    hi = np.array([b[1] for b in lp.bounds])
    if np.any(~np.isfinite(lo)):
        raise ValueError("variables need finite lower bounds")

    # Equality form: structural | slacks | artificials.
    slack_cols = [i for i, s in enumerate(lp.senses) if s != "="]
    a = np.zeros((m, n + len(slack_cols) + m))
    a[:, :n] = lp.constraint_matrix
    for k, i in enumerate(slack_cols):
        a[i, n + k] = -1.0 if lp.senses[i] == ">=" else 1.0
    n_struct = n + len(slack_cols)
    full_lo = np.concatenate([lo, np.zeros(len(slack_cols) + m)])
    full_hi = np.concatenate([hi, np.full(len(slack_cols), np.inf), np.full(m, np.inf)])

    at_upper = np.zeros(n_struct + m, dtype=bool)
    z0 = np.where(at_upper, full_hi, full_lo)
    residual = lp.rhs - a[:, :n_struct] @ z0[:n_struct]
    for i in range(m):
        a[i, n_struct + i] = 1.0 if residual[i] >= 0 else -1.0
    basis = list(range(n_struct, n_struct + m))
    tab = _Tableau(a, lp.rhs.astype(float), full_lo, full_hi, basis, at_upper, tol)

    phase1_cost = np.concatenate([np.zeros(n_struct), np.ones(m)])
    status, it1 = tab.run(phase1_cost, max_iter)
    if status is not LPStatus.OPTIMAL:
        return LPResult(None, math.nan, status, it1)
    z = tab.point()
    scale = max(1.0, float(np.max(np.abs(lp.rhs), initial=0.0)))
    if phase1_cost @ z > 1e-9 * scale:
        return LPResult(None, math.nan, LPStatus.INFEASIBLE, it1)

    # Pin artificials at zero; any still basic are degenerate and stay harmless.
    tab.hi = full_hi.copy()
    tab.hi[n_struct:] = 0.0
    phase2_cost = np.concatenate([lp.cost, np.zeros(len(slack_cols) + m)])
    status, it2 = tab.run(phase2_cost, max_iter - it1)
    iters = it1 + it2
    if status is not LPStatus.OPTIMAL:
        return LPResult(None, math.nan, status, iters)
    x = tab.point()[:n]
    x = np.clip(x, lo, hi)
    return LPResult(x, lp.objective(x), LPStatus.OPTIMAL, iters)
