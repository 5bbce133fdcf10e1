"""Twirl-reduced PPT linear programs for n copies of Phi_d against its complement.

After twirling, an n-copy test is M = sum_k x_k B_k with B_k the sum of
words containing k copies of Phi_d.  Its partial transpose expands in the
symmetric/antisymmetric words A_l with coefficients (Q x)_l, so M is a PPT
test iff

    0 <= x <= 1,   Q x >= 0,   Q (1 - x) >= 0.

The n + 1 variables are solved directly with the in-repo simplex.  The
equivalent stacked form (variables x >= 0, rows [Q; -Q; -I] x >= [0; -1; -1])
is available from :func:`stacked_form` for cross-checking dual points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import MAX_DIM, kron_all
from .simplex import LinearProgram, SolverError, simplex_solve
from .states import max_entangled, measurement_M, orth_complement

IDENTITY_TOL = 1e-10
ROW_SUM_TOL = 1e-12
EXPLICIT_TRACE_CAP = 1024


class CertificateError(RuntimeError):
    """A dual certificate failed its defining identity."""


@dataclass(frozen=True, eq=False)
class QMatrix:
    n: int
    d: int
    entries: np.ndarray

    def row_sum_residual(self) -> float:
        return float(np.max(np.abs(self.entries.sum(axis=1) - 1)))


def _check_nd(n: int, d: int):
    if int(n) != n or n < 1:
        raise ValueError(f"number of copies must be a positive integer, got {n}")
    if int(d) != d or d < 2:
        raise ValueError(f"local dimension must be an integer >= 2, got {d}")


def _check_prior(p: float):
    if not 0 < p < 1:
        raise ValueError(f"prior {p} outside (0, 1)")


def q_matrix(n: int, d: int) -> QMatrix:
    """Change of basis from B_k^Gamma coefficients to A_l coefficients."""
    _check_nd(n, d)
    a, b, c, e = 1 / d, 1 - 1 / d, -1 / d, 1 + 1 / d
    q = np.zeros((n + 1, n + 1))
    for l in range(n + 1):
        for k in range(n + 1):
            q[l, k] = sum(
                math.comb(l, j) * math.comb(n - l, k - j)
                * a ** j * b ** (l - j) * c ** (k - j) * e ** (n - l - k + j)
                for j in range(max(0, l + k - n), min(l, k) + 1)
            )
    q.setflags(write=False)
    return QMatrix(n, d, q)


def ppt_constraint_check(x, q: QMatrix, tol: float = 1e-9) -> bool:
    x = np.asarray(x, dtype=float)
    if x.shape != (q.n + 1,):
        raise ValueError(f"expected {q.n + 1} coefficients, got shape {x.shape}")
    if np.any(x < -tol) or np.any(x > 1 + tol):
        return False
    return bool(np.all(q.entries @ x >= -tol) and np.all(q.entries @ (1 - x) >= -tol))


def _ppt_rows(q: QMatrix) -> tuple[np.ndarray, np.ndarray]:
    qm = q.entries
    a = np.vstack([qm, -qm])
    b = np.concatenate([np.zeros(q.n + 1), -qm.sum(axis=1)])
    return a, b


def build_weighted_lp(q: QMatrix, w_null: float, w_alt: float) -> LinearProgram:
    """Minimize w_null (1 - x_n) + w_alt x_0 over PPT tests.

    x_n is the acceptance probability of the null Phi_d^{⊗n} and x_0 that of
    the alternative; with w_null = p, w_alt = 1 - p this is the Bayes error.
    """
    a, b = _ppt_rows(q)
    cost = np.zeros(q.n + 1)
    cost[0] += w_alt
    cost[q.n] -= w_null
    return LinearProgram(cost, a, b, ((0.0, 1.0),) * (q.n + 1), offset=w_null)


def build_symmetric_lp(n: int, d: int, p: float) -> LinearProgram:
    _check_prior(p)
    return build_weighted_lp(q_matrix(n, d), p, 1 - p)


def stacked_form(q: QMatrix, p: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(P, b, c) with P x >= b, x >= 0 and error p + (1 - p) c.x."""
    n1 = q.n + 1
    big_p = np.vstack([q.entries, -q.entries, -np.eye(n1)])
    b = np.concatenate([np.zeros(n1), -np.ones(n1), -np.ones(n1)])
    c = np.zeros(n1)
    c[0] = 1.0
    c[-1] = -p / (1 - p)
    return big_p, b, c


def certificate_weights(n: int, d: int) -> np.ndarray:
    """Multipliers u with (Q^T u)_k = [k == 0] - [k == n] (d+1)^{-n}."""
    r = -(d - 1) / (d + 1)
    return np.array([math.comb(n, i) * 2.0 ** -n * (1 - r ** (n - i)) for i in range(n + 1)])


def identity_residual(q: QMatrix, u) -> float:
    target = np.zeros(q.n + 1)
    target[0] = 1.0
    target[q.n] -= (q.d + 1.0) ** -q.n
    return float(np.max(np.abs(q.entries.T @ np.asarray(u) - target)))


@dataclass(frozen=True, eq=False)
class DualCertificate:
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    z: float | None
    objective: float
    residual: float

    def to_dict(self) -> dict:
        return {"u": self.u.tolist(), "v": self.v.tolist(), "w": self.w.tolist(), "z": self.z}


def dual_certificate(n: int, d: int, p: float, q: QMatrix | None = None) -> DualCertificate:
    """Dual point proving the Bayes error is at least min{(1-p)(d+1)^{-n}, p}.

    ``q`` may be supplied to verify against a different matrix (used as a
    negative control); by default the exact matrix is built.
    """
    _check_nd(n, d)
    _check_prior(p)
    q = q if q is not None else q_matrix(n, d)
    u = certificate_weights(n, d)
    if np.any(u < 0):
        raise CertificateError("certificate multipliers must be nonnegative")
    res = identity_residual(q, u)
    if res > IDENTITY_TOL:
        raise CertificateError(f"certificate identity residual {res:.3e} exceeds {IDENTITY_TOL:g}")
    tail = (d + 1.0) ** -n
    w = np.zeros(n + 1)
    w[n] = max(p / (1 - p) - tail, 0.0)
    objective = p - (1 - p) * w[n]
    return DualCertificate(u, np.zeros(n + 1), w, None, objective, res)


@dataclass(frozen=True, eq=False)
class SymmetricLPSolution:
    n: int
    d: int
    p: float
    x: np.ndarray
    value: float
    dual: DualCertificate
    iterations: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "p": self.p,
            "x": self.x.tolist(),
            "value": self.value,
            "dual": self.dual.to_dict(),
        }


def solve_symmetric_lp(n: int, d: int, p: float) -> SymmetricLPSolution:
    lp = build_symmetric_lp(n, d, p)
    result = simplex_solve(lp)
    cert = dual_certificate(n, d, p)
    if not result.optimal:
        raise SolverError(result.status, f"simplex stopped with status {result.status.value}; "
                                         f"certified lower bound is {cert.objective:.12g}")
    return SymmetricLPSolution(n, d, p, result.x, result.value, cert, result.iterations)


def solve_weighted_lp(n: int, d: int, w_null: float, w_alt: float) -> tuple[np.ndarray, float]:
    result = simplex_solve(build_weighted_lp(q_matrix(n, d), w_null, w_alt))
    if not result.optimal:
        raise SolverError(result.status)
    return result.x, result.value


@dataclass(frozen=True, eq=False)
class TradeoffSolution:
    n: int
    d: int
    alpha: float
    beta: float
    x: np.ndarray
    dual: DualCertificate


def tradeoff_lp(n: int, d: int, alpha: float) -> TradeoffSolution:
    """Least type-II error over PPT tests with type-I error at most alpha."""
    _check_nd(n, d)
    if not 0 <= alpha <= 1:
        raise ValueError(f"type-I level {alpha} outside [0, 1]")
    q = q_matrix(n, d)
    a, b = _ppt_rows(q)
    level = np.zeros(n + 1)
    level[n] = 1.0
    cost = np.zeros(n + 1)
    cost[0] = 1.0
    lp = LinearProgram(cost, np.vstack([a, level]), np.append(b, 1 - alpha), ((0.0, 1.0),) * (n + 1))
    result = simplex_solve(lp)
    if not result.optimal:
        raise SolverError(result.status)

    # Dual point: Q^T u* + z e_n = e_0 with z = (d+1)^{-n}.
    u = certificate_weights(n, d)
    z = (d + 1.0) ** -n
    lhs = q.entries.T @ u + z * level
    res = float(np.max(np.abs(lhs - cost)))
    if res > IDENTITY_TOL or np.any(u < 0):
        raise CertificateError(f"trade-off dual point infeasible, residual {res:.3e}")
    cert = DualCertificate(u, np.zeros(n + 1), np.zeros(n + 1), z, (1 - alpha) * z, res)
    return TradeoffSolution(n, d, alpha, result.value, result.x, cert)


@dataclass(frozen=True)
class LOCCAchievability:
    closed_form: float
    explicit: float | None
    value: float


def locc_achievability(n: int, d: int, p: float) -> LOCCAchievability:
    """Error of the one-way LOCC test M_d^{⊗n}, or of always rejecting if smaller."""
    _check_nd(n, d)
    _check_prior(p)
    closed = (1 - p) * (d + 1.0) ** -n
    explicit = None
    if (d * d) ** n <= min(EXPLICIT_TRACE_CAP, MAX_DIM):
        test = kron_all([measurement_M(d)] * n).data
        alt = kron_all([orth_complement(max_entangled(d))] * n).data
        null = kron_all([max_entangled(d)] * n).data
        # type-II part plus type-I part, which vanishes since M_d accepts Phi_d surely
        miss = np.trace(null) - np.sum(test * null.T)
        explicit = float(((1 - p) * np.sum(test * alt.T) + p * miss).real)
        if abs(explicit - closed) > 1e-10:
            raise CertificateError(f"explicit trace {explicit:.12g} disagrees with {closed:.12g}")
    return LOCCAchievability(closed, explicit, min(closed, p))


__all__ = [
    "CertificateError",
    "DualCertificate",
    "LOCCAchievability",
    "QMatrix",
    "SymmetricLPSolution",
    "TradeoffSolution",
    "build_symmetric_lp",
    "build_weighted_lp",
    "certificate_weights",
    "dual_certificate",
    "identity_residual",
    "locc_achievability",
    "ppt_constraint_check",
    "q_matrix",
    "solve_symmetric_lp",
    "solve_weighted_lp",
    "stacked_form",
    "tradeoff_lp",
]
