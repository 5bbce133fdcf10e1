"""Error exponents: Chernoff quantities, closed-form error curves and the
exponent table for the eight named discrimination problems.

Extended reals use ``math.inf`` as the single infinity sentinel.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .formatting import INF, fmt, json_number
from .operators import DensityMatrix, DimensionError, eig_hermitian, support_mask
from .states import TABLE_ROWS, PureState

GRID_STEP = 1e-3
GOLDEN_TOL = 1e-8
ZERO_TRACE = 1e-12
_INV_PHI = (math.sqrt(5) - 1) / 2

ERROR_CASES = ("MES", "MES_HIGH", "MES_HIGH_1", "SYM_HIGH", "SYM_HIGH_1")


def _golden_min(f: Callable[[float], float], lo: float, hi: float, tol: float = GOLDEN_TOL) -> tuple[float, float]:
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    s = (a + b) / 2
    return s, f(s)


def _minimize_on_unit(f: Callable[[float], float]) -> float:
    """Min of f over [0, 1]: grid seeding then golden-section refinement.

    Endpoint values are kept as candidates because the classical functional
    may jump at 0 and 1.
    """
    grid = np.linspace(0.0, 1.0, int(round(1 / GRID_STEP)) + 1)
    vals = np.array([f(s) for s in grid])
    i = int(np.argmin(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    # Refine strictly inside so endpoint conventions do not leak into the bracket.
    eps = 1e-12
    _, fmin = _golden_min(f, lo + eps, hi - eps)
    return float(min(fmin, vals.min()))


def quantum_chernoff(rho0: DensityMatrix, rho1: DensityMatrix) -> float:
    """-min_s log Tr[rho0^{1-s} rho1^s] with powers taken on the supports."""
    if rho0.dim != rho1.dim:
        raise DimensionError("states act on different dimensions")
    s0, s1 = eig_hermitian(rho0), eig_hermitian(rho1)
    m0 = support_mask(s0.eigenvalues) & (s0.eigenvalues > 0)
    m1 = support_mask(s1.eigenvalues) & (s1.eigenvalues > 0)
    a, u = s0.eigenvalues[m0], s0.eigenvectors[:, m0]
    b, v = s1.eigenvalues[m1], s1.eigenvectors[:, m1]
    overlap = np.abs(u.conj().T @ v) ** 2
    la, lb = np.log(a), np.log(b)

    def trace_fn(s: float) -> float:
        return float(np.exp((1 - s) * la) @ overlap @ np.exp(s * lb))

    if max(trace_fn(0.0), trace_fn(0.5), trace_fn(1.0)) <= ZERO_TRACE:
        return INF
    fmin = _minimize_on_unit(trace_fn)
    if fmin <= ZERO_TRACE:
        return INF
    return max(-math.log(fmin), 0.0)


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    probs: np.ndarray
    labels: tuple

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or len(self.labels) != p.size:
            raise ValueError("one label per probability is required")
        if np.any(p < -1e-15):
            raise ValueError("probabilities must be nonnegative")
        if abs(p.sum() - 1) > 1e-12:
            raise ValueError(f"probabilities sum to {p.sum():.15g}, not 1")
        p = np.clip(p, 0.0, None)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "labels", tuple(self.labels))


def classical_chernoff(p_dist: DiscreteDistribution, q_dist: DiscreteDistribution) -> float:
    """-min_a log sum_x P(x)^a Q(x)^{1-a}.

    At a = 0 the sum runs over supp P, at a = 1 over supp Q; inside (0, 1)
    outcomes missing from either support contribute nothing.
    """
    if p_dist.labels != q_dist.labels:
        raise ValueError("distributions are over different outcomes")
    p, q = p_dist.probs, q_dist.probs
    both = (p > 0) & (q > 0)
    lp, lq = np.log(p[both]), np.log(q[both])

    def g(a: float) -> float:
        if a == 0.0:
            return float(q[p > 0].sum())
        if a == 1.0:
            return float(p[q > 0].sum())
        return float(np.exp(a * lp + (1 - a) * lq).sum())

    if not both.any():
        return INF
    gmin = _minimize_on_unit(g)
    if gmin <= ZERO_TRACE:
        return INF
    return max(-math.log(gmin), 0.0)


def schmidt_measurement_distributions(psi: PureState) -> tuple[DiscreteDistribution, DiscreteDistribution]:
    """Outcome statistics of measuring both sides in the Schmidt basis.

    Under psi the outcome is (i, i) with probability lambda_i.  Under
    psi^perp = (1 - psi)/(d^2 - 1) the distribution is (d^2 U - P)/(d^2 - 1)
    with U uniform over the d^2 outcome pairs.
    """
    d = psi.local_dim
    lam = np.array(psi.schmidt_coeffs) ** 2
    lam = lam / lam.sum()
    labels = tuple((i, j) for i in range(d) for j in range(d))
    p = np.zeros(d * d)
    p[np.arange(d) * (d + 1)] = lam
    q = (d * d * np.full(d * d, 1 / (d * d)) - p) / (d * d - 1)
    q = np.clip(q, 0.0, None)
    return DiscreteDistribution(p, labels), DiscreteDistribution(q / q.sum(), labels)


def multipartite_upper_bound(dims: Sequence[int]) -> float:
    """Per-copy error ratio of the multipartite Schmidt-type test."""
    dims = [int(k) for k in dims]
    if len(dims) < 3:
        raise ValueError("at least three parties are required")
    a, b = dims[-2], dims[-1]
    return 1 - (a * b - min(a, b)) / (math.prod(dims) - 1)


@dataclass(frozen=True)
class CaseParams:
    d: int = 2
    m: int = 2
    lam: float = 1.0
    p: float = 0.5

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ValueError(f"d must be an integer >= 2, got {self.d}")
        if int(self.m) != self.m or self.m < 2:
            raise ValueError(f"m must be an integer >= 2, got {self.m}")
        if not 0 <= self.lam <= 1:
            raise ValueError(f"lambda {self.lam} outside [0, 1]")
        if not 0 < self.p < 1:
            raise ValueError(f"prior {self.p} outside (0, 1)")


def closed_form_error(case: str, params: CaseParams, n: int) -> float:
    """Optimal n-copy PPT (= SEP = LOCC) Bayes error for the named family."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    d, m, lam, p = params.d, params.m, params.lam, params.p
    case = case.upper()
    if case == "MES":
        return min((1 - p) * (d + 1.0) ** -n, p)
    if case == "MES_HIGH":
        return min((1 - p) * (lam / (m + 1)) ** n, p)
    if case == "MES_HIGH_1":
        return min(p * (m + 1.0) ** -n, (1 - p) * lam ** n)
    if case == "SYM_HIGH":
        return min(p * ((m - 1) / (m + 1)) ** n, (1 - p) * lam ** n)
    if case == "SYM_HIGH_1":
        return min((1 - p) * (lam * (m - 1) / (m + 1)) ** n, p)
    raise ValueError(f"unknown case {case!r}; expected one of {ERROR_CASES}")


@dataclass(frozen=True)
class RateFunction:
    """r -> below for r <= threshold, else above + slope (r - threshold)."""

    threshold: float
    below: float
    above: float
    slope: float = 0.0

    def __call__(self, r: float) -> float:
        if r <= self.threshold:
            return self.below
        return self.above + self.slope * (r - self.threshold)

    @classmethod
    def constant(cls, value: float) -> "RateFunction":
        return cls(INF, value, value)

    def describe(self) -> str:
        if math.isinf(self.threshold) or (self.below == self.above and self.slope == 0):
            return fmt(self.below)
        tail = fmt(self.above) if self.slope == 0 else f"r - {fmt(self.threshold)}"
        return f"{fmt(self.below)} if r <= {fmt(self.threshold)} else {tail}"


@dataclass(frozen=True)
class ExponentReport:
    case: str
    row: int
    params: CaseParams
    chernoff: float
    stein: float
    hoeffding: RateFunction
    strong_converse: RateFunction

    def evaluate(self, r: float) -> dict:
        return {
            "case": self.case,
            "d": self.params.d if self.row <= 4 else None,
            "m": self.params.m if self.row > 4 else None,
            "lambda": self.params.lam if self.row > 4 else None,
            "r": r,
            "chernoff": self.chernoff,
            "stein": self.stein,
            "hoeffding": self.hoeffding(r),
            "strong_converse": self.strong_converse(r),
        }

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "row": self.row,
            "params": asdict(self.params),
            "chernoff": json_number(self.chernoff),
            "stein": json_number(self.stein),
            "hoeffding": self.hoeffding.describe(),
            "strong_converse": self.strong_converse.describe(),
        }


REPORT_COLUMNS = ("case", "d", "m", "lambda", "r", "chernoff", "stein", "hoeffding", "strong_converse")


def _log_inv(lam: float) -> float:
    return INF if lam == 0 else -math.log(lam)


def _finite_stein(value: float) -> tuple[RateFunction, RateFunction]:
    # Hoeffding infinite below the Stein rate and 0 above; strong converse r - Stein above it.
    return RateFunction(value, INF, 0.0), RateFunction(value, 0.0, 0.0, 1.0)


def row_number(case: str) -> int:
    try:
        return TABLE_ROWS.index(case.upper()) + 1
    except ValueError:
        raise ValueError(f"unknown table row {case!r}; expected one of {TABLE_ROWS}") from None


def exponents_table(case: str | int, params: CaseParams) -> ExponentReport:
    if isinstance(case, int) or (isinstance(case, str) and case.isdigit()):
        idx = int(case)
        if not 1 <= idx <= len(TABLE_ROWS):
            raise ValueError(f"table rows are numbered 1..{len(TABLE_ROWS)}")
        case = TABLE_ROWS[idx - 1]
    case = case.upper()
    row = row_number(case)
    d, m, lam = params.d, params.m, params.lam
    zero = RateFunction.constant(0.0)
    if case in ("MES", "MES_REV"):
        c = math.log(d + 1)
        if case == "MES":
            s, (h, sc) = c, _finite_stein(c)
        else:
            s, h, sc = INF, RateFunction.constant(c), zero
    elif case in ("SYM", "SYM_REV"):
        c = math.log((d + 1) / (d - 1))
        if case == "SYM_REV":
            s, (h, sc) = c, _finite_stein(c)
        else:
            s, h, sc = INF, RateFunction.constant(c), zero
    elif case == "MES_PAD":
        c = s = math.log(m + 1) + _log_inv(lam)
        h, sc = _finite_stein(s)
    elif case == "SYM_PERP_PAD":
        c = s = math.log((m + 1) / (m - 1)) + _log_inv(lam)
        h, sc = _finite_stein(s)
    else:
        base = math.log(m + 1) if case == "MES_PERP_PAD" else math.log((m + 1) / (m - 1))
        c = max(base, _log_inv(lam))
        s = INF
        h = RateFunction(_log_inv(lam), INF, base)
        sc = zero
    return ExponentReport(case, row, params, c, s, h, sc)


def empirical_exponent(values: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of -log P_e against n."""
    pts = [(float(n), float(pe)) for n, pe in values]
    if len(pts) < 2:
        raise ValueError("at least two points are needed for a slope")
    if any(pe < 0 for _, pe in pts):
        raise ValueError("error probabilities must be nonnegative")
    if any(pe == 0 for _, pe in pts):
        return INF
    n = np.array([a for a, _ in pts])
    y = -np.log([b for _, b in pts])
    if np.ptp(n) == 0:
        raise ValueError("copy numbers must not all coincide")
    nc = n - n.mean()
    return float(nc @ (y - y.mean()) / (nc @ nc))


__all__ = [
    "ERROR_CASES",
    "REPORT_COLUMNS",
    "CaseParams",
    "DiscreteDistribution",
    "ExponentReport",
    "RateFunction",
    "classical_chernoff",
    "closed_form_error",
    "empirical_exponent",
    "exponents_table",
    "multipartite_upper_bound",
    "quantum_chernoff",
    "row_number",
    "schmidt_measurement_distributions",
]
