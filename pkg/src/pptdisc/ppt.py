"""Certified bounds on the PPT-distinguishability norm and on PPT error rates.

No general PPT-norm solver is provided.  A feasible test operator gives a
lower bound on the norm.  A split h = x + y gives an upper bound
||x||_1 + ||y^Gamma||_1.  Exact values come from the symmetric LP.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .operators import (
    NotHermitianError,
    Operator,
    eigvals_hermitian,
    partial_transpose,
    tensor_power,
    trace_norm,
)
from .states import PureState, orth_complement

FEASIBILITY_TOL = 1e-9
CERT_TOL = 1e-9
MATERIALIZE_CAP = 1024
PRODUCT_TOL = 1e-12


class ProductStateError(ValueError):
    """The input state has no entanglement across the cut."""


class InfeasiblePointError(ValueError):
    """A proposed primal test violates its constraints."""


class DecompositionMismatchError(ValueError):
    """The two parts of a dual split do not add up to the target."""


class CertificateError(RuntimeError):
    """A constructed certificate failed its spectral check."""


def b_factors(op: Operator) -> list[int]:
    """Indices of B-side factors: the odd positions of (A, B, A, B, ...)."""
    if len(op.dims) % 2:
        raise ValueError(f"factorization {op.dims} is not a sequence of bipartite copies")
    return list(range(1, len(op.dims), 2))


def transpose_b_side(op: Operator) -> Operator:
    """Partial transpose on every B factor."""
    return partial_transpose(op, b_factors(op))


def _hermitian(op: Operator, name: str):
    if not op.is_hermitian(1e-10 * max(1.0, float(np.max(np.abs(op.data), initial=0.0)))):
        raise NotHermitianError(f"{name} is not Hermitian")


def ppt_norm_primal_value(h: Operator, m: Operator, tol: float = FEASIBILITY_TOL) -> float:
    """Tr[h m] for a test with -1 <= m <= 1 and -1 <= m^Gamma <= 1."""
    _hermitian(h, "h")
    _hermitian(m, "m")
    for name, op in (("m", m), ("m^Gamma", transpose_b_side(m))):
        w = eigvals_hermitian(op)
        if w[0] < -1 - tol or w[-1] > 1 + tol:
            raise InfeasiblePointError(f"{name} has spectrum in [{w[0]:.6g}, {w[-1]:.6g}], outside [-1, 1]")
    return float(np.real(np.sum(h.data * m.data.T)))


@dataclass(frozen=True, eq=False)
class DualDecomposition:
    x_part: Operator
    y_part: Operator
    target: Operator
    norm_value: float


def ppt_norm_dual_value(h: Operator, x: Operator, y: Operator, tol: float = FEASIBILITY_TOL) -> DualDecomposition:
    for name, op in (("h", h), ("x", x), ("y", y)):
        _hermitian(op, name)
    gap = float(np.max(np.abs(x.data + y.data - h.data), initial=0.0))
    if gap > tol:
        raise DecompositionMismatchError(f"x + y differs from h by {gap:.3e}")
    value = trace_norm(x) + trace_norm(transpose_b_side(y))
    return DualDecomposition(x, y, h, value)


def error_prob_from_ppt_norm(norm_value: float) -> float:
    """Equal-prior error 1/2 (1 - norm/2)."""
    if not -FEASIBILITY_TOL <= norm_value <= 2 + FEASIBILITY_TOL:
        raise ValueError(f"norm {norm_value} outside [0, 2]")
    return 0.5 * (1 - 0.5 * norm_value)


def _entangled_eta(psi: PureState) -> tuple[int, float]:
    d = psi.local_dim
    eta = psi.eta
    if 1 - eta <= PRODUCT_TOL:
        raise ProductStateError("state is a product state across the cut")
    return d, eta


def decay_base(psi: PureState) -> float:
    """t = (1 - eta) / ((d^2 - 1) eta), the per-copy decay of the certified bound."""
    d, eta = _entangled_eta(psi)
    return (1 - eta) / ((d * d - 1) * eta)


@dataclass(frozen=True, eq=False)
class ExpLowerBoundCert:
    eta: float
    t: float
    n: int
    bound: float
    p: float
    single_copy_margin: float
    materialized: bool
    x_min_eig: float | None = None
    y_gamma_max_eig: float | None = None
    decomposition: DualDecomposition | None = field(default=None, repr=False)


def single_copy_margin(psi: PureState) -> float:
    """min over eigenvalues g of psi^Gamma of (1 - g) - |(1/eta - 1) g|.

    Nonnegative iff -(1 - psi^Gamma) <= (1/eta - 1) psi^Gamma <= 1 - psi^Gamma.
    Both sides are functions of psi^Gamma, so tensor powers preserve the
    ordering and the n-copy sign conditions follow.
    """
    _, eta = _entangled_eta(psi)
    g = eigvals_hermitian(transpose_b_side(psi.density()))
    return float(np.min((1 - g) - np.abs((1 / eta - 1) * g)))


def exp_lower_bound(psi: PureState, p: float, n: int, materialize: bool | None = None) -> ExpLowerBoundCert:
    """Certified lower bound min{p, 1-p} t^n on the PPT error for psi vs psi^perp."""
    if not 0 < p < 1:
        raise ValueError(f"prior {p} outside (0, 1)")
    if n < 1:
        raise ValueError("n must be at least 1")
    d, eta = _entangled_eta(psi)
    t = (1 - eta) / ((d * d - 1) * eta)
    bound = min(p, 1 - p) * t ** n
    margin = single_copy_margin(psi)
    if margin < -CERT_TOL:
        raise CertificateError(f"single-copy ordering fails by {-margin:.3e}")
    if materialize is None:
        materialize = (d * d) ** n <= MATERIALIZE_CAP
    if not materialize:
        return ExpLowerBoundCert(eta, t, n, bound, p, margin, False)
    rho = tensor_power(psi.density(), n)
    sigma = tensor_power(orth_complement(psi.density()), n)
    tn = t ** n
    x = (1 - tn) * rho
    y = tn * rho - sigma
    xw = eigvals_hermitian(x)
    yg = eigvals_hermitian(transpose_b_side(y))
    # x + y = rho - sigma holds by construction; the norm reuses the spectra.
    decomp = DualDecomposition(x, y, rho - sigma, float(np.sum(np.abs(xw)) + np.sum(np.abs(yg))))
    x_min = float(xw[0])
    y_max = float(yg[-1])
    scale = max(1.0, float(np.max(np.abs(yg))))
    if x_min < -CERT_TOL * scale or y_max > CERT_TOL * scale:
        raise CertificateError(f"sign check failed: min eig X = {x_min:.3e}, max eig Y^Gamma = {y_max:.3e}")
    return ExpLowerBoundCert(eta, t, n, bound, p, margin, True, x_min, y_max, decomp)


def alpha_lower_bound(rho: Operator, sigma: Operator, mu: float, lam: float, decomp: DualDecomposition,
                      tol: float = FEASIBILITY_TOL) -> float:
    """Lower bound 1/2 (1 + lam - ||.||) - lam mu on the type-I error at type-II level mu."""
    if lam < 0:
        raise ValueError("multiplier must be nonnegative")
    target = rho.data - lam * sigma.data
    if decomp.target.dims != rho.dims or np.max(np.abs(decomp.target.data - target), initial=0.0) > tol:
        raise DecompositionMismatchError("decomposition does not split rho - lam sigma")
    return 0.5 * (1 + lam - decomp.norm_value) - lam * mu


def strong_converse_bound(psi: PureState, n: int, r: float, materialize: bool | None = None) -> float:
    """Type-I error lower bound 1 - t^{-n} e^{-n r} when type-II error is e^{-n r}."""
    d, eta = _entangled_eta(psi)
    t = (1 - eta) / ((d * d - 1) * eta)
    lam = t ** -n
    mu = math.exp(-n * r)
    if materialize is None:
        materialize = (d * d) ** n <= MATERIALIZE_CAP
    if not materialize:
        return 1 - lam * mu
    rho = tensor_power(psi.density(), n)
    sigma = tensor_power(orth_complement(psi.density()), n)
    target = rho - lam * sigma
    decomp = ppt_norm_dual_value(target, Operator.zeros(rho.dims), target)
    return alpha_lower_bound(rho, sigma, mu, lam, decomp)


def stein_upper_bound(psi: PureState) -> float:
    """log((d^2 - 1) eta / (1 - eta)), at least log(d + 1)."""
    return -math.log(decay_base(psi))


__all__ = [
    "CertificateError",
    "DecompositionMismatchError",
    "DualDecomposition",
    "ExpLowerBoundCert",
    "InfeasiblePointError",
    "ProductStateError",
    "alpha_lower_bound",
    "b_factors",
    "decay_base",
    "error_prob_from_ppt_norm",
    "exp_lower_bound",
    "transpose_b_side",
    "ppt_norm_dual_value",
    "ppt_norm_primal_value",
    "single_copy_margin",
    "stein_upper_bound",
    "strong_converse_bound",
]
