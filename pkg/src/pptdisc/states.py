"""States and measurement operators used by the discrimination problems.

Bipartite operators on C^d ⊗ C^d carry the factorization ``(d, d)``; n-copy
operators carry ``(d, d) * n`` so that factor ``2j + 1`` is the B side of
copy ``j``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .operators import (
    DEFAULT_TOL,
    MAX_DIM,
    DensityMatrix,
    DimensionError,
    NotDensityMatrixError,
    Operator,
    eigvals_hermitian,
    kron_all,
)

TABLE_ROWS = (
    "MES",
    "MES_REV",
    "SYM",
    "SYM_REV",
    "MES_PAD",
    "MES_PERP_PAD",
    "SYM_PAD",
    "SYM_PERP_PAD",
)


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector with its factorization and (for two factors) Schmidt data.

    ``schmidt_coeffs`` holds the singular values of the amplitude matrix, so
    their squares sum to one and the largest square is ``eta``.
    """

    amplitudes: np.ndarray
    dims: tuple[int, ...]
    schmidt_coeffs: tuple[float, ...] = field(default=())

    @property
    def eta(self) -> float:
        if not self.schmidt_coeffs:
            raise ValueError("Schmidt data only exists for bipartite states")
        return self.schmidt_coeffs[0] ** 2

    @property
    def local_dim(self) -> int:
        if len(self.dims) != 2 or self.dims[0] != self.dims[1]:
            raise DimensionError(f"expected a d x d state, got dims {self.dims}")
        return self.dims[0]

    def density(self) -> DensityMatrix:
        v = self.amplitudes
        return DensityMatrix._trusted(np.outer(v, v.conj()), self.dims)


def pure_state(amplitudes, dims, tol: float = DEFAULT_TOL) -> PureState:
    v = np.asarray(amplitudes, dtype=complex).reshape(-1)
    dims = tuple(int(k) for k in dims)
    if v.size != math.prod(dims):
        raise DimensionError(f"{v.size} amplitudes do not match dims {dims}")
    norm = np.linalg.norm(v)
    if abs(norm - 1) > tol:
        raise ValueError(f"state norm {norm:.6g} is not 1")
    v = v / norm
    coeffs: tuple[float, ...] = ()
    if len(dims) == 2:
        sv = np.linalg.svd(v.reshape(dims), compute_uv=False)
        coeffs = tuple(float(x) for x in sv)
    v.setflags(write=False)
    return PureState(v, dims, coeffs)


def random_pure_state(dims, rng: np.random.Generator) -> PureState:
    """Haar-random pure state (test utility)."""
    n = math.prod(dims)
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return pure_state(v / np.linalg.norm(v), dims)


def schmidt_state(coeffs, tol: float = DEFAULT_TOL) -> PureState:
    """sum_i sqrt(coeffs[i]) |ii> on d x d with d = len(coeffs)."""
    lam = np.asarray(coeffs, dtype=float)
    if np.any(lam < 0):
        raise ValueError("Schmidt weights must be nonnegative")
    if abs(lam.sum() - 1) > tol:
        raise ValueError(f"Schmidt weights sum to {lam.sum():.6g}, not 1")
    d = lam.size
    v = np.zeros(d * d, dtype=complex)
    v[np.arange(d) * (d + 1)] = np.sqrt(lam)
    return pure_state(v, (d, d))


def _check_local_dim(d: int, least: int = 2):
    if int(d) != d or d < least:
        raise ValueError(f"dimension must be an integer >= {least}, got {d}")


def max_entangled_vector(d: int) -> np.ndarray:
    v = np.zeros(d * d, dtype=complex)
    v[np.arange(d) * (d + 1)] = 1 / math.sqrt(d)
    return v


def max_entangled(d: int) -> DensityMatrix:
    _check_local_dim(d)
    v = max_entangled_vector(d)
    return DensityMatrix._trusted(np.outer(v, v.conj()), (d, d))


def flip_operator(d: int) -> Operator:
    """Swap F|ij> = |ji> on C^d ⊗ C^d."""
    f = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            f[j * d + i, i * d + j] = 1
    return Operator(f, (d, d))


def orth_complement(rho: DensityMatrix, tol: float = 1e-9) -> DensityMatrix:
    """(1 - rho) / (D - 1) for a pure rho."""
    if abs(np.trace(rho.data @ rho.data).real - 1) > tol:
        raise ValueError("orthogonal complement is defined for pure states only")
    dim = rho.dim
    return DensityMatrix._trusted((np.eye(dim) - rho.data) / (dim - 1), rho.dims)


def sym_antisym_projectors(d: int) -> tuple[Operator, Operator]:
    _check_local_dim(d)
    f = flip_operator(d).data
    eye = np.eye(d * d)
    return Operator((eye + f) / 2, (d, d)), Operator((eye - f) / 2, (d, d))


def werner_states(d: int) -> tuple[DensityMatrix, DensityMatrix]:
    """Normalized projectors onto the symmetric and antisymmetric subspaces."""
    ps, pa = sym_antisym_projectors(d)
    sym = DensityMatrix._trusted(2 * ps.data / (d * (d + 1)), (d, d))
    anti = DensityMatrix._trusted(2 * pa.data / (d * (d - 1)), (d, d))
    return sym, anti


def measurement_M(d: int) -> Operator:
    """Phi_d + (1 - Phi_d)/(d + 1); its n-fold power is the LOCC test."""
    _check_local_dim(d)
    phi = max_entangled(d).data
    return Operator(phi + (np.eye(d * d) - phi) / (d + 1), (d, d))


def measurement_M_bar(m: int) -> Operator:
    """((m-1)/(m+1)) Pi_s + Pi_a, the Werner-state test."""
    ps, pa = sym_antisym_projectors(m)
    return Operator((m - 1) / (m + 1) * ps.data + pa.data, (m, m))


def _embedding_isometry(m: int, d: int) -> np.ndarray:
    if m > d:
        raise DimensionError(f"cannot embed dimension {m} into {d}")
    w = np.zeros((d, m))
    w[np.arange(m), np.arange(m)] = 1
    return np.kron(w, w)


def embed_padded(rho_small: Operator, m: int, d: int) -> Operator:
    """(W ⊗ W) rho (W ⊗ W)^† with W the first-m-coordinates isometry."""
    if rho_small.dims != (m, m):
        raise DimensionError(f"expected an {m} x {m} operator, got dims {rho_small.dims}")
    w = _embedding_isometry(m, d)
    out = w @ rho_small.data @ w.T
    if isinstance(rho_small, DensityMatrix):
        return DensityMatrix._trusted(out, (d, d))
    return Operator(out, (d, d))


def padding_state(m: int, d: int) -> DensityMatrix:
    """Uniform state on the complement of span{|ij> : i, j < m}."""
    if m >= d:
        raise DimensionError("padding needs m < d")
    w = _embedding_isometry(m, d)
    comp = np.eye(d * d) - w @ w.T
    return DensityMatrix._trusted(comp / (d * d - m * m), (d, d))


def padded_mixture(rho_small: DensityMatrix, lam: float, m: int, d: int) -> DensityMatrix:
    if not 0 <= lam <= 1:
        raise ValueError(f"mixing weight {lam} outside [0, 1]")
    if m > d:
        raise DimensionError(f"cannot embed dimension {m} into {d}")
    head = embed_padded(rho_small, m, d)
    if lam == 1 or m == d:
        if m == d and lam != 1:
            raise ValueError("no padding space when m == d; use lambda = 1")
        return DensityMatrix._trusted(head.data, (d, d))
    data = lam * head.data + (1 - lam) * padding_state(m, d).data
    return DensityMatrix._trusted(data, (d, d))


def _words(n: int, k: int, d: int, first: np.ndarray, second: np.ndarray) -> Operator:
    if (d * d) ** n > MAX_DIM:
        raise DimensionError(f"dimension {(d * d) ** n} exceeds cap {MAX_DIM}")
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    one = Operator(first, (d, d))
    other = Operator(second, (d, d))
    total = np.zeros(((d * d) ** n,) * 2, dtype=complex)
    for pos in itertools.combinations(range(n), k):
        word = [one if j in pos else other for j in range(n)]
        total += kron_all(word).data
    return Operator(total, (d, d) * n)


def bk_operator(n: int, k: int, d: int) -> Operator:
    """Sum of n-fold words over {Phi_d, 1 - Phi_d} with exactly k copies of Phi_d."""
    phi = max_entangled(d).data
    return _words(n, k, d, phi, np.eye(d * d) - phi)


def symmetric_word_operator(n: int, l: int, d: int) -> Operator:
    """Sum of n-fold words over {Pi_s, Pi_a} with exactly l copies of Pi_s."""
    ps, pa = sym_antisym_projectors(d)
    return _words(n, l, d, ps.data, pa.data)


def b_side_factors(n: int) -> list[int]:
    """Factor indices of the B systems in an n-copy bipartite factorization."""
    return [2 * j + 1 for j in range(n)]


@dataclass(frozen=True, eq=False)
class HypothesisPair:
    """Null state, alternative state and the prior of the null."""

    rho0: DensityMatrix
    rho1: DensityMatrix
    prior_p: float = 0.5
    label: str = "custom"

    def __post_init__(self):
        if self.rho0.dims != self.rho1.dims:
            raise DimensionError("hypotheses must share a factorization")
        if not 0 < self.prior_p < 1:
            raise ValueError(f"prior {self.prior_p} outside (0, 1)")


def table_pair(label: str, *, d: int = 2, m: int = 2, lam: float = 1.0, p: float = 0.5) -> HypothesisPair:
    """Hypothesis pair for a named table row.

    Padded rows put the null state in the m x m corner of C^d ⊗ C^d and mix
    the alternative with the uniform state on the padding.  When the caller's
    d is too small to hold padding, d = m + 1 is used.
    """
    label = label.upper()
    if label in ("MES", "MES_REV"):
        phi = max_entangled(d)
        pair = (phi, orth_complement(phi))
    elif label in ("SYM", "SYM_REV"):
        pair = werner_states(d)
    elif label in ("MES_PAD", "MES_PERP_PAD", "SYM_PAD", "SYM_PERP_PAD"):
        _check_local_dim(m)
        big = d if d > m else (m if lam == 1 else m + 1)
        if label.startswith("MES"):
            phi = max_entangled(m)
            head, tail = phi, orth_complement(phi)
        else:
            head, tail = werner_states(m)
        if "PERP" in label:
            head, tail = tail, head
        pair = (embed_padded(head, m, big), padded_mixture(tail, lam, m, big))
    else:
        raise ValueError(f"unknown case {label!r}; expected one of {TABLE_ROWS}")
    rho0, rho1 = pair
    if label.endswith("_REV"):
        rho0, rho1 = rho1, rho0
    return HypothesisPair(rho0, rho1, p, label)


def check_density(op: Operator, tol: float = DEFAULT_TOL) -> bool:
    """True iff op passes the Hermitian, PSD and unit-trace checks."""
    if not op.is_hermitian(tol) or abs(op.trace() - 1) > tol:
        return False
    return bool(eigvals_hermitian(op)[0] >= -tol)


__all__ = [
    "TABLE_ROWS",
    "HypothesisPair",
    "NotDensityMatrixError",
    "PureState",
    "symmetric_word_operator",
    "b_side_factors",
    "bk_operator",
    "check_density",
    "embed_padded",
    "flip_operator",
    "max_entangled",
    "max_entangled_vector",
    "measurement_M",
    "measurement_M_bar",
    "orth_complement",
    "padded_mixture",
    "padding_state",
    "pure_state",
    "random_pure_state",
    "schmidt_state",
    "sym_antisym_projectors",
    "table_pair",
    "werner_states",
]
