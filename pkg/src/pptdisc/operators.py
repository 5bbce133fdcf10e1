"""Dense operators on tensor-product Hilbert spaces.

An :class:`Operator` is a square complex matrix together with the local
dimensions of the tensor factors it acts on.  All functions here are pure:
they never mutate their inputs and the stored arrays are read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_DIM = 4096
SUPPORT_RTOL = 1e-12
DEFAULT_TOL = 1e-10


class DimensionError(ValueError):
    """Shape or factorization mismatch, or the dimension cap was exceeded."""


class NotHermitianError(ValueError):
    """A Hermitian operator was required."""


class NotDensityMatrixError(ValueError):
    """Input fails the PSD or unit-trace checks."""


@dataclass(frozen=True)
class HilbertFactorization:
    local_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(k) for k in self.local_dims)
        if not dims or any(k < 1 for k in dims):
            raise DimensionError(f"local dimensions must be positive, got {self.local_dims}")
        object.__setattr__(self, "local_dims", dims)

    @property
    def total_dim(self) -> int:
        return math.prod(self.local_dims)

    def __len__(self):
        return len(self.local_dims)


def _as_dims(dims) -> tuple[int, ...]:
    if isinstance(dims, HilbertFactorization):
        return dims.local_dims
    if isinstance(dims, (int, np.integer)):
        return (int(dims),)
    return HilbertFactorization(tuple(dims)).local_dims


@dataclass(frozen=True, eq=False)
class Operator:
    """Square complex matrix tagged with its tensor factorization."""

    data: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = _as_dims(self.dims)
        arr = np.array(self.data, dtype=complex)
        total = math.prod(dims)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"operator must be square, got shape {arr.shape}")
        if arr.shape[0] != total:
            raise DimensionError(f"shape {arr.shape} does not match factorization {dims}")
        if total > MAX_DIM:
            raise DimensionError(f"dimension {total} exceeds cap {MAX_DIM}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def identity(cls, dims) -> "Operator":
        dims = _as_dims(dims)
        return cls(np.eye(math.prod(dims)), dims)

    @classmethod
    def zeros(cls, dims) -> "Operator":
        dims = _as_dims(dims)
        n = math.prod(dims)
        return cls(np.zeros((n, n)), dims)

    @classmethod
    def projector(cls, vec, dims) -> "Operator":
        v = np.asarray(vec, dtype=complex).reshape(-1)
        return cls(np.outer(v, v.conj()), dims)

    @property
    def factorization(self) -> HilbertFactorization:
        return HilbertFactorization(self.dims)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def retag(self, dims) -> "Operator":
        return Operator(self.data, dims)

    def dag(self) -> "Operator":
        return Operator(self.data.conj().T, self.dims)

    def trace(self) -> complex:
        return complex(np.trace(self.data))

    def is_hermitian(self, tol: float = DEFAULT_TOL) -> bool:
        return bool(np.max(np.abs(self.data - self.data.conj().T), initial=0.0) <= tol)

    def hermitian_part(self) -> "Operator":
        return Operator((self.data + self.data.conj().T) / 2, self.dims)

    def _check_dims(self, other: "Operator"):
        if self.dims != other.dims:
            raise DimensionError(f"factorizations differ: {self.dims} vs {other.dims}")

    def __add__(self, other):
        if isinstance(other, Operator):
            self._check_dims(other)
            return Operator(self.data + other.data, self.dims)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Operator):
            self._check_dims(other)
            return Operator(self.data - other.data, self.dims)
        return NotImplemented

    def __neg__(self):
        return Operator(-self.data, self.dims)

    def __mul__(self, scalar):
        if isinstance(scalar, Operator):
            return NotImplemented
        return Operator(self.data * scalar, self.dims)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Operator(self.data / scalar, self.dims)

    def __matmul__(self, other):
        if isinstance(other, Operator):
            self._check_dims(other)
            return Operator(self.data @ other.data, self.dims)
        return NotImplemented

    def allclose(self, other: "Operator", atol: float = DEFAULT_TOL) -> bool:
        return self.dims == other.dims and bool(np.allclose(self.data, other.data, rtol=0, atol=atol))


class DensityMatrix(Operator):
    """Operator that is Hermitian, PSD and of unit trace within ``tol``."""

    def __init__(self, data, dims, tol: float = DEFAULT_TOL):
        super().__init__(data, dims)
        if not self.is_hermitian(tol):
            raise NotDensityMatrixError("density matrix must be Hermitian")
        if abs(self.trace() - 1) > tol:
            raise NotDensityMatrixError(f"trace {self.trace().real:.3g} differs from 1")
        lo = np.linalg.eigvalsh(self.data)[0]
        if lo < -tol:
            raise NotDensityMatrixError(f"minimum eigenvalue {lo:.3g} is negative")

    @classmethod
    def _trusted(cls, data, dims) -> "DensityMatrix":
        # Callers guarantee PSD and unit trace (e.g. tensor products of states).
        obj = cls.__new__(cls)
        Operator.__init__(obj, data, dims)
        return obj

    @classmethod
    def from_operator(cls, op: Operator, tol: float = DEFAULT_TOL) -> "DensityMatrix":
        return cls(op.data, op.dims, tol)

    @classmethod
    def maximally_mixed(cls, dims) -> "DensityMatrix":
        dims = _as_dims(dims)
        n = math.prod(dims)
        return cls._trusted(np.eye(n) / n, dims)

    @property
    def op(self) -> Operator:
        return Operator(self.data, self.dims)

    def retag(self, dims) -> "DensityMatrix":
        return DensityMatrix._trusted(self.data, dims)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues in descending order with matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _require_hermitian(h: Operator, tol: float = DEFAULT_TOL):
    if not h.is_hermitian(tol * max(1.0, float(np.max(np.abs(h.data), initial=0.0)))):
        raise NotHermitianError("operator is not Hermitian")


def kron(a: Operator, b: Operator) -> Operator:
    dims = a.dims + b.dims
    if math.prod(dims) > MAX_DIM:
        raise DimensionError(f"dimension {math.prod(dims)} exceeds cap {MAX_DIM}")
    data = np.kron(a.data, b.data)
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix._trusted(data, dims)
    return Operator(data, dims)


def kron_all(ops: Iterable[Operator]) -> Operator:
    ops = list(ops)
    if not ops:
        raise DimensionError("empty tensor product")
    out = ops[0]
    for op in ops[1:]:
        out = kron(out, op)
    return out


def tensor_power(a: Operator, n: int) -> Operator:
    if n < 1:
        raise ValueError("tensor power needs n >= 1")
    return kron_all([a] * n)


def direct_sum(a: Operator, b: Operator) -> Operator:
    na, nb = a.dim, b.dim
    out = np.zeros((na + nb, na + nb), dtype=complex)
    out[:na, :na] = a.data
    out[na:, na:] = b.data
    return Operator(out, (na + nb,))


def _factor_list(x: Operator, factors) -> list[int]:
    idx = [factors] if isinstance(factors, (int, np.integer)) else list(factors)
    k = len(x.dims)
    for i in idx:
        if not 0 <= i < k:
            raise IndexError(f"factor index {i} out of range for {k} factors")
    return idx


def partial_transpose(x: Operator, factors: int | Sequence[int]) -> Operator:
    """Transpose the listed tensor factors (one index or several)."""
    idx = _factor_list(x, factors)
    k = len(x.dims)
    t = x.data.reshape(x.dims + x.dims)
    perm = list(range(2 * k))
    for i in idx:
        perm[i], perm[k + i] = k + i, i
    out = t.transpose(perm).reshape(x.dim, x.dim)
    return Operator(out, x.dims)


def partial_trace(x: Operator, factors: int | Sequence[int]) -> Operator:
    """Trace out the listed tensor factors."""
    idx = sorted(set(_factor_list(x, factors)))
    k = len(x.dims)
    keep = [i for i in range(k) if i not in idx]
    t = x.data.reshape(x.dims + x.dims)
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    if 2 * k > len(letters):
        raise DimensionError("too many tensor factors")
    row = list(letters[:k])
    col = list(letters[k:2 * k])
    for i in idx:
        col[i] = row[i]
    out_sub = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    res = np.einsum("".join(row) + "".join(col) + "->" + out_sub, t)
    dims = tuple(x.dims[i] for i in keep) or (1,)
    n = math.prod(dims)
    res = res.reshape(n, n)
    if isinstance(x, DensityMatrix):
        return DensityMatrix._trusted(res, dims)
    return Operator(res, dims)


def eig_hermitian(h: Operator, tol: float = DEFAULT_TOL) -> Spectrum:
    _require_hermitian(h, tol)
    w, v = np.linalg.eigh(h.data)
    return Spectrum(w[::-1].copy(), v[:, ::-1].copy())


def eigvals_hermitian(h: Operator, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Eigenvalues only, ascending."""
    _require_hermitian(h, tol)
    return np.linalg.eigvalsh(h.data)


def jacobi_eigh(h: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi eigensolver, used as an independent check on LAPACK.

    Returns eigenvalues in descending order and the matching eigenvector
    columns.
    """
    a = np.array(h, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(a), 1.0)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2 * mag)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                # rotation = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = [p, q]
                a[:, cols] = a[:, cols] @ g
                a[cols, :] = g.conj().T @ a[cols, :]
                v[:, cols] = v[:, cols] @ g
                a[p, q] = a[q, p] = 0
    w = np.diag(a).real
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def trace_norm(h: Operator) -> float:
    return float(np.sum(np.abs(eigvals_hermitian(h))))


def support_mask(w: np.ndarray) -> np.ndarray:
    scale = float(np.max(np.abs(w), initial=0.0))
    return np.abs(w) > SUPPORT_RTOL * scale


def frac_power(rho: Operator, s: float) -> Operator:
    """rho**s on the support of rho; s = 0 gives the support projector."""
    if not 0 <= s <= 1:
        raise ValueError(f"exponent {s} outside [0, 1]")
    spec = eig_hermitian(rho)
    w = spec.eigenvalues
    mask = support_mask(w) & (w > 0)
    ws = np.zeros_like(w)
    ws[mask] = w[mask] ** s
    v = spec.eigenvectors
    return Operator((v * ws) @ v.conj().T, rho.dims)


def is_psd(h: Operator, tol: float = 1e-12) -> bool:
    return bool(eigvals_hermitian(h)[0] >= -tol)


def min_eig(h: Operator) -> float:
    return float(eigvals_hermitian(h)[0])


def max_eig(h: Operator) -> float:
    return float(eigvals_hermitian(h)[-1])


def operator_norm(h: Operator) -> float:
    w = eigvals_hermitian(h)
    return float(max(abs(w[0]), abs(w[-1])))
