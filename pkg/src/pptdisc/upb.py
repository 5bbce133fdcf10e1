"""Unextendible product bases, the minimax overlap delta_S, and the
SEP-versus-PPT separation witness built from them.

delta_S = min over product states rho_A ⊗ rho_B of max_i <a_i|rho_A|a_i><b_i|rho_B|b_i>.
It is positive exactly when no product state is orthogonal to every member
of the basis.  The minimization is nonconvex; every value reported here is
attained by the returned pair, so it is an upper estimate of the minimum.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import minimize

from .operators import (
    MAX_DIM,
    DensityMatrix,
    DimensionError,
    NotHermitianError,
    Operator,
    eigvals_hermitian,
    tensor_power,
)
from .ppt import transpose_b_side
from .states import HypothesisPair

SEPARATION_CAP = 256
# SLSQP workspace grows quadratically; larger problems keep the subgradient result.
POLISH_MAX_VARS = 512
POLISH_MAX_CONSTRAINTS = 1024


class ExtendibleBasisError(ValueError):
    """The basis admits an orthogonal product state (delta is zero)."""


@dataclass(frozen=True, eq=False)
class ProductBasis:
    """Product vectors |a_i>|b_i>; rows of ``a_vectors``/``b_vectors`` are the factors."""

    a_vectors: np.ndarray
    b_vectors: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.a_vectors, dtype=complex))
        b = np.atleast_2d(np.asarray(self.b_vectors, dtype=complex))
        if a.shape[0] != b.shape[0]:
            raise ValueError("A and B factor lists differ in length")
        for name, vecs in (("A", a), ("B", b)):
            norms = np.linalg.norm(vecs, axis=1)
            if np.any(np.abs(norms - 1) > 1e-9):
                raise ValueError(f"{name} factors must be unit vectors")
        for arr in (a, b):
            arr.setflags(write=False)
        object.__setattr__(self, "a_vectors", a)
        object.__setattr__(self, "b_vectors", b)
        g = self.gram()
        off = np.max(np.abs(g - np.eye(self.size)), initial=0.0)
        if off > 1e-8:
            raise ValueError(f"product vectors are not orthonormal (deviation {off:.3e})")

    @property
    def size(self) -> int:
        return self.a_vectors.shape[0]

    @property
    def dims(self) -> tuple[int, int]:
        return self.a_vectors.shape[1], self.b_vectors.shape[1]

    def product_vectors(self) -> np.ndarray:
        return np.einsum("ia,ib->iab", self.a_vectors, self.b_vectors).reshape(self.size, -1)

    def gram(self) -> np.ndarray:
        v = self.product_vectors()
        return v.conj() @ v.T

    def projector(self) -> Operator:
        v = self.product_vectors()
        return Operator(v.T @ v.conj(), self.dims)

    def tensor(self, other: "ProductBasis") -> "ProductBasis":
        """Members |a_i a'_j>|b_i b'_j>, grouping A = A1 A2 and B = B1 B2."""
        a = np.array([np.kron(x, y) for x in self.a_vectors for y in other.a_vectors])
        b = np.array([np.kron(x, y) for x in self.b_vectors for y in other.b_vectors])
        return ProductBasis(a, b, f"{self.name}x{other.name}")

    def extended(self, a, b) -> "ProductBasis":
        return ProductBasis(np.vstack([self.a_vectors, a]), np.vstack([self.b_vectors, b]), self.name + "+")

    def to_dict(self) -> dict:
        pair = lambda v: [[float(z.real), float(z.imag)] for z in v]  # noqa: E731
        return {
            "name": self.name,
            "dims": list(self.dims),
            "a_vectors": [pair(v) for v in self.a_vectors],
            "b_vectors": [pair(v) for v in self.b_vectors],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ProductBasis":
        unpair = lambda rows: np.array([[complex(re, im) for re, im in v] for v in rows])  # noqa: E731
        return cls(unpair(data["a_vectors"]), unpair(data["b_vectors"]), data.get("name", "custom"))

    @classmethod
    def load(cls, path: str | Path) -> "ProductBasis":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def save(self, path: str | Path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)


def tiles_upb() -> ProductBasis:
    """The five-member Tiles UPB on 3 x 3."""
    e = np.eye(3)
    s = 1 / math.sqrt(2)
    u = np.ones(3) / math.sqrt(3)
    a = [e[0], e[2], s * (e[0] - e[1]), s * (e[1] - e[2]), u]
    b = [s * (e[0] - e[1]), s * (e[1] - e[2]), e[2], e[0], u]
    return ProductBasis(np.array(a), np.array(b), "tiles")


def computational_product_basis(d_a: int, d_b: int) -> ProductBasis:
    """All |i>|j>; complete, hence trivially unextendible."""
    ea, eb = np.eye(d_a), np.eye(d_b)
    pairs = list(itertools.product(range(d_a), range(d_b)))
    return ProductBasis(np.array([ea[i] for i, _ in pairs]), np.array([eb[j] for _, j in pairs]), f"full{d_a}x{d_b}")


# ---------------------------------------------------------------------------
# delta_S optimizer


@dataclass(frozen=True)
class DeltaConfig:
    restarts: int = 32
    iterations: int = 2000
    inner_iterations: int = 200
    patience: int = 50
    improve_tol: float = 1e-8
    step: float = 0.2
    polish: bool = True
    polish_maxiter: int = 500
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 0 or self.iterations < 1 or self.inner_iterations < 1:
            raise ValueError("restart and iteration budgets must be positive")


@dataclass(frozen=True, eq=False)
class DeltaEstimate:
    value: float
    rho_a: DensityMatrix
    rho_b: DensityMatrix
    restarts_used: int
    converged: bool
    restart_values: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0))

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "restarts_used": self.restarts_used,
            "converged": self.converged,
            "restart_values": self.restart_values.tolist(),
        }


def overlaps(vecs: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """<v_i|rho|v_i> for each row v_i."""
    return np.real(np.einsum("ia,ab,ib->i", vecs.conj(), rho, vecs))


def minimax_objective(basis: ProductBasis, rho_a: np.ndarray, rho_b: np.ndarray) -> float:
    return float(np.max(overlaps(basis.a_vectors, rho_a) * overlaps(basis.b_vectors, rho_b)))


def project_to_density(h: np.ndarray) -> np.ndarray:
    """Frobenius-nearest density matrix: eigenvalues projected onto the simplex."""
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    return (v * simplex_projection(w)) @ v.conj().T


def simplex_projection(y: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {x >= 0, sum x = 1}."""
    u = np.sort(y)[::-1]
    css = np.cumsum(u) - 1
    idx = np.arange(1, y.size + 1)
    k = idx[u - css / idx > 0][-1]
    return np.maximum(y - css[k - 1] / k, 0.0)


def random_density(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def _subgradient_factor(vecs, weights, rho, cfg: DeltaConfig, budget: int):
    """Projected subgradient on rho for max_i weights_i <v_i|rho|v_i>."""
    best_rho, best = rho, float(np.max(weights * overlaps(vecs, rho)))
    stall, used = 0, 0
    for k in range(1, budget + 1):
        used = k
        vals = weights * overlaps(vecs, rho)
        i = int(np.argmax(vals))
        grad = weights[i] * np.outer(vecs[i], vecs[i].conj())
        rho = project_to_density(rho - cfg.step / math.sqrt(k) * grad)
        val = float(np.max(weights * overlaps(vecs, rho)))
        if val < best - cfg.improve_tol:
            best, best_rho, stall = val, rho, 0
        else:
            stall += 1
            if stall >= cfg.patience:
                break
    return best_rho, best, used


def _alternating(basis: ProductBasis, rho_a, rho_b, cfg: DeltaConfig):
    value = minimax_objective(basis, rho_a, rho_b)
    spent = 0
    converged = False
    while spent < cfg.iterations:
        start = value
        budget = min(cfg.inner_iterations, cfg.iterations - spent)
        rho_a, _, used = _subgradient_factor(basis.a_vectors, overlaps(basis.b_vectors, rho_b), rho_a, cfg, budget)
        spent += used
        budget = min(cfg.inner_iterations, max(cfg.iterations - spent, 1))
        rho_b, value, used = _subgradient_factor(basis.b_vectors, overlaps(basis.a_vectors, rho_a), rho_b, cfg, budget)
        spent += used
        if start - value < cfg.improve_tol:
            converged = True
            break
    return rho_a, rho_b, minimax_objective(basis, rho_a, rho_b), converged


def _sqrt_factor(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(rho)
    return v * np.sqrt(np.clip(w, 0, None))


def _side(vecs: np.ndarray, g: np.ndarray):
    """Overlaps a_i = |v_i^† G|^2 / |G|^2 and their gradients in (Re G, Im G)."""
    u = vecs.conj() @ g
    nrm = float(np.sum(np.abs(g) ** 2))
    num = np.sum(np.abs(u) ** 2, axis=1)
    m = np.einsum("ij,ik->ijk", vecs.conj(), u.conj())
    d_re = (2 * m.real * nrm - num[:, None, None] * 2 * g.real) / nrm ** 2
    d_im = (-2 * m.imag * nrm - num[:, None, None] * 2 * g.imag) / nrm ** 2
    n = vecs.shape[0]
    return num / nrm, np.concatenate([d_re.reshape(n, -1), d_im.reshape(n, -1)], axis=1)


def _polish_fits(basis: ProductBasis) -> bool:
    da, db = basis.dims
    return 2 * (da * da + db * db) + 1 <= POLISH_MAX_VARS and basis.size <= POLISH_MAX_CONSTRAINTS


def _polish(basis: ProductBasis, rho_a, rho_b, maxiter: int):
    """Joint SLSQP on the epigraph form: min t s.t. t >= a_i b_i."""
    av, bv = basis.a_vectors, basis.b_vectors
    da, db = basis.dims
    na, nb = 2 * da * da, 2 * db * db

    def unpack(z):
        ga = (z[: da * da] + 1j * z[da * da: na]).reshape(da, da)
        gb = (z[na: na + db * db] + 1j * z[na + db * db: na + nb]).reshape(db, db)
        return ga, gb

    def cons(z):
        ga, gb = unpack(z)
        a, _ = _side(av, ga)
        b, _ = _side(bv, gb)
        return z[-1] - a * b

    def cons_jac(z):
        ga, gb = unpack(z)
        a, ja = _side(av, ga)
        b, jb = _side(bv, gb)
        jac = np.empty((a.size, na + nb + 1))
        jac[:, :na] = -b[:, None] * ja
        jac[:, na: na + nb] = -a[:, None] * jb
        jac[:, -1] = 1.0
        return jac

    ga, gb = _sqrt_factor(rho_a), _sqrt_factor(rho_b)
    z0 = np.concatenate([ga.real.ravel(), ga.imag.ravel(), gb.real.ravel(), gb.imag.ravel()])
    z0 = np.append(z0, minimax_objective(basis, rho_a, rho_b))
    grad_t = np.zeros(z0.size)
    grad_t[-1] = 1.0
    res = minimize(
        lambda z: z[-1], z0, jac=lambda z: grad_t, method="SLSQP",
        constraints=[{"type": "ineq", "fun": cons, "jac": cons_jac}],
        options={"maxiter": maxiter, "ftol": 1e-14},
    )
    ga, gb = unpack(res.x)
    ra, rb = ga @ ga.conj().T, gb @ gb.conj().T
    ra, rb = ra / np.trace(ra).real, rb / np.trace(rb).real
    return ra, rb, minimax_objective(basis, ra, rb), bool(res.success)


def _to_density(rho: np.ndarray, dim: int) -> DensityMatrix:
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix._trusted(rho / np.trace(rho).real, (dim,))


def delta_s(basis: ProductBasis, config: DeltaConfig = DeltaConfig(), warm_starts=()) -> DeltaEstimate:
    """Multi-restart estimate of delta_S.

    Each restart runs alternating projected subgradient descent (one factor
    at a time, eigenvalue-simplex projection, steps step/sqrt(k)), then a
    joint SLSQP polish that escapes the coordinatewise stalls of the
    alternating stage.  ``warm_starts`` are extra (rho_a, rho_b) starting
    pairs tried before the random restarts.
    """
    rng = np.random.default_rng(config.seed)
    da, db = basis.dims
    starts = [(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)) for a, b in warm_starts]
    starts += [(random_density(da, rng), random_density(db, rng)) for _ in range(config.restarts)]
    if not starts:
        raise ValueError("at least one start is required")
    best = None
    values = []
    polish = config.polish and _polish_fits(basis)
    for rho_a, rho_b in starts:
        ra, rb, val, conv = _alternating(basis, rho_a, rho_b, config)
        if polish:
            pa, pb, pval, pconv = _polish(basis, ra, rb, config.polish_maxiter)
            if pval <= val:
                ra, rb, val, conv = pa, pb, pval, pconv or conv
        values.append(val)
        if best is None or val < best[2]:
            best = (ra, rb, val, conv)
    ra, rb, val, conv = best
    return DeltaEstimate(float(min(max(val, 0.0), 1.0)), _to_density(ra, da), _to_density(rb, db),
                         len(starts), conv, np.array(values))


def _basis_net(dim: int, rng: np.random.Generator, vectors: np.ndarray, n_random: int) -> list[np.ndarray]:
    nets = [np.eye(dim, dtype=complex)]
    k = np.arange(dim)
    nets.append(np.exp(2j * np.pi * np.outer(k, k) / dim) / math.sqrt(dim))
    for v in vectors:
        q, _ = np.linalg.qr(np.column_stack([v, np.eye(dim)]))
        nets.append(q[:, :dim])
    for _ in range(n_random):
        z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        q, r = np.linalg.qr(z)
        nets.append(q * (np.diag(r) / np.abs(np.diag(r))))
    return nets


def _simplex_grid(dim: int, resolution: int) -> np.ndarray:
    pts = [c for c in itertools.product(range(resolution + 1), repeat=dim) if sum(c) == resolution]
    return np.array(pts, dtype=float) / resolution


def _candidate_overlaps(vecs: np.ndarray, resolution: int, rng, n_random: int) -> np.ndarray:
    """Overlap rows <v_i|U diag(w) U^†|v_i> for every net unitary U and grid weight w."""
    dim = vecs.shape[1]
    weights = _simplex_grid(dim, resolution)
    rows = []
    for u in _basis_net(dim, rng, vecs, n_random):
        amp = np.abs(vecs.conj() @ u) ** 2  # N x dim
        rows.append(weights @ amp.T)
    return np.vstack(rows)


def delta_s_grid_oracle(basis: ProductBasis, resolution: int = 12, n_random: int = 24, seed: int = 0) -> float:
    """Brute-force min over a fixed finite family of product states.

    The family is (simplex grid of eigenvalues) x (net of eigenbases: the
    identity, the Fourier basis, bases completed from each member vector, and
    seeded random unitaries), built independently of the optimizer.
    """
    if max(basis.dims) > 3:
        raise DimensionError("grid oracle supports local dimensions up to 3")
    rng = np.random.default_rng(seed)
    ca = _candidate_overlaps(basis.a_vectors, resolution, rng, n_random)
    cb = _candidate_overlaps(basis.b_vectors, resolution, rng, n_random)
    best = math.inf
    for chunk in np.array_split(ca, max(1, ca.shape[0] // 256)):
        vals = np.max(chunk[:, None, :] * cb[None, :, :], axis=2)
        best = min(best, float(vals.min()))
    return best


@dataclass(frozen=True, eq=False)
class MultiplicativityResult:
    lhs: float
    rhs: float
    joint: DeltaEstimate
    first: DeltaEstimate
    second: DeltaEstimate


def multiplicativity_check(s1: ProductBasis, s2: ProductBasis, config: DeltaConfig = DeltaConfig(),
                           joint_config: DeltaConfig | None = None) -> MultiplicativityResult:
    """delta of the tensor basis against the product of factor deltas.

    The joint search is seeded with the tensor product of the factor
    minimizers, so lhs <= rhs holds for the returned estimates.
    """
    total = math.prod(s1.dims) * math.prod(s2.dims)
    if total > MAX_DIM:
        raise DimensionError(f"tensor basis dimension {total} exceeds cap {MAX_DIM}")
    joint_basis = s1.tensor(s2)
    e1, e2 = delta_s(s1, config), delta_s(s2, config)
    seed = (np.kron(e1.rho_a.data, e2.rho_a.data), np.kron(e1.rho_b.data, e2.rho_b.data))
    joint = delta_s(joint_basis, joint_config or config, warm_starts=[seed])
    return MultiplicativityResult(joint.value, e1.value * e2.value, joint, e1, e2)


# ---------------------------------------------------------------------------
# separation witness


def upb_hypothesis_pair(basis: ProductBasis, sigma: DensityMatrix | None = None) -> HypothesisPair:
    """rho = P/N against sigma, by default the uniform state on the complement of P."""
    p = basis.projector()
    total = p.dim
    if basis.size >= total:
        raise DimensionError("basis spans the whole space; no complement state exists")
    rho = DensityMatrix._trusted(p.data / basis.size, p.dims)
    if sigma is None:
        sigma = DensityMatrix._trusted((np.eye(total) - p.data) / (total - basis.size), p.dims)
    elif abs(np.sum(rho.data * sigma.data.T)) > 1e-9:
        raise ValueError("sigma must be orthogonal to the basis state")
    return HypothesisPair(rho, sigma, 0.5, basis.name)


def ppt_perfect_discrimination(target: ProductBasis | Operator, tol: float = 1e-9) -> bool:
    """True iff both P and 1 - P have PSD partial transpose."""
    p = target.projector() if isinstance(target, ProductBasis) else target
    comp = Operator.identity(p.dims) - p
    return all(eigvals_hermitian(transpose_b_side(x))[0] >= -tol for x in (p, comp))


def sep_error_lower_bound(basis: ProductBasis, n: int, delta: float | None = None, tol: float = 1e-9) -> float:
    """mu^n / 2 with mu = delta / N."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if delta is None:
        delta = delta_s(basis).value
    if delta <= tol:
        raise ExtendibleBasisError("delta is zero: the basis is extendible")
    return (delta / basis.size) ** n / 2


@dataclass(frozen=True, eq=False)
class ProductWitness:
    """Product vector x ⊗ y with <x⊗y|h|x⊗y> = value < 0."""

    x: np.ndarray
    y: np.ndarray
    value: float
    vector: np.ndarray


def _grouping(dims: tuple[int, ...]) -> tuple[list[int], list[int]]:
    if len(dims) == 2:
        return [0], [1]
    if len(dims) % 2:
        raise DimensionError(f"cannot split factorization {dims} into A and B sides")
    return list(range(0, len(dims), 2)), list(range(1, len(dims), 2))


def block_positivity_falsifier(h: Operator, restarts: int = 256, seed: int = 0, tol: float = 1e-10,
                               max_sweeps: int = 50) -> ProductWitness | None:
    """Search for a product vector with negative expectation in h.

    A-side factors are the even positions of the factorization, B-side the
    odd ones.  Each restart alternates minimal eigenvectors of the two
    compressed blocks.  ``None`` means no witness was found, which is
    evidence for block positivity but not a proof.
    """
    if not h.is_hermitian(1e-10 * max(1.0, float(np.max(np.abs(h.data), initial=0.0)))):
        raise NotHermitianError("operator is not Hermitian")
    a_idx, b_idx = _grouping(h.dims)
    da = math.prod(h.dims[i] for i in a_idx)
    db = math.prod(h.dims[i] for i in b_idx)
    k = len(h.dims)
    perm = a_idx + b_idx
    t = h.data.reshape(h.dims + h.dims).transpose(perm + [k + i for i in perm])
    hab = t.reshape(da, db, da, db)
    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        y = rng.normal(size=db) + 1j * rng.normal(size=db)
        y /= np.linalg.norm(y)
        prev = math.inf
        for _ in range(max_sweeps):
            block_a = np.einsum("ajbk,j,k->ab", hab, y.conj(), y)
            _, va = np.linalg.eigh((block_a + block_a.conj().T) / 2)
            x = va[:, 0]
            block_b = np.einsum("jakb,j,k->ab", hab, x.conj(), x)
            wb, vb = np.linalg.eigh((block_b + block_b.conj().T) / 2)
            y = vb[:, 0]
            val = float(wb[0])
            if val < -tol:
                return ProductWitness(x, y, val, _ungroup(np.kron(x, y), h.dims, a_idx, b_idx))
            if prev - val < 1e-13:
                break
            prev = val
    return None


def _ungroup(vec: np.ndarray, dims, a_idx, b_idx) -> np.ndarray:
    perm = a_idx + b_idx
    t = vec.reshape([dims[i] for i in perm])
    inverse = np.argsort(perm)
    return t.transpose(inverse).reshape(-1)


@dataclass(frozen=True, eq=False)
class SeparationWitness:
    n: int
    mu: float
    h_operator: Operator
    psd_check: bool
    block_pos_falsified: bool
    bound: float
    trace: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mu": self.mu,
            "bound": self.bound,
            "trace": self.trace,
            "psd_check": self.psd_check,
            "block_pos_falsified": self.block_pos_falsified,
        }


def separation_witness(basis: ProductBasis, n: int, delta: float, sigma: DensityMatrix | None = None,
                       restarts: int = 256, seed: int = 0, tol: float = 1e-9) -> SeparationWitness:
    """Dual point H = rho^n/2 + (1/2 - mu^n/2) sigma^n certifying the SEP bound mu^n/2.

    Checks (i) H - rho^n/2 is PSD, hence block positive, and (ii) the
    falsifier finds no product vector below zero for P^n - delta^n.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if delta is None:
        raise ValueError("a delta estimate is required")
    if delta <= tol:
        raise ExtendibleBasisError("delta is zero: the basis is extendible")
    total = math.prod(basis.dims) ** n
    if total > SEPARATION_CAP:
        raise DimensionError(f"{n} copies need dimension {total}, above the witness cap {SEPARATION_CAP}")
    pair = upb_hypothesis_pair(basis, sigma)
    mu = delta / basis.size
    rho_n = tensor_power(pair.rho0, n)
    sigma_n = tensor_power(pair.rho1, n)
    half_gap = 0.5 - mu ** n / 2
    h = 0.5 * rho_n + half_gap * sigma_n
    psd = bool(eigvals_hermitian(half_gap * sigma_n)[0] >= -tol)
    p_n = tensor_power(basis.projector(), n)
    shifted = p_n - delta ** n * Operator.identity(p_n.dims)
    witness = block_positivity_falsifier(shifted, restarts=restarts, seed=seed)
    return SeparationWitness(n, mu, h, psd, witness is not None, mu ** n / 2, float(h.trace().real))


__all__ = [
    "DeltaConfig",
    "DeltaEstimate",
    "ExtendibleBasisError",
    "MultiplicativityResult",
    "ProductBasis",
    "ProductWitness",
    "SeparationWitness",
    "block_positivity_falsifier",
    "computational_product_basis",
    "delta_s",
    "delta_s_grid_oracle",
    "minimax_objective",
    "multiplicativity_check",
    "ppt_perfect_discrimination",
    "project_to_density",
    "sep_error_lower_bound",
    "separation_witness",
    "simplex_projection",
    "tiles_upb",
    "upb_hypothesis_pair",
]
