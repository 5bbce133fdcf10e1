import math

import numpy as np
import pytest

from conftest import random_hermitian
from pptdisc.operators import Operator, partial_transpose
from pptdisc.ppt import (
    DecompositionMismatchError,
    InfeasiblePointError,
    ProductStateError,
    decay_base,
    error_prob_from_ppt_norm,
    exp_lower_bound,
    ppt_norm_dual_value,
    ppt_norm_primal_value,
    single_copy_margin,
    stein_upper_bound,
    strong_converse_bound,
    transpose_b_side,
)
from pptdisc.states import max_entangled, orth_complement, pure_state, random_pure_state, schmidt_state
from pptdisc.symmetric_lp import solve_symmetric_lp


def test_b_side_transpose_covers_every_b_factor(rng):
    x = Operator(random_hermitian(rng, 16), (2, 2, 2, 2))
    assert transpose_b_side(x).allclose(partial_transpose(x, [1, 3]), atol=0)
    with pytest.raises(ValueError):
        transpose_b_side(Operator.identity((2, 2, 2)))


def test_primal_value_for_single_copy_max_entangled():
    # m = Phi - (1 - Phi)/3 lies in the PPT box
    phi = max_entangled(2)
    h = phi - orth_complement(phi)
    m = Operator(phi.data - (np.eye(4) - phi.data) / 3, (2, 2))
    assert ppt_norm_primal_value(h, m) == pytest.approx(4 / 3, abs=1e-12)


def test_primal_rejects_infeasible_test():
    h = Operator.identity((2, 2))
    with pytest.raises(InfeasiblePointError):
        ppt_norm_primal_value(h, 2 * Operator.identity((2, 2)))
    # Phi itself is a valid POVM element, but 2 Phi - 1 has Gamma with eigenvalue -2
    phi = max_entangled(2)
    with pytest.raises(InfeasiblePointError):
        ppt_norm_primal_value(h, Operator(4 * phi.data - np.eye(4), (2, 2)))


def test_weak_duality_on_random_instances(rng):
    for _ in range(25):
        h = Operator(random_hermitian(rng, 4), (2, 2))
        m = Operator(random_hermitian(rng, 4), (2, 2))
        scale = max(np.abs(np.linalg.eigvalsh(m.data)).max(),
                    np.abs(np.linalg.eigvalsh(transpose_b_side(m).data)).max())
        y = Operator(random_hermitian(rng, 4), (2, 2))
        primal = ppt_norm_primal_value(h, m / scale)
        dual = ppt_norm_dual_value(h, h - y, y).norm_value
        assert primal <= dual + 1e-12


def test_dual_rejects_mismatched_split():
    h = Operator.identity((2, 2))
    with pytest.raises(DecompositionMismatchError):
        ppt_norm_dual_value(h, h, h)


def test_error_from_norm():
    assert error_prob_from_ppt_norm(4 / 3) == pytest.approx(1 / 6)
    with pytest.raises(ValueError):
        error_prob_from_ppt_norm(3)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_decay_base_of_max_entangled(d):
    psi = pure_state(np.eye(d).reshape(-1) / math.sqrt(d), (d, d))
    assert decay_base(psi) == pytest.approx(1 / (d + 1))
    assert stein_upper_bound(psi) == pytest.approx(math.log(d + 1))


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_bound_is_tight_for_max_entangled(d, n):
    psi = schmidt_state([1 / d] * d)
    cert = exp_lower_bound(psi, 0.5, n)
    assert cert.materialized
    assert cert.bound == pytest.approx(solve_symmetric_lp(n, d, 0.5).value, abs=1e-12)


def test_certificate_sign_checks_on_random_states(rng):
    for d in (2, 3):
        for _ in range(5):
            psi = random_pure_state((d, d), rng)
            assert single_copy_margin(psi) >= -1e-12
            for n in (1, 2):
                cert = exp_lower_bound(psi, 0.5, n)
                assert cert.x_min_eig >= -1e-9
                assert cert.y_gamma_max_eig <= 1e-9
                assert 0 < cert.bound <= 0.5


def test_certificate_norm_gives_the_bound(rng):
    psi = random_pure_state((2, 2), rng)
    cert = exp_lower_bound(psi, 0.5, 2)
    # Bayes error >= 1/2 (1 - ||rho - sigma||_PPT / 2) with the split norm as upper bound on the norm
    assert error_prob_from_ppt_norm(cert.decomposition.norm_value) == pytest.approx(cert.bound, abs=1e-10)


def test_unmaterialized_above_cap():
    psi = schmidt_state([0.5, 0.5])
    cert = exp_lower_bound(psi, 0.3, 6)
    assert not cert.materialized
    assert cert.bound == pytest.approx(0.3 * 3.0 ** -6)


def test_product_state_rejected():
    with pytest.raises(ProductStateError):
        exp_lower_bound(schmidt_state([1.0, 0.0]), 0.5, 1)


def test_invalid_arguments():
    psi = schmidt_state([0.5, 0.5])
    with pytest.raises(ValueError):
        exp_lower_bound(psi, 1.0, 1)
    with pytest.raises(ValueError):
        exp_lower_bound(psi, 0.5, 0)


def test_strong_converse_example():
    psi = schmidt_state([0.5, 0.5])
    assert strong_converse_bound(psi, 1, math.log(9)) == pytest.approx(2 / 3, abs=1e-12)
    # the unmaterialized route gives the same number
    assert strong_converse_bound(psi, 1, math.log(9), materialize=False) == pytest.approx(2 / 3, abs=1e-12)

