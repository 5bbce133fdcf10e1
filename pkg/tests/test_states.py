import numpy as np
import pytest

from pptdisc.operators import partial_trace, partial_transpose
from pptdisc.states import (
    TABLE_ROWS,
    symmetric_word_operator,
    b_side_factors,
    bk_operator,
    check_density,
    flip_operator,
    max_entangled,
    measurement_M,
    orth_complement,
    pure_state,
    random_pure_state,
    schmidt_state,
    table_pair,
    werner_states,
)


def test_schmidt_data_of_random_state(rng):
    psi = random_pure_state((3, 3), rng)
    assert sum(c * c for c in psi.schmidt_coeffs) == pytest.approx(1, abs=1e-12)
    reduced = partial_trace(psi.density(), 1)
    assert psi.eta == pytest.approx(np.linalg.eigvalsh(reduced.data)[-1], abs=1e-12)


def test_max_entangled_has_uniform_schmidt_coefficients():
    psi = schmidt_state([1 / 3] * 3)
    assert psi.eta == pytest.approx(1 / 3)
    assert psi.density().allclose(max_entangled(3))


def test_pure_state_rejects_unnormalized():
    with pytest.raises(ValueError):
        pure_state([1, 1], (2,))


def test_orth_complement_is_orthogonal_state():
    phi = max_entangled(2)
    perp = orth_complement(phi)
    assert check_density(perp)
    assert abs(np.trace(phi.data @ perp.data)) < 1e-15


def test_werner_states_are_supported_on_flip_eigenspaces():
    sym, anti = werner_states(3)
    f = flip_operator(3).data
    np.testing.assert_allclose(f @ sym.data, sym.data, atol=1e-14)
    np.testing.assert_allclose(f @ anti.data, -anti.data, atol=1e-14)
    assert check_density(sym) and check_density(anti)


def test_measurement_accepts_max_entangled_surely():
    d = 3
    m = measurement_M(d).data
    assert np.trace(m @ max_entangled(d).data).real == pytest.approx(1, abs=1e-14)
    assert np.trace(m @ orth_complement(max_entangled(d)).data).real == pytest.approx(1 / (d + 1), abs=1e-14)
    # PPT: both the test and its complement keep a PSD partial transpose
    assert np.linalg.eigvalsh(partial_transpose(measurement_M(d), 1).data)[0] >= -1e-14
    assert np.linalg.eigvalsh(np.eye(d * d) - partial_transpose(measurement_M(d), 1).data)[0] >= -1e-14


@pytest.mark.parametrize("label", TABLE_ROWS)
@pytest.mark.parametrize("lam", [0.25, 1.0])
def test_table_pairs_are_orthogonal_states(label, lam):
    pair = table_pair(label, d=3, m=2, lam=lam)
    assert check_density(pair.rho0) and check_density(pair.rho1)
    assert abs(np.trace(pair.rho0.data @ pair.rho1.data)) < 1e-14


def test_reverse_rows_swap_hypotheses():
    fwd, rev = table_pair("MES", d=2), table_pair("MES_REV", d=2)
    assert fwd.rho0.allclose(rev.rho1) and fwd.rho1.allclose(rev.rho0)


def test_unknown_row_is_rejected():
    with pytest.raises(ValueError):
        table_pair("NOPE")


@pytest.mark.parametrize("n,d", [(1, 2), (2, 2), (2, 3)])
def test_word_operators_resolve_identity(n, d):
    total_b = sum(bk_operator(n, k, d).data for k in range(n + 1))
    total_a = sum(symmetric_word_operator(n, l, d).data for l in range(n + 1))
    eye = np.eye((d * d) ** n)
    np.testing.assert_allclose(total_b, eye, atol=1e-13)
    np.testing.assert_allclose(total_a, eye, atol=1e-13)
    assert b_side_factors(n) == list(range(1, 2 * n, 2))
