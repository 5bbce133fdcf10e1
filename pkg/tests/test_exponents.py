import csv
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_matrix
from pptdisc.exponents import (
    REPORT_COLUMNS,
    CaseParams,
    DiscreteDistribution,
    RateFunction,
    classical_chernoff,
    closed_form_error,
    empirical_exponent,
    exponents_table,
    multipartite_upper_bound,
    quantum_chernoff,
    schmidt_measurement_distributions,
)
from pptdisc.formatting import INF, fmt
from pptdisc.operators import DensityMatrix
from pptdisc.states import schmidt_state, table_pair
from pptdisc.symmetric_lp import solve_symmetric_lp

GOLDEN = Path(__file__).parent / "fixtures" / "exponent_table_golden.csv"


def _commuting_pair(rng, dim):
    u, _ = np.linalg.qr(random_matrix(rng, dim))
    p = rng.dirichlet(np.ones(dim))
    q = rng.dirichlet(np.ones(dim))
    rho0 = DensityMatrix._trusted((u * p) @ u.conj().T, (dim,))
    rho1 = DensityMatrix._trusted((u * q) @ u.conj().T, (dim,))
    labels = tuple(range(dim))
    return rho0, rho1, DiscreteDistribution(p, labels), DiscreteDistribution(q, labels)


def test_quantum_matches_classical_on_commuting_pairs(rng):
    for _ in range(20):
        rho0, rho1, p, q = _commuting_pair(rng, int(rng.integers(2, 6)))
        assert quantum_chernoff(rho0, rho1) == pytest.approx(classical_chernoff(p, q), abs=1e-6)


def test_chernoff_of_orthogonal_states_is_infinite():
    pair = table_pair("MES", d=2)
    assert quantum_chernoff(pair.rho0, pair.rho1) == INF


def test_chernoff_of_identical_states_is_zero():
    rho = DensityMatrix.maximally_mixed((3,))
    assert quantum_chernoff(rho, rho) == pytest.approx(0, abs=1e-12)


def test_classical_chernoff_known_value():
    # interior minimizer; brute force on a fine grid
    p = DiscreteDistribution([0.5, 0.5], ("a", "b"))
    q = DiscreteDistribution([0.1, 0.9], ("a", "b"))
    grid = np.linspace(0, 1, 200001)
    brute = -np.log(np.min(0.5 ** grid * 0.1 ** (1 - grid) + 0.5 ** grid * 0.9 ** (1 - grid)))
    assert classical_chernoff(p, q) == pytest.approx(brute, abs=1e-9)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_schmidt_measurement_recovers_log_d_plus_one(d):
    p, q = schmidt_measurement_distributions(schmidt_state([1 / d] * d))
    assert classical_chernoff(p, q) == pytest.approx(math.log(d + 1), abs=1e-8)


def test_schmidt_measurement_on_product_state_is_infinite():
    p, q = schmidt_measurement_distributions(schmidt_state([1.0, 0.0, 0.0]))
    assert classical_chernoff(p, q) == INF


def test_distribution_validation():
    with pytest.raises(ValueError):
        DiscreteDistribution([0.5, 0.6], ("a", "b"))
    with pytest.raises(ValueError):
        classical_chernoff(DiscreteDistribution([1.0], ("a",)), DiscreteDistribution([1.0], ("b",)))


def test_multipartite_bound_range():
    assert 0 < multipartite_upper_bound([2, 2, 2]) < 1
    with pytest.raises(ValueError):
        multipartite_upper_bound([2, 2])


def test_empirical_exponent_on_lp_outputs():
    pts = [(n, solve_symmetric_lp(n, 2, 0.5).value) for n in range(1, 7)]
    assert empirical_exponent(pts) == pytest.approx(math.log(3), abs=1e-9)


def test_empirical_exponent_edge_cases():
    assert empirical_exponent([(1, 0.1), (2, 0.0)]) == INF
    with pytest.raises(ValueError):
        empirical_exponent([(1, 0.1)])


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 6), st.integers(2, 6), st.floats(0, 1), st.floats(0.01, 0.99), st.integers(0, 8))
def test_closed_forms_are_errors(d, m, lam, p, n):
    params = CaseParams(d, m, lam, p)
    for case in ("MES", "MES_HIGH", "MES_HIGH_1", "SYM_HIGH", "SYM_HIGH_1"):
        pe = closed_form_error(case, params, n)
        assert 0 <= pe <= min(p, 1 - p) + 1e-15
        assert pe <= closed_form_error(case, params, max(n - 1, 0)) + 1e-15


def test_row_examples():
    assert exponents_table(1, CaseParams(d=2)).chernoff == pytest.approx(math.log(3))
    assert exponents_table(4, CaseParams(d=3)).stein == pytest.approx(math.log(2))
    row3 = exponents_table("SYM", CaseParams(d=3))
    assert all(row3.hoeffding(r) == pytest.approx(math.log(2)) for r in (0.01, 1, 10))
    # padded Phi^perp row: max{log(m+1), log(1/lambda)}
    row6 = exponents_table("MES_PERP_PAD", CaseParams(m=2, lam=0.25))
    assert row6.chernoff == pytest.approx(math.log(4))
    assert row6.hoeffding(math.log(4)) == INF
    assert row6.hoeffding(math.log(4) + 1e-9) == pytest.approx(math.log(3))


def test_hoeffding_infinite_below_finite_stein():
    for row in range(1, 9):
        rep = exponents_table(row, CaseParams(d=3, m=3, lam=0.5))
        if math.isfinite(rep.stein):
            assert rep.hoeffding(0.5 * rep.stein) == INF
            assert rep.strong_converse(rep.stein + 1) == pytest.approx(1.0)


def test_rate_function_and_report_serialization():
    f = RateFunction(1.0, INF, 0.0, 1.0)
    assert f(0.5) == INF and f(3.0) == pytest.approx(2.0)
    doc = exponents_table(1, CaseParams(d=2)).to_dict()
    assert doc["stein"] == pytest.approx(math.log(3), abs=1e-11)
    assert "inf" in doc["hoeffding"]


def test_unknown_row_rejected():
    with pytest.raises(ValueError):
        exponents_table(9, CaseParams())
    with pytest.raises(ValueError):
        exponents_table("NOPE", CaseParams())


def _library_rows():
    with GOLDEN.open() as fh:
        gold = list(csv.reader(fh))
    out = [list(REPORT_COLUMNS)]
    for case, d, m, lam, r in (tuple(row[:5]) for row in gold[1:]):
        params = CaseParams(d=int(d) if d else 2, m=int(m) if m else 2, lam=float(lam) if lam else 1.0)
        row = exponents_table(case, params).evaluate(float(r))
        out.append([row["case"]] + [fmt(row[c]) for c in REPORT_COLUMNS[1:]])
    return gold, out


def test_table_matches_symbolic_golden():
    gold, out = _library_rows()
    assert len(gold) == 201
    assert [row for row, ref in zip(out, gold) if row != ref] == []
