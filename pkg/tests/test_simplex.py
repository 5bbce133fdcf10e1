import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import lp_vertex_enumeration
from pptdisc.simplex import LinearProgram, LPStatus, simplex_solve


def _random_lp(rng, nvar, nrow):
    a = rng.integers(-5, 6, size=(nrow, nvar)).astype(float)
    b = rng.integers(-4, 8, size=nrow).astype(float)
    c = rng.integers(-5, 6, size=nvar).astype(float)
    bounds = tuple((float(lo), float(lo + w)) for lo, w in zip(rng.integers(-3, 2, nvar), rng.integers(0, 5, nvar)))
    return c, a, b, bounds


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(0, 4), st.integers(0, 2**32 - 1))
def test_simplex_matches_vertex_enumeration(nvar, nrow, seed):
    rng = np.random.default_rng(seed)
    c, a, b, bounds = _random_lp(rng, nvar, nrow)
    lp = LinearProgram(c, a, b, bounds, ("<=",) * nrow)
    res = simplex_solve(lp)
    ref, _ = lp_vertex_enumeration(c, a, b, bounds)
    if ref is None:
        assert res.status is LPStatus.INFEASIBLE
    else:
        assert res.optimal
        assert res.value == pytest.approx(ref, abs=1e-9)
        assert lp.is_feasible(res.x)


def test_equality_and_greater_rows():
    # min x + 2y  s.t. x + y = 3, x - y >= -1, box [0, 5]: optimum at (3, 0)
    lp = LinearProgram([1.0, 2.0], [[1, 1], [1, -1]], [3, -1], ((0, 5), (0, 5)), ("=", ">="))
    res = simplex_solve(lp)
    assert res.optimal
    np.testing.assert_allclose(res.x, [3, 0], atol=1e-12)
    assert res.value == pytest.approx(3)


def test_unbounded_and_infeasible_status():
    unb = LinearProgram([-1.0], np.zeros((0, 1)), [], ((0, np.inf),))
    assert simplex_solve(unb).status is LPStatus.UNBOUNDED
    inf = LinearProgram([1.0], [[1.0]], [5.0], ((0, 1),), (">=",))
    assert simplex_solve(inf).status is LPStatus.INFEASIBLE


def test_offset_and_round_trip():
    lp = LinearProgram([1.0], [[1.0]], [0.5], ((0, 1),), (">=",), offset=2.0)
    assert simplex_solve(lp).value == pytest.approx(2.5)
    again = LinearProgram.from_dict(lp.to_dict())
    assert simplex_solve(again).value == pytest.approx(2.5)


def test_degenerate_problem_terminates():
    # many redundant constraints through the optimum; Bland's rule must not cycle
    a = np.array([[1, 1], [1, 2], [2, 1], [1, 0], [0, 1], [3, 3]], dtype=float)
    lp = LinearProgram([-1.0, -1.0], a, [2, 3, 3, 1, 1, 6], ((0, 10), (0, 10)), ("<=",) * 6)
    res = simplex_solve(lp)
    assert res.optimal and res.value == pytest.approx(-2)


def test_bad_shapes_rejected():
    with pytest.raises(ValueError):
        LinearProgram([1.0, 1.0], [[1.0]], [1.0], ((0, 1), (0, 1)))
    with pytest.raises(ValueError):
        LinearProgram([1.0], [[1.0]], [1.0], ((1, 0),))
