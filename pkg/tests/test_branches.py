"""Branch expansions of w e^w at the critical point: recurrences, oracles, verifiers."""

import pytest

from branchflow.branches import (
    coeffs_b,
    coeffs_c,
    oracle_b,
    oracle_c,
    series_K,
    series_u,
    series_v,
    series_w0,
    stirling_coeffs,
    verify_K_functional,
    verify_K_integral,
    verify_b_family,
    verify_c_family,
    verify_w0,
    w0_by_reversion,
)
from branchflow.exact import ZERO, rational
from branchflow.series import ASCENDING, GradedSeries

B_HEAD = [rational(x) for x in ("1", "1/3", "1/36", "-1/270", "1/4320")]
C_HEAD = [rational(x) for x in ("1", "2/3", "4/9", "44/135")]


def test_b_frozen_head():
    bs = coeffs_b(5)
    assert [bs[i] for i in range(1, 6)] == B_HEAD


def test_c_frozen_head():
    cs = coeffs_c(4)
    assert [cs[i] for i in range(1, 5)] == C_HEAD


def test_recurrences_match_reversion_oracles():
    order = 25
    assert coeffs_b(order).values == oracle_b(order).values
    assert coeffs_c(order).values == oracle_c(order).values


def test_branch_indexing():
    bs = coeffs_b(3)
    assert len(bs) == 3
    with pytest.raises(IndexError):
        bs[0]
    with pytest.raises(IndexError):
        bs[4]


def test_u_v_K_relations():
    order = 12
    v, u, K = series_v(order), series_u(order), series_K(order)
    # u mirrors v under z -> -z, and K is the odd half of v
    for i in range(order + 1):
        assert u.coefficient(i) == (-1) ** i * v.coefficient(i)
        assert K.coefficient(i) == ((v - u) / 2).coefficient(i)
    assert K.coefficient(1) == rational(1)
    assert K.coefficient(3) == rational(1, 36)
    assert K.coefficient(5) == rational(1, 4320)
    assert all(e % 2 == 1 for e in K.support())


def test_stirling_head():
    assert stirling_coeffs(4) == [
        rational(1),
        rational(1, 12),
        rational(1, 288),
        rational(-139, 51840),
    ]


def test_w0_taylor_equals_reversion():
    order = 18
    taylor = series_w0(order)
    reverted = w0_by_reversion(order)
    for n in range(1, order + 1):
        assert taylor.coefficient(n) == reverted.coefficient(n)


def test_verifiers_pass():
    for rep in (
        verify_b_family(30),
        verify_c_family(30),
        verify_K_functional(30),
        verify_K_integral(30),
        verify_w0(30),
    ):
        assert rep.status == "PASS", rep


def _perturbed_K(order):
    K = series_K(order + 8)
    coeffs = dict(K.coeffs)
    coeffs[3] = rational(1, 35)
    return GradedSeries(ASCENDING, coeffs, prec=K.prec)


def test_fault_b_recurrence():
    bs = list(coeffs_b(20).values)
    bs[2] = rational(1, 35)
    rep = verify_b_family(20, values=tuple(bs))
    assert rep.status == "FAIL"
    assert rep.first_mismatch.exponent == 3


def test_fault_c_recurrence():
    cs = list(coeffs_c(20).values)
    cs[2] = cs[2] + rational(1, 1000)
    rep = verify_c_family(20, values=tuple(cs))
    assert rep.status == "FAIL"
    assert rep.first_mismatch.exponent == 3


def test_fault_K_functional():
    rep = verify_K_functional(20, K=_perturbed_K(20))
    assert rep.status == "FAIL"
    assert rep.first_mismatch.exponent == 4


def test_fault_K_integral():
    rep = verify_K_integral(20, K=_perturbed_K(20))
    assert rep.status == "FAIL"
    assert rep.first_mismatch.exponent == 5
    assert rep.first_mismatch.lhs == "2/315"


def test_fault_w0():
    w = series_w0(20)
    coeffs = dict(w.coeffs)
    coeffs[4] = coeffs[4] + rational(1, 7)
    rep = verify_w0(20, w0=GradedSeries(ASCENDING, coeffs, prec=w.prec))
    assert rep.status == "FAIL"
    assert rep.first_mismatch.exponent == 4


def test_b_odd_tail_alternates_from_b7():
    # sanity on deeper values: signs of b_{2i+1} settle into the known pattern
    bs = coeffs_b(13)
    assert bs[7] != ZERO and bs[9] != ZERO and bs[11] != ZERO
    assert bs[5] > 0 > bs[7]
