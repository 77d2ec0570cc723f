from math import isqrt

import pytest
from hypothesis import given
from hypothesis import strategies as st

from divpairs import bigint
from divpairs.errors import BudgetExceeded, ConsistencyError, InvalidArgument
from divpairs.pell import (
    CFExpansion,
    PellSolution,
    cf_sqrt,
    convergent,
    pell_fundamental,
    pell_iterate,
    u_sequence,
    uv_sequence,
)

even_delta = st.integers(2, 100).map(lambda x: 2 * x)


def test_cf_examples():
    assert cf_sqrt(14) == CFExpansion(14, 3, (1, 2, 1, 6))
    assert cf_sqrt(62) == CFExpansion(62, 7, (1, 6, 1, 14))
    with pytest.raises(InvalidArgument, match="3\\^2"):
        cf_sqrt(9)


@given(st.integers(2, 10**6))
def test_cf_shape(D):
    r = isqrt(D)
    if r * r == D:
        return
    cf = cf_sqrt(D)
    assert cf.a0 == r
    assert cf.period[-1] == 2 * r
    assert cf.is_palindromic()


def test_cf_terms():
    assert cf_sqrt(14).terms(6) == [3, 1, 2, 1, 6, 1]


def test_convergent():
    assert convergent([3, 1, 2, 1]) == (15, 4)


@pytest.mark.parametrize("D,want", [(62, (63, 8)), (2, (3, 2)), (61, (1766319049, 226153980)),
                                    (13, (649, 180))])
def test_pell_examples(D, want):
    sol = pell_fundamental(D)
    assert (sol.U, sol.V) == want


def test_pell_large_d_magnitude():
    sol = pell_fundamental(73546514)
    assert sol.U_digits == 692
    assert bigint.leading_digits(sol.U) == "291573"
    assert bigint.magnitude(sol.V)["approx"] == "3.39990e+687"


def test_pell_rejects_square():
    with pytest.raises(InvalidArgument):
        pell_fundamental(49)


def test_pell_budget():
    with pytest.raises(BudgetExceeded):
        pell_fundamental(73546514, digit_budget=100)


def test_pell_solution_self_check():
    with pytest.raises(ConsistencyError):
        PellSolution(62, 63, 9)


def test_iterate_examples():
    fund = pell_fundamental(62)
    assert (pell_iterate(fund, 2).U, pell_iterate(fund, 2).V) == (7937, 1008)
    assert pell_iterate(fund, 3).U == 999999
    assert (pell_iterate(fund, 0).U, pell_iterate(fund, 0).V) == (1, 0)
    with pytest.raises(InvalidArgument):
        pell_iterate(fund, -1)


def test_iterate_budget():
    with pytest.raises(BudgetExceeded):
        pell_iterate(pell_fundamental(62), 10**6, digit_budget=1000)


@given(st.integers(2, 5000), st.integers(1, 6))
def test_iterate_matches_composition(D, m):
    if isqrt(D) ** 2 == D:
        return
    fund = pell_fundamental(D)
    acc = fund
    for _ in range(m - 1):
        acc = acc.compose(fund)
    assert pell_iterate(fund, m) == acc


@pytest.mark.parametrize("m,want", [(0, 1), (1, 63), (2, 7937), (3, 999999)])
def test_u_sequence_examples(m, want):
    assert u_sequence(8, m) == want


def test_u_sequence_rejects_odd():
    with pytest.raises(InvalidArgument):
        u_sequence(7, 2)


def test_sequence_matches_powers():
    for delta in range(2, 21, 2):
        D = delta * delta - 2
        fund = pell_fundamental(D)
        for m in range(0, 12):
            U, V = uv_sequence(delta, m)
            it = pell_iterate(fund, m)
            assert (U, V) == (it.U, it.V)


def test_sequence_congruences():
    for delta in range(4, 21, 2):
        D = delta * delta - 2
        for m in range(0, 51):
            U, V = uv_sequence(delta, m)
            assert U % D == 1 % D
            assert U % 2 == 1
            assert U * U - D * V * V == 1


@given(even_delta)
def test_cf_law(delta):
    cf = cf_sqrt(delta * delta - 2)
    assert cf.a0 == delta - 1 and cf.period == (1, delta - 2, 1, 2 * delta - 2)
