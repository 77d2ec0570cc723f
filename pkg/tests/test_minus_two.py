import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divpairs import bigint
from divpairs.arith import is_prime
from divpairs.errors import ConstructionFailed, InvalidArgument, UnsupportedDelta
from divpairs.minus_two import (
    CONDITIONAL,
    IMPOSSIBLE_MINIMALITY,
    CrtClass,
    build_crt_class,
    check_k_conditions,
    construct_solution,
    derive_params,
    detect_case,
    jacobi_reduction_check,
    legendre_filter,
    mod8_case_table,
    pell_modulus,
    residues_mod8,
    schinzel_check,
    search_k,
)


def test_derive_params_examples():
    p = derive_params(12, 1411)
    assert (p.g, p.d, p.a, p.b, p.c, p.epsilon) == (61, 3979021, 3979021, 16931, 16921, 10)
    p = derive_params(14, 18)
    assert (p.g, p.a, p.b, p.c, p.epsilon) == (85, 613, 251, 239, 12)
    p = derive_params(12, 1)
    assert (p.a, p.b, p.c) == (1, 11, 1)
    with pytest.raises(InvalidArgument):
        derive_params(13, 2)
    with pytest.raises(InvalidArgument):
        derive_params(12, 0)


@given(st.integers(2, 500).map(lambda x: 2 * x), st.integers(1, 10**6))
def test_params_invariants(delta, k):
    p = derive_params(delta, k)
    assert p.g % 4 == 1 and p.d % 4 == 1
    assert p.g == p.A and p.d == p.a
    assert pell_modulus(p) == 2 * p.a * p.b * p.c


@pytest.mark.parametrize("delta,k,D", [(12, 1411, 2279895083614942), (14, 18, 73546514), (4, 35, 90682766)])
def test_pell_modulus(delta, k, D):
    assert pell_modulus(derive_params(delta, k)) == D


def _ids(table, pred):
    return {c.case_id for c in table if pred(c)}


def test_case_table_delta4():
    table = mod8_case_table(4, 3)
    assert len(table) == 16
    assert _ids(table, lambda c: c.verdict == CONDITIONAL) == {"3-", "4-", "5+", "6-", "7+", "8+"}


def test_case_table_delta6():
    table = mod8_case_table(6, 2)
    assert _ids(table, lambda c: c.survives_residues) == {"3+", "3-", "8+", "8-"}


def test_case_table_delta0():
    table = mod8_case_table(0, 3)
    assert "5-" in _ids(table, lambda c: c.survives_residues)


def test_case_table_rejects_odd():
    with pytest.raises(InvalidArgument):
        mod8_case_table(3, 1)


def test_two_minus_always_minimality():
    for d in range(0, 8, 2):
        for k in range(8):
            by_id = {c.case_id: c for c in mod8_case_table(d, k)}
            assert by_id["2-"].verdict == IMPOSSIBLE_MINIMALITY


def test_residues_mod8_branches():
    assert residues_mod8(4, 3) == {"a": 5, "b": 3, "c": 1}
    assert residues_mod8(6, 2) == {"a": 5, "b": 3, "c": 7}


def test_legendre_filter_examples():
    assert set(legendre_filter(derive_params(12, 1411))) <= {"4-", "7+"}
    assert legendre_filter(derive_params(14, 18)) == ["8-"]
    p = derive_params(8, 3)
    assert "5-" in legendre_filter(p)
    with pytest.raises(InvalidArgument):
        legendre_filter(derive_params(12, 3))


def test_check_k_examples():
    assert check_k_conditions(12, 1411).all_satisfied
    assert check_k_conditions(14, 18).all_satisfied
    r = check_k_conditions(12, 3)
    assert r.conditions[0] and not r.conditions[4]
    assert set(r.as_dict()) == {"cond_i", "cond_ii", "cond_iii", "cond_iv", "cond_v", "cond_vi"}
    with pytest.raises(UnsupportedDelta):
        check_k_conditions(8, 3)
    with pytest.raises(UnsupportedDelta):
        check_k_conditions(10, 3)


@pytest.mark.parametrize("delta,k", [(12, 1411), (14, 18), (14, 10)])
def test_jacobi_reduction(delta, k):
    assert jacobi_reduction_check(delta, k)


def test_jacobi_reduction_on_search_results():
    for delta in (4, 6, 12, 14, 20, 22, 28, 30):
        for k in search_k(delta, 20000)[:20]:
            assert jacobi_reduction_check(delta, k)


def test_jacobi_reduction_rejects_composite():
    with pytest.raises(InvalidArgument):
        jacobi_reduction_check(12, 3)


def test_crt_class_examples():
    cls = build_crt_class(12, {61: 24})
    assert (cls.k0, cls.modulus) == (1411, 2440)
    assert (cls.x_class.residue, cls.x_class.modulus) == (16921, 29280)
    cls = build_crt_class(14, {85: 16})
    assert (cls.k0, cls.modulus) == (18, 2040)
    assert cls.representative == -2022
    cls = build_crt_class(14, {5: 1, 17: 1})
    assert (cls.x_class.residue, cls.x_class.modulus) == (8161, 28560)
    assert cls.representative == -582


def test_crt_class_bad_override():
    with pytest.raises(InvalidArgument):
        build_crt_class(12, {7: 3})
    with pytest.raises(ConstructionFailed):
        build_crt_class(12, {61: 1})  # 1 is a residue, a nonresidue is needed


@pytest.mark.parametrize("delta", [4, 6, 12, 14, 20, 22, 28, 30, 36, 38])
def test_crt_class_members_meet_conditions(delta):
    cls = build_crt_class(delta)
    for k in cls.members(50):
        assert all(check_k_conditions(delta, k).conditions[:3]), (delta, k)


def test_search_examples():
    cls = build_crt_class(12, {61: 24})
    ks = search_k(12, 3 * 10**6, cls)
    assert ks[:11] == [1411, 16051, 240531, 360091, 425971, 626051, 1314131, 1975371,
                       2241331, 2426771, 2495091]
    assert 18 in search_k(14, 100)
    assert 35 in search_k(4, 100)


def test_search_matches_direct_check():
    for delta in (4, 6, 12, 14):
        want = [k for k in range(1, 30001) if check_k_conditions(delta, k).all_satisfied]
        assert search_k(delta, 30000) == want


def test_search_independent_of_workers():
    cls = build_crt_class(12, {61: 24})
    assert search_k(12, 5 * 10**6, cls, workers=3) == search_k(12, 5 * 10**6, cls)
    assert search_k(14, 200000, workers=4) == search_k(14, 200000)


def test_search_empty_range():
    assert search_k(12, 2, CrtClass(1411, 2440)) == []


def test_construct_delta14():
    res = construct_solution(14, 18)
    t = res.triple
    assert res.D == 73546514 and res.ok
    assert res.case_id == "8-"
    assert (bigint.digit_count(t.n), bigint.leading_digits(t.n)) == (691, "144598")
    assert bigint.leading_digits(t.d1) == "716336"
    assert bigint.leading_digits(t.d2) == "202366"
    # d2 < d1 + d2 = 14n + 12 caps d2 at 692 digits
    assert bigint.digit_count(t.d1) == 688 and bigint.digit_count(t.d2) == 692
    assert res.gcd_d1_d2 == res.params.g


def _check_result(res):
    t, p = res.triple, res.params
    N2 = t.n * t.n + 1
    U0 = res.pell.U
    assert t.n % 2 == 1
    assert t.d1 * t.d2 * p.d * 2 == p.g * N2
    assert (N2 // 2) % t.d1 == 0 and (N2 // 2) % t.d2 == 0
    assert t.d1 + t.d2 == p.delta * t.n + p.delta - 2
    assert U0 % p.b == p.b - 1 and U0 % p.c == 1


def test_construct_postconditions_small_k():
    done = 0
    for delta in (4, 6, 12, 14):
        for k in search_k(delta, 200)[:2]:
            _check_result(construct_solution(delta, k))
            done += 1
    assert done >= 6


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([4, 6, 12, 14, 20, 22]), st.integers(0, 3))
def test_construct_property(delta, i):
    ks = search_k(delta, 400)
    if i < len(ks):
        res = construct_solution(delta, ks[i])
        _check_result(res)
        assert res.case_id in legendre_filter(res.params)


def test_construct_delta4():
    res = construct_solution(4, 35)
    _check_result(res)
    assert res.case_id in legendre_filter(res.params)


def test_construct_rejects_bad_k():
    with pytest.raises(InvalidArgument):
        construct_solution(12, 3)


def test_construct_forced_gate_failure():
    # delta = 8 (mod 8) has no construction; forcing it reports the failed gate
    res = None
    for k in range(2, 60):
        p = derive_params(8, k)
        if not all(is_prime(v) for v in p.values().values()):
            continue
        try:
            construct_solution(8, k, force=True)
        except ConstructionFailed as exc:
            res = exc.result
            break
    assert res is not None and not res.ok
    assert any(not ok for ok in res.checks.values())


def test_detect_case():
    p = derive_params(14, 18)
    res = construct_solution(14, 18)
    assert detect_case(res.pell.U, p.a, p.b, p.c) == "8-"
    assert detect_case(5, 1, 1, 1) is None


def test_schinzel_examples():
    cls = build_crt_class(12, {61: 24})
    r = schinzel_check(12, cls, 3)
    assert r.rows[0]["values"][1:] == [46211, 46201]
    assert r.success
    one = schinzel_check(12, cls, 1)
    assert not one.success and one.gcds[0] > 1
    cls14 = build_crt_class(14)
    r = schinzel_check(14, cls14, 2)
    assert r.rows[0]["values"] == [4248613, 20411, 20399]
    assert r.success
    with pytest.raises(InvalidArgument):
        schinzel_check(12, cls, 0)
