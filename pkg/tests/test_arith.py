import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divpairs.arith import (
    DETERMINISTIC_LIMIT,
    Congruence,
    FactorMultiset,
    crt_solve,
    divisors,
    factorize,
    integer_sqrt,
    is_prime,
    jacobi,
    primality_certainty,
)
from divpairs.errors import BudgetExceeded, InvalidArgument, NoSolution


def legendre_by_squares(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if any(x * x % p == a for x in range(1, p)) else -1


@pytest.mark.parametrize("a,n,want", [(24, 61, -1), (1, 15, 1), (2, 7, 1), (0, 9, 0), (5, 1, 1)])
def test_jacobi_examples(a, n, want):
    assert jacobi(a, n) == want


@pytest.mark.parametrize("n", [0, -3, 8])
def test_jacobi_rejects_bad_modulus(n):
    with pytest.raises(InvalidArgument):
        jacobi(3, n)


@given(st.integers(-10**6, 10**6), st.sampled_from([3, 5, 7, 11, 13, 61, 97, 101]))
def test_jacobi_is_legendre_for_primes(a, p):
    assert jacobi(a, p) == legendre_by_squares(a, p)


@given(st.integers(-10**9, 10**9), st.integers(1, 10**5), st.integers(1, 10**5))
def test_jacobi_multiplicative_in_modulus(a, m, n):
    m, n = 2 * m + 1, 2 * n + 1
    assert jacobi(a, m * n) == jacobi(a, m) * jacobi(a, n)


@given(st.integers(1, 10**12), st.integers(1, 10**12))
def test_reciprocity(m, n):
    m, n = 2 * m + 1, 2 * n + 1
    if math.gcd(m, n) != 1:
        return
    sign = -1 if m % 4 == 3 and n % 4 == 3 else 1
    assert jacobi(m, n) * jacobi(n, m) == sign


@pytest.mark.parametrize("n,want", [(3979021, True), (1, False), (2381, True), (2, True), (0, False),
                                    (561, False), (3215031751, False), (2**61 - 1, True),
                                    (2**89 - 1, True), (2**89 + 1, False)])
def test_is_prime_examples(n, want):
    assert is_prime(n) is want


def test_is_prime_matches_sieve():
    limit = 20000
    sieve = [True] * limit
    sieve[0] = sieve[1] = False
    for i in range(2, 142):
        if sieve[i]:
            sieve[i * i::i] = [False] * len(range(i * i, limit, i))
    assert [n for n in range(limit) if is_prime(n)] == [n for n in range(limit) if sieve[n]]


def test_is_prime_strong_pseudoprimes():
    # strong pseudoprime to bases 2..37 (Zhang/Tang); caught by base 41
    assert not is_prime(3825123056546413051)
    assert not is_prime(318665857834031151167461)
    # product of two large primes above the deterministic range
    p, q = 2**89 - 1, 2**107 - 1
    assert not is_prime(p * q)
    assert is_prime(2**127 - 1)


def test_primality_certainty():
    assert primality_certainty(10**20) == "deterministic"
    assert primality_certainty(DETERMINISTIC_LIMIT + 1) == "probable"


@pytest.mark.parametrize("n,want", [(145, (12, False)), (0, (0, True)), (4 * 9**2, (18, True))])
def test_integer_sqrt(n, want):
    assert integer_sqrt(n) == want


def test_integer_sqrt_negative():
    with pytest.raises(InvalidArgument):
        integer_sqrt(-1)


@given(st.integers(0, 10**60))
def test_integer_sqrt_property(n):
    r, exact = integer_sqrt(n)
    assert r * r <= n < (r + 1) ** 2
    assert exact == (r * r == n)


def test_crt_examples():
    assert crt_solve([(24, 61), (1, 5), (25, 96)]) == Congruence(16921, 29280)
    assert crt_solve([(1, 5), (1, 17), (1, 3), (97, 112)]) == Congruence(8161, 28560)


def test_crt_conflict_names_pair():
    with pytest.raises(NoSolution) as info:
        crt_solve([(0, 2), (1, 3), (1, 4)])
    a, b = info.value.pair
    assert {a, b} == {Congruence(0, 2), Congruence(1, 4)}


def test_crt_empty():
    with pytest.raises(InvalidArgument):
        crt_solve([])


@settings(deadline=None)
@given(st.lists(st.tuples(st.integers(-1000, 1000), st.integers(1, 24)), min_size=1, max_size=4))
def test_crt_agrees_with_search(system):
    lcm = 1
    for _, m in system:
        lcm = lcm * m // math.gcd(lcm, m)
    sols = [x for x in range(lcm) if all((x - r) % m == 0 for r, m in system)]
    if sols:
        c = crt_solve(system)
        assert (c.residue, c.modulus) == (sols[0], lcm)
        assert len(sols) == 1
    else:
        with pytest.raises(NoSolution):
            crt_solve(system)


def test_congruence_canonical():
    c = Congruence(-1, 5)
    assert c.residue == 4 and c.contains(9) and not c.contains(5)
    with pytest.raises(InvalidArgument):
        Congruence(1, 0)


@pytest.mark.parametrize("n,want", [(85, ((5, 1), (17, 1))), (46211, ((11, 1), (4201, 1))), (61, ((61, 1),)),
                                    (2**10, ((2, 10),)), (2**64 + 1, ((274177, 1), (67280421310721, 1)))])
def test_factorize_examples(n, want):
    assert tuple(factorize(n)) == want


def test_factorize_two_large_primes():
    p, q = 1000003, 2**31 - 1
    assert tuple(factorize(p * q * q)) == ((p, 1), (q, 2))
    assert factorize(p * q).value == p * q


@settings(max_examples=60)
@given(st.integers(2, 10**14), st.integers(0, 5))
def test_factorize_property(n, seed):
    f = factorize(n, seed=seed)
    assert f.value == n
    assert all(is_prime(p) for p in f.primes)
    assert f == factorize(n)


def test_factorize_budget():
    p, q = 1000000007, 998244353
    with pytest.raises(BudgetExceeded):
        factorize(p * q, attempts=1, max_iter=10, trial_bound=100)


def test_factorize_rejects_small():
    with pytest.raises(InvalidArgument):
        factorize(1)


def test_factor_multiset():
    f = FactorMultiset([(17, 1), (5, 2)])
    assert tuple(f) == ((5, 2), (17, 1))
    assert str(f) == "5^2 * 17"
    with pytest.raises(InvalidArgument):
        FactorMultiset([(5, 1), (5, 2)])


@pytest.mark.parametrize("n,want", [(145, [1, 5, 29, 145]), (1, [1]), (221, [1, 13, 17, 221])])
def test_divisors_examples(n, want):
    assert divisors(n) == want


@given(st.integers(1, 20000))
def test_divisors_property(n):
    assert divisors(n) == [d for d in range(1, n + 1) if n % d == 0]
