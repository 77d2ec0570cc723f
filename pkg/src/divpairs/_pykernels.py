"""Pure-Python implementations of the hot loops.

Mirrors the API of the compiled ``_ckernels`` extension exactly; the
selection between the two happens in :mod:`divpairs.kernels`.
All functions here work for arbitrary-size integers, the compiled versions
only for word-size inputs (callers check the bounds).
"""

from math import isqrt

SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)

# first 12 primes are enough below 2**64, first 13 below 3.3e24
_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def jacobi(a, n):
    """Jacobi symbol (a/n) for odd n >= 1."""
    a %= n
    result = 1
    while a:
        while not a & 1:
            a >>= 1
            if n & 7 in (3, 5):
                result = -result
        a, n = n, a
        if a & 3 == 3 and n & 3 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def strong_probable_prime(n, base):
    """Single Miller-Rabin round for odd n > 2."""
    d = n - 1
    s = 0
    while not d & 1:
        d >>= 1
        s += 1
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n):
    """Deterministic primality for 0 <= n < 2**64."""
    if n < 2:
        return False
    for p in SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < 97 * 97:
        return True
    return all(strong_probable_prime(n, b) for b in _BASES_64)


def cf_period(D):
    """Partial quotients of sqrt(D): returns ``(a0, period)``.

    Standard PQa recurrence; the period ends at the first quotient equal to
    ``2*a0``. D must not be a perfect square.
    """
    a0 = isqrt(D)
    if a0 * a0 == D:
        raise ValueError("D is a perfect square")
    twice = 2 * a0
    period = []
    P, Q, a = 0, 1, a0
    while a != twice:
        P = a * Q - P
        Q = (D - P * P) // Q
        a = (a0 + P) // Q
        period.append(a)
    return a0, period


def scan_k(delta, start, stop, step):
    """Return every k in ``range(start, stop + 1, step)`` meeting all six k-conditions.

    delta must be 4 or 6 mod 8. For delta = 4 (mod 8) the conditions are
    k = 3 (mod 8), (c/A) = -1, (c/B) = 1 with B = delta/2 - 1; for
    delta = 6 (mod 8) they are k = 2 (mod 8), (-c/A) = 1, (-c/B) = 1 with
    B = (delta - 2)/4. In both branches a, b and c must be prime.
    """
    A = delta * delta // 2 - delta + 1
    if delta % 8 == 4:
        B = delta // 2 - 1
        k_res, sign, want_a = 3, 1, -1
    elif delta % 8 == 6:
        B = (delta - 2) // 4
        k_res, sign, want_a = 2, -1, 1
    else:
        raise ValueError("delta must be 4 or 6 mod 8")
    found = []
    for k in range(start, stop + 1, step):
        if k % 8 != k_res:
            continue
        c = delta * k - delta + 1
        if jacobi(sign * c, A) != want_a:
            continue
        if B > 1 and jacobi(sign * c, B) != 1:
            continue
        if not is_prime(delta * k - 1) or not is_prime(c):
            continue
        if is_prime(2 * k * k - 2 * k + 1):
            found.append(k)
    return found
