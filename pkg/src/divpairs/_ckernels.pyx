# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops in :mod:`divpairs._pykernels`.

Word-size only: callers guarantee D < 2**62 for ``cf_period`` and that
a = 2k^2 - 2k + 1 and delta*k fit in 64 bits for ``scan_k``.
"""

from libc.stdint cimport uint64_t, int64_t

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

cdef uint64_t[25] SMALL = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41,
                           43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]
cdef uint64_t[12] BASES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]


cdef inline uint64_t _mulmod(uint64_t a, uint64_t b, uint64_t m) nogil:
    return <uint64_t>((<u128>a * b) % m)


cdef uint64_t _powmod(uint64_t b, uint64_t e, uint64_t m) nogil:
    cdef uint64_t r = 1
    b %= m
    while e:
        if e & 1:
            r = _mulmod(r, b, m)
        b = _mulmod(b, b, m)
        e >>= 1
    return r


cdef int _jacobi(uint64_t a, uint64_t n) nogil:
    cdef int result = 1
    cdef uint64_t t, r
    a %= n
    while a != 0:
        while (a & 1) == 0:
            a >>= 1
            r = n & 7
            if r == 3 or r == 5:
                result = -result
        t = a
        a = n
        n = t
        if (a & 3) == 3 and (n & 3) == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


cdef bint _is_prime(uint64_t n) nogil:
    cdef uint64_t d, x
    cdef int s, i, j
    cdef bint witness
    if n < 2:
        return False
    for i in range(25):
        if n % SMALL[i] == 0:
            return n == SMALL[i]
    if n < 9409:
        return True
    d = n - 1
    s = 0
    while (d & 1) == 0:
        d >>= 1
        s += 1
    for i in range(12):
        x = _powmod(BASES[i], d, n)
        if x == 1 or x == n - 1:
            continue
        witness = True
        for j in range(s - 1):
            x = _mulmod(x, x, n)
            if x == n - 1:
                witness = False
                break
        if witness:
            return False
    return True


cdef inline uint64_t _signed_mod(int64_t sign, uint64_t c, uint64_t m) nogil:
    cdef uint64_t r = c % m
    if sign < 0 and r != 0:
        r = m - r
    return r


def jacobi(a, n):
    """Jacobi symbol (a/n); n odd, 1 <= n < 2**64."""
    cdef uint64_t nn = n
    cdef uint64_t aa = a % n
    return _jacobi(aa, nn)


def is_prime(n):
    """Deterministic primality for 0 <= n < 2**64."""
    if n < 0:
        return False
    return _is_prime(<uint64_t>n)


def cf_period(D):
    """Partial quotients of sqrt(D) for non-square D < 2**62."""
    cdef uint64_t d = D
    cdef uint64_t a0 = <uint64_t>(int(D) ** 0.5)
    while a0 * a0 > d:
        a0 -= 1
    while (a0 + 1) * (a0 + 1) <= d:
        a0 += 1
    if a0 * a0 == d:
        raise ValueError("D is a perfect square")
    cdef uint64_t twice = 2 * a0
    cdef uint64_t P = 0, Q = 1, a = a0
    cdef list period = []
    while a != twice:
        P = a * Q - P
        Q = (d - P * P) // Q
        a = (a0 + P) // Q
        period.append(a)
    return int(a0), period


def scan_k(int64_t delta, uint64_t start, uint64_t stop, uint64_t step):
    """Compiled twin of :func:`divpairs._pykernels.scan_k`."""
    cdef uint64_t A = <uint64_t>(delta * delta // 2 - delta + 1)
    cdef uint64_t B, k, c, b, a
    cdef uint64_t k_res
    cdef int64_t sign
    cdef int want_a
    cdef uint64_t ud = <uint64_t>delta
    if delta % 8 == 4:
        B = <uint64_t>(delta // 2 - 1)
        k_res = 3
        sign = 1
        want_a = -1
    elif delta % 8 == 6:
        B = <uint64_t>((delta - 2) // 4)
        k_res = 2
        sign = -1
        want_a = 1
    else:
        raise ValueError("delta must be 4 or 6 mod 8")
    cdef list found = []
    k = start
    with nogil:
        while k <= stop:
            if k % 8 == k_res:
                c = ud * k - ud + 1
                if _jacobi(_signed_mod(sign, c, A), A) == want_a:
                    if B <= 1 or _jacobi(_signed_mod(sign, c, B), B) == 1:
                        b = ud * k - 1
                        if _is_prime(b) and _is_prime(c):
                            a = 2 * k * k - 2 * k + 1
                            if _is_prime(a):
                                with gil:
                                    found.append(k)
            k += step
    return found
