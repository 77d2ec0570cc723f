"""Integer primitives: Jacobi symbols, primality, square roots, CRT, factoring.

Everything here is a pure function of its arguments.  Residues are always
returned in canonical form ``0 <= r < m``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

from . import kernels
from .errors import BudgetExceeded, InvalidArgument, NoSolution

# Deterministic Miller-Rabin bound for the first 13 prime bases (2..41).
DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981
_BASES_13 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

TRIAL_BOUND = 10**6


@dataclass(frozen=True)
class Congruence:
    """``x = residue (mod modulus)`` with the residue kept canonical."""

    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise InvalidArgument(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    def contains(self, x: int) -> bool:
        return (x - self.residue) % self.modulus == 0

    def __str__(self):
        return f"{self.residue} (mod {self.modulus})"


class FactorMultiset(tuple):
    """Canonical factorization: ``((p1, e1), (p2, e2), ...)`` with p1 < p2 < ..."""

    def __new__(cls, pairs=()):
        pairs = tuple(sorted((int(p), int(e)) for p, e in pairs))
        for i, (p, e) in enumerate(pairs):
            if p < 2 or e < 1:
                raise InvalidArgument(f"bad factor {p}^{e}")
            if i and pairs[i - 1][0] == p:
                raise InvalidArgument(f"repeated prime {p}")
        return super().__new__(cls, pairs)

    @property
    def value(self) -> int:
        out = 1
        for p, e in self:
            out *= p**e
        return out

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self]

    def __str__(self):
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self) or "1"


# ---------------------------------------------------------------- symbols


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd ``n >= 1``; (a/1) = 1 by convention."""
    if n < 1 or n % 2 == 0:
        raise InvalidArgument(f"Jacobi symbol needs an odd positive modulus, got {n}")
    return kernels.jacobi_word(a % n, n)


# -------------------------------------------------------------- primality


def _strong_lucas(n: int) -> bool:
    # Selfridge method A parameters
    D = 5
    while True:
        j = kernels.py.jacobi(D % n, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -D - 2 if D > 0 else -D + 2
        if D == 13 and isqrt(n) ** 2 == n:
            return False
    P, Q = 1, (1 - D) // 4
    d, s = n + 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    inv2 = (n + 1) // 2
    U, V, Qk = 1, P, Q % n
    for bit in bin(d)[3:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (P * U + V) * inv2 % n, (D * U + P * V) * inv2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if V == 0:
            return True
    return False


def is_prime(n: int) -> bool:
    """Primality test.

    Exact below 3.3e24 (Miller-Rabin with the first 13 prime bases).  Above
    that it is a Baillie-PSW probable-prime test; see :func:`primality_certainty`.
    """
    if n < 2:
        return False
    if n < kernels.WORD:
        return kernels.is_prime_word(n)
    for p in kernels.py.SMALL_PRIMES:
        if n % p == 0:
            return False
    if n < DETERMINISTIC_LIMIT:
        return all(kernels.py.strong_probable_prime(n, b) for b in _BASES_13)
    return kernels.py.strong_probable_prime(n, 2) and _strong_lucas(n)


def primality_certainty(n: int) -> str:
    """``"deterministic"`` if :func:`is_prime` is exact for n, else ``"probable"``."""
    return "deterministic" if n < DETERMINISTIC_LIMIT else "probable"


# ------------------------------------------------------------------ roots


def integer_sqrt(n: int) -> tuple[int, bool]:
    """``(floor(sqrt(n)), is_perfect_square)``."""
    if n < 0:
        raise InvalidArgument(f"integer_sqrt of negative number {n}")
    r = isqrt(n)
    return r, r * r == n


# -------------------------------------------------------------------- CRT


def _merge(c1: Congruence, c2: Congruence) -> Congruence:
    g = gcd(c1.modulus, c2.modulus)
    if (c2.residue - c1.residue) % g:
        raise NoSolution(f"congruences x = {c1} and x = {c2} are inconsistent", pair=(c1, c2))
    m1 = c1.modulus // g
    lcm = m1 * c2.modulus
    # x = r1 + m1*g*t with m1*t = (r2 - r1)/g (mod m2/g)
    m2 = c2.modulus // g
    t = ((c2.residue - c1.residue) // g * pow(m1, -1, m2)) % m2 if m2 > 1 else 0
    return Congruence(c1.residue + c1.modulus * t, lcm)


def crt_solve(system) -> Congruence:
    """Combine congruences into one, allowing non-coprime moduli.

    ``system`` is an iterable of :class:`Congruence` or ``(residue, modulus)``
    pairs.  Raises :class:`NoSolution` naming a conflicting pair.
    """
    items = [c if isinstance(c, Congruence) else Congruence(*c) for c in system]
    if not items:
        raise InvalidArgument("empty congruence system")
    acc = items[0]
    for i, c in enumerate(items[1:], start=1):
        try:
            acc = _merge(acc, c)
        except NoSolution:
            # report an original pair rather than the accumulated congruence
            for prev in items[:i]:
                if (c.residue - prev.residue) % gcd(prev.modulus, c.modulus):
                    raise NoSolution(
                        f"congruences x = {prev} and x = {c} are inconsistent", pair=(prev, c)
                    ) from None
            raise
    return acc


# ---------------------------------------------------------- factorization


@lru_cache(maxsize=1)
def _primes_below(limit: int) -> tuple[int, ...]:
    sieve = bytearray([1]) * limit
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(limit - 1) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit, i)))
    return tuple(i for i in range(limit) if sieve[i])


def _rho(n: int, rng: random.Random, max_iter: int) -> int | None:
    """Brent's variant of Pollard rho; returns a proper factor or None."""
    y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
    g = r = q = 1
    x = ys = y
    steps = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gcd(q, n)
            k += m
        r *= 2
        steps += r
        if steps > max_iter:
            return None
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
    return g if g != n else None


def _split(n: int, rng: random.Random, attempts: int, max_iter: int) -> int:
    for _ in range(attempts):
        f = _rho(n, rng, max_iter)
        if f:
            return f
    raise BudgetExceeded(f"could not split {n} within {attempts} rho attempts")


def factorize(n: int, *, seed: int = 0, attempts: int = 32, max_iter: int = 10**7,
              trial_bound: int = TRIAL_BOUND) -> FactorMultiset:
    """Complete factorization of ``n >= 2``.

    Trial division up to ``trial_bound``, then Brent-rho on any composite
    remainder.  The seed only affects running time, never the result.
    """
    if n < 2:
        raise InvalidArgument(f"factorize needs n >= 2, got {n}")
    counts: dict[int, int] = {}
    rem = n
    checked_at = 0
    for p in _primes_below(trial_bound):
        if p * p > rem:
            break
        if rem % p == 0:
            while rem % p == 0:
                rem //= p
                counts[p] = counts.get(p, 0) + 1
            checked_at = 0
        else:
            checked_at += 1
        # a large prime cofactor would otherwise cost a full trial pass
        if checked_at == 200 and is_prime(rem):
            break
    if rem > 1:
        rng = random.Random(seed)
        stack = [rem]
        while stack:
            m = stack.pop()
            if is_prime(m):
                counts[m] = counts.get(m, 0) + 1
                continue
            r, exact = integer_sqrt(m)
            if exact:
                stack += [r, r]
                continue
            f = _split(m, rng, attempts, max_iter)
            stack += [f, m // f]
    return FactorMultiset(counts.items())


def divisors(n: int, *, seed: int = 0, max_iter: int = 10**7) -> list[int]:
    """All positive divisors of ``n >= 1`` in increasing order."""
    if n < 1:
        raise InvalidArgument(f"divisors needs n >= 1, got {n}")
    divs = [1]
    if n > 1:
        for p, e in factorize(n, seed=seed, max_iter=max_iter):
            divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)
