"""Continued fractions of sqrt(D) and solutions of U^2 - D V^2 = 1.

The fundamental solution is read off the convergent at the end of the
period.  Convergents are formed by a binary-splitting product of the
2x2 matrices ``[[a, 1], [1, 0]]`` so that solutions with millions of digits
cost a handful of large multiplications rather than millions of small ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt, log10

from . import bigint, kernels
from .errors import BudgetExceeded, ConsistencyError, InvalidArgument

DEFAULT_DIGIT_BUDGET = 10**7


@dataclass(frozen=True)
class CFExpansion:
    """sqrt(D) = [a0; period, period, ...] with the minimal period."""

    D: int
    a0: int
    period: tuple[int, ...]

    def __post_init__(self):
        if not self.period or self.period[-1] != 2 * self.a0 or self.a0 != isqrt(self.D):
            raise ConsistencyError(f"malformed expansion of sqrt({self.D})")

    @property
    def period_length(self) -> int:
        return len(self.period)

    def is_palindromic(self) -> bool:
        body = self.period[:-1]
        return body == body[::-1]

    def terms(self, count: int) -> list[int]:
        """The first ``count`` partial quotients a0, a1, ..."""
        L = len(self.period)
        return [self.a0] + [self.period[i % L] for i in range(count - 1)]


@dataclass(frozen=True)
class PellSolution:
    """A solution of U^2 - D V^2 = 1; the identity is checked on construction."""

    D: int
    U: int
    V: int
    period_length: int | None = field(default=None, compare=False)

    def __post_init__(self):
        U, V = bigint.mpz(self.U), bigint.mpz(self.V)
        if self.U < 1 or self.V < 0 or U * U - self.D * V * V != 1:
            raise ConsistencyError(f"({self.U}, {self.V}) does not solve U^2 - {self.D} V^2 = 1")

    @property
    def U_digits(self) -> int:
        return bigint.digit_count(self.U)

    @property
    def V_digits(self) -> int:
        return bigint.digit_count(self.V)

    def compose(self, other: "PellSolution") -> "PellSolution":
        """(U + V sqrt D)(U' + V' sqrt D)."""
        if other.D != self.D:
            raise InvalidArgument("cannot compose solutions for different D")
        U = self.U * other.U + self.D * self.V * other.V
        V = self.U * other.V + self.V * other.U
        return PellSolution(self.D, int(U), int(V))


def _check_nonsquare(D: int) -> None:
    if D < 2:
        raise InvalidArgument(f"D must be >= 2, got {D}")
    r = isqrt(D)
    if r * r == D:
        raise InvalidArgument(f"D = {D} is a perfect square ({r}^2)")


def cf_sqrt(D: int) -> CFExpansion:
    """Periodic continued fraction of sqrt(D) for non-square D >= 2."""
    _check_nonsquare(D)
    a0, period = kernels.cf_period(D)
    return CFExpansion(D, a0, tuple(period))


def _matrix_product(terms, lo, hi):
    """Product of [[a,1],[1,0]] for terms[lo:hi] as (p, p_prev, q, q_prev)."""
    if hi - lo <= 32:
        p, pp, q, qp = 1, 0, 0, 1
        for a in terms[lo:hi]:
            p, pp = a * p + pp, p
            q, qp = a * q + qp, q
        return bigint.mpz(p), bigint.mpz(pp), bigint.mpz(q), bigint.mpz(qp)
    mid = (lo + hi) // 2
    a, b, c, d = _matrix_product(terms, lo, mid)
    e, f, g, h = _matrix_product(terms, mid, hi)
    return a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h


def convergent(terms) -> tuple[int, int]:
    """Numerator and denominator of [terms[0]; terms[1], ...]."""
    p, _, q, _ = _matrix_product(list(terms), 0, len(terms))
    return int(p), int(q)


def estimate_digits(cf: CFExpansion) -> int:
    """Upper bound on the digit count of the fundamental solution's U."""
    total = log10(cf.a0 + 1) + sum(log10(a + 1) for a in cf.period[:-1])
    if cf.period_length % 2:
        total = 2 * total + log10(4 * cf.D)
    return int(total) + 2


def pell_fundamental(D: int, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> PellSolution:
    """Minimal solution (U, V), U, V > 0, of U^2 - D V^2 = 1.

    Raises :class:`BudgetExceeded` if the solution would have more than
    ``digit_budget`` digits.
    """
    cf = cf_sqrt(D)
    est = estimate_digits(cf)
    if est > digit_budget:
        raise BudgetExceeded(
            f"fundamental solution for D = {D} would have up to {est} digits (budget {digit_budget})"
        )
    L = cf.period_length
    terms = (cf.a0,) + cf.period[:-1]
    p, _, q, _ = _matrix_product(terms, 0, len(terms))
    if L % 2 == 0:
        U, V = p, q
    else:
        # p^2 - D q^2 = -1; square it
        U, V = p * p + D * q * q, 2 * p * q
    return PellSolution(D, int(U), int(V), period_length=L)


def pell_iterate(fund: PellSolution, m: int, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> PellSolution:
    """The m-th solution U_m + V_m sqrt(D) = (U_1 + V_1 sqrt(D))^m; m = 0 gives (1, 0)."""
    if m < 0:
        raise InvalidArgument(f"m must be >= 0, got {m}")
    if m == 0:
        return PellSolution(fund.D, 1, 0)
    if m * bigint.digit_count(fund.U) > digit_budget + m:
        raise BudgetExceeded(f"U_{m} would exceed the digit budget {digit_budget}")
    D = fund.D
    bu, bv = bigint.mpz(fund.U), bigint.mpz(fund.V)
    ru, rv = bigint.mpz(1), bigint.mpz(0)
    while m:
        if m & 1:
            ru, rv = ru * bu + D * rv * bv, ru * bv + rv * bu
        m >>= 1
        if m:
            bu, bv = bu * bu + D * bv * bv, 2 * bu * bv
    return PellSolution(D, int(ru), int(rv), period_length=fund.period_length)


def _check_even_delta(delta: int) -> None:
    if delta % 2 or delta < 2:
        raise InvalidArgument(f"delta must be an even integer >= 2, got {delta}")


def uv_sequence(delta: int, m: int) -> tuple[int, int]:
    """(U_m, V_m) for U^2 - (delta^2 - 2) V^2 = 1 via the three-term recurrence.

    U_0 = 1, U_1 = delta^2 - 1, U_{m+2} = 2(delta^2 - 1) U_{m+1} - U_m, and
    the same recurrence for V with V_0 = 0, V_1 = delta.
    """
    _check_even_delta(delta)
    if m < 0:
        raise InvalidArgument(f"m must be >= 0, got {m}")
    t = 2 * (delta * delta - 1)
    u0, u1 = 1, delta * delta - 1
    v0, v1 = 0, delta
    for _ in range(m):
        u0, u1 = u1, t * u1 - u0
        v0, v1 = v1, t * v1 - v0
    return u0, v0


def u_sequence(delta: int, m: int) -> int:
    """U_m of the recurrence for D = delta^2 - 2."""
    return uv_sequence(delta, m)[0]
