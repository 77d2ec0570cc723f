"""The epsilon = delta + 2 family.

Every solution U_m (m >= 1) of U^2 - (delta^2 - 2) V^2 = 1 gives an odd n
and a pair d1 <= d2 with d1 * d2 = (n^2 + 1)/2 and d1 + d2 = delta*n + delta + 2.
Consecutive members share a divisor, which shows up as a vanishing
resultant of their quadratics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import integer_sqrt
from .errors import ConsistencyError, InvalidArgument
from .pell import _check_even_delta, u_sequence, uv_sequence


@dataclass(frozen=True, order=True)
class DivisorTriple:
    n: int
    d1: int
    d2: int
    delta: int
    epsilon: int

    @property
    def value(self) -> int:
        """(n^2 + 1) / 2."""
        return (self.n * self.n + 1) // 2

    def as_tuple(self):
        return (self.n, self.d1, self.d2)


@dataclass(frozen=True)
class Quadratic:
    """c2 t^2 + c1 t + c0 with c2 != 0.  Coefficients may be Fractions."""

    c2: int | Fraction
    c1: int | Fraction
    c0: int | Fraction

    def __post_init__(self):
        if self.c2 == 0:
            raise InvalidArgument("leading coefficient must be non-zero")

    @property
    def coefficients(self):
        return (self.c2, self.c1, self.c0)

    def __call__(self, t):
        return (self.c2 * t + self.c1) * t + self.c0


MonicLikeQuadratic = Quadratic


def n_from_u(delta: int, U: int) -> int:
    """n = (2(delta+1)U - delta(delta+2)) / (delta^2 - 2); must be a positive odd integer."""
    _check_even_delta(delta)
    num = 2 * (delta + 1) * U - delta * (delta + 2)
    den = delta * delta - 2
    if num % den:
        raise InvalidArgument(f"U = {U} gives a non-integral n for delta = {delta}")
    n = num // den
    if n <= 0 or n % 2 == 0:
        raise InvalidArgument(f"U = {U} gives n = {n}; expected a positive odd n (is m >= 1?)")
    return n


def quadratic_for(delta: int, n) -> Quadratic:
    """2t^2 - 2(delta*n + delta + 2)t + (n^2 + 1): twice the monic quadratic with roots d1, d2.

    ``n`` may be a Fraction, which is how perturbed inputs are examined.
    """
    return Quadratic(2, -2 * (delta * n + delta + 2), n * n + 1)


def quadratic_for_u(delta: int, U) -> Quadratic:
    """The quadratic for the (possibly non-integral) n produced by U."""
    n = Fraction(2 * (delta + 1) * U - delta * (delta + 2), delta * delta - 2)
    if n.denominator == 1:
        n = n.numerator
    return quadratic_for(delta, n)


def _det(rows):
    """Exact determinant by cofactor expansion (entries int or Fraction)."""
    if len(rows) == 1:
        return rows[0][0]
    total = 0
    for j, entry in enumerate(rows[0]):
        if entry:
            minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
            total += (-1) ** j * entry * _det(minor)
    return total


def sylvester_matrix(f: Quadratic, g: Quadratic):
    """4x4 Sylvester matrix, coefficients down the columns."""
    a0, a1, a2 = f.coefficients
    b0, b1, b2 = g.coefficients
    return [
        [a0, 0, b0, 0],
        [a1, a0, b1, b0],
        [a2, a1, b2, b1],
        [0, a2, 0, b2],
    ]


def resultant_2x2(f: Quadratic, g: Quadratic):
    """Res(f, g) of two quadratics; zero iff they share a root."""
    return _det(sylvester_matrix(f, g))


def triple_at(delta: int, m: int) -> DivisorTriple:
    """The m-th triple (m >= 1) of the family for ``delta``."""
    if m < 1:
        raise InvalidArgument(f"m must be >= 1, got {m}")
    n = n_from_u(delta, u_sequence(delta, m))
    s = delta * n + delta + 2
    disc = 4 * s * s - 8 * (n * n + 1)
    root, exact = integer_sqrt(disc) if disc >= 0 else (0, False)
    if not exact:
        raise ConsistencyError(f"discriminant {disc} is not a perfect square (delta={delta}, m={m})")
    lo, hi = 2 * s - root, 2 * s + root
    if lo % 4 or hi % 4:
        raise ConsistencyError(f"roots are not integral (delta={delta}, m={m})")
    d1, d2 = lo // 4, hi // 4
    if d1 * d2 != (n * n + 1) // 2:
        raise ConsistencyError(f"d1*d2 != (n^2+1)/2 (delta={delta}, m={m})")
    return DivisorTriple(n, d1, d2, delta, delta + 2)


def triple_chain(delta: int, count: int) -> list[DivisorTriple]:
    """Triples for m = 1..count; d2 of each is d1 of the next."""
    if count < 1:
        raise InvalidArgument(f"count must be >= 1, got {count}")
    return [triple_at(delta, m) for m in range(1, count + 1)]


def closed_form(delta: int, m: int) -> tuple[int, int, int]:
    """Polynomial closed forms of (n, d1, d2) for m = 1, 2, 3."""
    d = delta
    forms = {
        1: (2 * d + 1, 1, 2 * d**2 + 2 * d + 1),
        2: (4 * d**3 + 4 * d**2 - 1, 2 * d**2 + 2 * d + 1, 4 * d**4 + 4 * d**3 - 2 * d**2 - 2 * d + 1),
        3: (
            8 * d**5 + 8 * d**4 - 8 * d**3 - 8 * d**2 + 2 * d + 1,
            4 * d**4 + 4 * d**3 - 2 * d**2 - 2 * d + 1,
            8 * d**6 + 8 * d**5 - 12 * d**4 - 12 * d**3 + 4 * d**2 + 4 * d + 1,
        ),
    }
    if m not in forms:
        raise InvalidArgument("closed forms are tabulated for m = 1, 2, 3 only")
    return forms[m]


def identity_value(delta: int, u_prev: int, u_cur: int) -> int:
    """delta^4 - 2 delta^2 (U_m U_{m-1} + 1) + (U_m + U_{m-1})^2."""
    return delta**4 - 2 * delta * delta * (u_cur * u_prev + 1) + (u_cur + u_prev) ** 2


def resultant_identity_check(delta: int, m: int, perturb: int = 0) -> bool:
    """True iff the identity linking U_{m-1} and U_m holds exactly.

    ``perturb`` is added to U_m before evaluating, for negative checks.
    """
    if m < 1:
        raise InvalidArgument(f"m must be >= 1, got {m}")
    _check_even_delta(delta)
    return identity_value(delta, u_sequence(delta, m - 1), u_sequence(delta, m) + perturb) == 0


def consecutive_resultant(delta: int, m: int, perturb: int = 0):
    """Res of the quadratics built from U_m and U_{m+1} (+ ``perturb`` on U_{m+1})."""
    u1, _ = uv_sequence(delta, m)
    u2, _ = uv_sequence(delta, m + 1)
    return resultant_2x2(quadratic_for_u(delta, u1), quadratic_for_u(delta, u2 + perturb))
