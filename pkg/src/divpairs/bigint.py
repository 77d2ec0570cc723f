"""Helpers for very large integers: fast products, decimal conversion, magnitudes.

gmpy2 is used when present; every helper degrades to plain ``int``
arithmetic without it (much slower above ~10^5 digits).
"""

import sys

try:
    import gmpy2
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    gmpy2 = None

if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)


def mpz(x):
    return gmpy2.mpz(x) if gmpy2 is not None else int(x)


def to_decimal(x):
    """Exact decimal string of an integer of any size."""
    if gmpy2 is not None:
        return gmpy2.mpz(x).digits(10)
    return str(x)


def digit_count(x):
    """Number of decimal digits of |x| (0 has one digit)."""
    x = abs(int(x))
    if x < 10:
        return 1
    if gmpy2 is not None:
        n = int(gmpy2.mpz(x).num_digits(10))  # exact or one too many
        return n - 1 if gmpy2.mpz(10) ** (n - 1) > x else n
    return len(str(x))


def leading_digits(x, count=6):
    """First ``count`` significant decimal digits of |x| as a string."""
    x = abs(int(x))
    n = digit_count(x)
    if n <= count:
        return str(x)
    if gmpy2 is not None:
        return str(int(gmpy2.mpz(x) // gmpy2.mpz(10) ** (n - count)))
    return str(x)[:count]


def magnitude(x, count=6):
    """Summary dict ``{"digits": n, "leading": "ddddd", "approx": "d.ddddde+N"}``."""
    n = digit_count(x)
    lead = leading_digits(x, count)
    sign = "-" if x < 0 else ""
    approx = f"{sign}{lead[0]}.{lead[1:]}e+{n - 1}" if len(lead) > 1 else f"{sign}{lead}e+{n - 1}"
    return {"digits": n, "leading": lead, "approx": approx}
