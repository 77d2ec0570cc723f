"""Backend selection for the hot loops.

The compiled extension is used when it imports; setting the environment
variable ``DIVPAIRS_BACKEND=python`` forces the pure-Python fallback.
Both backends expose ``jacobi``, ``is_prime``, ``cf_period`` and ``scan_k``
with identical results.  The compiled ones are limited to word-size inputs,
so the wrappers below route large arguments to the Python versions.
"""

import os

from . import _pykernels as py

WORD = 1 << 64
CF_LIMIT = 1 << 62
# a = 2k^2 - 2k + 1 < 2**64
SCAN_K_LIMIT = 3_000_000_000

native = None
if os.environ.get("DIVPAIRS_BACKEND", "").lower() != "python":
    try:
        from . import _ckernels as native
    except ImportError:  # extension not built
        native = None

BACKEND = "cython" if native is not None else "python"


def jacobi_word(a, n):
    if native is not None and n < WORD:
        return native.jacobi(a, n)
    return py.jacobi(a, n)


def is_prime_word(n):
    if native is not None:
        return native.is_prime(n)
    return py.is_prime(n)


def cf_period(D):
    if native is not None and D < CF_LIMIT:
        return native.cf_period(D)
    return py.cf_period(D)


def scan_k(delta, start, stop, step):
    if native is not None and stop < SCAN_K_LIMIT and delta * stop < CF_LIMIT:
        return native.scan_k(delta, start, stop, step)
    return py.scan_k(delta, start, stop, step)
