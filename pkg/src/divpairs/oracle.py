"""Brute-force checks that do not depend on the constructions.

Divisor pairs are found by factoring (n^2 + 1)/2 and enumerating every
divisor.  Pell solutions are checked against a bounded direct search and
the chakravala method, neither of which touches continued fractions.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import isqrt

from .arith import divisors
from .errors import BudgetExceeded, InvalidArgument
from .plus_two import DivisorTriple

DEFAULT_N_BUDGET = 10**6


def verify_triple(t: DivisorTriple, require_gt1: bool | None = None) -> bool:
    """True iff d1, d2 divide (n^2+1)/2 and d1 + d2 = delta*n + epsilon.

    With ``require_gt1`` both divisors must exceed 1.  The default is to
    require it except for epsilon = delta + 2, whose first member has d1 = 1.
    """
    if t.n < 1 or t.n % 2 == 0:
        raise InvalidArgument(f"n must be odd and positive, got {t.n}")
    if require_gt1 is None:
        require_gt1 = t.epsilon != t.delta + 2
    low = 2 if require_gt1 else 1
    if t.d1 < low or t.d2 < low:
        return False
    N = t.value
    return N % t.d1 == 0 and N % t.d2 == 0 and t.d1 + t.d2 == t.delta * t.n + t.epsilon


def find_divisor_pairs(n: int, delta: int, epsilon: int, *, seed: int = 0,
                       max_iter: int = 10**7) -> list[tuple[int, int]]:
    """Every (d1, d2), d1 <= d2, of divisors of (n^2+1)/2 with d1 + d2 = delta*n + epsilon.

    ``seed`` and ``max_iter`` are passed to the factorizer.
    """
    if n < 1 or n % 2 == 0:
        raise InvalidArgument(f"n must be odd and positive, got {n}")
    target = delta * n + epsilon
    N = (n * n + 1) // 2
    divs = divisors(N, seed=seed, max_iter=max_iter)
    present = set(divs)
    out = []
    for d1 in divs:
        d2 = target - d1
        if d2 < d1:
            break
        if d2 in present:
            out.append((d1, d2))
    return out


@dataclass
class ScanResult:
    delta: int
    epsilon: int
    n_max: int
    witnesses: list = field(default_factory=list)
    scanned: int = 0
    stopped_at: int | None = None  # first n that could not be processed

    @property
    def complete(self) -> bool:
        return self.stopped_at is None


def _scan_block(args):
    delta, epsilon, lo, hi, require_gt1, seed, max_iter = args
    found, scanned = [], 0
    for n in range(lo, hi + 1, 2):
        try:
            pairs = find_divisor_pairs(n, delta, epsilon, seed=seed, max_iter=max_iter)
        except BudgetExceeded:
            return found, scanned, n
        scanned += 1
        for d1, d2 in pairs:
            t = DivisorTriple(n, d1, d2, delta, epsilon)
            if verify_triple(t, require_gt1):
                found.append(t)
    return found, scanned, None


def scan(delta: int, epsilon: int, n_max: int, require_gt1: bool = False, n_min: int = 3,
         workers: int = 1, n_budget: int = DEFAULT_N_BUDGET, seed: int = 0,
         max_iter: int = 10**7) -> ScanResult:
    """All witnesses with odd n in [n_min, n_max], in ascending order.

    n = 1 is skipped by default: (1^2+1)/2 = 1 and the pair (1, 1) is a
    witness for every delta + epsilon = 2.
    """
    if n_max < 1:
        raise InvalidArgument(f"n_max must be positive, got {n_max}")
    if n_max > n_budget:
        raise BudgetExceeded(f"n_max = {n_max} exceeds the scan budget {n_budget}")
    if workers < 1:
        raise InvalidArgument("workers must be >= 1")
    lo = max(1, n_min) | 1
    result = ScanResult(delta, epsilon, n_max)
    if lo > n_max:
        return result
    odd_count = (n_max - lo) // 2 + 1
    blocks = max(1, min(workers, odd_count))
    per = -(-odd_count // blocks)
    jobs = []
    for i in range(blocks):
        a = lo + 2 * i * per
        b = min(n_max, a + 2 * (per - 1))
        if a <= n_max:
            jobs.append((delta, epsilon, a, b, require_gt1, seed, max_iter))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_scan_block, jobs))
    else:
        parts = [_scan_block(j) for j in jobs]
    for found, scanned, stop in parts:
        result.witnesses.extend(found)
        result.scanned += scanned
        if stop is not None:
            # later blocks are discarded so the result stays a prefix
            result.stopped_at = stop
            break
    return result


# ----------------------------------------------------------- Pell checks


def brute_force_fundamental(D: int, v_limit: int = 10**6) -> tuple[int, int] | None:
    """Smallest V >= 1 with D V^2 + 1 square, searching V <= v_limit."""
    r = isqrt(D)
    if D < 2 or r * r == D:
        raise InvalidArgument(f"D must be a non-square >= 2, got {D}")
    for V in range(1, v_limit + 1):
        t = D * V * V + 1
        U = isqrt(t)
        if U * U == t:
            return U, V
    return None


def chakravala(D: int) -> tuple[int, int]:
    """Fundamental solution of U^2 - D V^2 = 1 by the chakravala method."""
    r = isqrt(D)
    if D < 2 or r * r == D:
        raise InvalidArgument(f"D must be a non-square >= 2, got {D}")
    a, b, k = r, 1, r * r - D
    while k not in (1, -1):
        ak = abs(k)
        # a + b*m must be divisible by |k|; among such m take |m^2 - D| minimal
        m0 = (-a * pow(b, -1, ak)) % ak
        m = m0 + ak * ((r - m0) // ak)
        m = min((c for c in (m, m + ak) if c > 0), key=lambda c: abs(c * c - D))
        a, b, k = (a * m + D * b) // ak, (a + b * m) // ak, (m * m - D) // k
    if k == -1:
        a, b = a * a + D * b * b, 2 * a * b
    return a, b
