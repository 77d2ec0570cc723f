"""The epsilon = delta - 2 family.

For k >= 1 put a = 2k^2 - 2k + 1, b = delta*k - 1, c = delta*k - delta + 1
and g = (delta^2 - 2delta + 2)/2.  A fundamental solution (U0, V0) of
U^2 - 2abc V^2 = 1 yields

    n  = (2g(2k-1)U0 - a*delta*(delta-2)) / (2bc),
    d1, d2 = (delta*n + delta - 2 -/+ 2g(2k-1)V0) / 2,

provided U0 = -1 (mod b) and U0 = 1 (mod c).  Which of the sixteen ways
of splitting (U0-1)(U0+1) = 8abc s^2 t^2 can occur is decided from residues
mod 8 and Legendre symbols; for delta = 4, 6 (mod 8) suitable k are found
in a CRT class and tested for simultaneous primality of a, b, c.

The conditions on k, with A = delta^2/2 - delta + 1:

    delta = 4 (mod 8), B = delta/2 - 1:       delta = 6 (mod 8), B = (delta-2)/4:
      (i)   k = 3 (mod 8)                       (i)   k = 2 (mod 8)
      (ii)  (c/A) = -1                          (ii)  (-c/A) = 1
      (iii) (c/B) = 1                           (iii) (-c/B) = 1
    and in both branches (iv) a, (v) b, (vi) c prime.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd

from . import bigint, kernels
from .arith import Congruence, crt_solve, factorize, integer_sqrt, is_prime, jacobi
from .errors import ConstructionFailed, InvalidArgument, UnsupportedDelta
from .pell import DEFAULT_DIGIT_BUDGET, PellSolution, pell_fundamental
from .plus_two import DivisorTriple

NAMES = ("a", "b", "c")
# primes on the side carrying the single factor 2, per case index
_CASE_SETS = {1: "abc", 2: "", 3: "ab", 4: "ac", 5: "bc", 6: "a", 7: "b", 8: "c"}

IMPOSSIBLE_MOD8 = "impossible_mod8"
IMPOSSIBLE_MINIMALITY = "impossible_minimality"
IMPOSSIBLE_CHARACTER = "impossible_character"
CONDITIONAL = "conditional"
POSSIBLE = "possible"


# ------------------------------------------------------------- parameters


@dataclass(frozen=True)
class MinusTwoParams:
    delta: int
    k: int
    g: int
    d: int
    a: int
    b: int
    c: int
    epsilon: int

    @property
    def A(self) -> int:
        return self.delta * self.delta // 2 - self.delta + 1

    @property
    def B(self) -> int:
        """delta/2 - 1 for delta = 4 (mod 8), (delta - 2)/4 for delta = 6 (mod 8)."""
        if self.delta % 8 == 6:
            return (self.delta - 2) // 4
        return self.delta // 2 - 1

    def values(self) -> dict[str, int]:
        return {"a": self.a, "b": self.b, "c": self.c}


def _check_delta(delta: int) -> None:
    if delta % 2 or delta < 4:
        raise InvalidArgument(f"delta must be an even integer >= 4, got {delta}")


def derive_params(delta: int, k: int) -> MinusTwoParams:
    _check_delta(delta)
    if k < 1:
        raise InvalidArgument(f"k must be >= 1, got {k}")
    g = (delta * delta - 2 * delta + 2) // 2
    a = 2 * k * k - 2 * k + 1
    p = MinusTwoParams(delta, k, g, a, a, delta * k - 1, delta * k - delta + 1, delta - 2)
    assert g % 4 == 1 and p.d % 4 == 1
    assert g == p.A
    return p


def pell_modulus(params: MinusTwoParams) -> int:
    """D = 2abc, which equals d(d delta^2 - 2g) for d = a."""
    D = 2 * params.a * params.b * params.c
    assert D == params.d * (params.d * params.delta**2 - 2 * params.g)
    return D


# --------------------------------------------------------- case analysis


@dataclass(frozen=True)
class Condition:
    """prod over ``numerator`` of (q/denominator) must equal ``required``."""

    numerator: tuple[str, ...]
    denominator: str
    required: int
    source: str = ""  # the symbol before known factors were pulled out

    def __str__(self):
        if not self.numerator:
            return f"{self.source}={self.required:+d} (fixed by residues mod 8)"
        return f"({''.join(self.numerator)}/{self.denominator})={self.required:+d}"


@dataclass(frozen=True)
class CaseStatus:
    case_id: str  # e.g. "4-"
    verdict: str
    conditions: tuple[Condition, ...] = ()
    congruence: str = ""

    @property
    def index(self) -> int:
        return int(self.case_id[:-1])

    @property
    def sign(self) -> int:
        return 1 if self.case_id[-1] == "+" else -1

    @property
    def survives_residues(self) -> bool:
        return self.verdict in (CONDITIONAL, POSSIBLE)


def case_equation(index: int, sign: int):
    """Coefficients of alpha s^2 + beta t^2 = 1 as (sign, power of 2, names) pairs.

    Cases i != 2 read  U0 + sign = 2 P s^2,  U0 - sign = 4 Q t^2;
    case 2 reads       U0 + sign = 4abc s^2, U0 - sign = 2 t^2.
    """
    if index == 2:
        return (sign, 1, "abc"), (-sign, 0, "")
    P = _CASE_SETS[index]
    Q = "".join(x for x in NAMES if x not in P)
    return (sign, 0, P), (-sign, 1, Q)


def _eval_mod(term, residues, m=8):
    s, e, names = term
    v = s * 2**e
    for x in names:
        v *= residues[x]
    return v % m


def _fmt_congruence(alpha, beta):
    return f"{alpha}s^2 + {beta}t^2 = 1 (mod 8)"


def residues_mod8(delta_mod8: int, k_mod8: int) -> dict[str, int]:
    d, k = delta_mod8 % 8, k_mod8 % 8
    return {"a": (2 * k * k - 2 * k + 1) % 8, "b": (d * k - 1) % 8, "c": (d * k - d + 1) % 8}


def _minus_one_char(p_mod8):
    return 1 if p_mod8 % 4 == 1 else -1


def _two_char(p_mod8):
    return 1 if p_mod8 in (1, 7) else -1


def _condition_for(term, p, residues) -> Condition:
    s, e, names = term
    const = (_minus_one_char(residues[p]) if s < 0 else 1) * _two_char(residues[p]) ** e
    top = f"{'-' if s < 0 else ''}{2**e if e else ''}{names}"
    source = f"({top if top.strip('-') else top + '1'}/{p})"
    return Condition(tuple(x for x in names if x != p), p, const, source)


def _symbol(q, p, assign, residues):
    """(q/p) under an assignment of (a/b), (a/c), (b/c), via reciprocity."""
    key = "".join(sorted(q + p))
    val = assign[key]
    if (q, p) != (key[0], key[1]) and residues[q] % 4 == 3 and residues[p] % 4 == 3:
        val = -val
    return val


def _holds(cond: Condition, value_of) -> bool:
    prod = 1
    for q in cond.numerator:
        prod *= value_of(q, cond.denominator)
    return prod == cond.required


def mod8_case_table(delta_mod8: int, k_mod8: int) -> list[CaseStatus]:
    """Verdicts for the sixteen factorizations given delta and k mod 8.

    A case is ``impossible_mod8`` when alpha s^2 + beta t^2 = 1 has no
    solution with s, t mod 8; ``impossible_minimality`` for 2-;
    ``impossible_character`` when the Legendre conditions it forces are
    contradictory for every choice of the three undetermined symbols
    (a/b), (a/c), (b/c); ``possible`` when they hold for every choice; and
    ``conditional`` otherwise.
    """
    if delta_mod8 % 2:
        raise InvalidArgument(f"delta residue must be even, got {delta_mod8}")
    res = residues_mod8(delta_mod8, k_mod8)
    squares = {x * x % 8 for x in range(8)}
    table = []
    for index in range(1, 9):
        for sign in (1, -1):
            cid = f"{index}{'+' if sign > 0 else '-'}"
            alpha_t, beta_t = case_equation(index, sign)
            alpha, beta = _eval_mod(alpha_t, res), _eval_mod(beta_t, res)
            text = _fmt_congruence(alpha, beta)
            if index == 2 and sign < 0:
                table.append(CaseStatus(cid, IMPOSSIBLE_MINIMALITY, (), text))
                continue
            if not any((alpha * u + beta * v) % 8 == 1 for u in squares for v in squares):
                table.append(CaseStatus(cid, IMPOSSIBLE_MOD8, (), text))
                continue
            conds = []
            for p in NAMES:
                other = beta_t if p in alpha_t[2] else alpha_t
                conds.append(_condition_for(other, p, res))
            ok = 0
            for signs in itertools.product((1, -1), repeat=3):
                assign = dict(zip(("ab", "ac", "bc"), signs))
                if all(_holds(c, lambda q, p: _symbol(q, p, assign, res)) for c in conds):
                    ok += 1
            informative = tuple(c for c in conds if c.numerator)
            verdict = IMPOSSIBLE_CHARACTER if ok == 0 else POSSIBLE if ok == 8 else CONDITIONAL
            table.append(CaseStatus(cid, verdict, informative if verdict == CONDITIONAL else tuple(conds), text))
    return table


def legendre_filter(params: MinusTwoParams, table: list[CaseStatus] | None = None) -> list[str]:
    """Case ids not excluded once the actual (q/p) values of a, b, c are known."""
    vals = params.values()
    for name, v in vals.items():
        if not is_prime(v):
            raise InvalidArgument(f"{name} = {v} is not prime; Legendre symbols need prime moduli")
    if table is None:
        table = mod8_case_table(params.delta % 8, params.k % 8)
    survivors = []
    for st in table:
        if st.verdict == POSSIBLE:
            survivors.append(st.case_id)
        elif st.verdict == CONDITIONAL:
            if all(_holds(c, lambda q, p: jacobi(vals[q], vals[p])) for c in st.conditions):
                survivors.append(st.case_id)
    return survivors


def detect_case(U0: int, a: int, b: int, c: int) -> str | None:
    """Which factorization (U0 - 1)(U0 + 1) = 8abc s^2 t^2 actually occurs.

    Uses only residues of U0, never the factorization of U0 +/- 1.
    """
    if min(a, b, c) < 2:
        return None
    U0 = bigint.mpz(U0)
    single = 1 if U0 % 4 == 1 else -1  # U0 + single = 2 (mod 4)
    present = "".join(n for n, p in zip(NAMES, (a, b, c)) if (U0 + single) % p == 0)
    if not present:
        return "2" + ("+" if single < 0 else "-")
    index = next(i for i, s in _CASE_SETS.items() if s == present)
    return f"{index}{'+' if single > 0 else '-'}"


# ------------------------------------------------------------ k-conditions


@dataclass(frozen=True)
class KConditionReport:
    delta: int
    k: int
    conditions: tuple[bool, bool, bool, bool, bool, bool]
    jacobi_values: dict = field(compare=False)

    @property
    def all_satisfied(self) -> bool:
        return all(self.conditions)

    def as_dict(self):
        return {f"cond_{r}": v for r, v in zip(("i", "ii", "iii", "iv", "v", "vi"), self.conditions)}


def _branch(delta: int) -> int:
    if delta % 2 or delta < 4:
        raise InvalidArgument(f"delta must be an even integer >= 4, got {delta}")
    r = delta % 8
    if r not in (4, 6):
        raise UnsupportedDelta(
            f"delta = {delta} is {r} (mod 8): no construction is known for delta = 0, 2 (mod 8) "
            "(open case; use --force with construct to experiment)"
        )
    return r


def check_k_conditions(delta: int, k: int) -> KConditionReport:
    """Evaluate conditions (i)-(vi) for a candidate k."""
    r = _branch(delta)
    p = derive_params(delta, k)
    A, B = p.A, p.B
    if r == 4:
        jA, jB = jacobi(p.c, A), jacobi(p.c, B)
        conds = (k % 8 == 3, jA == -1, jB == 1)
        symbols = {"(c/A)": jA, "(c/B)": jB}
    else:
        jA, jB = jacobi(-p.c, A), jacobi(-p.c, B)
        conds = (k % 8 == 2, jA == 1, jB == 1)
        symbols = {"(-c/A)": jA, "(-c/B)": jB}
    conds += (is_prime(p.a), is_prime(p.b), is_prime(p.c))
    return KConditionReport(delta, k, conds, {"A": A, "B": B, **symbols})


def jacobi_reduction_check(delta: int, k: int) -> bool:
    """Check numerically the reciprocity reductions behind conditions (ii), (iii)."""
    r = _branch(delta)
    p = derive_params(delta, k)
    for name, v in p.values().items():
        if not is_prime(v):
            raise InvalidArgument(f"{name} = {v} is not prime")
    a, b, c, A, B = p.a, p.b, p.c, p.A, p.B
    if r == 4:
        return jacobi(a, c) == jacobi(c, A) and jacobi(c, b) == jacobi(c, B)
    if delta % 16 == 14:
        branch = jacobi(c, B)
    else:
        branch = -jacobi(c, B)
    return jacobi(c, a) == jacobi(-c, A) and jacobi(c, b) == branch == -jacobi(-c, B)


# ------------------------------------------------------------- CRT class


@dataclass(frozen=True)
class CrtClass:
    """k = k0 (mod modulus), derived from a congruence system on x.

    ``representative`` is the k obtained directly from the canonical x
    residue; it lies in the class but may be <= 0 for delta = 6 (mod 8).
    """

    k0: int
    modulus: int
    delta: int | None = None
    x_class: Congruence | None = None
    system: tuple[Congruence, ...] = ()
    residues: tuple[tuple[int, int], ...] = ()
    representative: int | None = None

    def __post_init__(self):
        if self.modulus < 1:
            raise InvalidArgument("class modulus must be positive")
        if self.representative is None:
            object.__setattr__(self, "representative", self.k0)
        object.__setattr__(self, "k0", self.k0 % self.modulus)

    def members(self, count: int):
        first = self.k0 if self.k0 >= 1 else self.modulus
        return [first + i * self.modulus for i in range(count)]


def _residue_choice(p, want_qr, forbidden):
    for x in range(1, p):
        if x % p == forbidden % p:
            continue
        if (jacobi(x, p) == 1) == want_qr:
            return x
    return None


def build_crt_class(delta: int, choices: dict[int, int] | None = None) -> CrtClass:
    """Construct an arithmetic progression of k meeting conditions (i)-(iii).

    ``choices`` maps a modulus dividing A (a prime factor, or a product of
    them) to the residue x should take there; unspecified primes get the
    smallest admissible residue.
    """
    r = _branch(delta)
    choices = dict(choices or {})
    A = delta * delta // 2 - delta + 1
    B = delta // 2 - 1 if r == 4 else (delta - 2) // 4
    if integer_sqrt(A)[1]:
        raise UnsupportedDelta(f"A = {A} is a perfect square")
    fac = factorize(A) if A > 1 else ()
    primes = [p for p, _ in fac]
    for m in choices:
        if m < 2 or A % m:
            raise InvalidArgument(f"override modulus {m} does not divide A = {A}")

    def from_override(p):
        for m, x in choices.items():
            if m % p == 0:
                return x % p
        return None

    picked: dict[int, int] = {}
    if r == 4:
        odd = [p for p, e in fac if e % 2]
        override_odd = [p for p in odd if from_override(p) is not None and jacobi(from_override(p), p) == -1]
        p1 = override_odd[0] if override_odd else odd[0]
        for p in primes:
            x = from_override(p)
            if x is None:
                x = _residue_choice(p, False, 2 - delta) if p == p1 else 1
            picked[p] = x
        if picked[p1] % p1 == (2 - delta) % p1 or jacobi(picked[p1], p1) != -1:
            raise ConstructionFailed(f"x = {picked[p1]} is not an admissible nonresidue mod {p1}")
        x_eight = Congruence(2 * delta + 1, 8 * delta)
    else:
        for p in primes:
            x = from_override(p)
            if x is None:
                x = _residue_choice(p, True, delta - 2)
            if x is None or x % p == (delta - 2) % p or jacobi(x, p) != 1:
                raise ConstructionFailed(f"no admissible quadratic residue mod {p}")
            picked[p] = x
        x_eight = Congruence(-delta - 1, 8 * delta)
    system = [Congruence(x, p) for p, x in picked.items()]
    if B > 1:
        system.append(Congruence(1, B))
    system.append(x_eight)
    xc = crt_solve(system)
    # x = c = delta*k - delta + 1 (delta = 4 mod 8) or x = -c (delta = 6 mod 8)
    if r == 4:
        rep = (xc.residue + delta - 1) // delta
        assert jacobi(xc.residue, A) == -1
    else:
        rep = (delta - xc.residue - 1) // delta
        assert jacobi(xc.residue, A) == 1
    return CrtClass(rep, xc.modulus // delta, delta, xc, tuple(system), tuple(sorted(picked.items())), rep)


# ---------------------------------------------------------------- search


def _scan_block(args):
    return kernels.scan_k(*args)


def search_k(delta: int, k_max: int, cls: CrtClass | None = None, workers: int = 1) -> list[int]:
    """All k <= k_max satisfying (i)-(vi), restricted to ``cls`` when given."""
    r = _branch(delta)
    if cls is not None:
        start, step = (cls.k0 if cls.k0 >= 1 else cls.modulus), cls.modulus
    else:
        start, step = (3 if r == 4 else 2), 8
    if start > k_max:
        return []
    count = (k_max - start) // step + 1
    blocks = max(1, min(workers, count))
    per = -(-count // blocks)
    jobs = []
    for i in range(blocks):
        lo = start + i * per * step
        hi = min(k_max, lo + (per - 1) * step)
        if lo <= k_max:
            jobs.append((delta, lo, hi, step))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_scan_block, jobs))
    else:
        parts = [_scan_block(j) for j in jobs]
    return [k for part in parts for k in part]


# ---------------------------------------------------------- construction


@dataclass
class ConstructionResult:
    params: MinusTwoParams
    D: int
    pell: PellSolution | None = None
    X0: int | None = None
    Y0: int | None = None
    triple: DivisorTriple | None = None
    case_id: str | None = None
    checks: dict = field(default_factory=dict)
    gcd_d1_d2: int | None = None

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(self.checks.values())


def construct_solution(delta: int, k: int, force: bool = False,
                       digit_budget: int = DEFAULT_DIGIT_BUDGET) -> ConstructionResult:
    """Build (n, d1, d2) for epsilon = delta - 2 from the fundamental Pell solution.

    Every identity is verified exactly; any failure raises
    :class:`ConstructionFailed` carrying the partial result.
    """
    if not force:
        report = check_k_conditions(delta, k)
        if not report.all_satisfied:
            raise InvalidArgument(f"k = {k} does not satisfy conditions (i)-(vi): {report.as_dict()}")
    p = derive_params(delta, k)
    D = pell_modulus(p)
    res = ConstructionResult(p, D)
    sol = pell_fundamental(D, digit_budget)
    res.pell = sol
    mpz = bigint.mpz
    U0, V0 = mpz(sol.U), mpz(sol.V)
    res.case_id = detect_case(U0, p.a, p.b, p.c)
    scale = 2 * p.g * (2 * k - 1)
    X0, Y0 = scale * U0, scale * V0
    target = p.d * delta * p.epsilon
    gate = {
        "X0 = d*delta*eps (mod 2)": (X0 - target) % 2 == 0,
        "X0 = d*delta*eps (mod b)": (X0 - target) % p.b == 0,
        "X0 = d*delta*eps (mod c)": (X0 - target) % p.c == 0,
        # differs from the three above only when b and c share a factor (forced runs)
        "X0 = d*delta*eps (mod 2bc)": (X0 - target) % (2 * p.b * p.c) == 0,
    }
    res.checks.update(gate)
    res.X0, res.Y0 = int(X0), int(Y0)
    broken = [name for name, okay in gate.items() if not okay]
    if broken:
        raise ConstructionFailed(f"congruence gate failed: {', '.join(broken)}", res)
    den = p.d * delta * delta - 2 * p.g
    n = (X0 - target) // den
    s = delta * n + p.epsilon
    d1, d2 = (s - Y0) // 2, (s + Y0) // 2
    N2 = n * n + 1
    N = N2 // 2
    res.checks.update({
        "n odd and positive": n > 0 and n % 2 == 1,
        "d1 > 1 and d2 > 1": d1 > 1 and d2 > 1,
        "d1*d2*d = g*(n^2+1)/2": d1 * d2 * p.d * 2 == p.g * N2,
        "d1 | (n^2+1)/2": N % d1 == 0 if d1 > 0 else False,
        "d2 | (n^2+1)/2": N % d2 == 0 if d2 > 0 else False,
        "d1 + d2 = delta*n + delta - 2": d1 + d2 == delta * n + delta - 2,
    })
    res.triple = DivisorTriple(int(n), int(d1), int(d2), delta, p.epsilon)
    res.gcd_d1_d2 = int(gcd(d1, d2)) if d1 > 0 else None
    if not res.ok:
        failed = [name for name, okay in res.checks.items() if not okay]
        raise ConstructionFailed(f"checks failed: {', '.join(failed)}", res)
    return res


# -------------------------------------------------------------- Schinzel


@dataclass
class SchinzelReport:
    delta: int
    s: int
    y0: int
    rows: list = field(default_factory=list)  # per e: values and factorizations
    gcds: list = field(default_factory=list)  # running gcd after each e

    @property
    def success(self) -> bool:
        return bool(self.gcds) and self.gcds[-1] == 1


def schinzel_polys(delta: int, s: int, y0: int):
    """(f1, f2, f3) as callables of e, for k = s*e + y0."""
    return (
        lambda e: 2 * s * s * e * e + 2 * s * (2 * y0 - 1) * e + 2 * y0 * y0 - 2 * y0 + 1,
        lambda e: delta * s * e + delta * y0 - 1,
        lambda e: delta * s * e + delta * y0 - delta + 1,
    )


def schinzel_check(delta: int, cls: CrtClass, samples: int) -> SchinzelReport:
    """Running gcd of f1(e) f2(e) f3(e) over e = 1..samples."""
    if samples < 1:
        raise InvalidArgument("samples must be >= 1")
    s, y0 = cls.modulus, cls.representative
    polys = schinzel_polys(delta, s, y0)
    report = SchinzelReport(delta, s, y0)
    running = 0
    for e in range(1, samples + 1):
        vals = [f(e) for f in polys]
        product = vals[0] * vals[1] * vals[2]
        running = gcd(running, product)
        report.rows.append({
            "e": e,
            "values": vals,
            "factors": [factorize(abs(v)) if abs(v) > 1 else () for v in vals],
            "product": product,
        })
        report.gcds.append(running)
    return report
