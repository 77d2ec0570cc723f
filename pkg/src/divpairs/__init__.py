"""Divisor pairs (d1, d2) of (n^2 + 1)/2 with d1 + d2 = delta*n + epsilon."""

from .arith import Congruence, FactorMultiset, crt_solve, divisors, factorize, integer_sqrt, is_prime, jacobi
from .errors import (
    BudgetExceeded,
    ConsistencyError,
    ConstructionFailed,
    DivPairsError,
    InvalidArgument,
    NoSolution,
    UnsupportedDelta,
)
from .kernels import BACKEND
from .minus_two import (
    CrtClass,
    MinusTwoParams,
    build_crt_class,
    check_k_conditions,
    construct_solution,
    derive_params,
    mod8_case_table,
    schinzel_check,
    search_k,
)
from .oracle import ScanResult, find_divisor_pairs, scan, verify_triple
from .pell import CFExpansion, PellSolution, cf_sqrt, pell_fundamental, pell_iterate
from .plus_two import DivisorTriple, triple_at, triple_chain

__version__ = "0.1.0"
