"""Totient lab: exact and statistical tooling around the value sets of
Euler's phi and related multiplicative functions.

Submodules
----------
arith       factorization, multiplicative functions, primality certificates
inverse     exact preimage enumeration f^-1(m) and multiplicities A_f(m)
census      forward-sieve tables of A_f(m) for all m <= x, with snapshots
constants   the analytic constants and sequences of the value-count asymptotics
simplex     the fundamental simplex: membership, exact and sampled volumes
carmichael  the squared-prime-divisor search for unique-preimage candidates
sierpinski  constructive witnesses for prescribed multiplicities
structure   empirical probes of the multiplicative structure of f-values
cli         one executable exposing everything as subcommands
"""

from .arith import (
    FactoredInteger,
    FunctionSpec,
    LlbsCertificate,
    eval_f,
    factorize,
    get_function,
    is_probable_prime,
    llbs_certify,
    omega_window,
    phi,
    verify_certificate,
)
from .census import (
    MultiplicityCensus,
    build_census,
    count_fully_divisible,
    divisibility_witness_check,
    load_snapshot,
    multiplicity_table,
    query_counts,
    save_snapshot,
    smallest_with_multiplicity,
)
from .inverse import PreimageSet, inverse_f, multiplicity, preimage_ceiling

__all__ = [
    "FactoredInteger",
    "FunctionSpec",
    "LlbsCertificate",
    "MultiplicityCensus",
    "PreimageSet",
    "build_census",
    "count_fully_divisible",
    "divisibility_witness_check",
    "eval_f",
    "factorize",
    "get_function",
    "inverse_f",
    "is_probable_prime",
    "llbs_certify",
    "load_snapshot",
    "multiplicity",
    "multiplicity_table",
    "omega_window",
    "phi",
    "preimage_ceiling",
    "query_counts",
    "save_snapshot",
    "smallest_with_multiplicity",
    "verify_certificate",
]

__version__ = "0.1.0"
