"""Exact integer arithmetic: factorization, multiplicative function evaluation,
probable-prime testing and n-1 primality certificates.

Everything here works on arbitrary-precision Python integers.  All functions
are pure and deterministic; the cached sieve tables are immutable after
construction and safe to share across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from .errors import CertificationFailed, UnsupportedFunction

# Trial-division depth used by factorize() before switching to Pollard rho.
FACTOR_TRIAL_LIMIT = 10**6
# Trial-division depth used by is_probable_prime() before the strong tests.
PRP_TRIAL_LIMIT = 10**4
# Strong-pseudoprime bases used by the fast compositeness filter.
PRP_BASES = (2, 3, 5, 7, 11, 13)
# Extended base set: the strong test with these bases is a proven primality
# test for n < 3.317e24 (comfortably above 2^64).
DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981

WITNESS_SEARCH_CAP = 1000


@lru_cache(maxsize=8)
def primes_upto(limit: int) -> np.ndarray:
    """All primes <= limit, as an int64 array (Eratosthenes)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


@lru_cache(maxsize=4)
def spf_table(limit: int) -> np.ndarray:
    """Smallest-prime-factor table for 0..limit (spf[0] = spf[1] = 0)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            spf[p * p :: p][spf[p * p :: p] == 0] = p
    rest = np.nonzero(spf == 0)[0]
    spf[rest] = rest
    spf[0] = spf[1] = 0
    return spf


def _strong_test(n: int, bases) -> bool:
    """Miller-Rabin strong test; True means 'no base proves n composite'."""
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=1)
def _trial_primes() -> tuple[int, ...]:
    return tuple(int(p) for p in primes_upto(PRP_TRIAL_LIMIT))


def is_probable_prime(n: int) -> bool:
    """Trial division by primes < 10^4, then the strong test to bases 2..13.

    False always means composite.  True is exact well beyond 10^12 (the first
    strong pseudoprime to these six bases is 3474749660383, whose least factor
    1303 is caught by the trial division).
    """
    if n < 2:
        return False
    for p in _trial_primes():
        if p * p > n:
            return True
        if n % p == 0:
            return n == p
    return _strong_test(n, PRP_BASES)


def is_prime(n: int) -> bool:
    """Deterministic primality for n < 3.317e24; strong-probable above."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    if n < 41 * 41:
        return True
    return _strong_test(n, DETERMINISTIC_BASES)


def _pollard_brent(n: int) -> int:
    """Brent-cycle Pollard rho: a nontrivial factor of composite, odd n.

    The parameter sequence is fixed, so the returned factor is deterministic.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
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
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")  # pragma: no cover


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer together with its complete prime factorization.

    ``factors`` is a tuple of (prime, exponent) pairs with strictly increasing
    primes and exponents >= 1; the product of prime**exponent equals ``value``.
    """

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError("factors must be sorted with exponents >= 1")
            last = p
            prod *= p**e
        if prod != self.value or self.value < 1:
            raise ValueError(f"factorization does not multiply to {self.value}")

    @property
    def num_prime_factors(self) -> int:
        """Omega(n): prime factors counted with multiplicity."""
        return sum(e for _, e in self.factors)

    @property
    def num_distinct_primes(self) -> int:
        """omega(n): distinct prime factors."""
        return len(self.factors)

    @property
    def largest_prime(self) -> int:
        """P+(n); 1 for n = 1."""
        return self.factors[-1][0] if self.factors else 1

    @property
    def squarefree_kernel(self) -> int:
        """Product of the distinct primes dividing n."""
        k = 1
        for p, _ in self.factors:
            k *= p
        return k

    def primes_desc(self) -> list[int]:
        """All prime factors with multiplicity, largest first."""
        out: list[int] = []
        for p, e in reversed(self.factors):
            out.extend([p] * e)
        return out

    def divisors(self) -> list[int]:
        """All divisors, sorted ascending."""
        divs = [1]
        for p, e in self.factors:
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)

    def multiply(self, *extra: tuple[int, int]) -> "FactoredInteger":
        """This integer times the given (prime, exponent) factors.

        The caller vouches for the primality of the extra primes; the merged
        factorization is revalidated structurally.
        """
        fac = dict(self.factors)
        value = self.value
        for p, e in extra:
            fac[p] = fac.get(p, 0) + e
            value *= p**e
        return FactoredInteger(value, tuple(sorted(fac.items())))


def factorize(n: int, sieve_hint: np.ndarray | None = None) -> FactoredInteger:
    """Complete prime factorization of n >= 1.

    Trial division by primes <= 10^6, then deterministic Miller-Rabin plus
    Brent-cycle rho on the cofactor.  ``sieve_hint`` may be a smallest-prime-
    factor table covering n, which short-circuits everything.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return FactoredInteger(1, ())
    value = n
    fac: dict[int, int] = {}
    if sieve_hint is not None and n < len(sieve_hint):
        while n > 1:
            p = int(sieve_hint[n])
            fac[p] = fac.get(p, 0) + 1
            n //= p
        return FactoredInteger(value, tuple(sorted(fac.items())))

    for p in primes_upto(FACTOR_TRIAL_LIMIT):
        p = int(p)
        if p * p > n:
            break
        while n % p == 0:
            fac[p] = fac.get(p, 0) + 1
            n //= p
    # Cofactor left after trial division: prime, or split it recursively.
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m < FACTOR_TRIAL_LIMIT**2 or is_prime(m):
            fac[m] = fac.get(m, 0) + 1
            continue
        d = _pollard_brent(m)
        stack.append(d)
        stack.append(m // d)
    return FactoredInteger(value, tuple(sorted(fac.items())))


def omega_window(n: FactoredInteger, lo: float, hi: float) -> int:
    """Number of prime factors p of n with lo < p <= hi, with multiplicity."""
    if not lo < hi:
        raise ValueError("need lo < hi")
    return sum(e for p, e in n.factors if lo < p <= hi)


# ---------------------------------------------------------------------------
# Multiplicative functions, given by their rule on prime powers.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FunctionSpec:
    """A multiplicative function defined by its values on prime powers."""

    id: str
    prime_power: Callable[[int, int], int] = field(compare=False)

    def __call__(self, p: int, k: int) -> int:
        return self.prime_power(p, k)


def _phi_rule(p: int, k: int) -> int:
    return p ** (k - 1) * (p - 1)


def _sigma_rule(p: int, k: int) -> int:
    return (p ** (k + 1) - 1) // (p - 1)


def _psi_rule(p: int, k: int) -> int:
    return p**k + p ** (k - 1)


def _phi_star_rule(p: int, k: int) -> int:
    return p**k - 1


def _sigma_star_rule(p: int, k: int) -> int:
    return p**k + 1


PHI = FunctionSpec("phi", _phi_rule)
SIGMA = FunctionSpec("sigma", _sigma_rule)
PSI = FunctionSpec("psi", _psi_rule)
PHI_STAR = FunctionSpec("phi_star", _phi_star_rule)
SIGMA_STAR = FunctionSpec("sigma_star", _sigma_star_rule)

_REGISTRY = {f.id: f for f in (PHI, SIGMA, PSI, PHI_STAR, SIGMA_STAR)}


def shifted_prime_base(shift: int) -> int:
    """Smallest prime p with p + shift >= 2."""
    p = 2
    while p + shift < 2:
        p = next_prime(p)
    return p


def shifted(shift: int) -> FunctionSpec:
    """f(p^k) = (p+shift)^k for p >= p0, and (p0+shift)^k below, where p0 is
    the least prime with p0+shift >= 2.  Its range is the multiplicative
    semigroup generated by the shifted primes."""
    if shift == 0:
        raise UnsupportedFunction("shift must be nonzero")
    p0 = shifted_prime_base(shift)

    def rule(p: int, k: int) -> int:
        return (p + shift) ** k if p >= p0 else (p0 + shift) ** k

    return FunctionSpec(f"shifted({shift})", rule)


def get_function(f_id: str | FunctionSpec) -> FunctionSpec:
    """Resolve a function id like 'phi' or 'shifted(-1)' to its spec."""
    if isinstance(f_id, FunctionSpec):
        return f_id
    if f_id in _REGISTRY:
        return _REGISTRY[f_id]
    if f_id.startswith("shifted(") and f_id.endswith(")"):
        try:
            return shifted(int(f_id[8:-1]))
        except ValueError:
            pass
    raise UnsupportedFunction(f"unknown multiplicative function {f_id!r}")


def eval_f(spec: str | FunctionSpec, n: int | FactoredInteger) -> int:
    """Evaluate the multiplicative function at n via its factorization."""
    spec = get_function(spec)
    if isinstance(n, int):
        n = factorize(n)
    out = 1
    for p, e in n.factors:
        out *= spec.prime_power(p, e)
    return out


def phi(n: int) -> int:
    """Euler's totient of n."""
    return eval_f(PHI, n)


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    m = n + 1
    if m <= 2:
        return 2
    if m % 2 == 0:
        m += 1
    while not is_prime(m):
        m += 2
    return m


# ---------------------------------------------------------------------------
# n-1 primality certificates (Lucas / Lehmer / Brillhart / Selfridge style).
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LlbsCertificate:
    """Primality certificate from a complete factorization of n-1.

    For each distinct prime q | n-1 there is a witness a_q with
    a_q^(n-1) = 1 (mod n) and a_q^((n-1)/q) != 1 (mod n); together these
    prove n prime, provided each listed factor is itself prime.
    """

    n: int
    factor_list: tuple[tuple[int, int], ...]
    witnesses: tuple[tuple[int, int], ...]  # (q, a_q), one per distinct q


def llbs_certify(
    n: int,
    factors_of_n_minus_1: FactoredInteger | tuple[tuple[int, int], ...],
    witness_cap: int = WITNESS_SEARCH_CAP,
) -> LlbsCertificate:
    """Build an n-1 certificate for n, searching witnesses ascending a = 2,3,5,...

    ``factors_of_n_minus_1`` must be the complete factorization of n-1 with
    every listed prime already certified by the caller.  Raises
    CertificationFailed when some q admits no witness below the cap; the
    message distinguishes 'n composite' from 'cap too low' via a final strong
    test.
    """
    if isinstance(factors_of_n_minus_1, FactoredInteger):
        factors = factors_of_n_minus_1.factors
        if factors_of_n_minus_1.value != n - 1:
            raise CertificationFailed(f"factor list is not a factorization of {n - 1}")
    else:
        factors = tuple(factors_of_n_minus_1)
        prod = 1
        for q, e in factors:
            prod *= q**e
        if prod != n - 1:
            raise CertificationFailed(f"factor list is not a factorization of {n - 1}")

    witnesses = []
    for q, _ in factors:
        found = None
        a = 2
        while a <= witness_cap:
            if pow(a, n - 1, n) != 1:
                raise CertificationFailed(f"{n} is composite (Fermat base {a})")
            if pow(a, (n - 1) // q, n) != 1:
                found = a
                break
            a = next_prime(a)
        if found is None:
            reason = (
                "composite by strong test"
                if not is_probable_prime(n)
                else f"witness cap {witness_cap} too low"
            )
            raise CertificationFailed(f"no witness for q={q} dividing {n}-1: {reason}")
        witnesses.append((q, found))
    return LlbsCertificate(n, factors, tuple(witnesses))


def explain_certificate(
    cert: LlbsCertificate, trusted_primes: frozenset[int] | set[int] = frozenset()
) -> str | None:
    """Reason the certificate is invalid, or None if it checks out.

    Independent of llbs_certify: re-multiplies the factor list, re-checks both
    congruences per witness, and re-certifies each listed factor (primes below
    the deterministic range directly; larger ones must appear in
    ``trusted_primes``, e.g. earlier entries of a certificate log).
    """
    n = cert.n
    if n < 3:
        return f"n={n} out of range"
    prod = 1
    for q, e in cert.factor_list:
        if e < 1:
            return f"exponent {e} < 1 for factor {q}"
        prod *= q**e
        if q in trusted_primes:
            continue
        if q < DETERMINISTIC_LIMIT:
            if not is_prime(q):
                return f"listed factor {q} is not prime"
        else:
            return f"listed factor {q} too large to check without a sub-certificate"
    if prod != n - 1:
        return f"factor list multiplies to {prod}, not {n - 1}"
    seen = {q for q, _ in cert.witnesses}
    missing = {q for q, _ in cert.factor_list} - seen
    if missing:
        return f"no witness for prime(s) {sorted(missing)} dividing n-1"
    for q, a in cert.witnesses:
        if pow(a, n - 1, n) != 1:
            return f"a_q={a}: a^(n-1) != 1 (mod n)"
        if pow(a, (n - 1) // q, n) == 1:
            return f"a_q={a} fails the order condition for q={q}"
    return None


def verify_certificate(
    cert: LlbsCertificate, trusted_primes: frozenset[int] | set[int] = frozenset()
) -> bool:
    """True iff the certificate proves cert.n prime."""
    return explain_certificate(cert, trusted_primes) is None
