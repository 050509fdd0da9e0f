"""Exact enumeration of f^-1(m) for supported multiplicative functions.

A preimage n factors into prime-power blocks with distinct primes, and f(n)
is the product of the block values, so every block value divides m.  The
enumeration below walks candidate primes in descending order, choosing at
most one block per prime; this makes the decomposition canonical, so each
preimage is produced exactly once and the listing is provably complete.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .arith import (
    FactoredInteger,
    FunctionSpec,
    factorize,
    get_function,
    is_prime,
    shifted_prime_base,
)

EULER_GAMMA = 0.5772156649015328606


@dataclass(frozen=True)
class PreimageSet:
    """The complete, sorted solution set of f(n) = m."""

    m: int
    f_id: str
    members: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def _block_solutions(spec: FunctionSpec, b: int) -> list[tuple[int, int]]:
    """All (p, k) with spec(p, k) = b, p prime, k >= 1.

    Every supported rule is strictly increasing in p for fixed k (constant on
    the sub-base plateau of the shifted family, handled separately), so a
    binary search per k finds the unique candidate root.
    """
    out = []
    plateau_top = 0
    if spec.id.startswith("shifted("):
        plateau_top = shifted_prime_base(int(spec.id[8:-1]))
        if plateau_top > 2:
            k, v = 1, spec.prime_power(2, 1)
            while v <= b:
                if v == b:
                    q = 2
                    while q < plateau_top:
                        out.append((q, k))
                        q += 1 + (q & 1)
                        while q < plateau_top and not is_prime(q):
                            q += 2
                k += 1
                v = spec.prime_power(2, k)
    k = 1
    while spec.prime_power(max(2, plateau_top), k) <= b:
        lo, hi = max(2, plateau_top), b + abs(b) + 2
        while lo < hi:
            mid = (lo + hi) // 2
            if spec.prime_power(mid, k) < b:
                lo = mid + 1
            else:
                hi = mid
        if spec.prime_power(lo, k) == b and is_prime(lo):
            out.append((lo, k))
        k += 1
    return out


def _candidate_blocks(
    spec: FunctionSpec, m: FactoredInteger
) -> list[tuple[int, list[tuple[int, int]]]]:
    """Per-prime block lists [(p, [(k, value), ...])], primes descending.

    For f = phi the candidate primes are exactly the primes of the form d+1
    with d | m; the generic path recovers the same set through the divisor
    scan.
    """
    blocks: dict[int, list[tuple[int, int]]] = {}
    for b in m.divisors():
        for p, k in _block_solutions(spec, b):
            blocks.setdefault(p, []).append((k, b))
    return sorted(blocks.items(), reverse=True)


def inverse_f(
    f_id: str | FunctionSpec, m: int, factored: FactoredInteger | None = None
) -> PreimageSet:
    """The complete preimage set {n : f(n) = m}, sorted ascending.

    Pass ``factored`` when m's factorization is already known (e.g. from a
    construction); otherwise m is factorized here.
    """
    spec = get_function(f_id)
    if m < 1:
        raise ValueError("m must be positive")
    if factored is None:
        factored = factorize(m)
    elif factored.value != m:
        raise ValueError("factored does not match m")
    candidates = _candidate_blocks(spec, factored)
    members: list[int] = []

    def descend(start: int, target: int, acc: int) -> None:
        if target == 1:
            members.append(acc)
        for j in range(start, len(candidates)):
            p, blist = candidates[j]
            for k, b in blist:
                if b <= target and target % b == 0:
                    descend(j + 1, target // b, acc * p**k)

    descend(0, m, 1)
    # Value-1 blocks (phi(2)=1, phi_star(2)=1) mean acc can be extended after
    # target hits 1; the loop above already covers that since b=1 divides 1.
    return PreimageSet(m, spec.id, tuple(sorted(members)))


def multiplicity(f_id: str | FunctionSpec, m: int) -> int:
    """A_f(m): the number of n with f(n) = m."""
    return len(inverse_f(f_id, m))


EULER_GAMMA_EXP = math.exp(EULER_GAMMA)


def _totient_quotient_floor(n: int) -> float:
    """A proven lower bound for phi(n), namely n/(e^gamma*loglog n + 3).

    Follows from the Rosser-Schoenfeld bound on n/phi(n) for n >= 11 and
    direct checks below; increasing in n, which makes it invertible.
    """
    return n / (EULER_GAMMA_EXP * math.log(math.log(n)) + 3.0)


@lru_cache(maxsize=None)
def preimage_ceiling(f_id: str, m: int) -> int:
    """An N such that every n with f(n) <= m satisfies n <= N.

    For phi (and phi_star, which dominates phi) this inverts the
    Rosser-Schoenfeld-style bound above; functions with f(n) >= n give N = m;
    the shifted family with negative shift uses the worst-case power growth
    f(n) >= n^c over its smallest primes.
    """
    spec = get_function(f_id)
    if m < 1:
        raise ValueError("m must be positive")
    if spec.id in ("phi", "phi_star"):
        lo, hi = 2, 16
        while _totient_quotient_floor(hi) <= m:
            hi *= 2
        while lo < hi:
            mid = (lo + hi) // 2
            if _totient_quotient_floor(mid) <= m:
                lo = mid + 1
            else:
                hi = mid
        return lo - 1
    if spec.id in ("sigma", "psi", "sigma_star"):
        return m
    if spec.id.startswith("shifted("):
        shift = int(spec.id[8:-1])
        if shift > 0:
            return m
        # f(p^k) = ((p+shift) or plateau)^k >= (p^k)^c with c the worst
        # exponent over the first primes at or below the plateau edge.
        p0 = shifted_prime_base(shift)
        c = 1.0
        p = 2
        while p <= p0:
            c = min(c, math.log(spec.prime_power(p, 1)) / math.log(p))
            p = p + 1
            while not is_prime(p):
                p += 1
        return int(m ** (1.0 / c)) + 1
    raise AssertionError(f"no ceiling rule for {spec.id}")  # pragma: no cover
