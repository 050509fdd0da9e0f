"""Constructive witnesses for prescribed multiplicities.

The engine turns a verified pair A(m) = k into A(2mp) = k+2 for a prime p
with (i) p > 2m+1, (ii) 2p+1 and 2mp+1 both prime, and (iii) dp+1 composite
for every other divisor d of 2m.  Searching inside a CRT class that forces
p = 2 (mod 3) (protecting condition (ii) when m = 1 (mod 3)) and plants a
prime divisor in dp+1 for each small d makes hits frequent; every condition
is still checked explicitly, and the conclusion A(2mp) = k+2 is confirmed
by exhaustive preimage enumeration before a witness is returned.

Witnesses carry the factorization of m, so chained extensions (where m is a
product of a few large primes) never have to factor anything big.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .arith import FactoredInteger, factorize, is_probable_prime, next_prime
from .errors import NotFoundError, PreconditionFailed
from .inverse import PreimageSet, inverse_f

log = logging.getLogger(__name__)

DEFAULT_SCAN_CAP = 10**6
DEFAULT_CRT_DIVISOR_CAP = 2000


@dataclass(frozen=True)
class Provenance:
    kind: str  # "seed" or "extension"
    source: str = ""
    parent: "MultiplicityWitness | None" = None
    prime: int | None = None


@dataclass(frozen=True)
class MultiplicityWitness:
    """A value m with verified multiplicity k and the full preimage set."""

    m: int
    k: int
    preimages: PreimageSet
    provenance: Provenance
    m_factored: FactoredInteger

    def chain_depth(self) -> int:
        d = 0
        w = self
        while w.provenance.kind == "extension":
            d += 1
            w = w.provenance.parent
        return d


def seed_witness(m: int, source: str = "direct") -> MultiplicityWitness:
    fac = factorize(m)
    pre = inverse_f("phi", m, fac)
    if len(pre) == 0:
        raise PreconditionFailed(f"{m} is a nontotient")
    return MultiplicityWitness(m, len(pre), pre, Provenance("seed", source=source), fac)


def extension_conditions(m_factored: FactoredInteger, p: int) -> str | None:
    """Why (m, p) fails the extension conditions, or None if they all hold."""
    m = m_factored.value
    if p <= 2 * m + 1:
        return f"p={p} <= 2m+1"
    if not is_probable_prime(p):
        return f"p={p} not prime"
    if not is_probable_prime(2 * p + 1):
        return "2p+1 composite"
    if not is_probable_prime(2 * m * p + 1):
        return "2mp+1 composite"
    for d in m_factored.multiply((2, 1)).divisors():
        if d in (2, 2 * m):
            continue
        if is_probable_prime(d * p + 1):
            return f"d={d}: dp+1 prime"
    return None


def _crt(residues: list[int], moduli: list[int]) -> tuple[int, int]:
    r, mod = 0, 1
    for res, q in zip(residues, moduli):
        inv = pow(mod, -1, q)
        t = ((res - r) * inv) % q
        r += mod * t
        mod *= q
    return r % mod, mod


def _scan_class(m_factored: FactoredInteger, crt_divisor_cap: int) -> tuple[int, int]:
    """Residue class a mod b with p = 2 (mod 3) and p_d | dp+1 for each
    divisor 3 <= d < 2m of 2m up to the cap, using the smallest unused prime
    p_d > d per divisor.

    A covering prime with p_d | 2m - d would force p_d | 2mp+1 across the
    whole class (killing condition (ii) for every candidate), so those are
    skipped in favor of the next prime.
    """
    residues, moduli = [2], [3]
    used = {3}
    two_m = 2 * m_factored.value
    for d in m_factored.multiply((2, 1)).divisors():
        if d < 3 or d >= two_m or d > crt_divisor_cap:
            continue
        q = next_prime(d)
        while q in used or (two_m - d) % q == 0:
            q = next_prime(q)
        used.add(q)
        residues.append((-pow(d, -1, q)) % q)
        moduli.append(q)
    return _crt(residues, moduli)


def extend(
    witness: MultiplicityWitness,
    search_cap: int = DEFAULT_SCAN_CAP,
    crt_divisor_cap: int = DEFAULT_CRT_DIVISOR_CAP,
) -> MultiplicityWitness:
    """A verified witness for multiplicity k+2, built from one for k.

    Scans p = a + h*b for h = 0, 1, ... through the CRT class; every
    candidate is checked against conditions (i)-(iii) directly (the class
    only makes compositeness likely, it is never trusted), and the new
    multiplicity is confirmed by enumeration.  Raises NotFoundError with a
    resumable cursor once search_cap values of h are exhausted.
    """
    m, k = witness.m, witness.k
    if m <= 1 or m % 3 != 1:
        # m = 1 in particular: 2p+1 and 2mp+1 coincide and the two solution
        # families merge, so the k+2 conclusion is not reliable there.
        raise PreconditionFailed(f"extension needs m > 1 with m = 1 (mod 3), got m={m}")
    a, b = _scan_class(witness.m_factored, crt_divisor_cap)
    h0 = max(0, (2 * m + 2 - a) // b)
    for h in range(h0, h0 + search_cap):
        p = a + h * b
        if extension_conditions(witness.m_factored, p) is not None:
            continue
        assert p % 3 == 2 and (2 * m * p) % 3 == 1
        target_fac = witness.m_factored.multiply((2, 1), (p, 1))
        pre = inverse_f("phi", target_fac.value, target_fac)
        if len(pre) != k + 2:
            log.warning(
                "extension mismatch at m=%d p=%d: enumeration gives %d, wanted %d",
                m, p, len(pre), k + 2,
            )
            continue
        return MultiplicityWitness(
            target_fac.value,
            k + 2,
            pre,
            Provenance("extension", parent=witness, prime=p),
            target_fac,
        )
    raise NotFoundError(
        f"no extension prime for m={m} within {search_cap} steps "
        f"(resume from h={h0 + search_cap}, class {a} mod {b})"
    )


def chain_to(
    k_target: int,
    seeds: list[MultiplicityWitness],
    search_cap: int = DEFAULT_SCAN_CAP,
    crt_divisor_cap: int = DEFAULT_CRT_DIVISOR_CAP,
) -> MultiplicityWitness:
    """A verified witness with multiplicity exactly k_target.

    Returns a seed directly when one has the target multiplicity; otherwise
    extends (k -> k+2 per step) from the extendable seed of matching parity
    with maximal k <= k_target.
    """
    if k_target < 2:
        raise PreconditionFailed("multiplicities below 2 do not occur")
    for w in seeds:
        if w.k == k_target:
            return w
    usable = [
        w
        for w in seeds
        if w.k <= k_target and (w.k - k_target) % 2 == 0 and w.m > 1 and w.m % 3 == 1
    ]
    if not usable:
        raise NotFoundError(f"no seed of parity {k_target % 2} extendable to {k_target}")
    w = max(usable, key=lambda w: w.k)
    while w.k < k_target:
        w = extend(w, search_cap, crt_divisor_cap)
    return w


def verify_witness(witness: MultiplicityWitness) -> bool:
    """Recompute everything the witness claims, recursively through parents."""
    fac = witness.m_factored
    if fac.value != witness.m:
        return False
    if any(not is_probable_prime(q) for q, _ in fac.factors):
        return False
    pre = inverse_f("phi", witness.m, fac)
    if tuple(pre.members) != tuple(witness.preimages.members):
        return False
    if len(pre) != witness.k:
        return False
    prov = witness.provenance
    if prov.kind == "extension":
        parent = prov.parent
        if parent is None or prov.prime is None:
            return False
        if witness.m != 2 * parent.m * prov.prime or witness.k != parent.k + 2:
            return False
        if extension_conditions(parent.m_factored, prov.prime) is not None:
            return False
        return verify_witness(parent)
    return prov.kind == "seed"
