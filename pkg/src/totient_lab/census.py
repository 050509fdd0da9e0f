"""Forward-sieve census of multiplicities A_f(m) for all m <= x.

The builder sweeps n = 1..n_max in segments, evaluates f(n) with a vectorized
prime-by-prime sieve, and increments counts[f(n)] whenever f(n) <= x.  The
ceiling n_max is chosen so that f(n) > x is proven for every n > n_max, which
makes the table exact (see inverse.preimage_ceiling for the bound).
"""

from __future__ import annotations

import hashlib
import math
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .arith import get_function, primes_upto
from .errors import BudgetExceeded, CorruptSnapshot, VersionMismatch
from .inverse import inverse_f, preimage_ceiling

DEFAULT_SEGMENT = 1 << 22
DEFAULT_BUDGET_BYTES = 6 * 10**9
PYTHON_PATH_CEILING = 5 * 10**6  # shifted-family fallback is a scalar loop

SNAPSHOT_MAGIC = b"TOTCENS1"
SNAPSHOT_VERSION = 1

# Vectorized prime-power rules, rule_vec(p, e) for exponent arrays e >= 1,
# and the k=1 rule applied to the single large leftover prime per n.
_RULE_VEC = {
    "phi": lambda p, e: np.power(p, e - 1) * (p - 1),
    "sigma": lambda p, e: (np.power(p, e + 1) - 1) // (p - 1),
    "psi": lambda p, e: np.power(p, e) + np.power(p, e - 1),
    "phi_star": lambda p, e: np.power(p, e) - 1,
    "sigma_star": lambda p, e: np.power(p, e) + 1,
}
_RULE_BIGPRIME = {
    "phi": lambda q: q - 1,
    "sigma": lambda q: q + 1,
    "psi": lambda q: q + 1,
    "phi_star": lambda q: q - 1,
    "sigma_star": lambda q: q + 1,
}


def _f_segment(f_id: str, lo: int, hi: int, base_primes: np.ndarray) -> np.ndarray:
    """f(n) for n in [lo, hi] as an int64 array (numpy path)."""
    rule_vec = _RULE_VEC[f_id]
    rule_big = _RULE_BIGPRIME[f_id]
    length = hi - lo + 1
    fval = np.ones(length, dtype=np.int64)
    rem = np.arange(lo, hi + 1, dtype=np.int64)
    for p in base_primes:
        p = int(p)
        if p * p > hi:
            break
        start = ((lo + p - 1) // p) * p
        if start > hi:
            continue
        count = (hi - start) // p + 1
        e = np.ones(count, dtype=np.int64)
        pk = p * p
        while pk <= hi:
            sk = ((lo + pk - 1) // pk) * pk
            if sk > hi:
                break
            e[(sk - start) // p :: pk // p] += 1
            pk *= p
        sl = slice(start - lo, length, p)
        fval[sl] *= rule_vec(p, e)
        rem[sl] //= np.power(p, e)
    big = rem > 1
    fval[big] *= rule_big(rem[big])
    return fval


def _f_segment_python(f_id: str, lo: int, hi: int, spf: np.ndarray) -> np.ndarray:
    """Scalar fallback for rules that can overflow int64 (shifted family)."""
    spec = get_function(f_id)
    out = np.empty(hi - lo + 1, dtype=object)
    for n in range(lo, hi + 1):
        v, m = 1, n
        while m > 1:
            p = int(spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            v *= spec.prime_power(p, e)
        out[n - lo] = v
    return out


def _count_chunk(f_id: str, x: int, lo: int, hi: int, segment: int) -> np.ndarray:
    """counts[m] contributions from n in [lo, hi], as an int64 array."""
    counts = np.zeros(x + 1, dtype=np.int64)
    if f_id in _RULE_VEC:
        base = primes_upto(math.isqrt(hi) + 1)
        for s in range(lo, hi + 1, segment):
            e = min(s + segment - 1, hi)
            vals = _f_segment(f_id, s, e, base)
            vals = vals[vals <= x]
            counts += np.bincount(vals, minlength=x + 1)
    else:
        spf = _spf_for(hi)
        for s in range(lo, hi + 1, segment):
            e = min(s + segment - 1, hi)
            for v in _f_segment_python(f_id, s, e, spf):
                if v <= x:
                    counts[v] += 1
    return counts


def _spf_for(limit: int) -> np.ndarray:
    from .arith import spf_table

    return spf_table(limit)


@dataclass
class MultiplicityCensus:
    """Exact table of A_f(m) for 1 <= m <= x.

    counts[m] equals the number of n with f(n) = m (counts[0] is unused);
    n_max is the enumeration ceiling actually swept.
    """

    x: int
    f_id: str
    counts: np.ndarray
    n_max: int

    def multiplicity(self, m: int) -> int:
        return int(self.counts[m])

    def value_count(self, limit: int | None = None) -> int:
        """V(limit): number of f-values <= limit."""
        limit = self.x if limit is None else min(limit, self.x)
        return int(np.count_nonzero(self.counts[1 : limit + 1]))

    def value_count_with_multiplicity(self, k: int, limit: int | None = None) -> int:
        """V_k(limit): number of f-values <= limit with multiplicity exactly k."""
        limit = self.x if limit is None else min(limit, self.x)
        return int(np.count_nonzero(self.counts[1 : limit + 1] == k))

    def total_preimages(self) -> int:
        """Number of n <= n_max with f(n) <= x (conservation check)."""
        return int(self.counts.sum())


def build_census(
    f_id: str,
    x: int,
    segment: int = DEFAULT_SEGMENT,
    workers: int = 1,
    budget_bytes: int = DEFAULT_BUDGET_BYTES,
) -> MultiplicityCensus:
    """Sweep n = 1..n_max and tabulate A_f(m) for every m <= x."""
    spec = get_function(f_id)
    if x < 1:
        raise ValueError("x must be positive")
    n_max = preimage_ceiling(spec.id, x)
    need = 4 * (x + 1) + 40 * segment
    if need > budget_bytes:
        raise BudgetExceeded(f"census at x={x} needs ~{need} bytes > budget {budget_bytes}")
    if spec.id not in _RULE_VEC and n_max > PYTHON_PATH_CEILING:
        raise BudgetExceeded(
            f"{spec.id} census sweeps n_max={n_max}, beyond the scalar-path ceiling"
        )

    if workers <= 1:
        total = _count_chunk(spec.id, x, 1, n_max, segment)
    else:
        bounds = np.linspace(0, n_max, workers + 1, dtype=np.int64)
        jobs = [
            (spec.id, x, int(bounds[i]) + 1, int(bounds[i + 1]), segment)
            for i in range(workers)
            if bounds[i] < bounds[i + 1]
        ]
        total = np.zeros(x + 1, dtype=np.int64)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_count_chunk_star, jobs):
                total += part
    if total.max() >= 2**32:
        raise BudgetExceeded("a multiplicity saturated the 32-bit counter")
    return MultiplicityCensus(x, spec.id, total.astype(np.uint32), n_max)


def _count_chunk_star(args) -> np.ndarray:
    return _count_chunk(*args)


def query_counts(census: MultiplicityCensus, k: int) -> tuple[int, int, float]:
    """(V(x), V_k(x), V_k(x)/V(x)) for the census."""
    if k < 1:
        raise ValueError("k must be >= 1")
    v = census.value_count()
    vk = census.value_count_with_multiplicity(k)
    return v, vk, vk / v if v else 0.0


def smallest_with_multiplicity(census: MultiplicityCensus, k: int) -> int | None:
    """Least m <= x with A_f(m) = k, or None when no such m exists."""
    if k < 1:
        raise ValueError("k must be >= 1")
    hits = np.flatnonzero(census.counts[1:] == k)
    return int(hits[0]) + 1 if hits.size else None


def multiplicity_table(census: MultiplicityCensus, k_max: int) -> dict[int, int | None]:
    """m_k for 2 <= k <= k_max (the smallest-solution table), in one pass."""
    table: dict[int, int | None] = {k: None for k in range(2, k_max + 1)}
    counts = census.counts
    small = np.flatnonzero((counts[1:] >= 2) & (counts[1:] <= k_max)) + 1
    for m in small:
        k = int(counts[m])
        if table[k] is None:
            table[k] = int(m)
    return table


def divisibility_witness_check(f_id: str, d: int, k: int) -> bool:
    """True iff f^-1(d) is nonempty and every preimage is divisible by k."""
    if d < 1 or k < 2:
        raise ValueError("need d >= 1 and k >= 2")
    pre = inverse_f(f_id, d)
    return len(pre) > 0 and all(n % k == 0 for n in pre)


def count_fully_divisible(
    census: MultiplicityCensus, k: int, segment: int = DEFAULT_SEGMENT
) -> int:
    """V(x; k): f-values <= x all of whose preimages are divisible by k.

    Re-sweeps the census range, marking every value that has at least one
    preimage not divisible by k.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    x, n_max = census.x, census.n_max
    has_free_preimage = np.zeros(x + 1, dtype=bool)
    if census.f_id in _RULE_VEC:
        base = primes_upto(math.isqrt(n_max) + 1)
        for s in range(1, n_max + 1, segment):
            e = min(s + segment - 1, n_max)
            vals = _f_segment(census.f_id, s, e, base)
            free = (np.arange(s, e + 1) % k) != 0
            sel = vals[free & (vals <= x)]
            has_free_preimage[sel] = True
    else:
        spf = _spf_for(n_max)
        for s in range(1, n_max + 1, segment):
            e = min(s + segment - 1, n_max)
            for i, v in enumerate(_f_segment_python(census.f_id, s, e, spf)):
                if v <= x and (s + i) % k != 0:
                    has_free_preimage[v] = True
    is_value = census.counts[1:] > 0
    return int(np.count_nonzero(is_value & ~has_free_preimage[1:]))


# ---------------------------------------------------------------------------
# Snapshot format: 8-byte magic, little-endian u64 version/x/n_max, f_id as a
# length-prefixed string, zigzag-varint delta-encoded counts, and a trailing
# 64-bit checksum (BLAKE2b-8) of all preceding bytes.
# ---------------------------------------------------------------------------


def _zigzag(d: int) -> int:
    return (d << 1) if d >= 0 else ((-d) << 1) - 1


def _unzigzag(z: int) -> int:
    return (z >> 1) if (z & 1) == 0 else -((z + 1) >> 1)


def save_snapshot(census: MultiplicityCensus, path: str) -> str:
    buf = bytearray()
    buf += SNAPSHOT_MAGIC
    buf += struct.pack("<QQQ", SNAPSHOT_VERSION, census.x, census.n_max)
    fid = census.f_id.encode()
    buf += struct.pack("<Q", len(fid)) + fid
    prev = 0
    append = buf.append
    for c in census.counts[1:].tolist():
        z = _zigzag(c - prev)
        prev = c
        while z >= 0x80:
            append((z & 0x7F) | 0x80)
            z >>= 7
        append(z)
    buf += hashlib.blake2b(bytes(buf), digest_size=8).digest()
    with open(path, "wb") as fh:
        fh.write(buf)
    return path


def load_snapshot(path: str) -> MultiplicityCensus:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 48 or raw[:8] != SNAPSHOT_MAGIC:
        raise CorruptSnapshot(f"{path}: bad magic or truncated header")
    body, check = raw[:-8], raw[-8:]
    if hashlib.blake2b(body, digest_size=8).digest() != check:
        raise CorruptSnapshot(f"{path}: checksum mismatch")
    version, x, n_max = struct.unpack_from("<QQQ", body, 8)
    if version != SNAPSHOT_VERSION:
        raise VersionMismatch(f"{path}: format version {version}")
    (fid_len,) = struct.unpack_from("<Q", body, 32)
    fid = body[40 : 40 + fid_len].decode()
    counts = np.zeros(x + 1, dtype=np.uint32)
    pos = 40 + fid_len
    prev = 0
    for m in range(1, x + 1):
        z = 0
        shift = 0
        while True:
            if pos >= len(body):
                raise CorruptSnapshot(f"{path}: counts stream truncated")
            b = body[pos]
            pos += 1
            z |= (b & 0x7F) << shift
            if b < 0x80:
                break
            shift += 7
        prev += _unzigzag(z)
        counts[m] = prev
    if pos != len(body):
        raise CorruptSnapshot(f"{path}: trailing bytes after counts stream")
    return MultiplicityCensus(x, fid, counts, n_max)
