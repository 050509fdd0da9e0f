"""Empirical probes of the multiplicative structure of totients.

Three instruments: a window-regularity test for shifted primes (is the
number of prime factors of p-1 in every window (U, T] close to
loglog T - loglog U?), exact moments of Omega/omega over all f-values of a
census, and a sampled report on where the prime factors of preimages sit
relative to the predicted profile beta_i = rho^i (1 - i/L0).

The asymptotic predictions have L0(x) in {1, 2} at any feasible x, so the
report *records* deviations rather than asserting the limiting claims.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .arith import factorize, omega_window, primes_upto
from .census import MultiplicityCensus
from .constants import asymptotic_scales, compute_bundle
from .errors import DomainError
from .inverse import inverse_f
from .simplex import E_TO_E, SimplexSpec, membership, upper_envelope_xi, x_vector


def _loglog(v: float) -> float:
    return math.log(math.log(v))


def is_s_normal(p: int, s_cut: float) -> bool:
    """Window-regularity of the prime factors of p-1.

    Requires (a) at most 2*loglog(S) prime factors below S (with
    multiplicity) and (b) |Omega(p-1, U, T) - (loglog T - loglog U)| <
    sqrt(loglog S * loglog T) for every S <= U < T <= p-1.

    Omega(p-1, U, T) is a step function jumping only at prime divisors of
    p-1, and loglog is monotone, so the supremum of each one-sided deviation
    over the (U, T) rectangle is attained (or approached) at pairs built
    from the prime divisors in (S, p-1] and the endpoints; only those
    finitely many critical pairs are checked.
    """
    if s_cut < E_TO_E:
        raise DomainError("cutoff must be at least e^e so loglog is positive")
    fac = factorize(p - 1)
    lls = _loglog(s_cut)
    if omega_window(fac, 1, s_cut) > 2 * lls:
        return False
    qs = [(q, e) for q, e in fac.factors if q > s_cut]
    top = p - 1
    ll_top = _loglog(top)
    lab = [(_loglog(q), e) for q, e in qs]

    # Upper side: count too high.  U -> q_i from below (count includes q_i)
    # or U = S; T = q_j (count includes q_j).
    for j in range(len(lab)):
        ll_t = lab[j][0]
        bound = math.sqrt(lls * ll_t)
        run = 0
        for i in range(j, -1, -1):
            run += lab[i][1]
            if run - (ll_t - lab[i][0]) >= bound:
                return False
        if run - (ll_t - lls) >= bound:
            return False
    # Lower side: count too low.  U = q_i (count excludes q_i) or U = S;
    # T -> q_j from below (count excludes q_j) or T = p-1 (count includes
    # everything).
    starts = [(lls, 0)] + [(lab[i][0], i + 1) for i in range(len(lab))]
    for ll_u, lo in starts:
        for j in range(lo, len(lab)):
            ll_t = lab[j][0]
            if ll_t <= ll_u:
                continue
            count = sum(e for _, e in lab[lo:j])
            if (ll_t - ll_u) - count >= math.sqrt(lls * ll_t):
                return False
        count = sum(e for _, e in lab[lo:])
        if (ll_top - ll_u) - count >= math.sqrt(lls * ll_top):
            return False
    return True


@dataclass
class OmegaReport:
    """Exact moments of Omega and omega over all f-values of a census."""

    x: int
    f_id: str
    values: int
    mean_with_multiplicity: float
    var_with_multiplicity: float
    mean_distinct: float
    var_distinct: float
    loglog_x: float
    normalized_mean: float  # mean_with_multiplicity / loglog x
    reference: float  # 1/(1-rho) ~ 2.186

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _factor_count_tables(limit: int) -> tuple[np.ndarray, np.ndarray]:
    """(Omega, omega) for 0..limit as uint8 arrays."""
    big = np.zeros(limit + 1, dtype=np.uint8)
    small = np.zeros(limit + 1, dtype=np.uint8)
    for p in primes_upto(limit):
        p = int(p)
        small[p::p] += 1
        pk = p
        while pk <= limit:
            big[pk::pk] += 1
            pk *= p
    return big, small


def omega_report(census: MultiplicityCensus) -> OmegaReport:
    """Full-enumeration moments of Omega(m), omega(m) over the census values."""
    big, small = _factor_count_tables(census.x)
    mask = census.counts[1:] > 0
    bb = big[1:][mask].astype(np.float64)
    ss = small[1:][mask].astype(np.float64)
    llx = _loglog(census.x) if census.x > math.e else float("nan")
    bundle = compute_bundle(25, 16)
    ref = float(1 / (1 - bundle.rho))
    return OmegaReport(
        x=census.x,
        f_id=census.f_id,
        values=int(mask.sum()),
        mean_with_multiplicity=float(bb.mean()),
        var_with_multiplicity=float(bb.var()),
        mean_distinct=float(ss.mean()),
        var_distinct=float(ss.var()),
        loglog_x=llx,
        normalized_mean=float(bb.mean() / llx) if llx == llx else float("nan"),
        reference=ref,
    )


@dataclass
class StructureReport:
    """Sampled geometry of preimages of census values at scale x."""

    x: int
    f_id: str
    sample_size: int
    seed: int
    dim: int
    critical_dim: int | None
    beta: list[float]
    pairs: int  # (value, preimage) pairs sampled
    coordinate_histograms: list[list[int]]  # per i = 1..dim, 21 bins on [0, 1.05]
    bin_edges: list[float]
    beta_deviation_mean: list[float]  # per i < L0: mean |x_i/beta_i - 1|
    membership_rate: float  # fraction of x-vectors inside S_dim(xi)
    prime_position_histogram: list[int]  # loglog p / loglog x over all prime factors
    s_normal_rates: dict[str, float]  # pass rate of distinct preimage primes, by S

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    def dump_csv(self, path: str) -> str:
        with open(path, "w") as fh:
            fh.write("histogram,bin_low,count\n")
            for i, hist in enumerate(self.coordinate_histograms, start=1):
                for edge, c in zip(self.bin_edges, hist):
                    fh.write(f"q{i},{edge:.3f},{c}\n")
            for edge, c in zip(self.bin_edges, self.prime_position_histogram):
                fh.write(f"prime_position,{edge:.3f},{c}\n")
        return path


N_BINS = 21
BIN_TOP = 1.05


def preimage_structure_report(
    census: MultiplicityCensus,
    dim: int = 3,
    sample_size: int = 1000,
    seed: int = 0,
    s_cuts: tuple[float, ...] = (100.0, 10000.0),
) -> StructureReport:
    """Preimage x-vectors, their deviation from the beta profile, simplex
    membership rates, and the positions of all preimage prime factors,
    over a seeded uniform sample of the census's values."""
    if census.x <= E_TO_E:
        raise DomainError("census scale too small for loglog statistics")
    rng = np.random.default_rng(seed)
    values = np.flatnonzero(census.counts[1:]) + 1
    take = min(sample_size, len(values))
    chosen = np.sort(rng.choice(values, size=take, replace=False))

    try:
        l0, _, betas = asymptotic_scales(census.x)
        beta = [float(b) for b in betas]
    except DomainError:
        l0, beta = None, []
    xi = upper_envelope_xi(dim, max(l0 or dim, dim))
    spec = SimplexSpec(dim, xi)

    llx = _loglog(census.x)
    edges = np.linspace(0.0, BIN_TOP, N_BINS + 1)
    coord_hist = np.zeros((dim, N_BINS), dtype=np.int64)
    prime_hist = np.zeros(N_BINS, dtype=np.int64)
    dev_sums = np.zeros(max(0, (l0 or 1) - 1))
    dev_counts = 0
    members = 0
    pairs = 0
    distinct_primes: set[int] = set()

    for m in chosen:
        pre = inverse_f(census.f_id, int(m))
        for n in pre:
            fac = factorize(n)
            pairs += 1
            xv = x_vector(fac, census.x, dim)
            for i in range(dim):
                b = min(int(xv[i] / BIN_TOP * N_BINS), N_BINS - 1)
                coord_hist[i, b] += 1
            if membership(spec, xv):
                members += 1
            if l0 and l0 >= 2:
                for i in range(1, l0):
                    if beta[i] > 0:
                        dev_sums[i - 1] += abs(xv[i - 1] / beta[i] - 1.0)
                dev_counts += 1
            for q, _ in fac.factors:
                distinct_primes.add(q)
                pos = _loglog(q) / llx if q > math.e else 0.0
                b = min(int(pos / BIN_TOP * N_BINS), N_BINS - 1)
                prime_hist[b] += 1

    rates = {}
    for s_cut in s_cuts:
        eligible = [q for q in distinct_primes if q > s_cut]
        if eligible:
            passed = sum(1 for q in eligible if is_s_normal(q, s_cut))
            rates[str(int(s_cut))] = passed / len(eligible)
        else:
            rates[str(int(s_cut))] = float("nan")

    return StructureReport(
        x=census.x,
        f_id=census.f_id,
        sample_size=take,
        seed=seed,
        dim=dim,
        critical_dim=l0,
        beta=beta,
        pairs=pairs,
        coordinate_histograms=coord_hist.tolist(),
        bin_edges=edges[:-1].tolist(),
        beta_deviation_mean=(dev_sums / dev_counts).tolist() if dev_counts else [],
        membership_rate=members / pairs if pairs else float("nan"),
        prime_position_histogram=prime_hist.tolist(),
        s_normal_rates=rates,
    )


def report_to_json(report) -> str:
    return json.dumps(report.to_dict(), indent=2)
