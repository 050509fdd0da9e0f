"""Search for primes P with P^2 dividing any value x whose totient has a
unique preimage.

If phi(x) = m has exactly one solution, then x is divisible by 2^2 3^2 7^2
43^2, and the casework is on the power of 3: case I has 3^2 || x (which also
forces 13^2 | x), case II has 3^3 | x.  Whenever k is a squarefree product of
primes already known to divide x squared (excluding 2 and 3), the numbers
6k+1 and 12k+1 (case I) or 6k+1 and 18k+1 (case II) have their square
dividing x as soon as they are prime.  Each admitted prime is certified with
an n-1 certificate, which is cheap here because P-1 factors as 2^a 3^b k
with k's factorization known by construction.

The running bound is the exponent of the product of all admitted squares:
log10(prod P^2) = 2 sum log10 P, including the seed primes.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .arith import (
    LlbsCertificate,
    eval_f,
    factorize,
    is_probable_prime,
    llbs_certify,
    verify_certificate,
)
from .errors import CertificationFailed, FrontierExhausted, PreconditionFailed

# (d, e-multiplier) pairs: a candidate is P = 1 + (mult*k) * phi(d).
CASE_FORMS = {
    "I": ((1, 6), (9, 2)),  # P = 6k+1 and 12k+1
    "II": ((9, 1), (27, 1)),  # P = 6k+1 and 18k+1
}
CASE_BASE = {"I": (7, 43, 13), "II": (7, 43)}
SEED_SQUARES = {"I": (2, 3, 7, 43, 13), "II": (2, 3, 7, 43)}

DEFAULT_BASE_CAP = 64
GROWTH_SUBSET_MAX = 4
RUN_SUBSET_MAX = 3


@dataclass(frozen=True)
class LogEntry:
    """One admitted prime with its provenance and certificate."""

    prime: int
    case_id: str
    d: int
    e: int
    k: int
    k_factor_indices: tuple[int, ...]
    certificate: LlbsCertificate


@dataclass
class SearchState:
    case_id: str
    base_primes: list[int] = field(default_factory=list)  # admission-ordered
    log10_bound: float = 0.0
    entries: list[LogEntry] = field(default_factory=list)
    admitted: set[int] = field(default_factory=set)
    tested_k: set[int] = field(default_factory=set)
    rejected_prp: int = 0
    rejected_cert: int = 0
    base_cap: int = DEFAULT_BASE_CAP


def init_state(case_id: str, base_cap: int = DEFAULT_BASE_CAP) -> SearchState:
    """Seed state: base {7, 43} plus 13 in case I; bound from the seed squares."""
    if case_id not in CASE_FORMS:
        raise PreconditionFailed(f"case must be 'I' or 'II', got {case_id!r}")
    state = SearchState(case_id=case_id, base_cap=base_cap)
    state.base_primes = list(CASE_BASE[case_id])
    state.log10_bound = 2.0 * sum(math.log10(p) for p in SEED_SQUARES[case_id])
    # The seed squares are already counted; never re-admit them.
    state.admitted = {2, 3, *state.base_primes}
    return state


def _phi_of_d(d: int) -> int:
    return eval_f("phi", d)


def candidate_forms(case_id: str, k: int) -> list[tuple[int, int, int]]:
    """[(P, d, e), ...] for the case's allowed (d, e) pairs at this k."""
    out = []
    for d, mult in CASE_FORMS[case_id]:
        e = mult * k
        out.append((1 + e * _phi_of_d(d), d, e))
    return out


def _subset_products(primes: list[int], max_size: int) -> list[tuple[int, tuple[int, ...]]]:
    """All (product, index tuple) over subsets of size 1..max_size, sorted by product."""
    out: list[tuple[int, tuple[int, ...]]] = []
    n = len(primes)

    def rec(start: int, size_left: int, prod: int, idx: tuple[int, ...]):
        for i in range(start, n):
            p = prod * primes[i]
            out.append((p, idx + (i,)))
            if size_left > 1:
                rec(i + 1, size_left - 1, p, idx + (i,))

    rec(0, max_size, 1, ())
    return sorted(out)


def next_candidates(state: SearchState, subset_size_limit: int = RUN_SUBSET_MAX):
    """Candidate stream for the run strategy over the current (frozen) base.

    Run #0 yields every k that is a product of 1..subset_size_limit base
    primes; run #j >= 1 yields every k that is p_j times three larger base
    primes, where p_1 < p_2 < ... is the base sorted by value.  Within a run,
    candidates come in increasing k.
    """
    if subset_size_limit < 1:
        raise PreconditionFailed("subset_size_limit must be >= 1")
    base = state.base_primes
    # Positions into the admission-ordered base, sorted by prime value; all
    # emitted index tuples stay in admission-order coordinates.
    order = sorted(range(len(base)), key=base.__getitem__)
    svals = [base[i] for i in order]
    for k, pos in _subset_products(svals, subset_size_limit):
        idx = tuple(order[i] for i in pos)
        yield 0, k, idx, candidate_forms(state.case_id, k)
    for j in range(len(svals) - 3):
        batch = []
        for prod, pos in _subset_products(svals[j + 1 :], 3):
            if len(pos) == 3:
                k = svals[j] * prod
                idx = (order[j],) + tuple(order[i + j + 1] for i in pos)
                batch.append((k, idx))
        for k, idx in sorted(batch):
            yield j + 1, k, idx, candidate_forms(state.case_id, k)


def admit(state: SearchState, prime: int, d: int, e: int, k: int, k_indices: tuple[int, ...]) -> None:
    """Certify and append one prime; grows the base while below the cap.

    The factorization of P-1 = e*phi(d) is assembled from the form (powers of
    2 and 3) and the known primes of k, so certification never factors
    anything.  Raises CertificationFailed (caller drops the candidate) and
    PreconditionFailed on malformed input.
    """
    if prime != 1 + e * _phi_of_d(d):
        raise PreconditionFailed(f"{prime} != 1 + {e}*phi({d})")
    if not any(d == dd and e == m * k for dd, m in CASE_FORMS[state.case_id]):
        raise PreconditionFailed(f"(d={d}, e={e}) not an allowed pair in case {state.case_id}")
    if prime in state.admitted:
        raise PreconditionFailed(f"{prime} already admitted")
    if not is_probable_prime(prime):
        raise CertificationFailed(f"{prime} fails the strong pseudoprime screen")
    n1 = prime - 1
    fac: dict[int, int] = {}
    for q in (2, 3):
        while n1 % q == 0:
            fac[q] = fac.get(q, 0) + 1
            n1 //= q
    for i in k_indices:
        q = state.base_primes[i]
        fac[q] = fac.get(q, 0) + 1
        n1 //= q
    if n1 != 1:
        raise PreconditionFailed(f"k indices do not match {prime}-1")
    cert = llbs_certify(prime, tuple(sorted(fac.items())))
    state.entries.append(LogEntry(prime, state.case_id, d, e, k, k_indices, cert))
    state.admitted.add(prime)
    state.log10_bound += 2.0 * math.log10(prime)
    if len(state.base_primes) < state.base_cap:
        state.base_primes.append(prime)


def _screen_chunk(candidates: list[int]) -> list[bool]:
    return [is_probable_prime(p) for p in candidates]


def run_search(
    case_id: str,
    target_log10: float,
    base_cap: int = DEFAULT_BASE_CAP,
    workers: int = 1,
    max_passes: int = 64,
    log_path: str | None = None,
) -> SearchState:
    """Grow the certified set until log10(prod P^2) >= target_log10.

    Phase 1 admits every certified prime into the base (products of up to 4
    base primes as k) until the base cap; phase 2 is the run strategy over
    the frozen base.  Candidate order is deterministic and independent of
    the worker count: each pass's candidate stream is fixed by the state at
    pass start, screening is order-preserving, and admissions happen in
    candidate order.

    With ``log_path`` the certificate log streams to disk append-only, one
    entry per admitted prime, so an interrupted run still leaves a
    well-formed log; the summary line lands on completion or interrupt.
    """
    state = init_state(case_id, base_cap)
    pool = (ProcessPoolExecutor(max_workers=workers), workers) if workers > 1 else None
    fh = open(log_path, "w") if log_path else None
    done = False
    try:
        for _ in range(max_passes):
            if state.log10_bound >= target_log10:
                done = True
                return state
            growth = len(state.base_primes) < state.base_cap
            if growth:
                plan = (
                    (0, k, idx, candidate_forms(case_id, k))
                    for k, idx in _subset_products(state.base_primes, GROWTH_SUBSET_MAX)
                    if k not in state.tested_k
                )
            else:
                plan = (item for item in next_candidates(state) if item[1] not in state.tested_k)
            processed = _process_pass(state, plan, target_log10, pool, fh)
            if state.log10_bound >= target_log10:
                done = True
                return state
            if processed == 0 or not growth:
                break  # nothing new, or the full run strategy is exhausted
    finally:
        if pool is not None:
            pool[0].shutdown()
        if fh is not None:
            fh.write(_summary_line(state, interrupted=not done))
            fh.close()
    raise FrontierExhausted(
        f"case {case_id}: bound {state.log10_bound:.1f} < target {target_log10} "
        f"after exhausting the frontier"
    )


def _process_pass(state, plan, target_log10, pool, fh=None, batch_size: int = 4096) -> int:
    """Screen a candidate stream in order-preserving batches, admitting
    survivors in candidate order; returns how many candidates were processed.

    The stream is consumed lazily, so hitting the target mid-pass never
    materializes the rest of the run strategy.
    """
    processed = 0
    plan_iter = iter(plan)
    exhausted = False
    while not exhausted:
        batch: list[tuple[int, int, int, int, tuple[int, ...]]] = []
        while len(batch) < batch_size:
            item = next(plan_iter, None)
            if item is None:
                exhausted = True
                break
            _, k, idx, forms = item
            state.tested_k.add(k)
            for prime, d, e in forms:
                batch.append((prime, d, e, k, idx))
        if not batch:
            break
        flat = [entry[0] for entry in batch]
        if pool is None:
            screened = _screen_chunk(flat)
        else:
            executor, workers = pool
            chunk = max(64, len(flat) // (2 * workers))
            chunks = [flat[i : i + chunk] for i in range(0, len(flat), chunk)]
            screened = [b for part in executor.map(_screen_chunk, chunks) for b in part]
        for ok, (prime, d, e, k, idx) in zip(screened, batch):
            processed += 1
            if not ok:
                state.rejected_prp += 1
                continue
            if prime in state.admitted:
                continue
            try:
                admit(state, prime, d, e, k, idx)
            except CertificationFailed:
                state.rejected_cert += 1
                continue
            if fh is not None:  # append-only streaming: consistent on interrupt
                fh.write(_entry_line(state.entries[-1]))
                fh.flush()
            if state.log10_bound >= target_log10:
                return processed
    return processed


# ---------------------------------------------------------------------------
# Certificate log: one JSON object per admitted prime, then a summary line.
# ---------------------------------------------------------------------------


def _entry_line(entry: LogEntry) -> str:
    return (
        json.dumps(
            {
                "P": str(entry.prime),
                "case": entry.case_id,
                "d": entry.d,
                "e": str(entry.e),
                "k_factors": list(entry.k_factor_indices),
                "witnesses": [[str(q), str(a)] for q, a in entry.certificate.witnesses],
            }
        )
        + "\n"
    )


def _summary_line(state: SearchState, interrupted: bool = False) -> str:
    payload = {
        "summary": True,
        "case": state.case_id,
        "base_cap": state.base_cap,
        "seeds": list(SEED_SQUARES[state.case_id]),
        "admitted": len(state.entries),
        "rejected_prp": state.rejected_prp,
        "rejected_cert": state.rejected_cert,
        "log10_bound": state.log10_bound,
    }
    if interrupted:
        payload["interrupted"] = True
    return json.dumps(payload) + "\n"


def write_log(state: SearchState, path: str) -> str:
    with open(path, "w") as fh:
        for entry in state.entries:
            fh.write(_entry_line(entry))
        fh.write(_summary_line(state))
    return path


def verify_log(path: str) -> tuple[bool, str]:
    """Re-validate a certificate log end to end, independently of the search.

    Checks, per line: the form arithmetic P = 1 + e*phi(d) for an allowed
    (d, e) shape of the case, that k is the product of the referenced base
    primes (squarefree, no 2 or 3), both certificate congruences, the factor
    completeness of P-1, and finally the bound accounting in the summary.
    """
    entries = []
    summary = None
    with open(path) as fh:
        for line in fh:
            obj = json.loads(line)
            if obj.get("summary"):
                summary = obj
            else:
                entries.append(obj)
    if summary is None:
        return False, "missing summary line"
    case_id = summary["case"]
    if case_id not in CASE_FORMS:
        return False, f"unknown case {case_id!r}"
    base = list(CASE_BASE[case_id])
    base_cap = summary["base_cap"]
    trusted = set(base) | {2, 3}
    seen = set()
    bound = 2.0 * sum(math.log10(p) for p in SEED_SQUARES[case_id])
    mults = {(d, m) for d, m in CASE_FORMS[case_id]}
    for i, obj in enumerate(entries):
        prime = int(obj["P"])
        d = int(obj["d"])
        e = int(obj["e"])
        idx = tuple(obj["k_factors"])
        if obj["case"] != case_id:
            return False, f"line {i}: case mismatch"
        if prime in seen:
            return False, f"line {i}: duplicate prime {prime}"
        try:
            k_primes = [base[j] for j in idx]
        except IndexError:
            return False, f"line {i}: k factor index out of range"
        if len(set(k_primes)) != len(k_primes) or any(q in (2, 3) for q in k_primes):
            return False, f"line {i}: k is not a squarefree product of base primes"
        k = math.prod(k_primes)
        if not any(e == m * k and d == dd for dd, m in mults):
            return False, f"line {i}: (d={d}, e={e}) is not an allowed pair for k={k}"
        if prime != 1 + e * _phi_of_d(d):
            return False, f"line {i}: {prime} != 1 + e*phi(d)"
        fac: dict[int, int] = {}
        n1 = prime - 1
        for q in (2, 3):
            while n1 % q == 0:
                fac[q] = fac.get(q, 0) + 1
                n1 //= q
        for q in k_primes:
            fac[q] = fac.get(q, 0) + 1
            n1 //= q
        if n1 != 1:
            return False, f"line {i}: factor reconstruction failed"
        cert = LlbsCertificate(
            prime,
            tuple(sorted(fac.items())),
            tuple((int(q), int(a)) for q, a in obj["witnesses"]),
        )
        if not verify_certificate(cert, frozenset(trusted)):
            return False, f"line {i}: certificate for {prime} failed"
        seen.add(prime)
        trusted.add(prime)
        bound += 2.0 * math.log10(prime)
        if len(base) < base_cap:
            base.append(prime)
    if abs(bound - summary["log10_bound"]) > 1e-6 * max(1.0, bound):
        return False, f"bound mismatch: recomputed {bound}, stated {summary['log10_bound']}"
    if summary["admitted"] != len(entries):
        return False, "admitted count mismatch"
    return True, f"{len(entries)} certificates verified; log10 bound {bound:.3f}"


def is_admissible(case_id: str, prime: int) -> bool:
    """Whether a value could legitimately appear in this case's log: prime,
    of an allowed form, with k squarefree and coprime to 6."""
    if not is_probable_prime(prime):
        return False
    for d, mult in CASE_FORMS[case_id]:
        step = mult * _phi_of_d(d)
        if (prime - 1) % step:
            continue
        k = (prime - 1) // step
        if k <= 1 or k % 2 == 0 or k % 3 == 0:
            continue
        if all(e == 1 for _, e in factorize(k).factors):
            return True
    return False
