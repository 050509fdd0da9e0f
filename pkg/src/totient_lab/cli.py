"""One executable for the whole toolkit.

Subcommands: census, invphi, mk-table, constants, simplex, carmichael,
sierpinski, structure, verify.  Every subcommand accepts --out json|csv|table,
--seed, --workers, and --config FILE (a key=value file whose keys mirror long
flag names).  Deterministic: the same configuration always produces the same
bytes.  Integers that may exceed 64 bits are emitted as decimal strings.

Exit codes: 0 success, 1 domain/computation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import carmichael as carm
from . import census as census_mod
from . import constants as const_mod
from . import simplex as simplex_mod
from . import sierpinski as sier
from . import structure as struct_mod
from .errors import TotientLabError

WORKERS_ENV = "TOTIENT_LAB_WORKERS"


def _read_config(path: str) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" in line:
                key, _, value = line.partition("=")
            else:
                key, _, value = line.partition(" ")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", choices=("json", "csv", "table"), default="table")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--workers", type=int, default=int(os.environ.get(WORKERS_ENV, "1"))
    )
    parser.add_argument("--config", help="key=value file of flag defaults")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="totient-lab",
        description="value sets of Euler's phi and friends: censuses, preimages, "
        "constants, simplex volumes, squared-divisor searches, multiplicity witnesses",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    registry: dict[str, argparse.ArgumentParser] = {}
    original_add = sub.add_parser

    def add_parser(name, **kwargs):
        registry[name] = original_add(name, **kwargs)
        return registry[name]

    sub.add_parser = add_parser

    p = sub.add_parser("census", help="tabulate A_f(m) for all m <= x")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--f", default="phi")
    p.add_argument("--k-max", type=int, default=7)
    p.add_argument("--snapshot-out", help="write the census to this path")
    _common(p)

    p = sub.add_parser("invphi", help="enumerate the preimages of m")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--f", default="phi")
    _common(p)

    p = sub.add_parser("mk-table", help="smallest m with multiplicity k, for k <= k-max")
    p.add_argument("--x", type=int)
    p.add_argument("--snapshot", help="census snapshot to load instead of building")
    p.add_argument("--f", default="phi")
    p.add_argument("--k-max", type=int, default=100)
    _common(p)

    p = sub.add_parser("constants", help="high-precision constants bundle as JSON")
    p.add_argument("--precision", type=int, default=const_mod.DEFAULT_PRECISION)
    p.add_argument("--terms", type=int, default=300)
    _common(p)

    p = sub.add_parser("simplex", help="fundamental-simplex volumes")
    p.add_argument("--dim", "-L", type=int, required=True)
    p.add_argument("--xi-preset", choices=("unit", "upper", "lower"), default="unit")
    p.add_argument("--samples", type=int, default=10**6)
    _common(p)

    p = sub.add_parser("carmichael", help="squared-prime-divisor search")
    p.add_argument("--case", choices=("I", "II"))
    p.add_argument("--target-log10", type=float, default=100.0)
    p.add_argument("--base-cap", type=int, default=carm.DEFAULT_BASE_CAP)
    p.add_argument("--log", help="write the certificate log (JSONL) to this path")
    p.add_argument("--verify", help="re-validate an existing certificate log")
    _common(p)

    p = sub.add_parser("sierpinski", help="witness chains for target multiplicities")
    p.add_argument("--target-k", type=int, required=True)
    p.add_argument("--seed-table", help="census snapshot supplying m_k seeds")
    p.add_argument("--cap", type=int, default=sier.DEFAULT_SCAN_CAP)
    _common(p)

    p = sub.add_parser("structure", help="empirical structure report")
    p.add_argument("--x", type=int)
    p.add_argument("--snapshot")
    p.add_argument("--f", default="phi")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--sample", type=int, default=500)
    p.add_argument("--csv", help="also dump histograms as CSV to this path")
    _common(p)

    p = sub.add_parser("verify", help="re-validate a certificate log")
    p.add_argument("--certificates", required=True)
    _common(p)
    return parser, registry


def _emit(args, payload: dict, table_rows: list[tuple[str, str]]) -> None:
    if args.out == "json":
        print(json.dumps(payload, indent=2))
    elif args.out == "csv":
        for key, value in table_rows:
            print(f"{key},{value}")
    else:
        width = max((len(k) for k, _ in table_rows), default=0)
        for key, value in table_rows:
            print(f"{key.ljust(width)}  {value}")


def _cmd_census(args) -> int:
    census = census_mod.build_census(args.f, args.x, workers=args.workers)
    v = census.value_count()
    ratios = {}
    rows = [("x", str(args.x)), ("f", census.f_id), ("n_max", str(census.n_max)), ("V", str(v))]
    for k in range(1, args.k_max + 1):
        _, vk, ratio = census_mod.query_counts(census, k)
        ratios[str(k)] = {"count": vk, "ratio": round(ratio, 6)}
        rows.append((f"V_{k}/V", f"{ratio:.6f}"))
    payload = {
        "x": args.x,
        "f_id": census.f_id,
        "n_max": census.n_max,
        "V": v,
        "multiplicities": ratios,
        "snapshot": args.snapshot_out,
    }
    if args.snapshot_out:
        census_mod.save_snapshot(census, args.snapshot_out)
    _emit(args, payload, rows)
    return 0


def _cmd_invphi(args) -> int:
    pre = sier.inverse_f(args.f, args.m)
    payload = {
        "m": args.m,
        "f_id": pre.f_id,
        "count": len(pre),
        "members": [str(n) for n in pre.members],
    }
    if args.out == "table":
        print(" ".join(str(n) for n in pre.members))
        return 0
    _emit(args, payload, [("count", str(len(pre))), ("members", " ".join(payload["members"]))])
    return 0


def _load_or_build(args) -> census_mod.MultiplicityCensus:
    if getattr(args, "snapshot", None):
        return census_mod.load_snapshot(args.snapshot)
    if args.x is None:
        raise TotientLabError("need --x or --snapshot")
    return census_mod.build_census(args.f, args.x, workers=args.workers)


def _cmd_mk_table(args) -> int:
    census = _load_or_build(args)
    table = census_mod.multiplicity_table(census, args.k_max)
    payload = {
        "x": census.x,
        "f_id": census.f_id,
        "k_max": args.k_max,
        "m_k": {str(k): table[k] for k in sorted(table)},
    }
    rows = [(f"m_{k}", str(table[k]) if table[k] is not None else "-") for k in sorted(table)]
    _emit(args, payload, rows)
    return 0


def _cmd_constants(args) -> int:
    bundle = const_mod.compute_bundle(args.precision, args.terms)
    payload = bundle.as_decimal_dict()
    rows = [(key, payload[key]) for key in ("rho", "f_prime_rho", "c", "d", "lambda", "k_const")]
    _emit(args, payload, rows)
    return 0


def _cmd_simplex(args) -> int:
    if args.xi_preset == "unit":
        xi = (1.0,) * args.dim
    elif args.xi_preset == "upper":
        xi = simplex_mod.upper_envelope_xi(args.dim)
    else:
        xi = simplex_mod.lower_envelope_xi(args.dim)
    spec = simplex_mod.SimplexSpec(args.dim, xi)
    exact_star = float(simplex_mod.exact_unboxed_volume(args.dim))
    estimate, stderr = simplex_mod.monte_carlo_volume(spec, args.samples, args.seed)
    payload = {
        "dim": args.dim,
        "xi_preset": args.xi_preset,
        "xi": list(xi),
        "samples": args.samples,
        "seed": args.seed,
        "exact_unboxed": exact_star,
        "estimate": estimate,
        "stderr": stderr,
        "ratio_to_unboxed": estimate / exact_star if exact_star else None,
    }
    rows = [(key, f"{payload[key]:.6e}" if isinstance(payload[key], float) else str(payload[key]))
            for key in ("dim", "exact_unboxed", "estimate", "stderr", "ratio_to_unboxed")]
    _emit(args, payload, rows)
    return 0


def _cmd_carmichael(args) -> int:
    if args.verify:
        ok, msg = carm.verify_log(args.verify)
        print(("OK " if ok else "FAIL ") + msg)
        return 0 if ok else 1
    if not args.case:
        raise TotientLabError("need --case I|II (or --verify PATH)")
    state = carm.run_search(
        args.case,
        args.target_log10,
        base_cap=args.base_cap,
        workers=args.workers,
        log_path=args.log,
    )
    payload = {
        "case": state.case_id,
        "target_log10": args.target_log10,
        "log10_bound": state.log10_bound,
        "admitted": len(state.entries),
        "rejected_prp": state.rejected_prp,
        "rejected_cert": state.rejected_cert,
        "base_size": len(state.base_primes),
        "log": args.log,
    }
    rows = [(key, str(payload[key])) for key in
            ("case", "log10_bound", "admitted", "rejected_prp", "base_size")]
    _emit(args, payload, rows)
    return 0


def _cmd_sierpinski(args) -> int:
    seeds = []
    if args.seed_table:
        census = census_mod.load_snapshot(args.seed_table)
        table = census_mod.multiplicity_table(census, max(args.target_k, 2))
        for k in sorted(table):
            if table[k] is not None:
                seeds.append(sier.seed_witness(table[k], source=f"census x={census.x}"))
    else:
        seeds = [sier.seed_witness(m) for m in (1, 2, 4, 220)]
    witness = sier.chain_to(args.target_k, seeds, search_cap=args.cap)
    if not sier.verify_witness(witness):
        raise TotientLabError("constructed witness failed re-verification")
    chain = []
    w = witness
    while w is not None:
        chain.append(
            {
                "m": str(w.m),
                "k": w.k,
                "kind": w.provenance.kind,
                "prime": str(w.provenance.prime) if w.provenance.prime else None,
                "preimages": [str(n) for n in w.preimages.members],
            }
        )
        w = w.provenance.parent
    payload = {"target_k": args.target_k, "m": str(witness.m), "k": witness.k,
               "depth": witness.chain_depth(), "chain": chain[::-1]}
    rows = [("m", str(witness.m)), ("k", str(witness.k)), ("depth", str(witness.chain_depth())),
            ("preimages", " ".join(str(n) for n in witness.preimages.members))]
    _emit(args, payload, rows)
    return 0


def _cmd_structure(args) -> int:
    census = _load_or_build(args)
    omega = struct_mod.omega_report(census)
    report = struct_mod.preimage_structure_report(
        census, dim=args.dim, sample_size=args.sample, seed=args.seed
    )
    if args.csv:
        report.dump_csv(args.csv)
    payload = {"omega": omega.to_dict(), "preimages": report.to_dict(), "csv": args.csv}
    rows = [
        ("values", str(omega.values)),
        ("mean_Omega", f"{omega.mean_with_multiplicity:.4f}"),
        ("mean_Omega/loglog x", f"{omega.normalized_mean:.4f}"),
        ("reference 1/(1-rho)", f"{omega.reference:.4f}"),
        ("membership_rate", f"{report.membership_rate:.4f}"),
    ]
    _emit(args, payload, rows)
    return 0


def _cmd_verify(args) -> int:
    ok, msg = carm.verify_log(args.certificates)
    print(("OK " if ok else "FAIL ") + msg)
    return 0 if ok else 1


_HANDLERS = {
    "census": _cmd_census,
    "invphi": _cmd_invphi,
    "mk-table": _cmd_mk_table,
    "constants": _cmd_constants,
    "simplex": _cmd_simplex,
    "carmichael": _cmd_carmichael,
    "sierpinski": _cmd_sierpinski,
    "structure": _cmd_structure,
    "verify": _cmd_verify,
}


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, registry = build_parser()
    config_path = None
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            config_path = argv[i + 1]
        elif token.startswith("--config="):
            config_path = token.split("=", 1)[1]
    command = next((t for t in argv if not t.startswith("-")), None)
    if config_path and command in registry:
        # Config keys mirror long flag names; inject any flag not given
        # explicitly, so explicit flags always win and required-flag checks
        # keep their normal argparse behavior.
        values = _read_config(config_path)
        for action in registry[command]._actions:
            if action.dest not in values or not action.option_strings:
                continue
            present = any(
                token in action.option_strings
                or any(token.startswith(opt + "=") for opt in action.option_strings)
                for token in argv
            )
            if not present:
                argv += [action.option_strings[0], values[action.dest]]
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except TotientLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
