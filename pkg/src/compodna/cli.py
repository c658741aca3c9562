"""Command-line front end.

Subcommands: alphabet, count, bounds, optimal-ell, encode, decode,
simulate, verify. All output is JSON or CSV on stdout; exit status is 2
for flag errors, 1 for failed verification or any stage error, 0 otherwise.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import channel, marker, rll, symbols

SEED_ENV_VAR = "COMPODNA_SEED"


def _parse_range(text: str) -> list[int]:
    """"lo:hi" or "lo:hi:step" (inclusive), or a single integer."""
    parts = text.split(":")
    if len(parts) == 1:
        return [int(parts[0])]
    lo, hi = int(parts[0]), int(parts[1])
    step = int(parts[2]) if len(parts) == 3 else 1
    if step < 1 or hi < lo:
        raise ValueError(f"bad range {text!r}")
    return list(range(lo, hi + 1, step))


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _cmd_alphabet(args: argparse.Namespace) -> int:
    params = symbols.AlphabetParams(q=args.q, M=args.M)
    out = {
        "Q": symbols.alphabet_size(params),
        "R": symbols.restricted_symbol_count(params, args.excluded_base),
    }
    print(json.dumps(out))
    return 0


def _cmd_count(args: argparse.Namespace) -> int:
    params = rll.RllParams(Q=args.Q, R=args.R, ell=args.ell, n=args.n)
    count = rll.count_rll_brute(params) if args.brute else rll.count_rll_exact(params)
    print(count)
    return 0


def _cmd_bounds(args: argparse.Namespace) -> int:
    ells = _parse_range(args.ell_range)
    ns = _parse_range(args.n_range)
    print(rll.SWEEP_CSV_HEADER)
    for row in rll.sweep_csv_rows(args.Q, args.R, ells, ns):
        print(row)
    return 0


def _cmd_optimal_ell(args: argparse.Namespace) -> int:
    opt = marker.optimal_marker_length(args.q, args.M, args.n)
    params = marker.MarkerCodeParams(
        alphabet=symbols.AlphabetParams(q=args.q, M=args.M), n=args.n, ell=opt.ell_integer
    )
    out = {
        "ell_formula": opt.ell_formula,
        "ell_integer": opt.ell_integer,
        "redundancy_closed_form": opt.redundancy_at_optimum,
        "redundancy_at_integer": marker.code_redundancy_formula(params),
    }
    print(json.dumps(out))
    return 0


def _code_params(args: argparse.Namespace, q: int, M: int, n: int) -> marker.MarkerCodeParams:
    return marker.MarkerCodeParams(
        alphabet=symbols.AlphabetParams(q=q, M=M),
        n=n,
        ell=args.ell,
        marker_base=args.marker_base,
        anchor_base=args.anchor_base,
    )


def _cmd_encode(args: argparse.Namespace) -> int:
    message = json.loads(_read_input(args.message))
    params = _code_params(args, args.q, args.M, args.n)
    matrix = marker.construct_codeword([int(x) for x in message], params)
    print(matrix.to_json())
    return 0


def _cmd_decode(args: argparse.Namespace) -> int:
    matrix = symbols.CompositeMatrix.from_json(_read_input(args.matrix))
    params = _code_params(args, matrix.params.q, matrix.params.M, matrix.n)
    print(json.dumps(marker.decode_matrix(matrix, params)))
    return 0


def _load_configs(args: argparse.Namespace) -> list[channel.ChannelConfig]:
    text = _read_input(args.config)
    obj = json.loads(text)
    default_seed = args.seed
    if default_seed is None and SEED_ENV_VAR in os.environ:
        default_seed = int(os.environ[SEED_ENV_VAR])
    if args.sweep:
        if not isinstance(obj, list):
            raise ValueError("--sweep expects the config file to hold a JSON array of configs")
        raw = obj
    else:
        raw = [obj]
    configs = []
    for entry in raw:
        if args.seed is not None:
            entry = dict(entry, seed=args.seed)
        configs.append(channel.ChannelConfig.from_json_dict(entry, default_seed=default_seed))
    return configs


SIMULATE_CSV_HEADER = (
    "seed,q,M,n,ell,marker_base,anchor_base,strand_count,break_kind,break_param,"
    "bond_lo,bond_hi,sample_size,with_replacement,fragments_sampled,"
    "discarded_fraction,marker_only_fraction,coverage_min,coverage_mean,"
    "symbol_error_count,exact_recovery"
)


def _simulate_csv_row(config: channel.ChannelConfig, report: channel.ExperimentReport) -> str:
    cp = config.code_params
    model = config.break_model
    if isinstance(model, channel.PerBond):
        kind, param, lo, hi = "per_bond", f"{model.p:.12g}", "", ""
    else:
        kind = "exactly_t" if isinstance(model, channel.ExactlyT) else "at_most_t"
        param = str(model.t)
        lo, hi = ("", "") if model.bond_range is None else (str(model.bond_range[0]), str(model.bond_range[1]))
    return (
        f"{config.seed},{cp.q},{cp.M},{cp.n},{cp.ell},{cp.marker_base},{cp.anchor_base},"
        f"{config.strand_count},{kind},{param},{lo},{hi},"
        f"{'' if config.sample_size is None else config.sample_size},"
        f"{'true' if config.with_replacement else 'false'},{report.fragments_sampled},"
        f"{report.discarded_fraction:.12g},{report.marker_only_fraction:.12g},"
        f"{report.coverage_min:.12g},{report.coverage_mean:.12g},"
        f"{report.symbol_error_count},{'true' if report.exact_recovery else 'false'}"
    )


def _cmd_simulate(args: argparse.Namespace) -> int:
    configs = _load_configs(args)
    if args.sweep:
        print(SIMULATE_CSV_HEADER)
        for config in configs:
            report = channel.run_experiment(config, workers=args.workers)
            print(_simulate_csv_row(config, report))
    else:
        report = channel.run_experiment(configs[0], workers=args.workers)
        print(report.to_json())
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.grid == "small":
        qs, max_ell, max_n = (2, 3), 3, 8
        window_qs, window_max_ell = (2, 3, 4), 3
        points = 10
    else:
        qs, max_ell, max_n = (2, 3, 4), 4, 12
        window_qs, window_max_ell = (2, 3, 4, 5, 6), 5
        points = 20

    oracle_checked = oracle_failed = 0
    for Q in qs:
        for R in range(Q):
            for ell in range(1, max_ell + 1):
                for n in range(max_n + 1):
                    params = rll.RllParams(Q=Q, R=R, ell=ell, n=n)
                    oracle_checked += 1
                    if rll.count_rll_exact(params) != rll.count_rll_brute(params):
                        oracle_failed += 1

    window_checked = window_failed = decomp_failed = 0
    for Q in window_qs:
        for R in range(Q):
            for ell in range(1, window_max_ell + 1):
                window_checked += 1
                closed = rll.window_count_closed_form(Q, R, ell)
                if closed != rll.count_rll_exact(rll.RllParams(Q=Q, R=R, ell=ell, n=2 * ell)):
                    window_failed += 1
                blocks = sum(
                    rll.forbidden_block_count(j, k, Q, R, ell)
                    for j in range(1, ell + 2)
                    for k in range(ell, 2 * ell - j + 2)
                )
                if Q ** (2 * ell) - blocks != closed:
                    decomp_failed += 1

    summation_failed = rll.verify_summation_identities_grid(points=points)

    failed = oracle_failed + window_failed + decomp_failed + summation_failed
    out = {
        "oracle_equivalence": {"checked": oracle_checked, "failed": oracle_failed},
        "window_identity": {"checked": window_checked, "failed": window_failed},
        "decomposition_identity": {"checked": window_checked, "failed": decomp_failed},
        "summation_identities": {"checked": points, "failed": summation_failed},
        "passed": failed == 0,
    }
    print(json.dumps(out, indent=2))
    return 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="compodna", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("alphabet", help="composite alphabet size Q and restricted count R")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--excluded-base", type=int, default=1, dest="excluded_base")
    p.set_defaults(func=_cmd_alphabet)

    p = sub.add_parser("count", help="exact run-length-limited sequence count")
    p.add_argument("--Q", type=int, required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--brute", action="store_true", help="use the exhaustive oracle instead of the DP")
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("bounds", help="redundancy bound table as CSV")
    p.add_argument("--Q", type=int, required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--ell-range", required=True, dest="ell_range", help="lo:hi[:step] or single value")
    p.add_argument("--n-range", required=True, dest="n_range", help="lo:hi[:step] or single value")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("optimal-ell", help="redundancy-minimizing marker length")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_optimal_ell)

    p = sub.add_parser("encode", help="message JSON -> codeword matrix JSON")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--marker-base", type=int, default=1, dest="marker_base")
    p.add_argument("--anchor-base", type=int, default=2, dest="anchor_base")
    p.add_argument("--message", default="-", help="path to message JSON array, or - for stdin")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="codeword matrix JSON -> message JSON")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--marker-base", type=int, default=1, dest="marker_base")
    p.add_argument("--anchor-base", type=int, default=2, dest="anchor_base")
    p.add_argument("--matrix", default="-", help="path to matrix JSON, or - for stdin")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("simulate", help="run channel experiment(s) from a config JSON")
    p.add_argument("--config", required=True, help="path to config JSON, or - for stdin")
    p.add_argument("--sweep", action="store_true", help="config holds an array; emit CSV")
    p.add_argument("--seed", type=int, default=None, help=f"override config seed (also {SEED_ENV_VAR})")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("verify", help="oracle-equivalence and identity suites")
    p.add_argument("--grid", choices=("small", "full"), default="full")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
