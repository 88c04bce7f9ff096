"""Command-line front end: ``finitekey <subcommand> ...``.

Exit status is 0 on success, 1 for usage or input errors and 2 when a
numerical routine breaks down.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .binomialbounds import TailBoundKind, invert_bound
from .estimation import Construction, conventional_ambiguity, worst_case_phase_error, xi_relative
from .harness import (ConfigError, load_config, parse_channel, rows_to_csv, rows_to_json,
                      run_sweep)
from .infomeasures import EmpiricalDistribution
from .keyrate import KeyRateParams, default_delta_bar, key_length, leak_model
from .optimizer import OptimizerError, min_ambiguity_accurate
from .quantum import (AmplitudeDamping, Depolarizing, accurate_outcomes,
                      choi_of, cond_entropy_x_given_e, eigenvalues_sym4, sample_statistics,
                      stats_accurate, stats_conventional)

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _add_channel_args(p: argparse.ArgumentParser, required: bool) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--depolarizing", type=float, metavar="Q")
    g.add_argument("--amplitude-damping", type=float, metavar="Q")
    g.add_argument("--choi", metavar="FILE", help="16 whitespace-separated entries, row-major")
    g.add_argument("--channel", metavar="SPEC", help="e.g. depolarizing:0.1")


def _channel_from_args(args):
    if args.depolarizing is not None:
        return Depolarizing(args.depolarizing)
    if args.amplitude_damping is not None:
        return AmplitudeDamping(args.amplitude_damping)
    if args.choi is not None:
        return parse_channel(f"explicit:{args.choi}")
    if args.channel is not None:
        return parse_channel(args.channel)
    return None


def _cmd_bound(args) -> int:
    if args.method == "exact":
        upper = invert_bound(TailBoundKind.EXACT, args.m, args.observed, args.eps).upper
    else:
        upper = worst_case_phase_error(Construction.parse(args.method), args.m, args.observed, args.eps)
    print(_fmt(upper))
    return EXIT_OK


def _read_stats(path: str) -> EmpiricalDistribution:
    try:
        with open(path, encoding="utf-8") as fh:
            values = [float(t) for t in fh.read().split()]
    except OSError as exc:
        raise ConfigError(f"cannot read statistics file {path!r}: {exc.strerror}") from None
    arr = np.array(values)
    if arr.size != 16:
        raise ConfigError(f"statistics file must hold 16 numbers, got {arr.size}")
    if np.all(arr == np.round(arr)) and arr.sum() > 1.5:
        return EmpiricalDistribution.from_counts(arr)
    return EmpiricalDistribution(arr, 0)


def _cmd_ambiguity(args) -> int:
    spec = _channel_from_args(args)
    if args.method == "accurate":
        if args.stats is not None:
            lam = _read_stats(args.stats)
            m = lam.m or args.m
            if m is None:
                raise ConfigError("--m is required when the statistics are probabilities")
        else:
            if spec is None:
                raise ConfigError("give a channel or --stats for the accurate method")
            if args.m is None:
                raise ConfigError("--m is required")
            m = args.m
            lam = stats_accurate(choi_of(spec))
            if not args.exact:
                lam = sample_statistics(lam, m, args.seed)
        xi = args.xi_prime if args.xi_prime is not None else xi_relative(m, 16, args.eps)
        result = min_ambiguity_accurate(lam, xi)
        if args.record:
            sys.stdout.write(result.to_text())
        else:
            print(_fmt(result.value))
        return EXIT_OK

    if args.m is None:
        raise ConfigError("--m is required")
    if args.observed is not None:
        observed = args.observed
    elif spec is not None:
        observed = float(stats_conventional(choi_of(spec)).probs[0])
    else:
        raise ConfigError("give --observed or a channel")
    print(_fmt(conventional_ambiguity(Construction.parse(args.method), args.m, observed, args.eps)))
    return EXIT_OK


def _cmd_keylength(args) -> int:
    leak = args.leak_ec
    if leak is None:
        leak = leak_model(args.n_raw, args.qber, args.efficiency) if args.qber is not None else 0.0
    delta_bar = args.delta_bar
    if args.eps_bar is not None:
        delta_bar = default_delta_bar(args.n_raw, args.eps_bar)
    params = KeyRateParams(args.n_raw, args.eps_pe, args.eps_pa, delta_bar, leak)
    print(key_length(params, args.ambiguity))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    overrides = dict(
        seed=args.seed,
        trials_per_point=args.trials,
        eps_pe=args.eps,
        conventional_fraction=args.conventional_fraction,
        methods=tuple(args.methods.replace(",", " ").split()) if args.methods else None,
        sample_sizes=tuple(int(float(v)) for v in args.sample_sizes.replace(",", " ").split())
        if args.sample_sizes else None,
        channel=_channel_from_args(args),
    )
    config = load_config(args.config, **overrides)
    rows = run_sweep(config, workers=args.workers)
    text = rows_to_json(rows) if args.format == "json" else rows_to_csv(rows)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_channel(args) -> int:
    rho = choi_of(_channel_from_args(args))
    what = args.print
    if what == "choi":
        for row in rho.entries:
            print(" ".join(_fmt(v) for v in row))
    elif what == "eigenvalues":
        print(" ".join(_fmt(v) for v in eigenvalues_sym4(rho)))
    elif what == "entropy":
        print(_fmt(cond_entropy_x_given_e(rho)))
    elif what == "conventional":
        print(_fmt(float(stats_conventional(rho).probs[0])))
    elif what == "accurate":
        for label, p in zip(accurate_outcomes(), stats_accurate(rho).probs):
            print(" ".join(str(v) for v in label), _fmt(p))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="finitekey", description="Finite-key BB84 ambiguity and key-length tools.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="worst-case phase error for one estimation method")
    p.add_argument("--method", required=True,
                   choices=["variational", "relative", "chernoff", "moment", "klar", "exact"])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--observed", type=float, required=True)
    p.add_argument("--eps", type=float, default=1e-5)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("ambiguity", help="Eve's worst-case ambiguity, conventional or accurate")
    p.add_argument("--method", required=True,
                   choices=["variational", "relative", "chernoff", "moment", "klar", "accurate"])
    p.add_argument("--m", type=int)
    p.add_argument("--observed", type=float)
    p.add_argument("--eps", type=float, default=1e-5)
    p.add_argument("--stats", metavar="FILE", help="16 probabilities or counts (accurate only)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact", action="store_true",
                   help="use the channel's exact statistics instead of a sample")
    p.add_argument("--xi-prime", type=float, help="override the relative-entropy radius")
    p.add_argument("--record", action="store_true", help="print the full optimizer record")
    _add_channel_args(p, required=False)
    p.set_defaults(func=_cmd_ambiguity)

    p = sub.add_parser("keylength", help="secure key length from an ambiguity")
    p.add_argument("--n-raw", type=int, required=True)
    p.add_argument("--ambiguity", type=float, required=True)
    p.add_argument("--eps-pe", type=float, default=1e-5)
    p.add_argument("--eps-pa", type=float, default=1e-10)
    p.add_argument("--delta-bar", type=float, default=0.0)
    p.add_argument("--eps-bar", type=float,
                   help="use delta_bar = 7 sqrt(log2(2/eps_bar)/N) instead of --delta-bar")
    p.add_argument("--leak-ec", type=float)
    p.add_argument("--qber", type=float, help="estimate leak_ec as efficiency * N * h(qber)")
    p.add_argument("--efficiency", type=float, default=1.0)
    p.set_defaults(func=_cmd_keylength)

    p = sub.add_parser("sweep", help="run a method comparison sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", metavar="FILE")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--methods")
    p.add_argument("--sample-sizes")
    p.add_argument("--conventional-fraction", type=float)
    p.add_argument("--workers", type=int, default=1)
    _add_channel_args(p, required=False)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("channel", help="print the Choi matrix or statistics of a channel")
    _add_channel_args(p, required=True)
    p.add_argument("--print", default="choi",
                   choices=["choi", "eigenvalues", "entropy", "conventional", "accurate"])
    p.set_defaults(func=_cmd_channel)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OptimizerError as exc:
        print(f"finitekey: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, TypeError) as exc:
        print(f"finitekey: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FloatingPointError as exc:
        print(f"finitekey: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
