"""Batch command-line front end.

Subcommands: ``generate`` (synthetic benchmarks), ``select`` (bandwidth
and order selection), ``estimate`` (specific entropy rate series), and
``classic`` (ApEn-family estimators). Every run that writes an output
file also writes ``<output>.manifest.json`` echoing the full
configuration for reproducibility.

Exit codes: 0 success, 2 usage error, 3 computation error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

import numpy as np

from . import __version__, _config, classic, entropy, selection, series, synth
from .errors import SpenraError

USAGE_ERROR = 2
COMPUTE_ERROR = 3


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(output_path, args: argparse.Namespace, started: float,
                    input_path=None):
    manifest = {
        "command_line": sys.argv,
        "config": {k: v for k, v in vars(args).items() if k != "func"},
        "seed": getattr(args, "seed", None),
        "spenra_version": __version__,
        "input_digest": _sha256(input_path) if input_path else None,
        "duration_seconds": time.time() - started,
    }
    with open(str(output_path) + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, default=str)
        fh.write("\n")


def _say(args, text):
    if not args.quiet:
        print(text)


def cmd_generate(args) -> int:
    started = time.time()
    trailers = {"seed": args.seed, "system": args.system}
    if args.system == "markov2":
        s = synth.gen_markov2(synth.Markov2Params(), args.n, args.seed)
    elif args.system in ("lorenz-iei", "rossler-iei"):
        system = args.system.split("-")[0]
        theta = args.theta
        if theta is None:
            theta = synth.LORENZ_THETA if system == "lorenz" else synth.ROSSLER_THETA
        s = synth.gen_chaotic_iei(system, args.n, args.seed, theta=theta,
                                  dt=args.dt, burn_in=args.burn_in)
        trailers["theta"] = theta
    elif args.system == "concat":
        n3 = args.n // 3
        seeds = [int(sq.generate_state(1)[0]) for sq in
                 np.random.SeedSequence(args.seed).spawn(3)]
        parts = [
            synth.gen_chaotic_iei("lorenz", n3, seeds[0], dt=args.dt,
                                  burn_in=args.burn_in),
            synth.gen_chaotic_iei("rossler", n3, seeds[1], dt=args.dt,
                                  burn_in=args.burn_in),
            synth.gen_chaotic_iei("lorenz", args.n - 2 * n3, seeds[2],
                                  dt=args.dt, burn_in=args.burn_in),
        ]
        s = synth.concatenate(parts)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(args.system)
    series.write_csv(s, args.output, trailers=trailers)
    _write_manifest(args.output, args, started)
    _say(args, f"wrote {len(s)} rows to {args.output}")
    return 0


def cmd_select(args) -> int:
    started = time.time()
    s = series.read_csv(args.input)
    config = series.EstimationConfig(
        max_order=args.max_p, block_half_width=args.l, rng_seed=args.seed
    )
    report = selection.select_order(s, config)
    report.to_csv(args.output)
    _write_manifest(args.output, args, started, input_path=args.input)
    print(f"chosen_order={report.chosen_order}")
    return 0


def _parse_bandwidths(spec_text: str, p: int) -> np.ndarray:
    """Convert the table-ordered list k0,k-1,...,k-p to internal order."""
    parts = [float(c) for c in spec_text.split(",")]
    if len(parts) != p + 1:
        raise ValueError(f"--bandwidths needs {p + 1} values for --p {p}")
    k0, past_new_to_old = parts[0], parts[1:]
    return np.array(past_new_to_old[::-1] + [k0])


def cmd_estimate(args) -> int:
    started = time.time()
    s = series.read_csv(args.input)
    if args.auto:
        config = series.EstimationConfig(
            max_order=args.max_p, block_half_width=args.l, rng_seed=args.seed
        )
        report = selection.select_order(s, config)
        p = report.chosen_order
        k = report.chosen_bandwidths()
        _say(args, f"chosen_order={p}")
    else:
        p = args.p
        k = _parse_bandwidths(args.bandwidths, p)
    e = entropy.specific_entropy_series(s, p, k)
    windowed = None
    if args.window is not None:
        windowed = entropy.windowed_average(e, args.window)
    entropy.write_csv(e, args.output, source=s, windowed=windowed)
    _write_manifest(args.output, args, started, input_path=args.input)
    print(f"time_averaged={entropy.time_averaged_rate(e):.6g}")
    return 0


def cmd_classic(args) -> int:
    started = time.time()
    s = series.read_csv(args.input)
    fn = {
        "apen": classic.apen,
        "sampen": classic.sampen,
        "phi-norm": classic.phi_normalized,
        "loo-rate": classic.loo_entropy_rate_uniform,
    }[args.estimator]
    value = fn(s, args.p, args.r)
    line = f"{args.estimator},{args.p},{args.r:.6g},{value:.6g}"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(line + "\n")
        _write_manifest(args.output, args, started, input_path=args.input)
    print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spenra",
        description="Specific entropy rate estimation for scalar time series.",
    )

    def add_common(sub):
        sub.add_argument("--seed", type=int, default=0)
        sub.add_argument("--threads", type=int, default=None,
                         help="cap worker threads (default: all cores)")
        sub.add_argument("--quiet", action="store_true")

    subs = parser.add_subparsers(dest="command", required=True)

    g = subs.add_parser("generate", help="generate a synthetic benchmark series")
    g.add_argument("--system", required=True,
                   choices=["markov2", "lorenz-iei", "rossler-iei", "concat"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--theta", type=float, default=None)
    g.add_argument("--dt", type=float, default=synth.DEFAULT_DT)
    g.add_argument("--burn-in", type=float, default=synth.DEFAULT_BURN_IN)
    g.add_argument("--output", required=True)
    add_common(g)
    g.set_defaults(func=cmd_generate)

    sel = subs.add_parser("select", help="cross-validated bandwidth/order selection")
    sel.add_argument("--input", required=True)
    sel.add_argument("--max-p", type=int, default=12)
    sel.add_argument("--l", type=int, default=50)
    sel.add_argument("--output", required=True)
    add_common(sel)
    sel.set_defaults(func=cmd_select)

    est = subs.add_parser("estimate", help="specific entropy rate series")
    est.add_argument("--input", required=True)
    est.add_argument("--p", type=int, default=None)
    est.add_argument("--bandwidths", type=str, default=None,
                     help="comma-separated k0,k-1,...,k-p (future first)")
    est.add_argument("--auto", action="store_true",
                     help="run order/bandwidth selection first")
    est.add_argument("--max-p", type=int, default=12)
    est.add_argument("--l", type=int, default=50)
    est.add_argument("--window", type=float, default=None,
                     help="uniform-kernel moving-average window (time units)")
    est.add_argument("--output", required=True)
    add_common(est)
    est.set_defaults(func=cmd_estimate)

    cl = subs.add_parser("classic", help="ApEn-family estimators")
    cl.add_argument("--input", required=True)
    cl.add_argument("--estimator", required=True,
                    choices=["apen", "sampen", "phi-norm", "loo-rate"])
    cl.add_argument("--p", type=int, required=True)
    cl.add_argument("--r", type=float, required=True)
    cl.add_argument("--output", default=None)
    add_common(cl)
    cl.set_defaults(func=cmd_classic)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "estimate" and not args.auto:
        if args.p is None or args.bandwidths is None:
            parser.error("estimate needs either --auto or both --p and --bandwidths")
        if len(args.bandwidths.split(",")) != args.p + 1:
            parser.error(f"--bandwidths needs {args.p + 1} values for --p {args.p}")
    _config.set_n_jobs(args.threads)
    try:
        return args.func(args)
    except (SpenraError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return COMPUTE_ERROR


if __name__ == "__main__":
    sys.exit(main())
