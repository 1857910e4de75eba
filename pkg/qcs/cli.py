"""Command-line entry point: ``qcs <subcommand>``.

Toolkit errors print one line on stderr and exit with status 2.
"""

import argparse
import math
import sys
from dataclasses import asdict, replace
from pathlib import Path
from typing import List, Optional, Sequence

import pandas as pd
from loguru import logger

from .bench.checks import as_rows, mismatch_check, theorem1_check, theorem3_check, verify_clt
from .bench.experiment import entropy_coded_design, run_experiment
from .bench.report import FLOAT_FORMAT, emit_csv, emit_fig_data, summarize
from .bounds import RipDeltas, bound_table
from .config.experiment import ExperimentConfig
from .config.settings import get_settings, load_settings_from_yaml
from .model import RipMode, mu1, mu2, rip_delta
from .quant.scalar import (
    Companding,
    GaussianSource,
    KMeansPlusPlusLike,
    SampleSource,
    UniformSpread,
    box_region,
    lloyd_design,
    uniform_design,
)
from .recon.basis_pursuit import bp_reconstruct, qbp_reconstruct
from .recon.subspace_pursuit import qsp_reconstruct, sp_reconstruct
from .utils.decorators import classify_error
from .utils.logs import configure_logging
from .utils.serialization import (
    format_prefix_code,
    format_quantizer,
    read_matrix,
    read_quantizer,
    read_vector,
)
from .utils.validation import ValidationError


EXIT_TOOLKIT_ERROR = 2

LLOYD_INITS = {
    "auto": lambda seed: None,
    "uniform-spread": lambda seed: UniformSpread(),
    "kmeans++": KMeansPlusPlusLike,
    "companding": lambda seed: Companding(),
}


def _write_table(rows: Sequence[dict], out=None) -> None:
    pd.DataFrame(list(rows)).to_csv(out or sys.stdout, index=False, float_format=FLOAT_FORMAT,
                                    lineterminator="\n")


def cmd_experiment(args) -> int:
    config = ExperimentConfig.from_file(args.config)
    out = Path(args.out)
    records = run_experiment(config, workers=args.workers)
    summaries = summarize(records)
    emit_csv(records, out / "records.csv")
    emit_csv(summaries, out / "summary.csv")
    emit_fig_data(summaries, out)
    failures = sum(1 for r in records if r.error)
    print(f"records={len(records)} failures={failures} out={out}")
    return 0


def cmd_design_quantizer(args) -> int:
    if args.samples:
        source = SampleSource(read_vector(args.samples))
    else:
        sigma = math.sqrt(args.k / args.m) if args.m and args.k else args.sigma
        source = GaussianSource(sigma)
    M = 2 ** args.rate

    code = None
    if args.kind == "lloyd":
        q = lloyd_design(source, M, init=LLOYD_INITS[args.init](args.seed)).quantizer
    elif args.kind == "uniform":
        q = uniform_design(source, M).quantizer
    else:
        sigma = source.sigma if isinstance(source, GaussianSource) else source.std
        step = math.sqrt(2 * math.pi * math.e) * sigma * 2.0 ** -args.rate
        q, code = entropy_coded_design(source, step)

    text = format_quantizer(q)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if code is not None:
        code_text = format_prefix_code(code)
        if args.code_out:
            Path(args.code_out).write_text(code_text)
        elif not args.out:
            sys.stdout.write(code_text)
    return 0


def cmd_reconstruct(args) -> int:
    phi = read_matrix(args.matrix)
    y = read_vector(args.measurements)
    settings = get_settings()
    box = None
    if args.algo in ("qsp", "qbp"):
        if not args.quantizer:
            raise ValidationError(f"--quantizer is required for {args.algo}")
        q = read_quantizer(args.quantizer)
        box = box_region(q, q.index(y))
    if args.algo in ("sp", "qsp") and args.k is None:
        raise ValidationError(f"--k is required for {args.algo}")

    if args.algo == "sp":
        result = sp_reconstruct(phi, y, args.k, max_iter=args.max_iter)
    elif args.algo == "qsp":
        result = qsp_reconstruct(phi, box, y, args.k, max_iter=args.max_iter, tol=args.tol)
    else:
        solver = settings.solver
        if args.tol is not None:
            solver = replace(solver, eps_feas=args.tol)
        if args.max_iter is not None:
            solver = replace(solver, max_iter=args.max_iter)
        result = bp_reconstruct(phi, y, solver) if args.algo == "bp" else qbp_reconstruct(phi, box, solver)

    if args.algo in ("sp", "qsp"):
        x_hat, residual = result.signal.values, result.trace[-1].residual_norm
    else:
        x_hat, residual = result.x, result.primal_residual
    for value in x_hat:
        print(FLOAT_FORMAT % value)
    print(f"converged={str(bool(result.converged)).lower()} iters={result.iterations} residual={residual:.6g}")
    return 0


def _deltas_from_matrix(args, phi) -> RipDeltas:
    """delta_K, delta_3K and delta_4K; orders above N are left out."""
    mode = RipMode(args.rip_mode)
    estimates = {}
    for order in (args.k, 3 * args.k, 4 * args.k):
        if order <= phi.N:
            estimates[order] = rip_delta(phi, order, mode=mode, trials=args.trials, seed=args.seed)
    return RipDeltas(
        estimates[args.k].delta,
        estimates[3 * args.k].delta if 3 * args.k in estimates else None,
        estimates[4 * args.k].delta if 4 * args.k in estimates else None,
        sampled=mode is RipMode.SAMPLED,
    )


def cmd_bounds(args) -> int:
    m, K = args.m, args.k
    mu_1, mu_2 = args.mu1, args.mu2
    deltas = None
    if args.matrix:
        phi = read_matrix(args.matrix)
        if K is None:
            raise ValidationError("--k is required with --matrix")
        m = phi.m
        mu_1, mu_2 = mu1(phi), mu2(phi, K)
        deltas = _deltas_from_matrix(args, phi)
    elif args.delta_k is not None:
        deltas = RipDeltas(args.delta_k, args.delta_3k, args.delta_4k, sampled=args.sampled)

    reports = bound_table(m, K, deltas, mu_1, mu_2)
    _write_table(report.to_row() for report in reports)
    return 0


def cmd_clt_check(args) -> int:
    result = verify_clt(args.m, args.k, args.n, args.samples, args.seed)
    _write_table([asdict(result)])
    return 0


def cmd_theorem_check(args) -> int:
    if args.which == "1":
        rows = as_rows(theorem1_check(args.rates, n_samples=args.samples, seed=args.seed))
    elif args.which == "3":
        rows = as_rows(theorem3_check(args.rates, sigma=args.sigma))
    else:
        rows = as_rows(mismatch_check(args.design_sigma, args.source_sigma, rate, slack=args.slack)
                       for rate in args.rates)
    _write_table(rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcs", description="Quantized compressive sensing toolkit")
    parser.add_argument("--settings", type=Path, help="YAML settings file")
    parser.add_argument("--log-level", help="Override the configured log level")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("experiment", help="Run a seeded Monte Carlo experiment")
    p.add_argument("--config", type=Path, required=True, help="Flat JSON/YAML ExperimentConfig")
    p.add_argument("--out", default="results", help="Output directory")
    p.add_argument("--workers", type=int, default=1, help="Worker threads")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("design-quantizer", help="Design a scalar quantizer")
    p.add_argument("--kind", choices=("lloyd", "uniform", "entropy"), default="lloyd")
    p.add_argument("--rate", type=int, required=True, help="Bits; lloyd and uniform use 2^rate levels")
    p.add_argument("--sigma", type=float, default=1.0, help="Gaussian source standard deviation")
    p.add_argument("--m", type=int, help="With --k, use sigma = sqrt(K/m)")
    p.add_argument("--k", type=int)
    p.add_argument("--samples", type=Path, help="Training samples, one per line")
    p.add_argument("--init", choices=sorted(LLOYD_INITS), default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, help="Quantizer file (stdout when omitted)")
    p.add_argument("--code-out", type=Path, help="Prefix code file for the entropy kind")
    p.set_defaults(func=cmd_design_quantizer)

    p = sub.add_parser("reconstruct", help="Recover a sparse signal")
    p.add_argument("--matrix", type=Path, required=True)
    p.add_argument("--measurements", type=Path, required=True)
    p.add_argument("--algo", choices=("sp", "bp", "qsp", "qbp"), required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--quantizer", type=Path, help="Quantizer file (qsp and qbp)")
    p.add_argument("--tol", type=float, help="Projection tolerance (qsp) or feasibility tolerance (bp, qbp)")
    p.add_argument("--max-iter", type=int)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("bounds", help="Print bound reports as CSV")
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--delta-k", type=float)
    p.add_argument("--delta-3k", type=float)
    p.add_argument("--delta-4k", type=float)
    p.add_argument("--mu1", type=float)
    p.add_argument("--mu2", type=float)
    p.add_argument("--sampled", action="store_true", help="Deltas come from sampled supports")
    p.add_argument("--matrix", type=Path, help="Derive mu1, mu2 and the deltas from a matrix file")
    p.add_argument("--rip-mode", choices=[mode.value for mode in RipMode], default=RipMode.SAMPLED.value)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("clt-check", help="KS distance of sqrt(m/K) Y_i from N(0, 1)")
    p.add_argument("--m", type=int, default=128)
    p.add_argument("--k", type=int, default=6)
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_clt_check)

    p = sub.add_parser("theorem-check", help="Numerical checks of the distortion-rate constants")
    p.add_argument("which", choices=("1", "3", "mismatch"))
    p.add_argument("--rates", type=int, nargs="+", default=[8, 10])
    p.add_argument("--samples", type=int, default=0, help="Monte Carlo samples for the Lloyd check")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--design-sigma", type=float, default=1.2)
    p.add_argument("--source-sigma", type=float, default=1.0)
    p.add_argument("--slack", type=float, default=1.05)
    p.set_defaults(func=cmd_theorem_check)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = load_settings_from_yaml(args.settings) if args.settings else get_settings()
        logging_config = settings.logging
        if args.log_level:
            logging_config = replace(logging_config, level=args.log_level.upper())
        configure_logging(logging_config, debug=settings.debug)
        return args.func(args)
    except Exception as e:
        if classify_error(e) is None:
            raise
        logger.debug("{} failed: {!r}", args.command, e)
        print(f"qcs {args.command}: {e}", file=sys.stderr)
        return EXIT_TOOLKIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
