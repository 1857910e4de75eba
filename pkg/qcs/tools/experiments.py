"""Experiment tools for the QCS MCP server.

Tools for seeded Monte Carlo runs and the numerical checks of the
distortion-rate constants.
"""

from dataclasses import asdict
from typing import Any, Dict, List, Optional

from mcp.server.fastmcp import Context

from ..bench.checks import as_rows, mismatch_check, theorem1_check, theorem3_check, verify_clt
from ..bench.experiment import run_experiment
from ..bench.report import emit_csv, emit_fig_data, summarize
from ..config.experiment import ExperimentConfig
from ..utils.decorators import handle_errors
from ..utils.validation import ValidationError
from .utilities import create_success_response


@handle_errors("run experiment")
def run_monte_carlo(
    ctx: Context,
    config: Dict[str, Any],
    workers: int = 1,
    out_dir: Optional[str] = None,
) -> Dict:
    """Run a seeded Monte Carlo experiment and summarize it.

    Args:
        ctx: MCP context
        config: Flat mapping of ExperimentConfig fields
        workers: Worker threads for the trials
        out_dir: Optional directory for records.csv, summary.csv and the figure CSVs

    Returns:
        Per (rate, quantizer, algorithm) means and standard errors
    """
    experiment = ExperimentConfig.from_dict(config)
    records = run_experiment(experiment, workers=workers)
    summaries = summarize(records)
    written = []
    if out_dir:
        written += emit_csv(records, f"{out_dir}/records.csv")
        written += emit_csv(summaries, f"{out_dir}/summary.csv")
        written += list(emit_fig_data(summaries, out_dir).values())
    return create_success_response(
        f"Ran {experiment.trials} trials, {len(records)} records",
        summaries=[asdict(s) for s in summaries],
        failures=sum(1 for r in records if r.error),
        files=[str(p) for p in written],
    )


@handle_errors("clt check")
def clt_check(ctx: Context, m: int, K: int, N: int, n_samples: int = 10000, seed: int = 0) -> Dict:
    """Kolmogorov-Smirnov distance of sqrt(m/K) Y_i from the standard normal."""
    result = verify_clt(m, K, N, n_samples, seed)
    return create_success_response("Computed KS statistic", **asdict(result))


@handle_errors("theorem check")
def theorem_check(
    ctx: Context,
    which: str,
    rates: List[int],
    design_sigma: float = 1.2,
    source_sigma: float = 1.0,
) -> Dict:
    """Numerical check of a distortion-rate constant.

    Args:
        ctx: MCP context
        which: "1" (optimal and uniform scalar), "3" (entropy coded) or "mismatch"
        rates: Rates in bits
        design_sigma: Design standard deviation for the mismatch check
        source_sigma: Source standard deviation for the mismatch check

    Returns:
        One row per rate
    """
    if which == "1":
        rows = as_rows(theorem1_check(rates))
    elif which == "3":
        rows = as_rows(theorem3_check(rates))
    elif which == "mismatch":
        rows = as_rows(mismatch_check(design_sigma, source_sigma, rate) for rate in rates)
    else:
        raise ValidationError(f"which must be '1', '3' or 'mismatch', got {which!r}")
    return create_success_response(f"Checked {len(rows)} rates", rows=rows)


def register_experiment_tools(mcp):
    """Register experiment tools with the MCP server."""
    mcp.tool()(run_monte_carlo)
    mcp.tool()(clt_check)
    mcp.tool()(theorem_check)
