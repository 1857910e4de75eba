"""Summaries and CSV output of experiment records.

All files use ',' separators, '.' decimals, LF line endings and 17
significant digits, so identical runs give byte-identical files.
"""

from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Union

import pandas as pd
from loguru import logger

from .experiment import MODIFIED_ALGORITHMS, STANDARD_ALGORITHMS, TrialRecord


FLOAT_FORMAT = "%.17g"

RECORD_COLUMNS = [f.name for f in fields(TrialRecord) if f.name != "wall_time_seconds"]
TIMING_COLUMNS = ["trial_index", "rate", "quantizer_kind", "algorithm", "wall_time_seconds"]
FIG1_COLUMNS = ["rate", "quantizer", "mean_measurement_mse", "stderr"]
FIG2_COLUMNS = ["rate", "quantizer", "algorithm", "mean_reconstruction_mse", "stderr"]


@dataclass(frozen=True)
class Summary:
    rate: int
    quantizer: str
    algorithm: str
    n: int
    mean_measurement_mse: float
    stderr_measurement_mse: float
    mean_reconstruction_mse: float
    stderr_reconstruction_mse: float


SUMMARY_COLUMNS = [f.name for f in fields(Summary)]


def summarize(records: Iterable[TrialRecord]) -> List[Summary]:
    """Mean and standard error per (rate, quantizer, algorithm).

    Trials are paired across algorithms: when any algorithm failed on a
    (trial, rate, quantizer) cell, the whole cell is left out, so every
    algorithm of a group averages the same trials. The standard error uses
    ddof=1 and is 0 for a single record. Groups keep first-appearance order.
    """
    rows = [r.to_dict() for r in records]
    if not rows:
        return []
    df = pd.DataFrame(rows)
    cell = ["trial_index", "rate", "quantizer_kind"]
    failed = df.loc[df["error"].notna(), cell].drop_duplicates()
    if not failed.empty:
        flagged = df[cell].merge(failed, on=cell, how="left", indicator=True)["_merge"] == "both"
        logger.warning("summary: {} failed cells left out with their paired records", len(failed))
        df = df.loc[~flagged.to_numpy()]
    if df.empty:
        return []
    df = df.astype({"measurement_mse": float, "reconstruction_mse": float})
    grouped = df.groupby(["rate", "quantizer_kind", "algorithm"], sort=False)
    stats = grouped.agg(
        n=("measurement_mse", "size"),
        mean_measurement_mse=("measurement_mse", "mean"),
        stderr_measurement_mse=("measurement_mse", "sem"),
        mean_reconstruction_mse=("reconstruction_mse", "mean"),
        stderr_reconstruction_mse=("reconstruction_mse", "sem"),
    ).fillna(0.0)
    return [
        Summary(int(rate), kind, algorithm, int(row.n), float(row.mean_measurement_mse),
                float(row.stderr_measurement_mse), float(row.mean_reconstruction_mse),
                float(row.stderr_reconstruction_mse))
        for (rate, kind, algorithm), row in stats.iterrows()
    ]


def _write(df: pd.DataFrame, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def emit_csv(rows: Sequence[Union[TrialRecord, Summary]], path: Union[str, Path]) -> List[Path]:
    """Write records or summaries to CSV.

    Records go to ``path`` without wall times; the timings land in a
    ``timings.csv`` next to it so reruns stay byte-identical.

    Returns:
        Paths written
    """
    path = Path(path)
    if rows and isinstance(rows[0], Summary):
        return [_write(pd.DataFrame([asdict(s) for s in rows], columns=SUMMARY_COLUMNS), path)]

    data = [r.to_dict() for r in rows]
    records = pd.DataFrame(data, columns=RECORD_COLUMNS + ["wall_time_seconds"])
    written = [_write(records[RECORD_COLUMNS], path)]
    written.append(_write(records[TIMING_COLUMNS], path.with_name("timings.csv")))
    logger.debug("wrote {} records to {}", len(data), path)
    return written


def emit_fig_data(summaries: Sequence[Summary], out_dir: Union[str, Path]) -> Dict[str, Path]:
    """fig1.csv (measurement distortion), fig2a.csv (sp, bp) and fig2b.csv (qsp, qbp)."""
    out_dir = Path(out_dir)
    fig1 = []
    seen = set()
    for s in summaries:
        if (s.rate, s.quantizer) not in seen:
            seen.add((s.rate, s.quantizer))
            fig1.append([s.rate, s.quantizer, s.mean_measurement_mse, s.stderr_measurement_mse])

    def fig2(algorithms):
        return [[s.rate, s.quantizer, s.algorithm, s.mean_reconstruction_mse, s.stderr_reconstruction_mse]
                for s in summaries if s.algorithm in algorithms]

    return {
        "fig1": _write(pd.DataFrame(fig1, columns=FIG1_COLUMNS), out_dir / "fig1.csv"),
        "fig2a": _write(pd.DataFrame(fig2(STANDARD_ALGORITHMS), columns=FIG2_COLUMNS), out_dir / "fig2a.csv"),
        "fig2b": _write(pd.DataFrame(fig2(MODIFIED_ALGORITHMS), columns=FIG2_COLUMNS), out_dir / "fig2b.csv"),
    }
