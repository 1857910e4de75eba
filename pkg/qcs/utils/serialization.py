"""Plain-text file formats for matrices, signals, measurements, quantizers and codes.

Matrix files start with a header line ``m,N,mode,seed`` followed by m rows
of comma-separated values. Signals use the same layout as a 1 x N matrix
with mode ``signal``. Quantizer files hold M, the levels, and the finite
thresholds on three lines. Prefix codes are ``index:bitstring`` lines.
"""

from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from ..model import MatrixMode, MeasurementMatrix, SparseSignal
from ..quant.entropy import PrefixCode
from ..quant.scalar import ScalarQuantizer
from .validation import ValidationError


PathLike = Union[str, Path]
FLOAT_FMT = "%.17g"
SIGNAL_MODE = "signal"


def _write_table(path: PathLike, values: np.ndarray, mode: str, seed: Optional[int]) -> None:
    header = f"{values.shape[0]},{values.shape[1]},{mode},{'' if seed is None else seed}"
    np.savetxt(path, values, fmt=FLOAT_FMT, delimiter=",", header=header, comments="")


def _read_table(path: PathLike) -> Tuple[np.ndarray, str, Optional[int]]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")
    with open(path, "r") as f:
        header = f.readline().strip().split(",")
    if len(header) != 4:
        raise ValidationError(f"{path}: header must be 'm,N,mode,seed'")
    try:
        m, N = int(header[0]), int(header[1])
        seed = int(header[3]) if header[3] else None
    except ValueError:
        raise ValidationError(f"{path}: malformed header {header}")
    values = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if values.shape != (m, N):
        raise ValidationError(f"{path}: header says {m}x{N}, data is {values.shape[0]}x{values.shape[1]}")
    return values, header[2], seed


def write_matrix(phi: MeasurementMatrix, path: PathLike) -> None:
    _write_table(path, phi.entries, phi.label, phi.seed)


def read_matrix(path: PathLike) -> MeasurementMatrix:
    values, mode, seed = _read_table(path)
    quantized = mode.startswith("quantized(") and mode.endswith(")")
    if quantized:
        mode = mode[len("quantized("):-1]
    try:
        mode = MatrixMode(mode)
    except ValueError:
        raise ValidationError(f"{path}: unknown matrix mode {mode!r}")
    return MeasurementMatrix(values, mode, seed=seed, quantized=quantized)


def write_signal(x: SparseSignal, path: PathLike, seed: Optional[int] = None) -> None:
    _write_table(path, x.values[None, :], SIGNAL_MODE, seed)


def read_signal(path: PathLike) -> SparseSignal:
    values, mode, _ = _read_table(path)
    if mode != SIGNAL_MODE or values.shape[0] != 1:
        raise ValidationError(f"{path}: not a signal file")
    return SparseSignal.from_dense(values[0])


def write_vector(values, path: PathLike) -> None:
    """One value per line."""
    np.savetxt(path, np.asarray(values, dtype=float).reshape(-1, 1), fmt=FLOAT_FMT)


def read_vector(path: PathLike) -> np.ndarray:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")
    return np.loadtxt(path, ndmin=1)


def format_quantizer(q: ScalarQuantizer) -> str:
    levels = " ".join(FLOAT_FMT % v for v in q.levels)
    thresholds = " ".join(FLOAT_FMT % t for t in q.finite_thresholds)
    return f"{q.M}\n{levels}\n{thresholds}\n"


def write_quantizer(q: ScalarQuantizer, path: PathLike) -> None:
    Path(path).write_text(format_quantizer(q))


def read_quantizer(path: PathLike) -> ScalarQuantizer:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")
    lines = path.read_text().split("\n")
    try:
        M = int(lines[0])
        levels = np.array([float(v) for v in lines[1].split()])
        inner = np.array([float(v) for v in lines[2].split()]) if len(lines) > 2 else np.zeros(0)
    except (IndexError, ValueError):
        raise ValidationError(f"{path}: malformed quantizer file")
    if levels.size != M or inner.size != M - 1:
        raise ValidationError(f"{path}: expected {M} levels and {M - 1} thresholds")
    return ScalarQuantizer(levels, np.concatenate(([-np.inf], inner, [np.inf])))


def format_prefix_code(code: PrefixCode) -> str:
    return "".join(f"{symbol}:{code.codewords[symbol]}\n" for symbol in sorted(code.codewords))


def parse_prefix_code(text: str) -> PrefixCode:
    codewords = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        symbol, _, word = line.partition(":")
        try:
            codewords[int(symbol)] = word.strip()
        except ValueError:
            raise ValidationError(f"malformed prefix code line {line!r}")
    return PrefixCode(codewords)
