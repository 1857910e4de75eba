"""Asymptotic distortion constants and reconstruction-distortion bounds.

Every bound is returned as a BoundReport that records the normalization it
is stated in (the factor multiplying the expected squared error) and any
caveats as flags.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, NamedTuple, Optional, Tuple, Union

from .utils.validation import validate_positive_float, validate_positive_int


SQ_NONUNIFORM = math.pi * math.sqrt(3) / 2
SQ_UNIFORM = 4 / 3 * math.log(2)
ENC_LOWER = math.pi * math.e / 6
ENC_UPPER = math.pi * math.e / 3

FLAG_ASYMPTOTIC = "asymptotic"
FLAG_UPPER_UNVERIFIED = "upper-unverified"
FLAG_LOWER_UNVERIFIED = "lower-unverified"
FLAG_ASSUMPTIONS_I_ONLY = "assumptions-I-only"
FLAG_MIXED_NORMALIZATION = "mixed-normalization"


class DomainError(ValueError):
    """A bound was evaluated outside its domain."""

    def __init__(self, inequality: str, value: float):
        self.inequality = inequality
        self.value = value
        super().__init__(f"domain violation: requires {inequality}, got {value!r}")


class Scheme(str, Enum):
    SQ = "SQ"
    USQ = "USQ"
    ENC = "ENC"
    VQ = "VQ"


class Algorithm(str, Enum):
    SP = "sp"
    BP = "bp"


@dataclass(frozen=True)
class BoundReport:
    name: str
    lower: Optional[float]
    upper: Optional[float]
    normalization: str
    flags: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.lower is not None and self.upper is not None and self.lower > self.upper:
            raise DomainError("lower <= upper", self.lower)
        object.__setattr__(self, "flags", tuple(self.flags))

    def to_row(self) -> dict:
        return {
            "name": self.name,
            "lower": self.lower,
            "upper": self.upper,
            "normalization": self.normalization,
            "flags": ";".join(self.flags),
        }


class RipDeltas(NamedTuple):
    """Restricted isometry constants feeding the reconstruction constants."""
    delta_k: float
    delta_3k: Optional[float] = None
    delta_4k: Optional[float] = None
    sampled: bool = False


class VQBounds(NamedTuple):
    first: BoundReport
    second: BoundReport
    first_upper_per_K: float
    crossover_delta: float
    first_is_smaller: bool


def sq_nonuniform_const() -> float:
    """pi sqrt(3) / 2: limit of 2^{2R}/K D* for optimal scalar quantization."""
    return SQ_NONUNIFORM


def sq_uniform_const() -> float:
    """(4/3) ln 2: limit of 2^{2R}/(K R) D* for optimal uniform quantization."""
    return SQ_UNIFORM


def sq_bounds_with_matrix(mu1: float, mu2: float) -> Tuple[BoundReport, BoundReport]:
    """Matrix-dependent measurement bounds for (nonuniform, uniform) scalar quantization.

    The uniform report carries a lower bound only.
    """
    mu1 = validate_positive_float(mu1, "mu1")
    mu2 = validate_positive_float(mu2, "mu2")
    if mu1 > mu2:
        raise DomainError("mu1 <= mu2", mu1)
    nonuniform = BoundReport("sq-nonuniform", SQ_NONUNIFORM * mu1, SQ_NONUNIFORM * mu2,
                             "2^(2R)/K * D", (FLAG_ASYMPTOTIC,))
    uniform = BoundReport("sq-uniform", SQ_UNIFORM * mu1, None, "2^(2R)/(K R) * D", (FLAG_ASYMPTOTIC,))
    return nonuniform, uniform


def enc_bounds() -> BoundReport:
    return BoundReport("enc", ENC_LOWER, ENC_UPPER, "2^(2R)/K * D", (FLAG_ASYMPTOTIC,))


def enc_optimal_step(R: float, m: int, K: int) -> float:
    """Uniform step sqrt(2 pi e K / m) 2^-R used ahead of Huffman coding."""
    R = float(R)
    m = validate_positive_int(m, "m")
    K = validate_positive_int(K, "K")
    return math.sqrt(2 * math.pi * math.e * K / m) * 2.0 ** -R


def _check_delta(delta: float, low: float, high: float, low_open: bool, name: str) -> float:
    delta = float(delta)
    ok_low = delta > low if low_open else delta >= low
    if not (ok_low and delta < high) or math.isnan(delta):
        left = "<" if low_open else "<="
        raise DomainError(f"{low} {left} {name} < {high}", delta)
    return delta


def c_bp(delta_4k: float) -> float:
    """4 / (sqrt(3 - 3 d) - sqrt(1 + d)), defined for 0 <= d < 1/2."""
    d = _check_delta(delta_4k, 0.0, 0.5, False, "delta_4K")
    return 4 / (math.sqrt(3 - 3 * d) - math.sqrt(1 + d))


def c_sp(delta_3k: float) -> float:
    """(1 + d + d^2) / (d (1 - d)), defined for 0 < d < 1."""
    d = _check_delta(delta_3k, 0.0, 1.0, True, "delta_3K")
    return (1 + d + d * d) / (d * (1 - d))


def c_lb(delta_k: float) -> float:
    """sqrt(1 - d) / (1 + d), defined for 0 <= d < 1."""
    d = _check_delta(delta_k, 0.0, 1.0, False, "delta_K")
    return math.sqrt(1 - d) / (1 + d)


def vq_bounds(delta_k: float, m: int, K: int, mu2: float) -> VQBounds:
    """Both vector-quantization upper bounds and where the first one wins.

    The first report pairs the lower bound (1 - d) under 2^{2Rm/K}/K with
    the upper bound (1 + d) under 2^{2R}/m; the second is
    (pi sqrt(3)/2) mu2 under 2^{2R}/K. With alpha = m/K the first upper
    bound is smaller iff d < (pi sqrt(3) / (2 alpha)) mu2 - 1.
    """
    d = _check_delta(delta_k, 0.0, 1.0, False, "delta_K")
    m = validate_positive_int(m, "m")
    K = validate_positive_int(K, "K")
    mu2 = validate_positive_float(mu2, "mu2")
    alpha = m / K

    first = BoundReport("vq-first", 1 - d, 1 + d,
                        "lower: 2^(2Rm/K)/K * D; upper: 2^(2R)/m * D",
                        (FLAG_ASYMPTOTIC, FLAG_MIXED_NORMALIZATION))
    second = BoundReport("vq-second", None, SQ_NONUNIFORM * mu2, "2^(2R)/K * D", (FLAG_ASYMPTOTIC,))
    crossover = SQ_NONUNIFORM / alpha * mu2 - 1
    first_upper_per_K = alpha * (1 + d)
    return VQBounds(first, second, first_upper_per_K, crossover, d < crossover)


def recon_bound_report(
    scheme: Union[Scheme, str],
    algo: Union[Algorithm, str],
    deltas: RipDeltas,
    m: int,
    K: int,
    mu1: Optional[float] = None,
    mu2: Optional[float] = None,
) -> BoundReport:
    """Reconstruction-distortion bounds: c_lb^2 and c_algo^2 times the scheme's constants.

    Without mu1/mu2 the Assumptions-I constants apply. With them the
    matrix-dependent constants apply, and USQ keeps only its lower bound.
    SP uses delta_3K and BP uses delta_4K; c_lb uses delta_K.

    Raises:
        DomainError: If a delta is outside the domain of its constant
    """
    scheme = Scheme(scheme)
    algo = Algorithm(algo)
    m = validate_positive_int(m, "m")
    K = validate_positive_int(K, "K")

    lower_c = c_lb(deltas.delta_k) ** 2
    if algo is Algorithm.SP:
        if deltas.delta_3k is None:
            raise DomainError("delta_3K given for sp", float("nan"))
        upper_c = c_sp(deltas.delta_3k) ** 2
    else:
        if deltas.delta_4k is None:
            raise DomainError("delta_4K given for bp", float("nan"))
        upper_c = c_bp(deltas.delta_4k) ** 2

    flags = [FLAG_ASYMPTOTIC]
    if deltas.sampled:
        # sampled deltas under-estimate the true constants in both directions
        flags += [FLAG_UPPER_UNVERIFIED, FLAG_LOWER_UNVERIFIED]
    with_matrix = mu1 is not None and mu2 is not None
    if with_matrix:
        mu1 = validate_positive_float(mu1, "mu1")
        mu2 = validate_positive_float(mu2, "mu2")
        if mu1 > mu2:
            raise DomainError("mu1 <= mu2", mu1)
    name = f"recon-{scheme.value.lower()}-{algo.value}"
    norm_K = "2^(2R)/K * E||X - X_hat||^2"

    if scheme is Scheme.SQ:
        lo, hi = (mu1, mu2) if with_matrix else (1.0, 1.0)
        return BoundReport(name, lower_c * SQ_NONUNIFORM * lo, upper_c * SQ_NONUNIFORM * hi, norm_K, flags)
    if scheme is Scheme.USQ:
        lo = mu1 if with_matrix else 1.0
        upper = None if with_matrix else upper_c * SQ_UNIFORM
        if not with_matrix:
            flags.append(FLAG_ASSUMPTIONS_I_ONLY)
        return BoundReport(name, lower_c * SQ_UNIFORM * lo, upper,
                           "2^(2R)/(K R) * E||X - X_hat||^2", flags)
    if scheme is Scheme.ENC:
        return BoundReport(name, lower_c * ENC_LOWER, upper_c * ENC_UPPER, norm_K, flags)

    d = deltas.delta_k
    flags.append(FLAG_MIXED_NORMALIZATION)
    return BoundReport(name, lower_c * (1 - d), upper_c * (1 + d),
                       "lower: 2^(2Rm/K)/K * E||X - X_hat||^2; upper: 2^(2R)/m * E||X - X_hat||^2", flags)


def bound_table(
    m: Optional[int] = None,
    K: Optional[int] = None,
    deltas: Optional[RipDeltas] = None,
    mu1: Optional[float] = None,
    mu2: Optional[float] = None,
) -> List[BoundReport]:
    """Every report the given inputs determine.

    Measurement-side constants are always present (matrix-dependent when
    mu1 and mu2 are given). VQ and reconstruction reports need m, K and
    deltas; SP reports need delta_3K and BP reports need delta_4K.
    """
    with_matrix = mu1 is not None and mu2 is not None
    reports = list(sq_bounds_with_matrix(mu1, mu2) if with_matrix else sq_bounds_with_matrix(1.0, 1.0))
    reports.append(enc_bounds())
    if deltas is None or m is None or K is None:
        return reports

    vq = vq_bounds(deltas.delta_k, m, K, mu2 if with_matrix else 1.0)
    reports += [vq.first, vq.second]
    for algo, delta in ((Algorithm.SP, deltas.delta_3k), (Algorithm.BP, deltas.delta_4k)):
        if delta is None:
            continue
        for scheme in Scheme:
            reports.append(recon_bound_report(scheme, algo, deltas, m, K, mu1=mu1, mu2=mu2))
    return reports
