import math
from dataclasses import dataclass
from numbers import Integral

from qharm.enums.shared import ExponentRegion
from qharm.exceptions import InvalidParameterError


@dataclass(frozen=True)
class ThresholdPair:
    """
    Critical exponents for K-quasiregular harmonic maps in dimension n.

    |u|^q is subharmonic on the domain for q >= q_plus and off the zero set of u
    for q <= q_minus. The open interval (q_minus, q_plus) minus {0} is the gap.
    """

    n: int
    K: float
    q_plus: float
    q_minus: float

    @property
    def gap(self):
        return self.q_minus, self.q_plus

    def in_gap(self, q: float) -> bool:
        return self.q_minus < q < self.q_plus and q != 0

    def to_dict(self):
        return {
            "n": self.n,
            "K": self.K,
            "q_plus": self.q_plus,
            "q_minus": self.q_minus,
            "gap": [self.q_minus, self.q_plus],
        }


def _check_dimension_and_dilatation(n, K):
    if not isinstance(n, Integral) or isinstance(n, bool) or n < 2:
        raise InvalidParameterError(f"n must be an integer >= 2, got {n!r}.")
    try:
        K = float(K)
    except (TypeError, ValueError):
        raise InvalidParameterError(f"K must be a number, got {K!r}.")
    if not math.isfinite(K) or K < 1:
        raise InvalidParameterError(f"K must be a finite number >= 1, got {K}.")
    return int(n), K


def thresholds(n: int, K: float) -> ThresholdPair:
    """
    q_plus = max(1 - (n - 1) / K^2, 0) and q_minus = 1 - (n - 1) K^2.

    Raises:
        InvalidParameterError: n < 2 or K < 1.
    """
    n, K = _check_dimension_and_dilatation(n, K)
    q_plus = max(1.0 - (n - 1) / (K * K), 0.0)
    q_minus = 1.0 - (n - 1) * (K * K)
    return ThresholdPair(n=n, K=K, q_plus=q_plus, q_minus=q_minus)


def classify_exponent(n: int, K: float, q: float) -> ExponentRegion:
    pair = thresholds(n, K)
    if q == 0:
        return ExponentRegion.TRIVIAL
    if q >= pair.q_plus:
        return ExponentRegion.SUBHARMONIC_ON_DOMAIN
    if q <= pair.q_minus:
        return ExponentRegion.SUBHARMONIC_OFF_ZEROS
    return ExponentRegion.GAP


def positive_exponents_all_subharmonic(n: int, K: float) -> bool:
    """True when K <= sqrt(n - 1), i.e. q_plus = 0"""
    n, K = _check_dimension_and_dilatation(n, K)
    return K * K <= n - 1


def classical_exponent(q: float) -> bool:
    """q >= 1: |u|^q is subharmonic for every harmonic u, whatever its distortion"""
    return q >= 1
