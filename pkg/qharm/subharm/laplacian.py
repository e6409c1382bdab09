import math
from fractions import Fraction
from typing import Iterable, List, Tuple

import numpy as np

from qharm.exceptions import InvalidParameterError, ZeroDifferentialError, ZeroModulusError
from qharm.oracles.finite_diff import numeric_jacobian
from qharm.polyharm.domain import DEFAULT_EPS_ZERO
from qharm.polyharm.harmonic_map import HarmonicMap, regularized_map
from qharm.polyharm.polynomial import to_fraction

# brackets this small next to their terms are recomputed exactly
CANCELLATION_RATIO = 1e-10
IDENTITY_CHECK_STEP = 1e-5


def check_exponent(q) -> float:
    try:
        q = float(q)
    except (TypeError, ValueError):
        raise InvalidParameterError(f"q must be a number, got {q!r}.")
    if not math.isfinite(q):
        raise InvalidParameterError(f"q must be finite, got {q}.")
    return q


def _as_point(u: HarmonicMap, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (u.dimension,):
        raise InvalidParameterError(f"Expected a point with {u.dimension} coordinates, got shape {x.shape}.")
    return x


def modulus_terms(values: np.ndarray, J: np.ndarray):
    """
    |u|^2, ||Du||^2 and |g|^2 where g = Du u (the gradient of |u|^2 / 2).

    Works on single points or stacks: values (..., n), J (..., n, n).
    """
    norm_sq = np.sum(values * values, axis=-1)
    hs_sq = np.sum(J * J, axis=(-2, -1))
    g = np.einsum("...ij,...j->...i", J, values)
    g_sq = np.sum(g * g, axis=-1)
    return norm_sq, hs_sq, g_sq


def exact_bracket(u: HarmonicMap, x, q) -> Fraction:
    """|u|^2 ||Du||^2 + (q - 2)|g|^2 in rational arithmetic at the binary value of x and q"""
    values = u.evaluate_exact(x)
    J = u.jacobian_exact(x)
    q = to_fraction(q)
    norm_sq = sum(v * v for v in values)
    hs_sq = sum(a * a for row in J for a in row)
    g_sq = sum(sum(a * v for a, v in zip(row, values)) ** 2 for row in J)
    return norm_sq * hs_sq + (q - 2) * g_sq


def modulus_power_laplacians(u: HarmonicMap, points: np.ndarray, norm_sq, hs_sq, g_sq, q: float) -> np.ndarray:
    """
    Delta |u|^q = q |u|^(q-4) [|u|^2 ||Du||^2 + (q - 2)|g|^2] at points with |u| > 0.

    Brackets that cancel below CANCELLATION_RATIO of their term magnitude are
    recomputed exactly from the polynomial coefficients, so the sign is right
    on the threshold boundaries.
    """
    norm_sq = np.asarray(norm_sq, dtype=np.float64)
    if q == 0:
        return np.zeros_like(norm_sq)
    bracket = norm_sq * hs_sq + (q - 2.0) * g_sq
    magnitude = norm_sq * hs_sq + abs(q - 2.0) * g_sq
    for i in np.flatnonzero(np.abs(bracket) <= CANCELLATION_RATIO * magnitude):
        bracket[i] = float(exact_bracket(u, points[i], q))
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        return q * norm_sq ** ((q - 4.0) / 2.0) * bracket


def laplacian_modulus_power(u: HarmonicMap, x, q: float, eps_zero: float = DEFAULT_EPS_ZERO) -> float:
    """
    Closed form Laplacian of |u|^q at x.

    Raises:
        ZeroModulusError: |u(x)| <= eps_zero.
    """
    q = check_exponent(q)
    x = _as_point(u, x)
    values = u.evaluate(x)
    norm_sq, hs_sq, g_sq = modulus_terms(values, u.jacobian(x))
    if math.sqrt(norm_sq) <= eps_zero:
        raise ZeroModulusError(f"|u(x)| = {math.sqrt(norm_sq):.3e} is within eps_zero of 0 (x is outside Omega_0).")
    return float(
        modulus_power_laplacians(
            u, x[None, :], np.array([norm_sq]), np.array([hs_sq]), np.array([g_sq]), q
        )[0]
    )


def thresholds_from_terms(norm_sq, hs_sq, g_sq) -> np.ndarray:
    """t = 2 - |u|^2 ||Du||^2 / |g|^2, -inf where g = 0"""
    g_sq = np.asarray(g_sq, dtype=np.float64)
    positive = g_sq > 0
    ratio = np.asarray(norm_sq) * np.asarray(hs_sq) / np.where(positive, g_sq, 1.0)
    return np.where(positive, 2.0 - ratio, -np.inf)


def pointwise_threshold(u: HarmonicMap, x, eps_zero: float = DEFAULT_EPS_ZERO) -> float:
    """
    The exponent t(x) where Delta |u|^q changes sign at x.

    For 0 < q < 2, Delta |u|^q(x) >= 0 exactly when q >= t(x); for q < 0
    exactly when q <= t(x).

    Raises:
        ZeroModulusError: |u(x)| <= eps_zero.
        ZeroDifferentialError: Du(x) = 0.
    """
    x = _as_point(u, x)
    norm_sq, hs_sq, g_sq = modulus_terms(u.evaluate(x), u.jacobian(x))
    if math.sqrt(norm_sq) <= eps_zero:
        raise ZeroModulusError(f"|u(x)| = {math.sqrt(norm_sq):.3e} is within eps_zero of 0.")
    if hs_sq == 0:
        raise ZeroDifferentialError("Du(x) vanishes; the threshold is undefined.")
    return float(thresholds_from_terms(norm_sq, hs_sq, g_sq))


def _direction_field(u: HarmonicMap):
    def direction(p):
        values = u.evaluate(p)
        return values / np.linalg.norm(values)

    return direction


def modulus_laplacian_identity_check(
    u: HarmonicMap, x, eps_zero: float = DEFAULT_EPS_ZERO, h: float = IDENTITY_CHECK_STEP
) -> Tuple[float, float]:
    """
    Both sides of Delta |u| = |u| ||D(u / |u|)||^2.

    lhs is the closed form at q = 1; rhs differentiates u / |u| by central
    differences using map evaluations only.

    Raises:
        ZeroModulusError: |u(x)| <= eps_zero.
    """
    lhs = laplacian_modulus_power(u, x, 1.0, eps_zero=eps_zero)
    x = _as_point(u, x)
    D = numeric_jacobian(_direction_field(u), x, h)
    rhs = float(np.linalg.norm(u.evaluate(x)) * np.sum(D * D))
    return lhs, rhs


def regularized_modulus_laplacians(
    u: HarmonicMap, x, ms: Iterable[int], eps_zero: float = DEFAULT_EPS_ZERO
) -> List[Tuple[int, float]]:
    """Delta |u_m|(x) for the shifted maps u_m = u + (1/m, 0, ..., 0)"""
    return [(int(m), laplacian_modulus_power(regularized_map(u, m), x, 1.0, eps_zero=eps_zero)) for m in ms]
