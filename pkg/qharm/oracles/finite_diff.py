import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from qharm.exceptions import InvalidParameterError, NonFiniteEvaluationError

ScalarField = Callable[[np.ndarray], float]
VectorField = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FDConfig:
    """
    Finite difference settings.

    h is the base step before local scaling by max(1, |x|). With richardson the
    central Laplacian is taken at h, h/2, ... (max_levels steps) and
    extrapolated; without it only h and h/2 are used (h/2 for the error).
    """

    h: float = 1e-3
    richardson: bool = True
    max_levels: int = 3

    def __post_init__(self):
        if not self.h > 0:
            raise InvalidParameterError(f"FD step must be positive, got {self.h}.")
        if self.max_levels < 1:
            raise InvalidParameterError(f"max_levels must be >= 1, got {self.max_levels}.")


def local_step(h: float, x: np.ndarray) -> float:
    return h * max(1.0, float(np.linalg.norm(x)))


def _finite(value, x) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise NonFiniteEvaluationError(f"Field evaluated to {value} near {np.asarray(x).tolist()}.")
    return value


def central_laplacian(f: ScalarField, x, h: float) -> float:
    """sum_k (f(x + h e_k) + f(x - h e_k) - 2 f(x)) / h^2"""
    x = np.asarray(x, dtype=np.float64)
    center = _finite(f(x), x)
    total = 0.0
    for k in range(x.shape[0]):
        step = np.zeros_like(x)
        step[k] = h
        total += _finite(f(x + step), x + step) + _finite(f(x - step), x - step) - 2.0 * center
    return total / (h * h)


def fd_laplacian(f: ScalarField, x, cfg: FDConfig = FDConfig()) -> Tuple[float, float]:
    """
    Laplacian of a scalar field by central second differences.

    Returns:
        (value, err_est): err_est is the gap between the last two levels.

    Raises:
        NonFiniteEvaluationError: If f returns inf or nan at any stencil point.
    """
    x = np.asarray(x, dtype=np.float64)
    h = local_step(cfg.h, x)
    if not cfg.richardson:
        coarse = central_laplacian(f, x, h)
        fine = central_laplacian(f, x, h / 2.0)
        return coarse, abs(coarse - fine)

    levels = max(cfg.max_levels, 2)
    table = []
    for i in range(levels):
        row = [central_laplacian(f, x, h / 2.0**i)]
        for j in range(1, i + 1):
            factor = 4.0**j
            row.append(row[j - 1] + (row[j - 1] - table[i - 1][j - 1]) / (factor - 1.0))
        table.append(row)
    value = table[-1][-1]
    return value, abs(value - table[-2][-1])


def numeric_gradient(f: ScalarField, x, h: float = 1e-5) -> np.ndarray:
    """Central difference gradient with step h * max(1, |x|)"""
    x = np.asarray(x, dtype=np.float64)
    h = local_step(h, x)
    gradient = np.empty_like(x)
    for k in range(x.shape[0]):
        step = np.zeros_like(x)
        step[k] = h
        gradient[k] = (_finite(f(x + step), x) - _finite(f(x - step), x)) / (2.0 * h)
    return gradient


def numeric_jacobian(F: VectorField, x, h: float = 1e-5) -> np.ndarray:
    """Central difference Jacobian, J[i][j] = dF_j/dx_i"""
    x = np.asarray(x, dtype=np.float64)
    h = local_step(h, x)
    rows = []
    for k in range(x.shape[0]):
        step = np.zeros_like(x)
        step[k] = h
        forward = np.asarray(F(x + step), dtype=np.float64)
        backward = np.asarray(F(x - step), dtype=np.float64)
        if not (np.all(np.isfinite(forward)) and np.all(np.isfinite(backward))):
            raise NonFiniteEvaluationError(f"Field is not finite near {x.tolist()}.")
        rows.append((forward - backward) / (2.0 * h))
    return np.stack(rows)


def modulus_power_field(u, q: float) -> ScalarField:
    """
    x -> |u(x)|^q through map evaluation only.

    Raises:
        NonFiniteEvaluationError: When the power overflows or u(x) = 0 with q < 0.
    """

    def field(x):
        values = u.evaluate(x)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            value = np.power(np.dot(values, values), q / 2.0)
        return _finite(value, x)

    return field
