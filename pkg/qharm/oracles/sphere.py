import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from qharm.enums.shared import QuadratureMode, Verdict
from qharm.exceptions import InvalidParameterError, NonFiniteEvaluationError
from qharm.oracles.finite_diff import ScalarField

DEFAULT_TRAPEZOID_NODES = 256
DEFAULT_MONTE_CARLO_SAMPLES = 4096
# rounding floor added to every error estimate, in units of eps * max|f|
ROUNDING_FLOOR = 16.0


@dataclass(frozen=True)
class SphereQuadrature:
    """
    Rule for the mean of a field over a sphere.

    CIRCLE_TRAPEZOID (n = 2): `nodes` equispaced angles, error from halving.
    MONTE_CARLO (n >= 2): `nodes` seeded directions in antithetic pairs.
    All weights are equal, so the rule averages rather than integrates.
    """

    n: int
    mode: Optional[QuadratureMode] = None
    nodes: Optional[int] = None
    seed: int = 42

    def __post_init__(self):
        if self.n < 2:
            raise InvalidParameterError(f"Sphere quadrature needs n >= 2, got {self.n}.")
        mode = self.mode
        if mode is None:
            mode = QuadratureMode.CIRCLE_TRAPEZOID if self.n == 2 else QuadratureMode.MONTE_CARLO
            object.__setattr__(self, "mode", mode)
        if mode == QuadratureMode.CIRCLE_TRAPEZOID and self.n != 2:
            raise InvalidParameterError("The circle trapezoid rule only applies for n = 2.")
        if self.nodes is None:
            nodes = DEFAULT_TRAPEZOID_NODES if mode == QuadratureMode.CIRCLE_TRAPEZOID else DEFAULT_MONTE_CARLO_SAMPLES
            object.__setattr__(self, "nodes", nodes)
        if self.nodes < 4 or self.nodes % 2:
            raise InvalidParameterError(f"nodes must be an even number >= 4, got {self.nodes}.")

    def directions(self) -> np.ndarray:
        """Unit vectors, shape (nodes, n)"""
        if self.mode == QuadratureMode.CIRCLE_TRAPEZOID:
            angles = 2.0 * np.pi * np.arange(self.nodes) / self.nodes
            return np.stack([np.cos(angles), np.sin(angles)], axis=1)
        rng = np.random.default_rng(self.seed)
        half = rng.standard_normal((self.nodes // 2, self.n))
        half /= np.linalg.norm(half, axis=1)[:, None]
        # row i and row i + nodes/2 are an antithetic pair
        return np.concatenate([half, -half])

    def to_dict(self):
        return {"n": self.n, "mode": str(self.mode), "nodes": self.nodes, "seed": self.seed}


def _values_on_sphere(f: ScalarField, x: np.ndarray, r: float, directions: np.ndarray) -> np.ndarray:
    values = np.array([f(x + r * d) for d in directions], dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise NonFiniteEvaluationError(f"Field is not finite on the sphere S({x.tolist()}, {r}).")
    return values


def sphere_mean(f: ScalarField, x, r: float, quad: SphereQuadrature) -> Tuple[float, float]:
    """
    Mean of f over the sphere S(x, r).

    Returns:
        (mean, err_est): trapezoid error is |mean_M - mean_M/2|, Monte Carlo
        error is three standard errors of the antithetic pair averages.

    Raises:
        NonFiniteEvaluationError: If f is not finite at a node.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (quad.n,):
        raise InvalidParameterError(f"Expected a center with {quad.n} coordinates.")
    if not r > 0:
        raise InvalidParameterError(f"Radius must be positive, got {r}.")

    values = _values_on_sphere(f, x, r, quad.directions())
    floor = ROUNDING_FLOOR * np.finfo(np.float64).eps * float(np.max(np.abs(values)))

    if quad.mode == QuadratureMode.CIRCLE_TRAPEZOID:
        mean = math.fsum(values) / values.size
        half = math.fsum(values[::2]) / (values.size // 2)
        return mean, abs(mean - half) + floor

    pairs = 0.5 * (values[: values.size // 2] + values[values.size // 2 :])
    mean = math.fsum(pairs) / pairs.size
    standard_error = float(np.std(pairs, ddof=1)) / math.sqrt(pairs.size)
    return mean, 3.0 * standard_error + floor


def submean_check(f: ScalarField, x, r: float, quad: SphereQuadrature, tol: float = 1e-9) -> Verdict:
    """PASS when f(x) <= mean over S(x, r) + err_est + tol"""
    mean, err_est = sphere_mean(f, x, r, quad)
    center = float(f(np.asarray(x, dtype=np.float64)))
    if not math.isfinite(center):
        raise NonFiniteEvaluationError(f"Field is not finite at the center {list(x)}.")
    return Verdict.PASS if center <= mean + err_est + tol else Verdict.FAIL
