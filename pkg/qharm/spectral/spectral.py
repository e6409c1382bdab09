from dataclasses import dataclass
from typing import Tuple

import numpy as np

from qharm.exceptions import DegeneratePointError, NoDataError, OrientationError
from qharm.polyharm.domain import DomainSpec
from qharm.polyharm.harmonic_map import HarmonicMap
from qharm.spectral.linalg import singular_values_batch


@dataclass(frozen=True)
class SpectralData:
    """Singular values of Du(x) and the norms built from them"""

    lambdas: Tuple[float, ...]
    op_norm: float
    min_stretch: float
    hs_norm: float
    jac_det: float

    @classmethod
    def from_jacobian(cls, J):
        J = np.asarray(J, dtype=np.float64)
        lambdas = tuple(float(v) for v in singular_values_batch(J[None, :, :])[0])
        return cls(
            lambdas=lambdas,
            op_norm=lambdas[-1],
            min_stretch=lambdas[0],
            hs_norm=float(np.sqrt(np.sum(J * J))),
            jac_det=float(np.linalg.det(J)),
        )

    @property
    def dimension(self):
        return len(self.lambdas)

    def to_dict(self):
        return {
            "lambdas": list(self.lambdas),
            "op_norm": self.op_norm,
            "min_stretch": self.min_stretch,
            "hs_norm": self.hs_norm,
            "jac_det": self.jac_det,
        }


@dataclass(frozen=True)
class DistortionEstimate:
    """
    k_outer_inner: minimal K with K^-1 |Du|^n <= J_u <= K l(Du)^n.
    h_linear: lambda_n / lambda_1.

    The two are different notions and are reported side by side.
    """

    k_outer_inner: float
    h_linear: float
    sample_count: int
    excluded_count: int

    def to_dict(self):
        return {
            "k_outer_inner": self.k_outer_inner,
            "h_linear": self.h_linear,
            "sample_count": self.sample_count,
            "excluded_count": self.excluded_count,
        }


def spectral_at(u: HarmonicMap, x) -> SpectralData:
    return SpectralData.from_jacobian(u.jacobian(x))


def _distortion_constants(lambdas: np.ndarray):
    """Both constants from rows of ascending singular values (all > 0)"""
    n = lambdas.shape[-1]
    product = np.prod(lambdas, axis=-1)
    outer = lambdas[..., -1] ** n / product
    inner = product / lambdas[..., 0] ** n
    k_outer_inner = np.maximum(1.0, np.maximum(outer, inner))
    h_linear = np.maximum(1.0, lambdas[..., -1] / lambdas[..., 0])
    return k_outer_inner, h_linear


def distortion_at(sd: SpectralData) -> DistortionEstimate:
    """
    Pointwise distortion constants.

    Raises:
        DegeneratePointError: lambda_1 = 0 or J_u = 0.
        OrientationError: J_u < 0.
    """
    if sd.min_stretch <= 0.0 or sd.jac_det == 0.0:
        raise DegeneratePointError("Minimal stretch is zero; the differential is singular.")
    if sd.jac_det < 0.0:
        raise OrientationError(f"Jacobian determinant {sd.jac_det:.6g} is negative.")
    k_outer_inner, h_linear = _distortion_constants(np.asarray(sd.lambdas))
    return DistortionEstimate(float(k_outer_inner), float(h_linear), 1, 0)


def global_distortion(u: HarmonicMap, dom: DomainSpec, samples: int, seed: int) -> DistortionEstimate:
    """
    Supremum of the pointwise constants over seeded domain samples.

    Points with lambda_1 < eps_degenerate are excluded and counted. |J_u| is
    used, so orientation-reversing points are measured rather than rejected.

    Raises:
        NoDataError: If every sample was excluded.
    """
    points = dom.sample(samples, seed)
    lambdas = singular_values_batch(u.jacobian_many(points))
    admitted = lambdas[:, 0] >= dom.eps_degenerate
    excluded = int(np.count_nonzero(~admitted))
    if not admitted.any():
        raise NoDataError(f"All {samples} samples were excluded as degenerate.")
    k_outer_inner, h_linear = _distortion_constants(lambdas[admitted])
    return DistortionEstimate(float(np.max(k_outer_inner)), float(np.max(h_linear)), samples, excluded)
