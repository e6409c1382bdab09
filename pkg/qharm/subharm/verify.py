from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from qharm.enums.shared import Verdict
from qharm.exceptions import InvalidParameterError, NoAdmissiblePointsError
from qharm.polyharm.domain import DEFAULT_EPS_DEGENERATE, DEFAULT_EPS_ZERO, DomainSpec
from qharm.polyharm.harmonic_map import HarmonicMap
from qharm.spectral.linalg import singular_values_batch
from qharm.subharm.laplacian import (
    check_exponent,
    modulus_power_laplacians,
    modulus_terms,
    thresholds_from_terms,
)

DEFAULT_VIOLATION_CAP = 16


@dataclass
class SampleBatch:
    """
    Everything about a map at a fixed set of points that does not depend on q.

    zero points (|u| <= eps_zero) are never fed to the closed form; degenerate
    points (lambda_1 < eps_degenerate) are still checked for Delta but are left
    out of the threshold and dilatation statistics.
    """

    map: HarmonicMap
    points: np.ndarray
    norm_sq: np.ndarray
    hs_sq: np.ndarray
    g_sq: np.ndarray
    lambdas: np.ndarray
    eps_zero: float = DEFAULT_EPS_ZERO
    eps_degenerate: float = DEFAULT_EPS_DEGENERATE

    @property
    def size(self):
        return self.points.shape[0]

    @property
    def zero_mask(self) -> np.ndarray:
        return np.sqrt(self.norm_sq) <= self.eps_zero

    @property
    def degenerate_mask(self) -> np.ndarray:
        return ~self.zero_mask & (self.lambdas[:, 0] < self.eps_degenerate)

    @property
    def regular_mask(self) -> np.ndarray:
        """Points admitted to threshold statistics"""
        return ~self.zero_mask & ~self.degenerate_mask

    def thresholds(self) -> np.ndarray:
        """t(x) at regular points (nan elsewhere)"""
        t = np.full(self.size, np.nan)
        regular = self.regular_mask
        t[regular] = thresholds_from_terms(self.norm_sq[regular], self.hs_sq[regular], self.g_sq[regular])
        return t

    def h_linear(self) -> np.ndarray:
        """lambda_n / lambda_1 at regular points (nan elsewhere)"""
        h = np.full(self.size, np.nan)
        regular = self.regular_mask
        h[regular] = self.lambdas[regular, -1] / self.lambdas[regular, 0]
        return h

    def laplacians(self, q: float) -> np.ndarray:
        """Delta |u|^q at every point; zeros get the continuous extension for q >= 2, nan otherwise"""
        q = check_exponent(q)
        values = np.full(self.size, np.nan)
        nonzero = ~self.zero_mask
        values[nonzero] = modulus_power_laplacians(
            self.map,
            self.points[nonzero],
            self.norm_sq[nonzero],
            self.hs_sq[nonzero],
            self.g_sq[nonzero],
            q,
        )
        if q > 2:
            values[~nonzero] = 0.0
        elif q == 2:
            values[~nonzero] = 2.0 * self.hs_sq[~nonzero]
        return values


def evaluate_samples(
    u: HarmonicMap,
    points,
    eps_zero: float = DEFAULT_EPS_ZERO,
    eps_degenerate: float = DEFAULT_EPS_DEGENERATE,
) -> SampleBatch:
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] < 1 or points.shape[1] != u.dimension:
        raise InvalidParameterError(f"Expected a non-empty (m, {u.dimension}) point array, got {points.shape}.")
    values = u.evaluate_many(points)
    J = u.jacobian_many(points)
    norm_sq, hs_sq, g_sq = modulus_terms(values, J)
    return SampleBatch(
        map=u,
        points=points,
        norm_sq=norm_sq,
        hs_sq=hs_sq,
        g_sq=g_sq,
        lambdas=singular_values_batch(J),
        eps_zero=eps_zero,
        eps_degenerate=eps_degenerate,
    )


@dataclass
class SubharmonicityReport:
    q: float
    verdict: Verdict
    min_laplacian: float
    violation_points: List[Tuple[Tuple[float, ...], float]]
    violation_count: int
    sup_t: float
    inf_t: float
    sampled: int
    excluded_zero: int
    excluded_degenerate: int
    flagged_zero: int = 0
    mandated_zero: int = 0
    map_name: Optional[str] = None
    tol: float = 1e-9
    extra: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.verdict == Verdict.PASS

    def to_dict(self):
        report = {
            "map": self.map_name,
            "q": self.q,
            "tol": self.tol,
            "verdict": str(self.verdict),
            "min_laplacian": self.min_laplacian,
            "violation_count": self.violation_count,
            "violation_points": [{"point": list(p), "laplacian": v} for p, v in self.violation_points],
            "sup_t": self.sup_t,
            "inf_t": self.inf_t,
            "sampled": self.sampled,
            "excluded_zero": self.excluded_zero,
            "excluded_degenerate": self.excluded_degenerate,
            "flagged_zero": self.flagged_zero,
            "mandated_zero": self.mandated_zero,
        }
        report.update(self.extra)
        return report


def verify_samples(
    batch: SampleBatch, q: float, tol: float = 1e-9, violation_cap: int = DEFAULT_VIOLATION_CAP
) -> SubharmonicityReport:
    """
    Check Delta |u|^q >= -tol at every evaluated point of the batch.

    Zeros of u are skipped for 0 < q < 2 (excluded_zero) and for q <= 0, where
    |u|^q is undefined on u^-1(0) (mandated_zero). For q >= 2 they are evaluated
    through the continuous extension (flagged_zero). Violations are listed in
    sample order, at most violation_cap of them; violation_count is the total.

    Raises:
        NoAdmissiblePointsError: If no point could be evaluated.
    """
    q = check_exponent(q)
    if tol < 0:
        raise InvalidParameterError(f"tol must be >= 0, got {tol}.")
    zero = batch.zero_mask
    zero_count = int(np.count_nonzero(zero))
    evaluated = ~zero if q < 2 else np.ones(batch.size, dtype=bool)
    if not evaluated.any():
        raise NoAdmissiblePointsError(f"All {batch.size} samples are zeros of u (|u| <= {batch.eps_zero}).")

    laplacians = batch.laplacians(q)
    with np.errstate(invalid="ignore"):
        violating = evaluated & (laplacians < -tol)
    violation_indices = np.flatnonzero(violating)
    violation_points = [
        (tuple(float(c) for c in batch.points[i]), float(laplacians[i]))
        for i in violation_indices[:violation_cap]
    ]

    t = batch.thresholds()
    regular = batch.regular_mask
    if regular.any():
        sup_t, inf_t = float(np.max(t[regular])), float(np.min(t[regular]))
    else:
        sup_t = inf_t = float("nan")

    return SubharmonicityReport(
        q=q,
        verdict=Verdict.FAIL if violation_indices.size else Verdict.PASS,
        min_laplacian=float(np.min(laplacians[evaluated])),
        violation_points=violation_points,
        violation_count=int(violation_indices.size),
        sup_t=sup_t,
        inf_t=inf_t,
        sampled=batch.size,
        excluded_zero=zero_count if 0 < q < 2 else 0,
        excluded_degenerate=int(np.count_nonzero(batch.degenerate_mask)),
        flagged_zero=zero_count if q >= 2 else 0,
        mandated_zero=zero_count if q <= 0 else 0,
        map_name=batch.map.name,
        tol=tol,
    )


def verify_on_domain(
    u: HarmonicMap,
    dom: DomainSpec,
    q: float,
    samples: int,
    seed: int,
    tol: float = 1e-9,
    extra_points=None,
    violation_cap: int = DEFAULT_VIOLATION_CAP,
) -> SubharmonicityReport:
    """
    Sample the domain (seeded Halton) and check subharmonicity of |u|^q.

    extra_points are appended after the quasi-random samples.
    """
    if dom.dimension != u.dimension:
        raise InvalidParameterError(f"Domain dimension {dom.dimension} does not match map dimension {u.dimension}.")
    points = dom.sample(samples, seed)
    if extra_points is not None and len(extra_points):
        points = np.concatenate([points, np.asarray(extra_points, dtype=np.float64).reshape(-1, u.dimension)])
    batch = evaluate_samples(u, points, eps_zero=dom.eps_zero, eps_degenerate=dom.eps_degenerate)
    return verify_samples(batch, q, tol=tol, violation_cap=violation_cap)
