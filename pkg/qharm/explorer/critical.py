from dataclasses import dataclass
from typing import Tuple

import numpy as np

from qharm.exceptions import NoAdmissiblePointsError
from qharm.polyharm.domain import DomainSpec
from qharm.polyharm.harmonic_map import HarmonicMap
from qharm.subharm.verify import SampleBatch, evaluate_samples


@dataclass(frozen=True)
class EmpiricalProfile:
    """Threshold range and linear dilatation of a map over its regular samples"""

    sup_t: float
    inf_t: float
    h_linear: float
    admitted: int

    def to_dict(self):
        return {"sup_t": self.sup_t, "inf_t": self.inf_t, "h_linear": self.h_linear, "admitted": self.admitted}


def empirical_profile(batch: SampleBatch) -> EmpiricalProfile:
    """
    Raises:
        NoAdmissiblePointsError: If the batch has no regular point.
    """
    regular = batch.regular_mask
    if not regular.any():
        raise NoAdmissiblePointsError(f"No admissible point among {batch.size} samples.")
    t = batch.thresholds()[regular]
    h = batch.h_linear()[regular]
    return EmpiricalProfile(
        sup_t=float(np.max(t)),
        inf_t=float(np.min(t)),
        h_linear=float(np.max(h)),
        admitted=int(np.count_nonzero(regular)),
    )


def empirical_critical_exponents(u: HarmonicMap, dom: DomainSpec, samples: int, seed: int) -> Tuple[float, float]:
    """
    (sup t, inf t) over the admitted samples of the domain.

    Raises:
        NoAdmissiblePointsError: If every sample is a zero or a degenerate point.
    """
    batch = evaluate_samples(u, dom.sample(samples, seed), dom.eps_zero, dom.eps_degenerate)
    profile = empirical_profile(batch)
    return profile.sup_t, profile.inf_t
