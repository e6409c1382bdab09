import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from qharm.enums.shared import Branch
from qharm.exceptions import NoWitnessRequiredError, OracleMismatchError, TriviallySubharmonicError
from qharm.oracles.finite_diff import FDConfig, fd_laplacian, modulus_power_field
from qharm.polyharm.harmonic_map import HarmonicMap, extremal_map
from qharm.polyharm.map_io import map_to_dict
from qharm.subharm.laplacian import check_exponent, laplacian_modulus_power
from qharm.subharm.thresholds import thresholds

# relative agreement required between the closed form and the FD oracle
WITNESS_ORACLE_TOLERANCE = 1e-4


@dataclass(frozen=True)
class Witness:
    """
    An extremal map, a point on the e_n axis where |u| = 1 and the strictly
    negative Delta |u|^q there.

    axis_value is Delta |u|^q(e_n), None when it is not a finite float. Both
    values have the same sign since |u|^q is homogeneous of degree q.
    """

    map: HarmonicMap
    branch: Branch
    point: Tuple[float, ...]
    q: float
    laplacian_value: float
    oracle_value: float
    oracle_error: float
    axis_value: Optional[float] = None

    def to_dict(self):
        return {
            "branch": str(self.branch),
            "map_name": self.map.name,
            "map": map_to_dict(self.map),
            "point": list(self.point),
            "q": self.q,
            "laplacian_value": self.laplacian_value,
            "oracle_value": self.oracle_value,
            "oracle_error": self.oracle_error,
            "axis_value": self.axis_value,
        }


def axis_point(n: int) -> np.ndarray:
    """e_n"""
    point = np.zeros(n)
    point[-1] = 1.0
    return point


def unit_modulus_point(n: int, K: float, branch: Branch) -> np.ndarray:
    """t e_n with |u(t e_n)| = 1: e_n / K for the stretch map, K e_n for the compress map"""
    scale = 1.0 / K if branch == Branch.STRETCH else K
    return scale * axis_point(n)


def witness_fd_config(K: float, q: float, fd_config: FDConfig) -> FDConfig:
    """
    Step for the oracle at the unit modulus point.

    The step in the image is h / sqrt(max(1, |q|)) in both branches, which
    keeps |u|^q resolvable on the stencil for large |q|.
    """
    return replace(fd_config, h=fd_config.h / (K * math.sqrt(max(1.0, abs(q)))))


def witness(n: int, K: float, q: float, fd_config: FDConfig = FDConfig()) -> Witness:
    """
    Extremal map with Delta |u|^q < 0 on the e_n axis for q in the open gap.

    0 < q < q_plus uses diag(1, ..., 1, K); q_minus < q < 0 uses diag(1, ..., 1, 1/K).
    The value is taken where |u| = 1 so it stays finite for every |q| in the gap.

    Raises:
        TriviallySubharmonicError: q = 0.
        NoWitnessRequiredError: q outside (q_minus, q_plus).
        OracleMismatchError: The FD oracle disagrees with the closed form, or
            the closed form is not strictly negative.
    """
    q = check_exponent(q)
    pair = thresholds(n, K)
    if q == 0:
        raise TriviallySubharmonicError("|u|^0 is constant, hence subharmonic; no witness exists.")
    if not pair.q_minus < q < pair.q_plus:
        raise NoWitnessRequiredError(
            f"q = {q} is outside the open gap ({pair.q_minus}, {pair.q_plus}); "
            f"|u|^q is subharmonic for every {pair.K}-quasiregular harmonic map."
        )

    branch = Branch.STRETCH if q > 0 else Branch.COMPRESS
    u = extremal_map(pair.n, pair.K, branch)
    x = unit_modulus_point(pair.n, pair.K, branch)
    value = laplacian_modulus_power(u, x, q)
    oracle_value, oracle_error = fd_laplacian(
        modulus_power_field(u, q), x, witness_fd_config(pair.K, q, fd_config)
    )

    if not value < 0:
        raise OracleMismatchError(f"Closed form Delta |u|^q = {value!r} at {x.tolist()} is not negative inside the gap.")
    if abs(value - oracle_value) > WITNESS_ORACLE_TOLERANCE * (1.0 + abs(value)):
        raise OracleMismatchError(
            f"Closed form {value!r} and FD oracle {oracle_value!r} disagree at {x.tolist()} (q = {q})."
        )

    axis_value = laplacian_modulus_power(u, axis_point(pair.n), q)
    return Witness(
        map=u,
        branch=branch,
        point=tuple(float(c) for c in x),
        q=q,
        laplacian_value=value,
        oracle_value=oracle_value,
        oracle_error=oracle_error,
        axis_value=axis_value if math.isfinite(axis_value) else None,
    )
