import numpy as np

from qharm.enums.shared import Branch
from qharm.exceptions import InvalidParameterError
from qharm.polyharm.harmonic_map import extremal_map
from qharm.subharm.thresholds import thresholds
from qharm.subharm.verify import evaluate_samples
from qharm.subharm.witness import axis_point

BISECTION_WIDTH = 1e-9


def gap_bisection(branch: Branch, n: int, K: float, samples: int = 16, width: float = BISECTION_WIDTH) -> float:
    """
    Locate the edge of the violation region of an extremal map by bisection.

    A q violates when Delta |u|^q < 0 at any of `samples` points t e_n,
    t in [1/2, 2]. Stretch searches [0, 1) and returns the smallest q found
    free of violations; compress searches (q_minus - 1, 0] and returns the
    largest one. The end at 0 counts as violating.

    Raises:
        InvalidParameterError: K <= 1 or samples < 1.
    """
    pair = thresholds(n, K)
    if pair.K <= 1:
        raise InvalidParameterError("Bisection needs K > 1; for K = 1 the gap is degenerate.")
    if samples < 1:
        raise InvalidParameterError(f"samples must be >= 1, got {samples}.")

    scales = np.linspace(0.5, 2.0, samples) if samples > 1 else np.array([1.0])
    batch = evaluate_samples(extremal_map(pair.n, pair.K, branch), scales[:, None] * axis_point(pair.n)[None, :])

    def violates(q):
        return bool(np.any(batch.laplacians(q) < 0))

    if branch == Branch.STRETCH:
        lo, hi = 0.0, 1.0
        while hi - lo > width:
            mid = 0.5 * (lo + hi)
            if violates(mid):
                lo = mid
            else:
                hi = mid
        return hi

    lo, hi = pair.q_minus - 1.0, 0.0
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if violates(mid):
            hi = mid
        else:
            lo = mid
    return lo
