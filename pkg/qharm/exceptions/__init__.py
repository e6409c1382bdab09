class QHarmError(Exception):
    """Base class for every error raised by qharm"""


class InvalidParameterError(QHarmError):
    """Custom error class for out of range parameters (n, K, q, counts)"""


class AxisOutOfRangeError(QHarmError):
    """Custom error class for a differentiation axis outside 1..dimension"""


class RankDeficientError(QHarmError):
    """Custom error class for exactly singular linear maps"""


class NotHarmonicError(QHarmError):
    """Custom error class for map components with a nonzero Laplacian"""


class MapSchemaError(QHarmError):
    """Custom error class for map files that fail schema validation"""


class ZeroModulusError(QHarmError):
    """Custom error class for points where |u(x)| is within eps_zero of 0"""


class ZeroDifferentialError(QHarmError):
    """Custom error class for points where the differential vanishes"""


class OrientationError(QHarmError):
    """Custom error class for points with a negative Jacobian determinant"""


class DegeneratePointError(QHarmError):
    """Custom error class for points where the minimal stretch is zero"""


class NonSymmetricMatrixError(QHarmError):
    """Custom error class for eigenvalue input that is not symmetric"""


class NonFiniteEvaluationError(QHarmError):
    """Custom error class for oracle evaluations that return inf or nan"""


class NoDataError(QHarmError):
    """Custom error class for a distortion estimate where every sample was excluded"""


class NoAdmissiblePointsError(QHarmError):
    """Custom error class for a verification without a single admitted sample"""


class NoWitnessRequiredError(QHarmError):
    """Custom error class for exponents outside the open gap"""


class TriviallySubharmonicError(NoWitnessRequiredError):
    """Custom error class for q = 0, where |u|^q is constant"""


class OracleMismatchError(QHarmError):
    """Custom error class for closed form values that disagree with an oracle"""


class SweepConfigError(QHarmError):
    """Custom error class for invalid sweep configuration files"""


class DegenerateMapWarning(UserWarning):
    """Warning category for nearly singular (but usable) linear maps"""
