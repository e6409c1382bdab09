from enum import Enum


class ProgressMode(Enum):
    STANDARD = 0
    DEBUG = 1
    SILENT = 2


class OutputFormat(Enum):
    TEXT = 0
    JSON = 1
    CSV = 2

    def __str__(self):
        return self.name.lower()


class Branch(Enum):
    """Extremal linear families: diag(1,...,1,K) and diag(1,...,1,1/K)"""

    STRETCH = 0
    COMPRESS = 1

    def __str__(self):
        if self == Branch.STRETCH:
            return "stretch"
        elif self == Branch.COMPRESS:
            return "compress"


class Verdict(Enum):
    PASS = 0
    FAIL = 1
    NONE = 2

    def __str__(self):
        if self == Verdict.PASS:
            return "pass"
        elif self == Verdict.FAIL:
            return "fail"
        elif self == Verdict.NONE:
            return "none"


class ExponentRegion(Enum):
    TRIVIAL = 0
    SUBHARMONIC_ON_DOMAIN = 1
    SUBHARMONIC_OFF_ZEROS = 2
    GAP = 3

    def __str__(self):
        return self.name.lower()


class QuadratureMode(Enum):
    CIRCLE_TRAPEZOID = 0
    MONTE_CARLO = 1

    def __str__(self):
        if self == QuadratureMode.CIRCLE_TRAPEZOID:
            return "circle-trapezoid"
        elif self == QuadratureMode.MONTE_CARLO:
            return "monte-carlo"


class ExitCode(Enum):
    SUCCESS = 0
    VERIFY_FAILED = 1
    INVALID_INPUT = 2
    CROSS_CHECK_FAILED = 3
    NO_WITNESS = 4
    THEOREM_VIOLATION = 5
