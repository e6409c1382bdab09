import argparse
import math

from qharm.exceptions import InvalidParameterError
from qharm.polyharm.domain import DomainSpec


class CustomHelpFormatter(argparse.RawTextHelpFormatter):
    """Custom help formatter for argparse that modifies the format of action invocations.

    Inherits from argparse.RawTextHelpFormatter and overrides the _format_action_invocation method.
    This formatter adds a comma after each option string, and removes the default metavar from the
    args string of optional arguments that have no explicit metavar specified.
    """

    def _format_action_invocation(self, action):
        if not action.option_strings or action.nargs == 0:
            return super()._format_action_invocation(action)

        default = self._get_default_metavar_for_optional(action)
        args_string = self._format_args(action, default)

        option_strings = ", ".join(action.option_strings)
        return f"{option_strings}, {args_string}"


def _validate_point(value: str):
    """
    Parses a comma separated point such as '0,1' or '0.5,-1,2'.

    Args:
        value (str): Raw argument

    Returns:
        tuple: Finite float coordinates
    """
    try:
        point = tuple(float(c) for c in value.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Invalid point: {value} (expected comma separated numbers)")
    if not all(math.isfinite(c) for c in point):
        raise argparse.ArgumentTypeError(f"Invalid point: {value} (coordinates must be finite)")
    return point


def _validate_domain(value: str):
    try:
        return DomainSpec.parse(value)
    except InvalidParameterError as e:
        raise argparse.ArgumentTypeError(str(e))


def _validate_positive_int(value: str):
    if not value.isdigit() or int(value) < 1:
        raise argparse.ArgumentTypeError(f"Expected a positive integer, got {value}")
    return int(value)


def _validate_non_negative_int(value: str):
    if not value.isdigit():
        raise argparse.ArgumentTypeError(f"Expected a non-negative integer, got {value}")
    return int(value)


def _validate_finite_float(value: str):
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected a number, got {value}")
    if not math.isfinite(number):
        raise argparse.ArgumentTypeError(f"Expected a finite number, got {value}")
    return number


def _validate_non_negative_float(value: str):
    number = _validate_finite_float(value)
    if number < 0:
        raise argparse.ArgumentTypeError(f"Expected a non-negative number, got {value}")
    return number


def _validate_positive_float(value: str):
    number = _validate_finite_float(value)
    if number <= 0:
        raise argparse.ArgumentTypeError(f"Expected a positive number, got {value}")
    return number
