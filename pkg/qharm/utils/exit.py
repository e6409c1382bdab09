import sys
from typing import Union

from qharm.enums.shared import ExitCode


def _exit_application(msg: str, exit_code: Union[ExitCode, int] = ExitCode.SUCCESS):
    """A clean way to exit the program without raising traceback errors

    Args:
        msg (str): Success or Error message you'd like to display in the console,
            an empty message prints nothing
        exit_code (ExitCode): 0 prints to stdout, every other code to stderr
    """
    exit_code = ExitCode(exit_code)

    if exit_code == ExitCode.SUCCESS:
        output = sys.stdout
    else:
        output = sys.stderr

    if msg:
        print(msg, file=output)
    sys.exit(exit_code.value)
