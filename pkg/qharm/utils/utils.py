import os
import platform
import sys
from pathlib import Path
from typing import Union


def _get_working_dir():
    """
    Used to determine the correct working directory automatically.
    This way we can utilize files/relative paths easily.

    Returns:
        (Path): Current working directory
    """
    # we're in a pyinstaller bundle
    if getattr(sys, "frozen", False) and hasattr(sys, "_MEIPASS"):
        return Path(sys.executable).parent

    # we're running from a *.py file
    else:
        return Path.cwd()


def resolve_path(base_wd: Path, path: Union[str, Path, None]):
    """Resolve a user supplied path against the working directory, None stays None"""
    if path is None or str(path).strip() == "":
        return None
    path = Path(path)
    if path.is_absolute():
        return path
    return Path(base_wd / path)


def worker_count(env_var: str = "QHARM_THREADS"):
    """
    Number of worker threads allowed by the environment.

    QHARM_THREADS=0 (or unset) means automatic: one worker per CPU.

    Returns:
        int: Worker count, at least 1.
    """
    raw = os.environ.get(env_var, "0").strip()
    try:
        requested = int(raw)
    except ValueError:
        requested = 0
    if requested <= 0:
        return max(1, os.cpu_count() or 1)
    return requested


def get_executable_string_by_os():
    """Executable suffix for the current operating system"""
    if platform.system() == "Windows":
        return ".exe"
    return ""
