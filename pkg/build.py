import os
from pathlib import Path
from subprocess import run

from qharm.utils._version import program_name
from qharm.utils.utils import get_executable_string_by_os

# scipy.stats loads its qmc engines lazily, pyinstaller cannot see them
HIDDEN_PACKAGES = ("scipy.stats",)


def build_app():
    """
    One-file executable of qharm.py under ./pyinstaller_build/dist.

    Returns:
        str: Path of the executable or a failure message.
    """
    project_root = Path(__file__).resolve().parent
    entry_script = project_root / "qharm.py"
    build_dir = project_root / "pyinstaller_build"
    build_dir.mkdir(exist_ok=True)

    cmd = ["pyinstaller", "-n", program_name, "--onefile"]
    for package in HIDDEN_PACKAGES:
        cmd.extend(["--collect-submodules", package])
    cmd.append(str(entry_script))

    # pyinstaller writes build/, dist/ and the spec file into the cwd
    previous_dir = Path.cwd()
    os.chdir(build_dir)
    try:
        job = run(cmd)
    finally:
        os.chdir(previous_dir)

    executable = build_dir / "dist" / f"{program_name}{get_executable_string_by_os()}"
    if job.returncode == 0 and executable.is_file():
        return f"\nSuccess!\nPath to exe: {executable}"
    return "Did not complete successfully"


if __name__ == "__main__":
    print(build_app())
