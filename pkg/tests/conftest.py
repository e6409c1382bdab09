import json

import pytest

from cli import cli_parser


@pytest.fixture
def run_cli(tmp_path, capsys):
    """Run the CLI in tmp_path, returning (exit code, stdout, stderr)"""

    def run(*argv):
        with pytest.raises(SystemExit) as exit_info:
            cli_parser(tmp_path, list(argv))
        captured = capsys.readouterr()
        code = exit_info.value.code
        return (0 if code is None else code), captured.out, captured.err

    return run


@pytest.fixture
def write_json(tmp_path):
    def write(name, document):
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return path

    return write
