import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

from qharm.enums.shared import ExitCode, OutputFormat
from qharm.exceptions import MapSchemaError
from qharm.payloads.shared import DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_TOL, BaseArgsPayload
from qharm.polyharm.domain import DomainSpec
from qharm.polyharm.harmonic_map import HarmonicMap
from qharm.polyharm.map_io import load_map, resolve_builtin
from qharm.utils.render import render
from qharm.utils.utils import resolve_path


@dataclass
class CommandResult:
    record: Union[dict, list]
    exit_code: ExitCode = ExitCode.SUCCESS
    columns: Optional[Sequence[str]] = None
    output_format: Optional[OutputFormat] = None


class BaseCommand:
    def __init__(self, base_wd: Path = None):
        self.base_wd = Path(base_wd) if base_wd is not None else Path.cwd()

    @staticmethod
    def _seed(payload: BaseArgsPayload) -> int:
        return DEFAULT_SEED if payload.seed is None else payload.seed

    @staticmethod
    def _samples(payload: BaseArgsPayload) -> int:
        return DEFAULT_SAMPLES if payload.samples is None else payload.samples

    @staticmethod
    def _tol(payload: BaseArgsPayload) -> float:
        return DEFAULT_TOL if payload.tol is None else payload.tol

    def _resolve_path(self, path: Union[str, Path]) -> Path:
        return resolve_path(self.base_wd, path)

    def _load_map(self, map_spec: str, dimension_hint: Optional[int] = None) -> HarmonicMap:
        """
        Builtin name or JSON map file.

        Raises:
            MapSchemaError: Unreadable or invalid map files.
            InvalidParameterError: Builtin names with bad parameters.
        """
        u = resolve_builtin(map_spec, dimension_hint)
        if u is not None:
            return u
        try:
            return load_map(self._resolve_path(map_spec))
        except FileNotFoundError:
            raise MapSchemaError(f"{map_spec!r} is neither a builtin map nor an existing map file.")
        except ValueError as e:
            raise MapSchemaError(str(e))

    @staticmethod
    def _domain_or_default(domain: Optional[DomainSpec], n: int) -> DomainSpec:
        return domain if domain is not None else DomainSpec.around_axis(n)

    def emit(self, result: CommandResult, payload: BaseArgsPayload):
        """Render the record and write it to --out (LF newlines) or stdout"""
        output_format = result.output_format or payload.output_format or OutputFormat.TEXT
        text = render(result.record, output_format, result.columns)
        if payload.file_output:
            output = self._resolve_path(payload.file_output)
            output.parent.mkdir(parents=True, exist_ok=True)
            with open(output, "w", encoding="utf-8", newline="\n") as out_file:
                out_file.write(text)
        else:
            sys.stdout.write(text)
            sys.stdout.flush()
