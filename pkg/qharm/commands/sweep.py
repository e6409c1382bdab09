from dataclasses import replace

from qharm.commands.base import BaseCommand, CommandResult
from qharm.enums.shared import ExitCode, OutputFormat
from qharm.explorer.config import SweepConfig
from qharm.explorer.sweep import SWEEP_COLUMNS, sweep
from qharm.loggers.console import ConsoleLogger
from qharm.payloads.sweep import SweepPayload


class SweepCommand(BaseCommand):
    def run(self, payload: SweepPayload) -> CommandResult:
        """
        Global --seed/--samples/--tol/--format override the config file when given.
        Exit 5 when any row outside the gap failed.
        """
        cfg = SweepConfig.load(self._resolve_path(payload.config_path))
        overrides = {}
        if payload.seed is not None:
            overrides["seed"] = payload.seed
        if payload.samples is not None:
            overrides["samples"] = payload.samples
        if payload.tol is not None:
            overrides["tol"] = payload.tol
        if payload.output_format is not None:
            overrides["output_format"] = payload.output_format
        if payload.timing:
            overrides["record_timing"] = True
        cfg = replace(cfg, **overrides)

        logger = ConsoleLogger(payload.progress_mode) if payload.progress_mode is not None else ConsoleLogger()
        table = sweep(cfg, logger)
        for row in table.theorem_violations:
            logger.info(f"Theorem violation at n={row.n} K={row.K:g} q={row.q!r} ({row.region})")

        exit_code = ExitCode.THEOREM_VIOLATION if table.theorem_violations else ExitCode.SUCCESS
        columns = SWEEP_COLUMNS if cfg.output_format == OutputFormat.CSV else None
        return CommandResult(table.to_records(cfg.output_format), exit_code, columns, cfg.output_format)
