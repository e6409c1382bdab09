from qharm.commands.base import BaseCommand, CommandResult
from qharm.enums.shared import ExitCode
from qharm.exceptions import ZeroDifferentialError
from qharm.oracles.finite_diff import FDConfig, fd_laplacian, modulus_power_field
from qharm.payloads.analysis import LaplacianPayload
from qharm.subharm.laplacian import laplacian_modulus_power, pointwise_threshold

# |closed form - FD| above this is a cross-check failure
ORACLE_MISMATCH_TOLERANCE = 1e-4


class LaplacianCommand(BaseCommand):
    def run(self, payload: LaplacianPayload) -> CommandResult:
        point = list(payload.point)
        u = self._load_map(payload.map_spec, dimension_hint=len(point))
        value = laplacian_modulus_power(u, point, payload.q)
        record = {"map": u.name, "point": point, "q": payload.q, "laplacian": value}
        try:
            record["pointwise_threshold"] = pointwise_threshold(u, point)
        except ZeroDifferentialError:
            record["pointwise_threshold"] = None

        exit_code = ExitCode.SUCCESS
        if payload.oracle:
            cfg = FDConfig() if payload.fd_step is None else FDConfig(h=payload.fd_step)
            oracle_value, oracle_error = fd_laplacian(modulus_power_field(u, payload.q), point, cfg)
            difference = value - oracle_value
            record.update({"oracle_value": oracle_value, "oracle_error": oracle_error, "difference": difference})
            if abs(difference) > ORACLE_MISMATCH_TOLERANCE:
                exit_code = ExitCode.CROSS_CHECK_FAILED
        return CommandResult(record, exit_code)
