from qharm.commands.base import BaseCommand, CommandResult
from qharm.enums.shared import ExitCode
from qharm.exceptions import InvalidParameterError, NoDataError
from qharm.payloads.analysis import VerifyPayload
from qharm.spectral.spectral import global_distortion
from qharm.subharm.thresholds import classify_exponent
from qharm.subharm.verify import verify_on_domain


class VerifyCommand(BaseCommand):
    def run(self, payload: VerifyPayload) -> CommandResult:
        hint = payload.domain.dimension if payload.domain is not None else None
        u = self._load_map(payload.map_spec, dimension_hint=hint)
        dom = self._domain_or_default(payload.domain, u.dimension)
        if dom.dimension != u.dimension:
            raise InvalidParameterError(f"Domain has dimension {dom.dimension}, the map has {u.dimension}.")
        for point in payload.witness_points or []:
            if len(point) != u.dimension:
                raise InvalidParameterError(f"Witness point {point} does not have {u.dimension} coordinates.")

        samples, seed = self._samples(payload), self._seed(payload)
        report = verify_on_domain(
            u, dom, payload.q, samples, seed, tol=self._tol(payload), extra_points=payload.witness_points
        )
        if u.dimension >= 2:
            self._attach_distortion(report, u, dom, samples, seed)
        exit_code = ExitCode.SUCCESS if report.passed else ExitCode.VERIFY_FAILED
        return CommandResult(report.to_dict(), exit_code)

    @staticmethod
    def _attach_distortion(report, u, dom, samples, seed):
        """Sampled distortion and the exponent region it guarantees"""
        try:
            distortion = global_distortion(u, dom, samples, seed)
        except NoDataError:
            return
        report.extra["k_outer_inner"] = distortion.k_outer_inner
        report.extra["h_linear"] = distortion.h_linear
        report.extra["guaranteed_region"] = str(classify_exponent(u.dimension, distortion.h_linear, report.q))
