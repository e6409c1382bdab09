from qharm.commands.base import BaseCommand, CommandResult
from qharm.exceptions import InvalidParameterError
from qharm.payloads.analysis import DistortionPayload
from qharm.spectral.spectral import distortion_at, global_distortion, spectral_at


class DistortionCommand(BaseCommand):
    def run(self, payload: DistortionPayload) -> CommandResult:
        if payload.point is not None:
            point = list(payload.point)
            u = self._load_map(payload.map_spec, dimension_hint=len(point))
            if len(point) != u.dimension:
                raise InvalidParameterError(f"Point {point} does not have {u.dimension} coordinates.")
            sd = spectral_at(u, point)
            record = {"map": u.name, "point": point, "spectral": sd.to_dict()}
            record["distortion"] = distortion_at(sd).to_dict()
            return CommandResult(record)

        hint = payload.domain.dimension if payload.domain is not None else None
        u = self._load_map(payload.map_spec, dimension_hint=hint)
        dom = self._domain_or_default(payload.domain, u.dimension)
        estimate = global_distortion(u, dom, self._samples(payload), self._seed(payload))
        return CommandResult({"map": u.name, "distortion": estimate.to_dict()})
