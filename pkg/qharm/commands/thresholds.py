from qharm.commands.base import BaseCommand, CommandResult
from qharm.payloads.analysis import ThresholdsPayload
from qharm.subharm.thresholds import (
    classical_exponent,
    classify_exponent,
    positive_exponents_all_subharmonic,
    thresholds,
)


class ThresholdsCommand(BaseCommand):
    def run(self, payload: ThresholdsPayload) -> CommandResult:
        pair = thresholds(payload.n, payload.K)
        record = pair.to_dict()
        record["all_positive_exponents_subharmonic"] = positive_exponents_all_subharmonic(pair.n, pair.K)
        if payload.q is not None:
            record["q"] = payload.q
            record["region"] = str(classify_exponent(pair.n, pair.K, payload.q))
            record["classical_exponent"] = classical_exponent(payload.q)
        return CommandResult(record)
