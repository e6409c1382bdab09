from qharm.commands.base import BaseCommand, CommandResult
from qharm.payloads.analysis import WitnessPayload
from qharm.subharm.witness import witness


class WitnessCommand(BaseCommand):
    def run(self, payload: WitnessPayload) -> CommandResult:
        """NoWitnessRequiredError propagates to the caller (exit 4)"""
        return CommandResult(witness(payload.n, payload.K, payload.q).to_dict())
