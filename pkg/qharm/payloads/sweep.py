from qharm.payloads.shared import BaseArgsPayload


class SweepPayload(BaseArgsPayload):
    config_path = None
    timing = None
