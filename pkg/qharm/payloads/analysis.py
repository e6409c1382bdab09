from qharm.payloads.shared import BaseArgsPayload, MapArgsPayload


class ThresholdsPayload(BaseArgsPayload):
    n = None
    K = None
    q = None


class LaplacianPayload(MapArgsPayload):
    point = None
    q = None
    oracle = None
    fd_step = None


class VerifyPayload(MapArgsPayload):
    domain = None
    q = None
    witness_points = None


class WitnessPayload(BaseArgsPayload):
    n = None
    K = None
    q = None


class DistortionPayload(MapArgsPayload):
    point = None
    domain = None
