DEFAULT_SEED = 42
DEFAULT_SAMPLES = 4096
DEFAULT_TOL = 1e-9


class BaseArgsPayload:
    seed = None
    samples = None
    tol = None
    output_format = None
    file_output = None
    progress_mode = None


class MapArgsPayload(BaseArgsPayload):
    map_spec = None
