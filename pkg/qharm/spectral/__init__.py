from qharm.spectral.linalg import gram, singular_values_batch, sym_eigenvalues, sym_eigenvalues_batch
from qharm.spectral.spectral import (
    DistortionEstimate,
    SpectralData,
    distortion_at,
    global_distortion,
    spectral_at,
)
