from qharm.oracles.finite_diff import (
    FDConfig,
    central_laplacian,
    fd_laplacian,
    modulus_power_field,
    numeric_gradient,
    numeric_jacobian,
)
from qharm.oracles.sphere import SphereQuadrature, sphere_mean, submean_check
