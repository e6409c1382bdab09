from qharm.polyharm.basis import harmonic_basis, harmonic_dimension
from qharm.polyharm.domain import DomainSpec
from qharm.polyharm.harmonic_map import (
    HarmonicMap,
    compose_linear,
    evaluate,
    extremal_map,
    identity_map,
    jacobian,
    linear_map,
    random_harmonic_map,
    regularized_map,
    zsquared_map,
)
from qharm.polyharm.map_io import dump_map, load_map, map_from_dict, map_to_dict, resolve_builtin
from qharm.polyharm.polynomial import Polynomial, laplacian_poly, partial_derivative
