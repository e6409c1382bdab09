from qharm.subharm.laplacian import (
    exact_bracket,
    laplacian_modulus_power,
    modulus_laplacian_identity_check,
    pointwise_threshold,
    regularized_modulus_laplacians,
)
from qharm.subharm.thresholds import (
    ThresholdPair,
    classical_exponent,
    classify_exponent,
    positive_exponents_all_subharmonic,
    thresholds,
)
from qharm.subharm.verify import (
    SampleBatch,
    SubharmonicityReport,
    evaluate_samples,
    verify_on_domain,
    verify_samples,
)
from qharm.subharm.witness import Witness, axis_point, witness
