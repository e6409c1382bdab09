import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qharm.enums.shared import Branch, ExponentRegion, Verdict
from qharm.exceptions import (
    InvalidParameterError,
    NoAdmissiblePointsError,
    NoWitnessRequiredError,
    TriviallySubharmonicError,
    ZeroDifferentialError,
    ZeroModulusError,
)
from qharm.oracles.finite_diff import FDConfig, fd_laplacian, modulus_power_field
from qharm.polyharm import (
    DomainSpec,
    compose_linear,
    extremal_map,
    identity_map,
    random_harmonic_map,
    regularized_map,
    zsquared_map,
)
from qharm.subharm import (
    classical_exponent,
    classify_exponent,
    evaluate_samples,
    exact_bracket,
    laplacian_modulus_power,
    modulus_laplacian_identity_check,
    pointwise_threshold,
    positive_exponents_all_subharmonic,
    regularized_modulus_laplacians,
    thresholds,
    verify_on_domain,
    verify_samples,
    witness,
)
from qharm.subharm.witness import axis_point

GRID = [(n, K) for n in (2, 3, 4) for K in (1.5, 2.0, 3.0)]


def stretch_value(n, K, q):
    return q * K ** (q - 2) * (n - 1 + (q - 1) * K * K)


# thresholds


def test_plane_threshold_formula():
    for j in range(20):
        K = 1.0 + 9.0 * j / 19
        pair = thresholds(2, K)
        assert abs(pair.q_plus - (1 - 1 / (K * K))) <= math.ulp(1.0)
        exact = 1 - 1 / Fraction(K) ** 2
        assert abs(Fraction(pair.q_plus) - exact) <= 2 * Fraction(math.ulp(1.0))


@pytest.mark.parametrize("n", range(2, 7))
def test_thresholds_without_distortion(n):
    pair = thresholds(n, 1)
    assert (pair.q_plus, pair.q_minus) == (0.0, 2.0 - n)


def test_thresholds_examples():
    assert thresholds(3, 1).gap == (-1.0, 0.0)
    assert thresholds(2, 1).gap == (0.0, 0.0)
    assert thresholds(3, 2).q_minus == -7.0
    assert thresholds(2, 2).q_plus == 0.75


@given(st.integers(2, 8), st.floats(1.0, 100.0))
@settings(max_examples=200, deadline=None)
def test_threshold_ordering(n, K):
    pair = thresholds(n, K)
    assert pair.q_minus <= 0.0 <= pair.q_plus < 1.0


@pytest.mark.parametrize("n, K", [(3, 1.4), (5, 2.0), (2, 1.0)])
def test_small_distortion_gives_zero_upper_threshold(n, K):
    assert positive_exponents_all_subharmonic(n, K)
    assert thresholds(n, K).q_plus == 0.0


def test_large_distortion_leaves_positive_gap():
    assert not positive_exponents_all_subharmonic(3, 1.5)
    assert thresholds(3, 1.5).q_plus > 0.0


@pytest.mark.parametrize("n, K", [(1, 2.0), (2, 0.5), (2, float("nan")), (2.0, 2.0), (True, 2.0), (3, "x")])
def test_thresholds_reject_bad_parameters(n, K):
    with pytest.raises(InvalidParameterError):
        thresholds(n, K)


@pytest.mark.parametrize(
    "q, region",
    [
        (0.0, ExponentRegion.TRIVIAL),
        (0.75, ExponentRegion.SUBHARMONIC_ON_DOMAIN),
        (1.5, ExponentRegion.SUBHARMONIC_ON_DOMAIN),
        (0.5, ExponentRegion.GAP),
        (-2.0, ExponentRegion.GAP),
        (-3.0, ExponentRegion.SUBHARMONIC_OFF_ZEROS),
        (-10.0, ExponentRegion.SUBHARMONIC_OFF_ZEROS),
    ],
)
def test_classify_exponent(q, region):
    assert classify_exponent(2, 2.0, q) == region


def test_pair_gap_membership():
    pair = thresholds(2, 2.0)
    assert pair.in_gap(0.5)
    assert pair.in_gap(-1.0)
    assert not pair.in_gap(0.0)
    assert not pair.in_gap(0.75)
    assert not pair.in_gap(-3.0)
    assert pair.to_dict()["gap"] == [-3.0, 0.75]


def test_classical_exponent():
    assert classical_exponent(1.0)
    assert not classical_exponent(0.99)


# closed form Laplacian


def test_newtonian_kernel_is_harmonic():
    u = identity_map(3)
    for x in ([1.0, 0.0, 0.0], [0.3, -2.0, 0.7], [-1.0, 1.0, 1.0]):
        assert abs(laplacian_modulus_power(u, x, -1.0)) <= 1e-12


def test_radial_powers_in_space():
    # q_minus = -1 for the identity in R^3: -1 is harmonic, -0.5 lies in the gap
    u = identity_map(3)
    points = np.random.default_rng(6).uniform(-2.0, 2.0, size=(20, 3))
    for x in points:
        if np.linalg.norm(x) < 0.1:
            continue
        assert abs(laplacian_modulus_power(u, x, -1.0)) <= 1e-8
        assert laplacian_modulus_power(u, x, -0.5) < 0


@pytest.mark.parametrize("n, K", GRID)
@pytest.mark.parametrize("q", [-2.0, -0.5, 0.3, 1.0, 2.5])
def test_stretch_laplacian_at_axis_point(n, K, q):
    value = laplacian_modulus_power(extremal_map(n, K, Branch.STRETCH), axis_point(n), q)
    assert value == pytest.approx(stretch_value(n, K, q), rel=1e-12, abs=1e-14)


def test_square_exponent_gives_twice_the_squared_norm():
    u = random_harmonic_map(3, 3, seed=9)
    x = np.array([0.4, -0.3, 0.8])
    J = u.jacobian(x)
    assert laplacian_modulus_power(u, x, 2.0) == pytest.approx(2.0 * np.sum(J * J), rel=1e-12)


def test_zero_exponent_gives_zero():
    assert laplacian_modulus_power(zsquared_map(), [1.0, 2.0], 0.0) == 0.0


def test_laplacian_at_a_zero_of_the_map():
    with pytest.raises(ZeroModulusError, match="Omega_0"):
        laplacian_modulus_power(identity_map(2), [0.0, 0.0], 0.5)


def test_laplacian_rejects_wrong_point_dimension():
    with pytest.raises(InvalidParameterError):
        laplacian_modulus_power(identity_map(3), [1.0, 0.0], 0.5)


def test_exact_bracket_vanishes_on_the_boundary():
    u = extremal_map(2, 2, Branch.STRETCH)
    assert exact_bracket(u, [0, 1], Fraction(3, 4)) == 0
    assert exact_bracket(u, [0, 1], Fraction(1, 2)) < 0


@pytest.mark.parametrize("n, K", GRID)
def test_sharpness_boundary(n, K):
    pair = thresholds(n, K)
    e_n = axis_point(n)
    stretch = extremal_map(n, K, Branch.STRETCH)
    compress = extremal_map(n, K, Branch.COMPRESS)

    assert abs(laplacian_modulus_power(stretch, e_n, pair.q_plus)) <= 1e-12
    assert laplacian_modulus_power(stretch, e_n, pair.q_plus - 0.01) < -1e-6
    assert abs(laplacian_modulus_power(compress, e_n, pair.q_minus)) <= 1e-12
    assert laplacian_modulus_power(compress, e_n, pair.q_minus + 0.01) < -1e-9


def _oracle_configurations(count):
    """Random maps rescaled so |u(x)| lies in [1/3, 1], with |u| / ||Du|| >= 0.15"""
    rng = np.random.default_rng(100)
    seed = 0
    while True:
        seed += 1
        n = 2 + seed % 2
        u = random_harmonic_map(n, 1 + seed % 3, seed)
        x = rng.uniform(-1.0, 1.0, size=n)
        modulus = float(np.linalg.norm(u.evaluate(x)))
        if modulus < 0.5 or modulus / np.linalg.norm(u.jacobian(x)) < 0.15:
            continue
        c = Fraction(1, math.ceil(modulus))
        scaled = compose_linear([[c if i == j else 0 for j in range(n)] for i in range(n)], u)
        yield scaled, x, float(rng.uniform(-3.0, 3.0))
        count -= 1
        if count == 0:
            return


def test_closed_form_agrees_with_finite_difference_oracle():
    checked = 0
    for u, x, q in _oracle_configurations(100):
        assert np.linalg.norm(u.evaluate(x)) > 0.1
        value = laplacian_modulus_power(u, x, q)
        oracle, _ = fd_laplacian(modulus_power_field(u, q), x, FDConfig(h=2e-3))
        assert abs(value - oracle) <= 1e-6 * (1.0 + abs(value)), (u, x, q)
        checked += 1
    assert checked == 100


@pytest.mark.parametrize("c", [Fraction(1, 2), 2, 4])
@pytest.mark.parametrize("q", [1.5, 3.0, -0.7])
def test_scaling_covariance(c, q):
    u = random_harmonic_map(2, 2, seed=21)
    scaled = compose_linear([[c, 0], [0, c]], u)
    x = [0.6, -0.4]
    expected = float(c) ** q * laplacian_modulus_power(u, x, q)
    assert laplacian_modulus_power(scaled, x, q) == pytest.approx(expected, rel=1e-12)
    assert pointwise_threshold(scaled, x) == pytest.approx(pointwise_threshold(u, x), rel=1e-12, abs=1e-12)


# pointwise threshold


@pytest.mark.parametrize("n, K", GRID)
def test_stretch_threshold_at_axis_point(n, K):
    t = pointwise_threshold(extremal_map(n, K, Branch.STRETCH), axis_point(n))
    assert t == pytest.approx(1 - (n - 1) / (K * K), abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_identity_threshold(n):
    x = np.linspace(0.5, 1.5, n)
    assert pointwise_threshold(identity_map(n), x) == pytest.approx(2.0 - n, abs=1e-12)


def test_conformal_map_threshold_is_zero():
    rng = np.random.default_rng(5)
    for x in rng.uniform(-2.0, 2.0, size=(20, 2)):
        assert pointwise_threshold(zsquared_map(), x) == pytest.approx(0.0, abs=1e-12)


def test_threshold_decides_the_sign():
    u = random_harmonic_map(3, 2, seed=13)
    x = np.array([0.5, 0.2, -0.6])
    t = pointwise_threshold(u, x)
    for q in (0.2, 0.9, 1.3, 1.9):
        if abs(q - t) < 1e-6:
            continue
        value = laplacian_modulus_power(u, x, q)
        assert (value >= 0) == (q >= t)
    for q in (-3.0, -1.0, -0.2):
        if abs(q - t) < 1e-6:
            continue
        value = laplacian_modulus_power(u, x, q)
        assert (value >= 0) == (q <= t)


def test_threshold_errors():
    with pytest.raises(ZeroModulusError):
        pointwise_threshold(zsquared_map(), [0.0, 0.0])
    # z^2 + 1 has a critical point at the origin where it does not vanish
    with pytest.raises(ZeroDifferentialError):
        pointwise_threshold(regularized_map(zsquared_map(), 1), [0.0, 0.0])


def test_pointwise_theorem_core():
    """t(x) lies between the critical exponents of the local linear dilatation"""
    for seed in range(50):
        n = 2 + seed % 2
        u = random_harmonic_map(n, 2 + seed % 3, seed)
        batch = evaluate_samples(u, DomainSpec.box((0.0,) * n, 1.0).sample(1100, seed))
        regular = batch.regular_mask
        t = batch.thresholds()[regular][:1000]
        H = batch.h_linear()[regular][:1000]
        assert t.size == 1000
        upper = 1.0 - (n - 1) / (H * H)
        lower = 1.0 - (n - 1) * (H * H)
        assert np.all(t <= upper + 1e-9)
        assert np.all(t >= lower - 1e-9)


# verify_on_domain


def test_verify_passes_on_the_upper_threshold():
    u = extremal_map(2, 2, Branch.STRETCH)
    report = verify_on_domain(u, DomainSpec.around_axis(2), 0.75, 512, seed=1, extra_points=[[0.0, 1.0]])
    assert report.verdict == Verdict.PASS
    assert report.min_laplacian >= -report.tol
    assert report.violation_points == []
    assert report.sampled == 513
    assert report.sup_t <= 0.75 + 1e-12
    assert report.sup_t >= report.inf_t


def test_verify_fails_inside_the_gap():
    u = extremal_map(2, 2, Branch.STRETCH)
    report = verify_on_domain(u, DomainSpec.around_axis(2), 0.5, 256, seed=1, violation_cap=8)
    assert report.verdict == Verdict.FAIL
    assert report.violation_count == 256
    assert len(report.violation_points) == 8
    # Delta |u|^(1/2) < 0 exactly where |x_1| < sqrt(8/7) |x_2|
    for point, value in report.violation_points:
        assert value < 0
        assert abs(point[0]) < math.sqrt(8 / 7) * abs(point[1])


def test_verify_identity_below_lower_threshold():
    report = verify_on_domain(identity_map(3), DomainSpec.around_axis(3), -1.5, 256, seed=3)
    assert report.passed
    assert report.sup_t == pytest.approx(-1.0, abs=1e-9)
    assert report.inf_t == pytest.approx(-1.0, abs=1e-9)


def test_verify_is_deterministic():
    u = random_harmonic_map(2, 3, seed=2)
    dom = DomainSpec.box((0.2, 0.3), 0.5)
    first = verify_on_domain(u, dom, 0.3, 300, seed=7)
    second = verify_on_domain(u, dom, 0.3, 300, seed=7)
    assert first.to_dict() == second.to_dict()


def test_verify_consistency_with_empirical_dilatation():
    u = random_harmonic_map(2, 2, seed=31)
    dom = DomainSpec.box((0.5, 0.5), 0.4)
    batch = evaluate_samples(u, dom.sample(800, 4))
    K_emp = float(np.nanmax(batch.h_linear()))
    pair = thresholds(2, K_emp)
    for q in (pair.q_plus + 0.05, 1.0, 2.5, pair.q_minus - 0.05, pair.q_minus - 2.0):
        assert verify_samples(batch, q).passed, q


def test_zeros_are_excluded_below_two():
    dom = DomainSpec.ball((0.0, 0.0), 1e-10)
    with pytest.raises(NoAdmissiblePointsError):
        verify_on_domain(identity_map(2), dom, 1.0, 16, seed=0)


@pytest.mark.parametrize("q, value", [(2.0, 4.0), (3.0, 0.0)])
def test_zeros_use_the_continuous_extension_from_two(q, value):
    report = verify_on_domain(identity_map(2), DomainSpec.ball((0.0, 0.0), 1e-10), q, 16, seed=0)
    assert report.passed
    assert report.flagged_zero == 16
    assert report.excluded_zero == 0
    assert report.min_laplacian == pytest.approx(value)
    assert math.isnan(report.sup_t)


def test_zero_counts_with_an_extra_point():
    report = verify_on_domain(identity_map(2), DomainSpec.around_axis(2), 0.5, 32, seed=0, extra_points=[[0.0, 0.0]])
    assert report.excluded_zero == 1
    assert report.mandated_zero == 0
    assert report.sampled == 33


@pytest.mark.parametrize("q", [-1.0, 0.0])
def test_zeros_are_mandated_exclusions_for_non_positive_exponents(q):
    report = verify_on_domain(identity_map(2), DomainSpec.around_axis(2), q, 32, seed=0, extra_points=[[0.0, 0.0]])
    assert report.mandated_zero == 1
    assert report.excluded_zero == 0
    assert report.flagged_zero == 0
    assert report.to_dict()["mandated_zero"] == 1


def test_verify_rejects_mismatched_domain():
    with pytest.raises(InvalidParameterError):
        verify_on_domain(identity_map(3), DomainSpec.around_axis(2), 1.0, 8, seed=0)


def test_report_serialization():
    report = verify_on_domain(extremal_map(2, 2, Branch.STRETCH), DomainSpec.around_axis(2), 0.5, 20, seed=0)
    record = report.to_dict()
    assert record["verdict"] == "fail"
    assert record["violation_count"] == 20
    assert set(record["violation_points"][0]) == {"point", "laplacian"}
    assert record["map"] == "stretch:2,2"


# witness


def test_plane_witness():
    w = witness(2, 2.0, 0.5)
    assert w.branch == Branch.STRETCH
    assert w.point == (0.0, 0.5)
    assert w.laplacian_value == pytest.approx(0.5 * (1 - 2), rel=1e-12)
    assert w.oracle_value == pytest.approx(-0.5, rel=1e-4)
    assert w.axis_value == pytest.approx(0.5 * 2**-1.5 * (1 - 2), rel=1e-12)
    assert w.axis_value == pytest.approx(-0.17678, abs=1e-5)


def test_negative_exponent_witness():
    w = witness(3, 2.0, -3.0)
    assert w.branch == Branch.COMPRESS
    assert w.point == (0.0, 0.0, 2.0)
    assert w.laplacian_value == pytest.approx(-3.0, rel=1e-12)
    assert w.oracle_value == pytest.approx(-3.0, rel=1e-4)
    assert w.axis_value == pytest.approx(-96.0, rel=1e-12)
    assert w.to_dict()["map_name"] == "compress:3,2"


@pytest.mark.parametrize("n, K", GRID)
def test_witness_point_has_unit_modulus(n, K):
    cases = [(Branch.COMPRESS, -0.5)]
    if thresholds(n, K).q_plus > 0:
        cases.append((Branch.STRETCH, 0.5 * thresholds(n, K).q_plus))
    for branch, q in cases:
        w = witness(n, K, q)
        assert w.branch == branch
        assert np.linalg.norm(w.map.evaluate(np.array(w.point))) == pytest.approx(1.0, rel=1e-12)
        assert np.sign(w.axis_value) == np.sign(w.laplacian_value)


@pytest.mark.parametrize("offset", [10.0, 200.0, 389.0])
def test_witness_for_large_negative_exponents(offset):
    pair = thresholds(5, 10.0)
    q = pair.q_minus + offset
    w = witness(5, 10.0, q)
    assert w.laplacian_value == pytest.approx(q * (q - pair.q_minus) / 100.0, rel=1e-9)
    assert math.isfinite(w.oracle_value)
    assert abs(w.oracle_value - w.laplacian_value) <= 1e-4 * (1 + abs(w.laplacian_value))


def test_witness_reports_no_axis_value_after_overflow():
    w = witness(5, 10.0, -389.0)
    assert w.axis_value is None
    assert w.to_dict()["axis_value"] is None


@pytest.mark.parametrize("n, K", GRID)
def test_witness_throughout_the_gap(n, K):
    pair = thresholds(n, K)
    for q in np.linspace(pair.q_minus, pair.q_plus, 9)[1:-1]:
        if q == 0:
            continue
        assert witness(n, K, float(q)).laplacian_value < 0


def test_no_witness_on_the_boundary():
    with pytest.raises(NoWitnessRequiredError):
        witness(2, 2.0, 0.75)
    with pytest.raises(NoWitnessRequiredError):
        witness(2, 2.0, -3.0)


def test_no_witness_without_distortion():
    with pytest.raises(NoWitnessRequiredError):
        witness(2, 1.0, 0.5)


def test_zero_exponent_is_trivially_subharmonic():
    with pytest.raises(TriviallySubharmonicError):
        witness(2, 2.0, 0.0)


# q = 1 identity and regularization


def test_identity_check_for_identity_map():
    lhs, rhs = modulus_laplacian_identity_check(identity_map(3), [0.0, 0.0, 2.0])
    assert lhs == pytest.approx(1.0, rel=1e-12)
    assert rhs == pytest.approx(1.0, rel=1e-6)


def test_identity_check_for_stretch_map():
    lhs, rhs = modulus_laplacian_identity_check(extremal_map(2, 2, Branch.STRETCH), [0.0, 1.0])
    assert lhs == pytest.approx(0.5, rel=1e-12)
    assert rhs == pytest.approx(0.5, rel=1e-6)


def test_identity_check_on_random_maps():
    rng = np.random.default_rng(77)
    checked = 0
    for seed in range(10):
        n = 2 + seed % 2
        u = random_harmonic_map(n, 2, seed)
        found = 0
        while found < 5:
            x = rng.uniform(-1.0, 1.0, size=n)
            modulus = np.linalg.norm(u.evaluate(x))
            if modulus < 0.5 or modulus / np.linalg.norm(u.jacobian(x)) < 0.05:
                continue
            lhs, rhs = modulus_laplacian_identity_check(u, x)
            assert lhs >= 0
            assert abs(lhs - rhs) <= 1e-5 * abs(lhs)
            found += 1
        checked += found
    assert checked == 50


def test_regularized_laplacians_at_a_zero():
    values = regularized_modulus_laplacians(identity_map(2), [0.0, 0.0], [1, 2, 10, 100])
    assert [m for m, _ in values] == [1, 2, 10, 100]
    for m, value in values:
        assert value == pytest.approx(m, rel=1e-12)
