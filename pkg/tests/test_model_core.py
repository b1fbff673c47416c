"""Core types: models, regions, designs, intensities, information matrices."""

from __future__ import annotations

import numpy as np
import pytest

from gammadesign import (
    Design,
    ExperimentalRegion,
    GammaModel,
    NonpositivePredictor,
    ValidationError,
    design_from_json,
    design_to_json,
    features,
    information_matrix,
    intensity,
    mix_designs,
    model_from_json,
    model_to_json,
    region_from_json,
    region_to_json,
    validate_design_region,
    validate_positivity,
)

from oracles import raw_information


# ---------------------------------------------------------------- fixtures


def unit_vector(i: int, nu: int) -> tuple[float, ...]:
    return tuple(1.0 if j == i else 0.0 for j in range(nu))


def random_cube_design(rng: np.random.Generator, nu: int, npts: int) -> Design:
    pts = rng.uniform(1.0, 2.0, size=(npts, nu))
    w = rng.dirichlet(np.ones(npts))
    return Design(points=[tuple(p) for p in pts], weights=list(w))


# ---------------------------------------------------------------- model type


def test_model_parameter_counts():
    assert GammaModel.first_order(2).p == 2
    assert GammaModel.first_order(5).p == 5
    assert GammaModel.interaction().p == 3
    assert GammaModel.interaction().nu == 2


def test_model_requires_two_factors():
    with pytest.raises(ValidationError):
        GammaModel.first_order(1)


def test_model_json_round_trip():
    for model in (GammaModel.first_order(3), GammaModel.interaction()):
        obj = model_to_json(model)
        assert set(obj) == {"kind", "nu"}
        assert model_from_json(obj) == model


# ---------------------------------------------------------------- regions


def test_hypercube_bounds_must_be_ordered_and_positive():
    ExperimentalRegion.hypercube(1.0, 2.0, 3)
    with pytest.raises(ValidationError):
        ExperimentalRegion.hypercube(2.0, 1.0, 3)
    with pytest.raises(ValidationError):
        ExperimentalRegion.hypercube(0.0, 1.0, 2)
    with pytest.raises(ValidationError):
        ExperimentalRegion.hypercube(1.0, 1.0, 2)


def test_region_membership():
    cube = ExperimentalRegion.hypercube(1.0, 2.0, 2)
    assert cube.contains((1.0, 2.0))
    assert not cube.contains((0.5, 1.5))
    orthant = ExperimentalRegion.orthant(3)
    assert orthant.contains((0.0, 1.0, 5.0))
    assert not orthant.contains((0.0, 0.0, 0.0))
    assert not orthant.contains((-1.0, 1.0, 1.0))


def test_region_json_round_trip():
    for region in (
        ExperimentalRegion.orthant(4),
        ExperimentalRegion.hypercube(1.0, 4.0, 2),
    ):
        obj = region_to_json(region)
        assert region_from_json(obj) == region
    with pytest.raises(ValidationError):
        region_from_json({"kind": "sphere", "nu": 2})


# ---------------------------------------------------------------- designs


def test_design_weight_validation():
    with pytest.raises(ValidationError):
        Design(points=[(1.0,), (2.0,)], weights=[0.6, 0.6])
    with pytest.raises(ValidationError):
        Design(points=[(1.0,), (2.0,)], weights=[1.2, -0.2])
    with pytest.raises(ValidationError):
        Design(points=[(1.0,), (2.0,)], weights=[1.0, 0.0])


def test_design_points_pairwise_distinct():
    with pytest.raises(ValidationError):
        Design(points=[(1.0, 1.0), (1.0, 1.0)], weights=[0.5, 0.5])
    # differences above the coincidence tolerance are allowed
    Design(points=[(1.0, 1.0), (1.0, 1.0 + 1e-9)], weights=[0.5, 0.5])


def test_design_rejects_ragged_or_nonfinite_points():
    with pytest.raises(ValidationError):
        Design(points=[(1.0, 2.0), (1.0,)], weights=[0.5, 0.5])
    with pytest.raises(ValidationError):
        Design(points=[(np.inf, 2.0)], weights=[1.0])


def test_design_json_round_trip():
    design = Design(points=[(1.0, 2.0), (2.0, 1.0)], weights=[0.25, 0.75])
    obj = design_to_json(design)
    assert set(obj) == {"points", "weights"}
    assert design_from_json(obj) == design


def test_design_from_json_repairs_rounded_weights():
    # ten-significant-digit serialization loses up to ~1e-10 of the sum
    obj = {"points": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "weights": [0.3333333333] * 3}
    design = design_from_json(obj)
    assert sum(design.weights) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValidationError):
        design_from_json({"points": [[1], [2]], "weights": [0.5, 0.499]})
    with pytest.raises(ValidationError):
        design_from_json({"points": [[1]], "weights": ["x"]})


def test_design_region_validation():
    cube = ExperimentalRegion.hypercube(1.0, 2.0, 2)
    inside = Design(points=[(1.0, 2.0)], weights=[1.0])
    validate_design_region(inside, cube)
    outside = Design(points=[(1.0, 2.5)], weights=[1.0])
    with pytest.raises(ValidationError):
        validate_design_region(outside, cube)


# ---------------------------------------------------------------- features


def test_features_examples():
    m3 = GammaModel.first_order(3)
    assert features(m3, (1.0, 2.0, 1.0)).tolist() == [1.0, 2.0, 1.0]
    mi = GammaModel.interaction()
    assert features(mi, (2.0, 3.0)).tolist() == [2.0, 3.0, 6.0]
    m2 = GammaModel.first_order(2)
    assert features(m2, (0.0, 1.0)).tolist() == [0.0, 1.0]


def test_features_dimension_mismatch():
    with pytest.raises(ValidationError):
        features(GammaModel.first_order(3), (1.0, 2.0))
    with pytest.raises(ValidationError):
        features(GammaModel.interaction(), (1.0, 2.0, 3.0))


# ---------------------------------------------------------------- intensity


def test_intensity_examples():
    m3 = GammaModel.first_order(3)
    assert intensity(m3, (1.0, 1.0, 1.0), (2.0, 1.0, 1.0)) == pytest.approx(1.0 / 16.0)
    m2 = GammaModel.first_order(2)
    assert intensity(m2, (1.0, 1.0), (1.0, 0.0)) == pytest.approx(1.0)
    mi = GammaModel.interaction()
    assert intensity(mi, (1.0, 1.0, 1.0), (1.0, 1.0)) == pytest.approx(1.0 / 9.0)


def test_intensity_rejects_nonpositive_predictor():
    m2 = GammaModel.first_order(2)
    with pytest.raises(NonpositivePredictor):
        intensity(m2, (1.0, -1.0), (1.0, 1.0))  # predictor exactly 0
    with pytest.raises(NonpositivePredictor):
        intensity(m2, (-1.0, -1.0), (1.0, 1.0))


# ---------------------------------------------------------------- information


def test_information_single_point():
    m2 = GammaModel.first_order(2)
    design = Design(points=[(1.0, 0.0)], weights=[1.0])
    M = information_matrix(m2, (1.0, 1.0), design)
    np.testing.assert_allclose(M, [[1.0, 0.0], [0.0, 0.0]], atol=1e-15)


def test_information_two_axis_points():
    m2 = GammaModel.first_order(2)
    design = Design(points=[(1.0, 0.0), (0.0, 1.0)], weights=[0.5, 0.5])
    M = information_matrix(m2, (1.0, 1.0), design)
    np.testing.assert_allclose(M, np.diag([0.5, 0.5]), atol=1e-15)


def test_information_scale_free_in_x_for_first_order():
    rng = np.random.default_rng(20240811)
    m3 = GammaModel.first_order(3)
    beta = (0.5, 1.0, 2.0)
    design = random_cube_design(rng, 3, 5)
    scaled = Design(
        points=[tuple(2.0 * c for c in p) for p in design.points],
        weights=list(design.weights),
    )
    M = information_matrix(m3, beta, design)
    M2 = information_matrix(m3, beta, scaled)
    np.testing.assert_allclose(M2, M, rtol=1e-12)


def test_information_matches_direct_assembly():
    rng = np.random.default_rng(7)
    m3 = GammaModel.first_order(3)
    beta = (1.0, 0.3, 0.7)
    design = random_cube_design(rng, 3, 6)
    expected = raw_information("first_order", beta, design.points, design.weights)
    np.testing.assert_allclose(information_matrix(m3, beta, design), expected, rtol=1e-13)


def test_information_symmetric_psd():
    rng = np.random.default_rng(99)
    mi = GammaModel.interaction()
    beta = (1.0, 2.0, 0.5)
    design = random_cube_design(rng, 2, 4)
    M = information_matrix(mi, beta, design)
    np.testing.assert_allclose(M, M.T, atol=1e-12)
    assert np.linalg.eigvalsh(M).min() >= -1e-10


def test_information_beta_scaling():
    """Scaling β by λ scales M by λ⁻² and det by λ^(-2p)."""
    rng = np.random.default_rng(13)
    m3 = GammaModel.first_order(3)
    beta = np.array([1.0, 2.0, 0.5])
    design = random_cube_design(rng, 3, 5)
    M = information_matrix(m3, beta, design)
    for lam in (0.1, 3.0, 7.0):
        Ms = information_matrix(m3, lam * beta, design)
        np.testing.assert_allclose(Ms, M / lam**2, rtol=1e-12)
        np.testing.assert_allclose(
            np.linalg.det(Ms), np.linalg.det(M) * lam ** (-2 * 3), rtol=1e-10
        )


def test_information_rank_independent_of_beta():
    # a two-point design in three factors is rank deficient for every β
    m3 = GammaModel.first_order(3)
    thin = Design(points=[(1.0, 1.0, 1.0), (2.0, 1.0, 1.0)], weights=[0.5, 0.5])
    full = Design(
        points=[(1.0, 1.0, 1.0), (2.0, 1.0, 1.0), (1.0, 2.0, 1.0), (1.0, 1.0, 2.0)],
        weights=[0.25, 0.25, 0.25, 0.25],
    )
    for design, expected_rank in ((thin, 2), (full, 3)):
        for beta in ((1.0, 1.0, 1.0), (0.3, 2.0, 0.9)):
            M = information_matrix(m3, beta, design)
            assert np.linalg.matrix_rank(M, tol=1e-10) == expected_rank


def test_information_linear_in_mixture():
    rng = np.random.default_rng(21)
    m2 = GammaModel.first_order(2)
    beta = (1.5, 0.8)
    d1 = random_cube_design(rng, 2, 3)
    d2 = random_cube_design(rng, 2, 4)
    mixed = mix_designs([d1, d2], [0.3, 0.7])
    expected = 0.3 * information_matrix(m2, beta, d1) + 0.7 * information_matrix(
        m2, beta, d2
    )
    np.testing.assert_allclose(information_matrix(m2, beta, mixed), expected, rtol=1e-12)


# ---------------------------------------------------------------- positivity


def test_positivity_examples():
    assert validate_positivity(
        GammaModel.first_order(2), (1.0, 2.0), ExperimentalRegion.orthant(2)
    )
    assert validate_positivity(
        GammaModel.first_order(3), (-1.0, 2.0, 2.0), ExperimentalRegion.hypercube(1.0, 2.0, 3)
    )
    assert not validate_positivity(
        GammaModel.interaction(), (1.0, 1.0, -1.0), ExperimentalRegion.hypercube(1.0, 2.0, 2)
    )


def test_positivity_orthant_rules():
    m2 = GammaModel.first_order(2)
    orthant2 = ExperimentalRegion.orthant(2)
    assert not validate_positivity(m2, (1.0, 0.0), orthant2)
    assert not validate_positivity(m2, (1.0, -0.1), orthant2)
    mi = GammaModel.interaction()
    assert validate_positivity(mi, (1.0, 1.0, 0.0), orthant2)
    assert validate_positivity(mi, (2.0, 3.0, 1.0), orthant2)
    assert not validate_positivity(mi, (1.0, 1.0, -0.1), orthant2)
    assert not validate_positivity(mi, (0.0, 1.0, 1.0), orthant2)


def test_positivity_cube_decided_at_vertices():
    # β makes the predictor positive at all 4 vertices but only barely
    mi = GammaModel.interaction()
    cube = ExperimentalRegion.hypercube(1.0, 2.0, 2)
    assert validate_positivity(mi, (1.0, 1.0, -0.99), cube)
    assert not validate_positivity(mi, (1.0, 1.0, -1.0), cube)


# ---------------------------------------------------------------- mixtures


def test_mix_identity():
    design = Design(points=[(1.0, 2.0), (2.0, 1.0)], weights=[0.4, 0.6])
    assert mix_designs([design], [1.0]) == design


def test_mix_disjoint_supports():
    d1 = Design(points=[(1.0, 1.0)], weights=[1.0])
    d2 = Design(points=[(2.0, 2.0)], weights=[1.0])
    mixed = mix_designs([d1, d2], [0.5, 0.5])
    assert mixed.points == ((1.0, 1.0), (2.0, 2.0))
    assert mixed.weights == (0.5, 0.5)


def test_mix_merges_copies():
    design = Design(points=[(1.0, 2.0), (2.0, 1.0)], weights=[0.4, 0.6])
    assert mix_designs([design, design], [0.5, 0.5]) == design


def test_mix_merges_within_tolerance():
    d1 = Design(points=[(1.0, 1.0)], weights=[1.0])
    d2 = Design(points=[(1.0, 1.0 + 1e-14)], weights=[1.0])
    mixed = mix_designs([d1, d2], [0.25, 0.75])
    assert mixed.size == 1
    assert mixed.weights == (1.0,)


def test_mix_input_validation():
    design = Design(points=[(1.0, 1.0)], weights=[1.0])
    with pytest.raises(ValidationError):
        mix_designs([], [])
    with pytest.raises(ValidationError):
        mix_designs([design, design], [0.7, 0.7])
    with pytest.raises(ValidationError):
        mix_designs([design, design], [1.5, -0.5])
