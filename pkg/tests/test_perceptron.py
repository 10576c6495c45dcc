import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qvstrain.perceptron import (
    DataPoint,
    Dataset,
    Hyperplane,
    classify,
    correctly_classifies,
    generate_planted_dataset,
    geometric_margin,
    in_version_space,
    load_dataset,
    required_sample_count,
    sample_hyperplanes,
    save_dataset,
)

finite_floats = st.floats(-50, 50, allow_nan=False, allow_infinity=False)


def plane_strategy(dim):
    return st.builds(
        lambda w, b: Hyperplane(np.array(w), b),
        st.lists(finite_floats, min_size=dim, max_size=dim).filter(
            lambda w: any(abs(v) > 1e-6 for v in w)
        ),
        finite_floats,
    )


class TestClassify:
    def test_positive_halfspace(self):
        p = Hyperplane(np.array([1.0, 0.0]), 0.0)
        assert classify(p, [2.0, 5.0]) == +1

    def test_boundary_maps_to_plus_one(self):
        p = Hyperplane(np.array([1.0, 0.0]), 0.0)
        assert classify(p, [0.0, 3.0]) == +1

    def test_negative_halfspace(self):
        p = Hyperplane(np.array([1.0, 0.0]), -1.0)
        assert classify(p, [0.0, 0.0]) == -1

    def test_dimension_mismatch(self):
        p = Hyperplane(np.array([1.0, 0.0]), 0.0)
        with pytest.raises(ValueError):
            classify(p, [1.0])

    @given(p=plane_strategy(3), x=st.lists(finite_floats, min_size=3, max_size=3))
    def test_matches_direct_recomputation(self, p, x):
        expected = +1 if float(np.dot(p.w, x)) + p.b >= 0 else -1
        assert classify(p, x) == expected


class TestCorrectlyClassifies:
    def test_strictly_positive(self):
        p = Hyperplane(np.array([1.0, 0.0]), 0.0)
        assert correctly_classifies(p, DataPoint(np.array([1.0, 0.0]), +1))

    def test_boundary_fails_strictness(self):
        p = Hyperplane(np.array([1.0, 0.0]), 0.0)
        assert not correctly_classifies(p, DataPoint(np.array([0.0, 0.0]), +1))

    def test_negative_class(self):
        p = Hyperplane(np.array([1.0, 0.0]), 0.0)
        assert correctly_classifies(p, DataPoint(np.array([-1.0, 0.0]), -1))


class TestGeometricMargin:
    def test_single_point(self):
        data = Dataset([DataPoint(np.array([2.0, 0.0]), +1)], claimed_margin=1.0)
        p = Hyperplane(np.array([1.0, 0.0]), 0.0)
        assert geometric_margin(data, p) == pytest.approx(2.0)

    def test_misclassified_flips_sign(self):
        data = Dataset([DataPoint(np.array([2.0, 0.0]), -1)], claimed_margin=1.0)
        p = Hyperplane(np.array([1.0, 0.0]), 0.0)
        assert geometric_margin(data, p) == pytest.approx(-2.0)

    def test_zero_weight_rejected(self):
        data = Dataset([DataPoint(np.array([1.0, 1.0]), +1)], claimed_margin=0.5)
        with pytest.raises(ValueError):
            geometric_margin(data, Hyperplane(np.array([0.0, 0.0]), 1.0))

    def test_planted_margin_close_to_requested(self):
        # regenerated instance at the reference figure's parameters
        data, planted = generate_planted_dataset(12, 2, 0.195, rng_seed=20)
        margin = geometric_margin(data, planted)
        assert margin >= 0.195
        assert margin == pytest.approx(0.195, abs=0.2)


class TestVersionSpace:
    def test_planted_plane_always_member(self):
        for seed in range(20):
            data, planted = generate_planted_dataset(16, 2, 0.15, rng_seed=seed)
            assert in_version_space(data, planted)

    def test_flipped_labels_never_member(self):
        data, planted = generate_planted_dataset(10, 2, 0.2, rng_seed=4)
        flipped = Dataset(
            [DataPoint(p.x, -p.y) for p in data.points], data.claimed_margin
        )
        assert not in_version_space(flipped, planted)

    @settings(max_examples=30)
    @given(seed=st.integers(0, 2**31))
    def test_membership_iff_positive_margin(self, seed):
        rng = np.random.default_rng(seed)
        points = [
            DataPoint(rng.standard_normal(2), +1 if rng.random() < 0.5 else -1)
            for _ in range(6)
        ]
        data = Dataset(points, claimed_margin=0.1)
        p = Hyperplane(rng.standard_normal(2), float(rng.standard_normal()))
        if np.linalg.norm(p.w) == 0:
            return
        assert in_version_space(data, p) == (geometric_margin(data, p) > 0)

    @settings(max_examples=30)
    @given(seed=st.integers(0, 2**31), alpha=st.floats(1e-3, 1e3))
    def test_scaling_invariance(self, seed, alpha):
        rng = np.random.default_rng(seed)
        points = [
            DataPoint(rng.standard_normal(3), +1 if rng.random() < 0.5 else -1)
            for _ in range(5)
        ]
        data = Dataset(points, claimed_margin=0.1)
        p = Hyperplane(rng.standard_normal(3), float(rng.standard_normal()))
        scaled = Hyperplane(alpha * p.w, alpha * p.b)
        assert in_version_space(data, p) == in_version_space(data, scaled)


class TestSampling:
    def test_deterministic_given_seed(self):
        a = sample_hyperplanes(3, 2, rng_seed=11)
        b = sample_hyperplanes(3, 2, rng_seed=11)
        assert len(a) == 3 and all(p.dim == 2 for p in a)
        for pa, pb in zip(a, b):
            assert np.array_equal(pa.w, pb.w) and pa.b == pb.b

    def test_moments(self):
        planes = sample_hyperplanes(10_000, 2, rng_seed=123)
        draws = np.array([[*p.w, p.b] for p in planes])
        assert np.all(np.abs(draws.mean(axis=0)) < 4 / math.sqrt(10_000))
        assert np.all((draws.var(axis=0) > 0.9) & (draws.var(axis=0) < 1.1))


class TestRequiredSampleCount:
    def test_simple_formula(self):
        assert required_sample_count(1.0, 1 / math.e, c=2.0) == 2

    def test_reference_value(self):
        assert required_sample_count(0.1, 0.1, c=2.0) == 47

    def test_halving_gamma_doubles(self):
        for gamma in (0.4, 0.2, 0.1):
            k1 = required_sample_count(gamma, 0.1)
            k2 = required_sample_count(gamma / 2, 0.1)
            assert abs(k2 - 2 * k1) <= 1

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            required_sample_count(0.0, 0.1)
        with pytest.raises(ValueError):
            required_sample_count(0.5, 1.0)


class TestPlantedGenerator:
    def test_margin_postcondition_many_seeds(self):
        for seed in range(100):
            data, planted = generate_planted_dataset(8, 2, 0.2, rng_seed=seed)
            assert geometric_margin(data, planted) >= 0.2
            assert in_version_space(data, planted)

    def test_deterministic(self):
        d1, p1 = generate_planted_dataset(6, 3, 0.1, rng_seed=9)
        d2, p2 = generate_planted_dataset(6, 3, 0.1, rng_seed=9)
        assert np.array_equal(p1.w, p2.w) and p1.b == p2.b
        for a, b in zip(d1.points, d2.points):
            assert np.array_equal(a.x, b.x) and a.y == b.y

    def test_unit_norm_plant(self):
        _, planted = generate_planted_dataset(5, 4, 0.3, rng_seed=2)
        assert np.linalg.norm(planted.w) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_bad_gamma(self):
        with pytest.raises(ValueError):
            generate_planted_dataset(5, 2, 0.0, rng_seed=1)
        with pytest.raises(ValueError):
            generate_planted_dataset(5, 2, 1.0, rng_seed=1)


class TestGammaSamplingLaw:
    def test_hit_rate_tracks_gamma(self):
        # quick version of the acceptance sweep: 2000 samples per gamma
        for gamma in (0.1, 0.3):
            data, _ = generate_planted_dataset(12, 2, gamma, rng_seed=5)
            X, y = data.as_arrays()
            rng = np.random.default_rng(99)
            W = rng.standard_normal((2000, 2))
            B = rng.standard_normal(2000)
            hits = ((y[:, None] * (X @ W.T + B[None, :])) > 0).all(axis=0)
            fraction = hits.mean()
            assert gamma / 10 <= fraction <= 10 * gamma


class TestDatasetIO:
    def test_round_trip_bit_exact(self, tmp_path):
        rng = np.random.default_rng(17)
        points = [
            DataPoint(rng.standard_normal(3) * rng.uniform(1e-8, 1e8), int(s))
            for s in np.where(rng.random(9) < 0.5, 1, -1)
        ]
        data = Dataset(points, claimed_margin=0.07213000931)
        path = tmp_path / "data.txt"
        save_dataset(data, path)
        loaded = load_dataset(path)
        assert loaded.claimed_margin == data.claimed_margin
        assert loaded.n_points == data.n_points
        for a, b in zip(loaded.points, data.points):
            assert a.y == b.y
            assert np.array_equal(a.x, b.x)

    def test_header_format(self, tmp_path):
        data, _ = generate_planted_dataset(4, 2, 0.25, rng_seed=3)
        path = tmp_path / "d.txt"
        save_dataset(data, path)
        header = path.read_text().splitlines()[0].split()
        assert header[0] == "4" and header[1] == "2"
        assert float(header[2]) == 0.25


class TestValidation:
    def test_label_must_be_pm_one(self):
        with pytest.raises(ValueError):
            DataPoint(np.array([1.0]), 0)

    def test_zero_plane_rejected(self):
        with pytest.raises(ValueError):
            Hyperplane(np.array([0.0, 0.0]), 0.0)

    def test_mixed_dimensions_rejected(self):
        with pytest.raises(ValueError):
            Dataset(
                [DataPoint(np.array([1.0]), 1), DataPoint(np.array([1.0, 2.0]), 1)],
                claimed_margin=0.1,
            )

    def test_nonpositive_margin_rejected(self):
        with pytest.raises(ValueError):
            Dataset([DataPoint(np.array([1.0]), 1)], claimed_margin=0.0)
