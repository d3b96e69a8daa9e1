import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dotcodec import (CenterSet, CodingSpec, DecodeSpec, PerturbSpec,
                      count_by_integration, detect_local_maxima, encode,
                      encode_gaussian, perturb)
from oracles import brute_local_maxima


def detect_points(field, spec):
    return [tuple(p) for p in detect_local_maxima(field, spec).centers.tolist()]


class TestDecodeSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            DecodeSpec(nms_radius=0)
        with pytest.raises(ValueError):
            DecodeSpec(threshold_mode="weird")
        with pytest.raises(ValueError):
            DecodeSpec(threshold=-0.1)
        with pytest.raises(ValueError):
            DecodeSpec(threshold_mode="relative_to_max", threshold=1.5)
        DecodeSpec(threshold_mode="absolute", threshold=1.5)  # fine when absolute


class TestDetectLocalMaxima:
    def test_recovers_well_separated_coding(self):
        points = [(8, 8), (8, 40), (30, 20), (50, 8), (50, 50)]
        labels = CenterSet(64, 64, points)
        field = encode(labels, CodingSpec("repel", radius_cutoff=12.0))
        got = detect_local_maxima(field, DecodeSpec(nms_radius=5.0))
        assert got == labels.sorted()

    def test_all_zero_field(self):
        got = detect_local_maxima(np.zeros((16, 16)), DecodeSpec(nms_radius=3.0))
        assert len(got) == 0

    def test_blurred_two_peak_field_matches_oracle(self):
        labels = CenterSet(40, 40, [(20, 14), (20, 26)])
        field = encode(labels, CodingSpec("proximity", radius_cutoff=15.0))
        blurred = perturb(field, PerturbSpec(blur_sigma=2.0))
        spec = DecodeSpec(nms_radius=4.0, threshold=0.2)
        expected = brute_local_maxima(blurred, 4.0, 0.2 * blurred.max())
        assert detect_points(blurred, spec) == expected

    def test_plateau_emits_lexicographic_min(self):
        field = np.zeros((10, 10))
        field[4:6, 4:6] = 1.0  # 2x2 flat top
        got = detect_points(field, DecodeSpec(nms_radius=2.0, threshold_mode="absolute",
                                              threshold=0.5))
        assert got == [(4, 4)]

    def test_disconnected_equal_peaks_both_kept(self):
        field = np.zeros((9, 9))
        field[4, 2] = field[4, 6] = 1.0  # equal, 4 px apart, not adjacent
        got = detect_points(field, DecodeSpec(nms_radius=5.0, threshold_mode="absolute",
                                              threshold=0.1))
        assert got == [(4, 2), (4, 6)]

    def test_threshold_excludes_low_peaks(self):
        field = np.zeros((12, 12))
        field[3, 3] = 1.0
        field[9, 9] = 0.05
        got = detect_points(field, DecodeSpec(nms_radius=2.0))  # relative 0.1 -> 0.1
        assert got == [(3, 3)]

    def test_strictly_above_threshold(self):
        field = np.zeros((8, 8))
        field[2, 2] = 1.0
        field[6, 6] = 0.1
        got = detect_points(field, DecodeSpec(nms_radius=2.0, threshold=0.1))
        assert got == [(2, 2)]  # 0.1 does not exceed 0.1 * max

    def test_relative_mode_scale_invariant(self):
        rng = np.random.default_rng(7)
        field = rng.random((24, 24))
        spec = DecodeSpec(nms_radius=2.5, threshold=0.3)
        assert detect_points(field, spec) == detect_points(field * 4.0, spec)

    def test_deterministic(self):
        rng = np.random.default_rng(8)
        field = rng.random((32, 32))
        spec = DecodeSpec(nms_radius=3.0, threshold=0.2)
        assert detect_local_maxima(field, spec) == detect_local_maxima(field, spec)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.floats(1.0, 4.5))
    def test_matches_oracle_on_random_fields(self, seed, radius):
        rng = np.random.default_rng(seed)
        field = np.round(rng.random((18, 18)), 1)  # coarse values force plateaus
        spec = DecodeSpec(nms_radius=radius, threshold_mode="absolute", threshold=0.2)
        assert detect_points(field, spec) == brute_local_maxima(field, radius, 0.2)


class TestCountByIntegration:
    def test_seven_interior_cells(self):
        points = [(10, 10), (10, 30), (10, 50), (30, 10), (30, 30), (30, 50), (50, 30)]
        field = encode_gaussian(CenterSet(64, 64, points),
                                CodingSpec("gaussian", sigma=2.5))
        assert count_by_integration(field) == pytest.approx(7.0, abs=1e-3)

    def test_empty_labels(self):
        assert count_by_integration(np.zeros((8, 8))) == 0.0

    def test_border_cells_unit_mass_vs_raw(self):
        points = [(0, 5), (0, 40), (63, 20), (32, 0), (20, 63), (63, 63)]
        labels = CenterSet(64, 64, points)
        unit = encode_gaussian(labels, CodingSpec("gaussian", sigma=3.0))
        raw = encode_gaussian(labels, CodingSpec("gaussian", sigma=3.0,
                                                 normalization="raw"))
        assert count_by_integration(unit) == pytest.approx(6.0, abs=1e-2)
        assert count_by_integration(raw) < 6.0 - 0.5

    def test_linear(self):
        rng = np.random.default_rng(9)
        a, b = rng.random((6, 6)), rng.random((6, 6))
        assert count_by_integration(a + b) == pytest.approx(
            count_by_integration(a) + count_by_integration(b), rel=1e-12)
