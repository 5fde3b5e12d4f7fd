import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ricensim.stats import pearson, zscore_by_group


class TestPearson:
    def test_perfect_positive(self):
        assert pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)

    def test_perfect_negative(self):
        assert pearson([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)

    def test_hand_computed_value(self):
        # cov = 1.0, both stds sqrt(1.25) -> r = 0.8
        assert pearson([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            pearson([1, 2], [1, 2, 3])

    def test_too_short_rejected(self):
        with pytest.raises(ValueError):
            pearson([1], [2])

    def test_zero_variance_is_absent(self):
        assert pearson([1, 1, 1], [1, 2, 3]) is None
        assert pearson([1, 2, 3], [5, 5, 5]) is None

    @given(
        st.lists(st.floats(min_value=-1e6, max_value=1e6), min_size=3, max_size=40),
        st.floats(min_value=0.1, max_value=100.0),
        st.floats(min_value=-10.0, max_value=10.0),
    )
    @settings(max_examples=100)
    def test_affine_invariance(self, xs, scale, shift):
        ys = [scale * x + shift for x in xs]
        r = pearson(xs, ys)
        if r is not None:
            assert r == pytest.approx(1.0, abs=1e-6)


class TestZScoreByGroup:
    def test_single_group_population_std(self):
        z = zscore_by_group([1.0, 2.0, 3.0], [0, 0, 0])
        assert z == pytest.approx([-1.224744871391589, 0.0, 1.224744871391589], abs=1e-12)

    def test_constant_group_maps_to_zero(self):
        assert np.array_equal(zscore_by_group([5.0, 5.0, 5.0], [0, 0, 0]), np.zeros(3))

    def test_singleton_group_maps_to_zero(self):
        z = zscore_by_group([7.0, 1.0, 2.0], [0, 1, 1])
        assert z[0] == 0.0
        assert z[1] != 0.0

    def test_groups_normalized_independently(self):
        values = np.array([1.0, 2.0, 3.0, 100.0, 200.0, 300.0])
        groups = np.array([0, 0, 0, 1, 1, 1])
        z = zscore_by_group(values, groups)
        assert abs(z[:3].mean()) < 1e-12
        assert abs(z[3:].mean()) < 1e-12
        assert z[:3] == pytest.approx(z[3:], abs=1e-9)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            zscore_by_group([1.0, 2.0], [0])
