import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ricensim.errors import InvalidActionError, ProtocolError
from ricensim.negotiation import (
    ActionMask,
    Evaluation,
    Proposal,
    build_mask,
    commitments,
    commitments_from_arrays,
    masked_sample,
)


def max_level_oracle_mean(n: int, levels: int = 10) -> float:
    """E[max of n iid uniform{0..levels-1}] via the exact CDF sum."""
    return sum(
        k * (((k + 1) / levels) ** n - (k / levels) ** n) for k in range(levels)
    )


def proposals(levels):
    return [Proposal(i, lvl) for i, lvl in enumerate(levels)]


class TestCommitments:
    def test_all_reject_commits_to_zero(self):
        evs = [Evaluation(i, (False, False, False)) for i in range(3)]
        assert commitments(proposals([3, 9, 5]), evs) == [0, 0, 0]

    def test_max_of_accepted(self):
        evs = [
            Evaluation(0, (False, True, True)),
            Evaluation(1, (True, True, True)),
            Evaluation(2, (False, False, False)),
        ]
        assert commitments(proposals([3, 9, 5]), evs) == [9, 9, 0]

    def test_singleton_acceptance(self):
        evs = [
            Evaluation(0, (False, False, True)),
            Evaluation(1, (False, False, False)),
            Evaluation(2, (False, False, False)),
        ]
        assert commitments(proposals([3, 9, 5]), evs)[0] == 5

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(ProtocolError):
            commitments(proposals([1, 2]), [Evaluation(0, (True, True))])
        with pytest.raises(ProtocolError):
            commitments(
                proposals([1, 2]),
                [Evaluation(0, (True,)), Evaluation(1, (True, False))],
            )

    def test_all_accept_fast_path_matches_matrix_path(self):
        rng = np.random.default_rng(0)
        levels = rng.integers(0, 10, size=8)
        fast = commitments_from_arrays(levels, None)
        full = commitments_from_arrays(levels, np.ones((8, 8), dtype=bool))
        assert np.array_equal(fast, full)

    def test_proposal_level_validated(self):
        with pytest.raises(InvalidActionError):
            Proposal(0, 10)


class TestBuildMask:
    def test_commitment_floor(self):
        mask = build_mask(7, ("mitigation",))
        assert list(mask.mitigation) == [False] * 7 + [True] * 3
        assert mask.savings.all()
        assert mask.tariffs.all()

    def test_zero_commitment_unconstrained(self):
        mask = build_mask(0)
        assert mask.mitigation.all()

    def test_top_commitment_single_level(self):
        mask = build_mask(9)
        assert list(mask.mitigation) == [False] * 9 + [True]

    def test_dimension_selection(self):
        mask = build_mask(4, ("savings", "mitigation"))
        assert not mask.savings[:4].any()
        assert not mask.mitigation[:4].any()
        assert mask.export.all()

    def test_empty_mask_rejected(self):
        with pytest.raises(ProtocolError):
            ActionMask(mitigation=np.zeros(10, dtype=bool))


class TestMaskedSample:
    def test_single_permitted_level(self):
        mask = build_mask(9).mitigation
        rng = np.random.default_rng(1)
        assert masked_sample(mask, rng) == 9

    def test_deterministic_given_state(self):
        draws1 = [masked_sample(np.ones(10, dtype=bool), np.random.default_rng(42)) for _ in range(5)]
        draws2 = [masked_sample(np.ones(10, dtype=bool), np.random.default_rng(42)) for _ in range(5)]
        assert draws1 == draws2

    def test_uniform_over_permitted(self):
        mask = build_mask(7).mitigation  # permits 7, 8, 9
        rng = np.random.default_rng(123)
        draws = np.array([masked_sample(mask, rng) for _ in range(30_000)])
        for lvl in (7, 8, 9):
            assert abs((draws == lvl).mean() - 1 / 3) < 0.01

    def test_unsatisfiable_mask_rejected(self):
        with pytest.raises(ProtocolError):
            masked_sample(np.zeros(10, dtype=bool), np.random.default_rng(0))

    @given(st.integers(min_value=0, max_value=9), st.integers(min_value=0, max_value=2**31))
    @settings(max_examples=100)
    def test_never_samples_forbidden_level(self, commitment, seed):
        mask = build_mask(commitment).mitigation
        assert masked_sample(mask, np.random.default_rng(seed)) >= commitment


class TestMaxOfDrawsInflation:
    def test_exact_oracle_values(self):
        # Frozen from exact rational evaluation of the CDF sum; the
        # complementary tail-sum formula agrees to one ulp.
        assert math.isclose(max_level_oracle_mean(27), 8.939365668036395, rel_tol=1e-12)
        tail = sum(1 - (k / 10) ** 27 for k in range(1, 10))
        assert math.isclose(max_level_oracle_mean(27), tail, rel_tol=1e-12)
        assert math.isclose(max_level_oracle_mean(1), 4.5, rel_tol=1e-12)
        assert math.isclose(1 - 0.9**27, 0.94185026299696, rel_tol=1e-12)

    def test_empirical_max_matches_oracle(self):
        rng = np.random.default_rng(7)
        draws = rng.integers(0, 10, size=(20_000, 27))
        committed = commitments_from_arrays(draws, None)[:, 0]
        assert abs(committed.mean() - max_level_oracle_mean(27)) < 0.05
        assert abs((committed == 9).mean() - (1 - 0.9**27)) < 0.01
