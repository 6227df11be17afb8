import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

import pitmanyor.stickbreak as sb
from pitmanyor.core import Partition, PYParams
from pitmanyor.stickbreak import (
    StickState,
    beta_sample,
    extend_sticks,
    gamma_sample,
    sample_allocations,
    sample_allocations_batch,
    sample_partition_labels_batch,
    stickbreak_sample_partition,
)

P = Partition.from_blocks


class TestGammaSampler:
    def test_shape_validation(self):
        with pytest.raises(ValueError):
            gamma_sample(0.0, np.random.default_rng(0))

    @pytest.mark.parametrize("shape", [0.3, 1.0, 2.5, 40.0])
    def test_moments(self, shape):
        rng = np.random.default_rng(100)
        draws = gamma_sample(shape, rng, size=400_000)
        se_mean = draws.std(ddof=1) / math.sqrt(draws.size)
        assert abs(draws.mean() - shape) <= 3.5 * se_mean
        sq = draws**2
        se_sq = sq.std(ddof=1) / math.sqrt(draws.size)
        assert abs(sq.mean() - shape * (shape + 1)) <= 3.5 * se_sq

    def test_scalar_mode(self):
        value = gamma_sample(1.5, np.random.default_rng(0))
        assert isinstance(value, float) and value > 0


class TestBetaSampler:
    def test_shape_validation(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            beta_sample(0.0, 1.0, rng)
        with pytest.raises(ValueError):
            beta_sample(1.0, -1.0, rng)

    def test_uniform_mean(self):
        rng = np.random.default_rng(101)
        draws = beta_sample(1.0, 1.0, rng, size=1_000_000)
        assert abs(draws.mean() - 0.5) <= 0.001

    def test_sub_one_shape_mean(self):
        rng = np.random.default_rng(102)
        draws = beta_sample(0.5, 1.5, rng, size=1_000_000)
        assert abs(draws.mean() - 0.25) <= 0.002

    def test_product_moment(self):
        # E[y(1-y)] for Beta(2,3) equals B(3,4)/B(2,3) = 1/5
        rng = np.random.default_rng(103)
        draws = beta_sample(2.0, 3.0, rng, size=1_000_000)
        assert abs((draws * (1 - draws)).mean() - 0.2) <= 0.002

    def test_open_interval(self):
        rng = np.random.default_rng(104)
        draws = beta_sample(0.1, 20.0, rng, size=100_000)
        assert draws.min() > 0.0 and draws.max() < 1.0


class TestStickState:
    def test_invariants_along_extension(self):
        params = PYParams(0.5, 0.4)
        rng = np.random.default_rng(7)
        state = StickState()
        prev_residual = 1.0
        for _ in range(200):
            extend_sticks(params, state, rng)
            assert state.residual < prev_residual  # strictly decreasing
            prev_residual = state.residual
            assert abs(math.fsum(state.pi) + state.residual - 1.0) <= 1e-12
        # bit-exact recomputation with matching multiplication order
        assert state.residual == math.prod(1.0 - v for v in state.v)
        for j, weight in enumerate(state.pi):
            assert weight == state.v[j] * math.prod(1.0 - v for v in state.v[:j])

    def test_first_stick_mean(self):
        # E[pi_1] = (1-d)/(1+alpha) = 0.25 at (alpha, d) = (1, 0.5)
        params = PYParams(1.0, 0.5)
        rng = np.random.default_rng(8)
        first = beta_sample(1.0 - params.d, params.alpha + params.d, rng, size=200_000)
        se = first.std(ddof=1) / math.sqrt(first.size)
        assert abs(first.mean() - 0.25) <= 3.5 * se

    def test_cap_is_loud(self, monkeypatch):
        monkeypatch.setattr(sb, "STICK_CAP", 3)
        params = PYParams(1.0, 0.5)
        rng = np.random.default_rng(9)
        state = StickState()
        for _ in range(3):
            extend_sticks(params, state, rng)
        with pytest.raises(RuntimeError):
            extend_sticks(params, state, rng)


class TestSampleAllocations:
    def test_labels_positive_and_within_realized(self):
        params = PYParams(1.0, 0.5)
        rng = np.random.default_rng(10)
        state = StickState()
        z = sample_allocations(params, 50, rng, state=state)
        assert len(z) == 50
        assert all(1 <= v <= state.n_sticks for v in z)

    def test_observations_share_one_state(self, monkeypatch):
        states_seen = set()
        original = sb.extend_sticks

        def spy(params, state, rng):
            states_seen.add(id(state))
            return original(params, state, rng)

        monkeypatch.setattr(sb, "extend_sticks", spy)
        sample_allocations(PYParams(1.0, 0.5), 40, np.random.default_rng(11))
        assert len(states_seen) == 1

    def test_state_reuse_extends_not_restarts(self):
        params = PYParams(1.0, 0.5)
        rng = np.random.default_rng(12)
        state = StickState()
        sample_allocations(params, 10, rng, state=state)
        realized = state.n_sticks
        sample_allocations(params, 10, rng, state=state)
        assert state.n_sticks >= realized

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            sample_allocations(PYParams(1.0, 0.5), 0, np.random.default_rng(0))


class TestFirstAllocationMarginal:
    """Pr(z_1 = j) equals the exact allocation marginal at n = 1."""

    def test_first_three_labels(self):
        params = PYParams(1.0, 0.5)
        rng = np.random.default_rng(42)
        z = sample_allocations_batch(params, 1, 1_000_000, rng, stick_cap=10**8)[:, 0]
        for label, want in ((1, 0.25), (2, 0.15), (3, 0.10)):
            freq = (z == label).mean()
            se = math.sqrt(want * (1 - want) / z.size)
            assert abs(freq - want) <= 3.5 * se


class TestSharedRealizationRegression:
    """Resampling sticks per observation would push Pr(z_1 = z_2) far below
    the correct (1-d)/(1+alpha); this pins the one-realization code path."""

    def test_pair_merge_frequency(self):
        params = PYParams(1.0, 0.5)
        rng = np.random.default_rng(43)
        z = sample_allocations_batch(params, 2, 400_000, rng, stick_cap=10**8)
        freq = (z[:, 0] == z[:, 1]).mean()
        se = math.sqrt(0.25 * 0.75 / z.shape[0])
        assert abs(freq - 0.25) <= 3.5 * se

    def test_scalar_path_pair_merge(self):
        # d = 0.3 keeps the scalar walk clear of the stick cap: the label
        # tail decays like L^(-7/3) there, against L^(-1) at d = 0.5
        params = PYParams(1.0, 0.3)
        rng = np.random.default_rng(44)
        trials = 30_000
        hits = 0
        for _ in range(trials):
            z = sample_allocations(params, 2, rng)
            hits += z[0] == z[1]
        want = (1 - params.d) / (1 + params.alpha)
        se = math.sqrt(want * (1 - want) / trials)
        assert abs(hits / trials - want) <= 4.5 * se


class TestPartitionModeBatch:
    def test_n1_all_singletons(self):
        z = sample_partition_labels_batch(
            PYParams(0.3, 0.7), 1, 1000, np.random.default_rng(1)
        )
        assert z.shape == (1000, 1)

    def test_equality_pattern_matches_full_labels(self):
        # same law: compare merge frequencies from the two batch modes
        params = PYParams(1.0, 0.5)
        trials = 200_000
        full = sample_allocations_batch(
            params, 2, trials, np.random.default_rng(2), stick_cap=10**8
        )
        part = sample_partition_labels_batch(
            params, 2, trials, np.random.default_rng(3)
        )
        f_full = (full[:, 0] == full[:, 1]).mean()
        f_part = (part[:, 0] == part[:, 1]).mean()
        se = math.sqrt(0.25 * 0.75 / trials)
        assert abs(f_full - f_part) <= 5.0 * se

    def test_determinism(self):
        params = PYParams(0.3, 0.7)
        a = sample_partition_labels_batch(params, 4, 5000, np.random.default_rng(77))
        b = sample_partition_labels_batch(params, 4, 5000, np.random.default_rng(77))
        assert (a == b).all()


class TestStickbreakPartition:
    def test_n1(self):
        assert stickbreak_sample_partition(
            PYParams(1.0, 0.5), 1, np.random.default_rng(0)
        ).blocks == ((1,),)

    def test_seed_reproducibility(self):
        a = [stickbreak_sample_partition(PYParams(1.0, 0.5), 5, np.random.default_rng(6)) for _ in range(30)]
        b = [stickbreak_sample_partition(PYParams(1.0, 0.5), 5, np.random.default_rng(6)) for _ in range(30)]
        assert a == b

    def test_pair_frequency(self):
        # scalar walk, so keep d below 1/2 for cap-safe tail work
        params = PYParams(1.0, 0.3)
        rng = np.random.default_rng(45)
        trials = 30_000
        merged = P([[1, 2]])
        hits = sum(stickbreak_sample_partition(params, 2, rng) == merged for _ in range(trials))
        want = (1 - params.d) / (1 + params.alpha)
        se = math.sqrt(want * (1 - want) / trials)
        assert abs(hits / trials - want) <= 4.5 * se
