"""
Tests for cutoff_kit.markov_core: distributions, samplers, seeding and the
chunked ensemble runner.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutoff_kit.errors import DimensionMismatchError, ExplosionError, InvalidRateError
from cutoff_kit.markov_core import (
    DenseKernel,
    JumpPath,
    ProbVector,
    SeedSpec,
    chunk_slices,
    empirical_distribution,
    evolve_distribution,
    run_chunks,
    simulate_ctmc,
    simulate_ctmc_ensemble,
    simulate_dtmc,
    stationary_distribution,
    tv_distance,
    tv_lower_bound_from_samples,
    tv_profile,
)


def _bl4() -> DenseKernel:
    n = 4
    rows = np.zeros((n + 1, n + 1))
    for j in range(n + 1):
        up, down = (1 - j / n) ** 2, (j / n) ** 2
        if j < n:
            rows[j, j + 1] = up
        if j > 0:
            rows[j, j - 1] = down
        rows[j, j] = 1 - up - down
    return DenseKernel(rows)


def _prob_vectors(size: int):
    weights = st.lists(st.floats(0.01, 1.0), min_size=size, max_size=size)
    return weights.map(ProbVector.normalized)


class _Death:
    """Pure death at rate 2 from 1; absorbing at 0."""
    jumps = np.array([[-1]])

    def rates(self, states):
        return 2.0 * (states > 0).astype(float)


class _Immigration:
    """Unit jumps up at rate 1 and down at rate x."""
    jumps = np.array([[1], [-1]])

    def rates(self, states):
        return np.column_stack([np.ones(len(states)), states[:, 0].astype(float)])


class TestProbVectorAndKernel:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError, match='sum to'):
            ProbVector([0.5, 0.4])

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            ProbVector([1.5, -0.5])

    def test_kernel_rows_checked(self):
        with pytest.raises(ValueError, match='row 1'):
            DenseKernel([[1.0, 0.0], [0.3, 0.3]])

    def test_kernel_must_be_square(self):
        with pytest.raises(DimensionMismatchError):
            DenseKernel(np.ones((2, 3)) / 3)

    def test_immutable(self):
        p = ProbVector([0.5, 0.5])
        with pytest.raises(ValueError):
            p.probs[0] = 1.0


class TestTvDistance:
    @pytest.mark.parametrize('p, q, expected', [
        ([0.3, 0.7], [0.3, 0.7], 0.0),
        ([1.0, 0.0], [0.0, 1.0], 1.0),
        ([0.5, 0.5], [1.0, 0.0], 0.5),
    ])
    def test_examples(self, p, q, expected):
        assert tv_distance(ProbVector(p), ProbVector(q)) == pytest.approx(expected)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            tv_distance(ProbVector([1.0]), ProbVector([0.5, 0.5]))

    @given(_prob_vectors(5), _prob_vectors(5), _prob_vectors(5))
    def test_triangle_inequality(self, p, q, r):
        assert tv_distance(p, r) <= tv_distance(p, q) + tv_distance(q, r) + 1e-12

    @given(_prob_vectors(4), _prob_vectors(4))
    def test_symmetric(self, p, q):
        assert tv_distance(p, q) == pytest.approx(tv_distance(q, p), abs=1e-15)


class TestEvolveDistribution:
    def test_zero_steps_is_identity(self):
        p0 = ProbVector([0.2, 0.3, 0.5])
        assert np.array_equal(evolve_distribution(_bl4().lazy(), ProbVector.point_mass(5, 0), 0).probs, [1, 0, 0, 0, 0])
        assert np.allclose(evolve_distribution(DenseKernel.identity(3), p0, 7).probs, p0.probs)

    def test_from_full_urn_moves_down(self):
        p = evolve_distribution(_bl4(), ProbVector.point_mass(5, 4), 1)

        assert p.probs[3] == pytest.approx(1.0)

    @given(st.integers(0, 10), st.integers(0, 10))
    @settings(max_examples=25)
    def test_semigroup(self, a, b):
        kernel, p0 = _bl4(), ProbVector.point_mass(5, 4)

        lhs = evolve_distribution(kernel, p0, a + b)
        rhs = evolve_distribution(kernel, evolve_distribution(kernel, p0, a), b)

        assert np.allclose(lhs.probs, rhs.probs, atol=1e-12)

    def test_negative_steps(self):
        with pytest.raises(ValueError):
            evolve_distribution(_bl4(), ProbVector.point_mass(5, 0), -1)

    def test_tv_to_stationary_non_increasing(self):
        kernel = _bl4()
        pi = stationary_distribution(kernel)

        values = tv_profile(kernel, ProbVector.point_mass(5, 4), pi, 50)

        assert values[0] == pytest.approx(1 - pi.probs[4])
        assert np.all(np.diff(values) <= 1e-10)

    def test_stationary_is_hypergeometric(self):
        pi = stationary_distribution(_bl4())

        assert np.allclose(pi.probs, np.array([1, 16, 36, 16, 1]) / 70, atol=1e-10)


class TestSeedSpec:
    def test_equal_specs_equal_streams(self):
        a = SeedSpec(42).generator().random(5)
        b = SeedSpec(42).generator().random(5)

        assert np.array_equal(a, b)

    def test_derived_streams_differ(self):
        seed = SeedSpec(42)
        keys = {seed.spawn_key, seed.chunk(0).spawn_key, seed.child(0).spawn_key, seed.child(0).chunk(0).spawn_key}

        assert len(keys) == 4
        assert seed.child(1).chunk(2).spawn_key == (0, 1, 1, 0, 2)

    @pytest.mark.parametrize('bad', [-1, 2**64])
    def test_range(self, bad):
        with pytest.raises(ValueError):
            SeedSpec(bad)

    def test_rejects_bool(self):
        with pytest.raises(TypeError):
            SeedSpec(True)


class TestSimulateDtmc:
    def test_zero_steps(self):
        assert simulate_dtmc(_bl4(), 2, 0, seed=1).tolist() == [2]

    def test_identity_kernel_constant(self):
        assert set(simulate_dtmc(DenseKernel.identity(3), 1, 50, seed=1)) == {1}

    def test_full_urn_first_step(self):
        for seed in range(20):
            assert simulate_dtmc(_bl4(), 4, 1, seed=seed)[1] == 3

    def test_reproducible(self):
        a = simulate_dtmc(_bl4(), 4, 200, SeedSpec(7))
        b = simulate_dtmc(_bl4(), 4, 200, SeedSpec(7))

        assert np.array_equal(a, b)

    def test_bad_start(self):
        with pytest.raises(DimensionMismatchError):
            simulate_dtmc(_bl4(), 9, 1, seed=0)

    @pytest.mark.slow
    def test_one_step_frequencies_match_row(self):
        kernel = _bl4()
        path = simulate_dtmc(kernel, 1, 10**6, seed=3)
        from_one = path[1:][path[:-1] == 1]
        counts = np.bincount(from_one, minlength=5) / from_one.size
        p = kernel.rows[1]

        assert np.all(np.abs(counts - p) <= 5 * np.sqrt(p * (1 - p) / from_one.size) + 1e-12)


class TestSimulateCtmc:
    def test_zero_horizon(self):
        path = simulate_ctmc(lambda x: [((1,), 1.0)], (0,), 0.0, seed=1)
        assert path.n_jumps == 0

    def test_absorbing(self):
        path = simulate_ctmc(lambda x: [], 3, 100.0, seed=1)

        assert path.n_jumps == 0
        assert path.state_at(50.0) == (3,)

    def test_invalid_rate(self):
        with pytest.raises(InvalidRateError):
            simulate_ctmc(lambda x: [((1,), 0.0)], (0,), 1.0, seed=1)

    def test_zero_jump(self):
        with pytest.raises(InvalidRateError):
            simulate_ctmc(lambda x: [((0,), 1.0)], (0,), 1.0, seed=1)

    def test_explosion_guard(self):
        with pytest.raises(ExplosionError):
            simulate_ctmc(lambda x: [((1,), 1e6)], (0,), 1.0, seed=1, max_jumps=100)

    def test_explosion_cap_counts_jumps_beyond_the_cap(self):
        # exactly two jumps are possible before absorption at 2
        rf = lambda x: [((1,), 1e6)] if x < 2 else []  # noqa: E731
        assert simulate_ctmc(rf, 0, 1.0, seed=3, max_jumps=2).times.size == 2
        with pytest.raises(ExplosionError) as info:
            simulate_ctmc(rf, 0, 1.0, seed=3, max_jumps=1)
        assert info.value.max_jumps == 1

    def test_reproducible_and_valid(self):
        rf = lambda x: [((1, 0), 1.0), ((0, 1), 0.5)]  # noqa: E731
        a = simulate_ctmc(rf, (0, 0), 10.0, SeedSpec(5))
        b = simulate_ctmc(rf, (0, 0), 10.0, SeedSpec(5))

        assert np.array_equal(a.times, b.times)
        assert np.array_equal(a.states, b.states)
        assert a.states[-1].sum() == a.n_jumps

    @pytest.mark.slow
    def test_pure_death_first_jump_mean(self):
        rf = lambda x: [((-1,), 2.0)] if x[0] > 0 else []  # noqa: E731
        times = np.array([simulate_ctmc(rf, (1,), 100.0, SeedSpec(11).child(i)).times[0] for i in range(10**5)])

        se = times.std(ddof=1) / np.sqrt(times.size)
        assert abs(times.mean() - 0.5) <= 3 * se


class TestJumpPath:
    def test_state_count_checked(self):
        with pytest.raises(DimensionMismatchError):
            JumpPath(np.array([0.5]), np.array([[0]]), 1.0)

    def test_frame(self):
        path = JumpPath(np.array([0.5]), np.array([[0, 0], [1, 0]]), 1.0)

        frame = path.to_frame()

        assert list(frame.columns) == ['time', 'x1', 'x2']
        assert frame['time'].tolist() == [0.0, 0.5]


class TestEmpirical:
    def test_examples(self):
        assert empirical_distribution(['a']) == {'a': 1.0}
        assert empirical_distribution(['a', 'a', 'b', 'b']) == {'a': 0.5, 'b': 0.5}

    def test_tuple_rows(self):
        freq = empirical_distribution(np.array([[1, 2], [1, 2], [0, 0], [1, 2]]))

        assert freq == {(0, 0): 0.25, (1, 2): 0.75}

    def test_empty(self):
        with pytest.raises(ValueError):
            empirical_distribution([])

    def test_fair_coin(self):
        draws = SeedSpec(1).generator().integers(0, 2, 10**5)

        freq = empirical_distribution(draws)

        assert abs(freq[0] - 0.5) < 0.01
        assert sum(freq.values()) == pytest.approx(1.0)


class TestTvLowerBound:
    def test_identical_samples(self):
        s = np.arange(10)
        assert tv_lower_bound_from_samples(s, s, [lambda a: a > 3]) == 0.0

    def test_separated_samples(self):
        assert tv_lower_bound_from_samples(np.ones(5), np.zeros(5), [lambda a: a > 0.5]) == 1.0

    def test_two_fair_coins(self):
        rng = SeedSpec(2).generator()
        a, b = rng.integers(0, 2, 10**5), rng.integers(0, 2, 10**5)

        assert tv_lower_bound_from_samples(a, b, [lambda s: s == 1]) <= 0.02

    def test_needs_tests(self):
        with pytest.raises(ValueError):
            tv_lower_bound_from_samples([1], [1], [])


class TestRunChunks:
    def test_slices(self):
        assert chunk_slices(5, 2) == [slice(0, 2), slice(2, 4), slice(4, 5)]
        assert chunk_slices(0, 2) == []

    def test_thread_count_does_not_change_results(self):
        def draw(sl, rng):
            return rng.random(sl.stop - sl.start)

        one = np.concatenate(run_chunks(draw, 1000, 9, chunk_size=64, threads=1))
        four = np.concatenate(run_chunks(draw, 1000, 9, chunk_size=64, threads=4))

        assert np.array_equal(one, four)


class TestEnsemble:
    def test_absorbed_paths_stay(self):
        result = simulate_ctmc_ensemble(_Death(), [1], [0.0, 50.0], 200, seed=3)

        assert result.states.shape == (2, 200, 1)
        assert np.all(result.at(0) == 1)
        assert np.all(result.at(1) == 0)
        assert np.all(result.jump_counts == 1)

    def test_jump_cap_matches_single_path_runner(self):
        # every path dies after exactly one jump
        result = simulate_ctmc_ensemble(_Death(), [1], [0.0, 50.0], 20, seed=3, max_jumps=1)
        assert np.all(result.jump_counts == 1)
        with pytest.raises(ExplosionError):
            simulate_ctmc_ensemble(_Immigration(), [1], [0.0, 50.0], 20, seed=3, max_jumps=1)

    def test_threads_invariant(self):
        kwargs = dict(t_grid=[0.0, 1.0, 3.0], n_paths=300, seed=SeedSpec(4), chunk_size=50)
        a = simulate_ctmc_ensemble(_Immigration(), [5], threads=1, **kwargs)
        b = simulate_ctmc_ensemble(_Immigration(), [5], threads=3, **kwargs)

        assert np.array_equal(a.states, b.states)

    def test_stop_predicate_freezes(self):
        result = simulate_ctmc_ensemble(
            _Immigration(), [3], [0.0, 100.0], 100, seed=5, stop=lambda s: s[:, 0] == 0,
        )

        stopped = np.isfinite(result.stop_times)
        assert stopped.any()
        assert np.all(result.at(1)[stopped, 0] == 0)

    def test_running_max(self):
        result = simulate_ctmc_ensemble(_Immigration(), [2], [0.0, 5.0], 50, seed=6, norm_weights=[1.0])

        assert np.all(result.running_max >= np.maximum(2, result.at(1)[:, 0]))

    def test_mean_matches_immigration_death(self):
        # E X(t) = 1 + (x0 - 1) e^{-t}
        t = np.array([0.0, 1.0])
        result = simulate_ctmc_ensemble(_Immigration(), [5], t, 4000, seed=8)

        mean = result.mean()[:, 0]
        se = result.at(1)[:, 0].std(ddof=1) / np.sqrt(4000)
        assert abs(mean[1] - (1 + 4 * np.exp(-1))) <= 4 * se

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            simulate_ctmc_ensemble(_Immigration(), [[1], [2]], [1.0], 3, seed=1)

    def test_bad_grid(self):
        with pytest.raises(ValueError):
            simulate_ctmc_ensemble(_Immigration(), [1], [2.0, 1.0], 3, seed=1)

    def test_frame(self):
        frame = simulate_ctmc_ensemble(_Immigration(), [1], [0.0, 1.0], 3, seed=1).to_frame()

        assert list(frame.columns) == ['time', 'path', 'x1']
        assert len(frame) == 6
