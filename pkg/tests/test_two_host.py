"""
Tests for cutoff_kit.two_host.

Analytic identities run on the symmetric preset (alpha = beta = 1,
gamma = delta = 2, mu = nu = 1) and on random subcritical draws; the
Monte-Carlo checks are marked slow.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutoff_kit.errors import SupercriticalError
from cutoff_kit.enums import ProfileKind
from cutoff_kit.two_host import (
    CoupledEpiJumpModel,
    CoupledEpiState,
    EpiJumpModel,
    EpiParams,
    EpiState,
    burn_in_time,
    coalescence_tv_upper,
    contraction_check,
    coupled_rates,
    default_H,
    deviation_exit_fraction,
    epi_cutoff,
    epi_rates,
    equilibrium_sample,
    equilibrium_summary,
    generator_on_distance,
    kappa_diagnostic,
    max_exit_rate,
    mean_trajectory,
    region_predicates,
    simulated_mean,
    spectral_decompose,
    start_grid,
    theta_norm,
    total_exit_rate,
    travel_time,
    tv_lower_profile,
)


@st.composite
def subcritical_params(draw):
    gamma = draw(st.floats(0.2, 5.0))
    delta = draw(st.floats(0.2, 5.0))
    alpha = draw(st.floats(0.05, 5.0))
    # beta below gamma delta / alpha keeps R < 1 with a margin
    beta = draw(st.floats(0.01, 0.95)) * gamma * delta / alpha
    mu = draw(st.floats(0.1, 3.0))
    nu = draw(st.floats(0.1, 3.0))
    return EpiParams(alpha=alpha, beta=beta, gamma=gamma, delta=delta, mu=mu, nu=nu, n=100)


@pytest.fixture
def symmetric():
    return EpiParams.symmetric(n=100)


class TestParams:
    def test_supercritical(self):
        with pytest.raises(SupercriticalError):
            EpiParams(alpha=2, beta=2, gamma=1, delta=1, mu=1, nu=1)

    @pytest.mark.parametrize('field', ['alpha', 'gamma', 'nu'])
    def test_positive_rates(self, field):
        kwargs = dict(alpha=1, beta=1, gamma=2, delta=2, mu=1, nu=1)
        kwargs[field] = 0
        with pytest.raises(ValueError, match=field):
            EpiParams(**kwargs)

    def test_state_non_negative(self):
        with pytest.raises(ValueError):
            EpiState(-1, 0)

    def test_coupled_state(self):
        assert CoupledEpiState(EpiState(1, 2), EpiState(1, 2)).coalesced
        assert CoupledEpiState(EpiState(1, 2), EpiState(2, 2)).as_array().tolist() == [1, 2, 2, 2]


class TestSpectral:
    def test_symmetric_preset(self, symmetric):
        s = spectral_decompose(symmetric)

        assert symmetric.R == 0.25
        assert s.theta == pytest.approx(1, abs=1e-12)
        assert s.rho == pytest.approx(1, abs=1e-12)
        assert s.rho_prime == pytest.approx(3, abs=1e-12)
        assert np.allclose(s.c, [1, 1], atol=1e-12)

    def test_symmetric_rates_give_equal_c(self):
        s = spectral_decompose(EpiParams(alpha=0.7, beta=0.7, gamma=1.3, delta=1.3, mu=0.4, nu=0.4))

        assert s.c[0] == pytest.approx(s.c[1], rel=1e-12)

    @given(subcritical_params())
    @settings(max_examples=100)
    def test_identities(self, p):
        s = spectral_decompose(p)
        A = p.A

        assert np.allclose(A @ s.v, -s.rho * s.v, atol=1e-12 * max(1, s.rho_prime))
        assert np.allclose(A @ s.v_prime, -s.rho_prime * s.v_prime, atol=1e-12 * max(1, s.rho_prime))
        assert np.allclose(np.array([1, s.theta]) @ A, -s.rho * np.array([1, s.theta]), rtol=1e-10, atol=1e-12)
        scale = p.beta * s.theta**2 + abs(p.delta - p.gamma) * s.theta + p.alpha
        assert p.beta * s.theta**2 + (p.delta - p.gamma) * s.theta - p.alpha == pytest.approx(0, abs=1e-12 * scale)
        assert p.alpha / p.delta < s.theta < p.gamma / p.beta
        assert s.rho == pytest.approx(p.gamma - p.beta * s.theta, rel=1e-9, abs=1e-12)
        assert np.allclose(s.c, np.linalg.solve(A, -p.b), rtol=1e-9)

    def test_supercritical_decomposition(self):
        p = EpiParams.symmetric()
        object.__setattr__(p, 'gamma', 0.5)

        with pytest.raises(SupercriticalError):
            spectral_decompose(p)

    def test_kappa_of_normal_drift(self, symmetric):
        assert kappa_diagnostic(symmetric) == pytest.approx(1.0, abs=1e-9)


class TestThetaNorm:
    @pytest.mark.parametrize('z, theta, expected', [((0, 0), 1.0, 0.0), ((1, 1), 1.0, 2.0), ((3, -2), 0.5, 4.0)])
    def test_examples(self, z, theta, expected):
        assert theta_norm(z, theta) == expected

    @given(st.tuples(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3)),
           st.tuples(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3)),
           st.floats(0.01, 10.0), st.floats(-10.0, 10.0))
    def test_norm_axioms(self, a, b, theta, scale):
        a, b = np.array(a), np.array(b)

        assert theta_norm(a + b, theta) <= theta_norm(a, theta) + theta_norm(b, theta) + 1e-9
        assert theta_norm(scale * a, theta) == pytest.approx(abs(scale) * theta_norm(a, theta), rel=1e-12, abs=1e-12)

    def test_vectorised(self):
        assert theta_norm(np.array([[1, 1], [2, -1]]), 2.0).tolist() == [3.0, 4.0]

    def test_theta_positive(self):
        with pytest.raises(ValueError):
            theta_norm((1, 1), 0.0)


class TestMeanAndTravelTime:
    def test_start_returned_at_zero(self, symmetric):
        assert mean_trajectory(symmetric, (137, 42), 0.0).tolist() == [137.0, 42.0]

    def test_fixed_point(self, symmetric):
        assert np.allclose(mean_trajectory(symmetric, (100, 100), [0.5, 3.0]), 100.0)

    def test_symmetric_example(self, symmetric):
        expected = 100 + 50 * math.exp(-1)

        assert np.allclose(mean_trajectory(symmetric, (150, 150), 1.0), [expected, expected])
        assert expected == pytest.approx(118.39, abs=5e-3)

    def test_converges_to_nc(self, symmetric):
        assert np.allclose(mean_trajectory(symmetric, (400, 10), 40.0), [100, 100], atol=1e-9)

    def test_negative_time(self, symmetric):
        with pytest.raises(ValueError):
            mean_trajectory(symmetric, (1, 1), -1.0)

    def test_travel_time_along_eigenvector(self, symmetric):
        assert travel_time(symmetric, (150, 150)) == pytest.approx(math.log(0.5 * math.sqrt(2) * 10), abs=1e-8)
        assert travel_time(symmetric, (150, 150)) == pytest.approx(1.9560, abs=1e-4)

    def test_travel_time_inside(self, symmetric):
        assert travel_time(symmetric, (105, 100)) == 0.0

    def test_travel_time_shift(self, symmetric):
        base = travel_time(symmetric, (150, 150))
        shifted = 100 + 50 * math.exp(0.5)

        assert travel_time(symmetric, (shifted, shifted)) == pytest.approx(base + 0.5, abs=1e-8)

    def test_travel_time_large_n(self):
        assert travel_time(EpiParams.symmetric(n=400), (600, 600)) == pytest.approx(math.log(20 * math.sqrt(0.5)), abs=1e-8)

    def test_burn_in(self, symmetric):
        assert burn_in_time(symmetric) == pytest.approx(math.log(100) + 10)


class TestRates:
    def test_boundary_has_only_immigration(self, symmetric):
        assert epi_rates(symmetric)((0, 0)) == [((1, 0), 100.0), ((0, 1), 100.0)]

    def test_example(self):
        p = EpiParams.symmetric(n=10)

        rates = dict(epi_rates(p)((5, 5)))

        assert rates == {(1, 0): 15.0, (0, 1): 15.0, (-1, 0): 10.0, (0, -1): 10.0}

    @given(st.integers(0, 500), st.integers(0, 500))
    def test_total_exit_rate(self, x1, x2):
        p = EpiParams(alpha=0.5, beta=1.5, gamma=2.0, delta=3.0, mu=0.3, nu=0.7, n=50)

        assert sum(rate for _, rate in epi_rates(p)((x1, x2))) == pytest.approx(total_exit_rate(p, (x1, x2)))

    def test_coupled_example(self):
        model = CoupledEpiJumpModel(EpiParams.symmetric(n=10))

        rates = model.rates(np.array([[5, 5, 5, 6]])).reshape(4, 3)

        # rows: +e1, +e2, -e1, -e2; columns: joint, u alone, v alone
        assert rates.tolist() == [[15, 0, 1], [0, 15, 15], [10, 0, 0], [0, 10, 12]]

    def test_coupled_rates_skip_zero(self):
        listed = coupled_rates(EpiParams.symmetric(n=10))((5, 5, 5, 5))

        assert len(listed) == 4
        assert all(jump[:2] == jump[2:] for jump, _ in listed)

    def test_coupled_marginals(self):
        p = EpiParams(alpha=0.5, beta=1.5, gamma=2.0, delta=3.0, mu=0.3, nu=0.7, n=50)
        model, single = CoupledEpiJumpModel(p), EpiJumpModel(p)
        states = np.random.default_rng(0).integers(0, 6, size=(100, 4))
        rates = model.rates(states)
        jumps = model.jumps
        for i, move in enumerate(single.jumps):
            moves_u = np.all(jumps[:, :2] == move, axis=1)
            moves_v = np.all(jumps[:, 2:] == move, axis=1)
            assert np.allclose(rates[:, moves_u].sum(axis=1), single.rates(states[:, :2])[:, i])
            assert np.allclose(rates[:, moves_v].sum(axis=1), single.rates(states[:, 2:])[:, i])

    def test_coalesced_pairs_move_jointly(self):
        model = CoupledEpiJumpModel(EpiParams.symmetric(n=10))
        rates = model.rates(np.array([[3, 7, 3, 7]])).reshape(4, 3)

        assert np.all(rates[:, 1:] == 0)
        assert model.coalesced(np.array([[3, 7, 3, 7], [3, 7, 3, 8]])).tolist() == [True, False]

    def test_generator_on_distance(self):
        p = EpiParams.symmetric(n=10)

        assert generator_on_distance(p, (5, 5), (5, 6)) == pytest.approx(-1.0)
        assert generator_on_distance(p, (4, 4), (4, 4)) == 0.0

    @given(st.integers(0, 30), st.integers(0, 30), st.integers(0, 30), st.integers(0, 30))
    def test_generator_contracts(self, u1, u2, v1, v2):
        p = EpiParams(alpha=0.5, beta=1.5, gamma=2.0, delta=3.0, mu=0.3, nu=0.7, n=20)
        s = spectral_decompose(p)
        d = abs(u1 - v1) + s.theta * abs(u2 - v2)

        assert generator_on_distance(p, (u1, u2), (v1, v2)) <= -s.rho * d + 1e-9 * (1 + d)

    def test_distance_jumps_by_one_or_theta(self):
        p = EpiParams(alpha=0.5, beta=1.5, gamma=2.0, delta=3.0, mu=0.3, nu=0.7, n=20)
        theta = spectral_decompose(p).theta
        model = CoupledEpiJumpModel(p)
        state = np.array([4, 9, 6, 2])
        d = lambda s: abs(s[0] - s[2]) + theta * abs(s[1] - s[3])  # noqa: E731

        for jump in model.jumps:
            change = abs(d(state + jump) - d(state))
            assert any(math.isclose(change, step, abs_tol=1e-12) for step in (0.0, 1.0, theta))


class TestRegions:
    def test_default_H_symmetric(self, symmetric):
        assert default_H(symmetric, 0.5) == pytest.approx(8.0)

    def test_max_exit_rate(self, symmetric):
        assert max_exit_rate(symmetric, default_H(symmetric, 0.5)) == pytest.approx(9800.0)

    def test_membership(self, symmetric):
        regions = region_predicates(symmetric, 0.5)

        assert regions.in_E(EpiState(150, 150))
        assert not regions.in_E((100, 100))
        assert regions.in_D((800, 0))
        assert not regions.in_D((801, 0))
        assert regions.in_E(np.array([[150, 150], [100, 100]])).tolist() == [True, False]

    def test_E_inside_D(self, symmetric):
        regions = region_predicates(symmetric, 0.5)
        angles = np.linspace(0, 2 * np.pi, 360, endpoint=False)
        ring = np.column_stack([np.cos(angles), np.sin(angles)])
        points = np.rint(np.concatenate([regions.center + 50 * ring, regions.center + 200 * ring]))
        points = points[(points >= 0).all(axis=1)]

        in_E = regions.in_E(points)
        assert np.all(regions.in_D(points[in_E]))

    def test_bad_zeta(self, symmetric):
        with pytest.raises(ValueError):
            region_predicates(symmetric, 1.0)

    def test_start_grid(self):
        p = EpiParams.symmetric(n=400)
        regions = region_predicates(p, 0.5)

        grid = start_grid(p, 0.5)

        assert len(grid.starts) == 11
        assert len(grid.skipped) == 5
        assert all(regions.in_E(state) for state in grid.starts)


class TestExperimentsFast:
    def test_equilibrium_sample_deterministic(self):
        p = EpiParams.symmetric(n=20)

        a = equilibrium_sample(p, 200, seed=1, chunk_size=64)
        b = equilibrium_sample(p, 200, seed=1, chunk_size=64, threads=3)

        assert a.shape == (200, 2)
        assert np.array_equal(a, b)
        assert a.min() >= 0

    def test_equilibrium_summary_columns(self):
        p = EpiParams.symmetric(n=20)
        frame = equilibrium_summary(p, np.array([[20, 20], [22, 18]]))

        assert frame['coordinate'].tolist() == ['x1', 'x2']
        assert frame['expected'].tolist() == pytest.approx([20.0, 20.0])
        assert list(frame.columns) == ['coordinate', 'mean', 'expected', 'SE', 'variance', 'variance_per_n', 'pass']

    def test_identical_copies_stay_together(self, symmetric):
        report = contraction_check(symmetric, (120, 100), (120, 100), [0.5, 1.0], 1000, seed=2)

        assert report.initial_distance == 0.0
        assert np.all(report.frame['mean_distance'] == 0.0)
        assert report.all_passed

    def test_trials_minimum(self, symmetric):
        with pytest.raises(ValueError, match='>= 1000'):
            contraction_check(symmetric, (120, 100), (100, 100), [1.0], 999, seed=1)

    def test_coalesced_pairs_report_zero(self):
        p = EpiParams.symmetric(n=20)
        v = np.tile([30, 30], (1000, 1))

        profile = coalescence_tv_upper(p, (30, 30), [0.0, 1.0, 2.0], 1000, seed=3, v_samples=v)

        assert profile.kind == ProfileKind.mc_upper
        assert np.all(profile.values == 0.0)
        assert profile.times[0] == pytest.approx(travel_time(p, (30, 30)))

    def test_v_samples_shape_checked(self):
        p = EpiParams.symmetric(n=20)

        with pytest.raises(ValueError, match='v_samples'):
            coalescence_tv_upper(p, (30, 30), [0.0], 1000, seed=3, v_samples=np.zeros((10, 2)))

    def test_lower_profile_skips_late_s(self):
        p = EpiParams.symmetric(n=25)
        t_n = travel_time(p, (40, 40))

        profile = tv_lower_profile(p, (40, 40), [0.0, 1.0, 2.0], 1000, seed=4)

        assert t_n < 2.0
        assert profile.times.tolist() == pytest.approx([t_n - 1.0, t_n])
        assert any('skipped s=[2.0]' in note for note in profile.notes)
        assert np.all((profile.values >= 0) & (profile.values <= 1))

    def test_lower_profile_needs_some_s(self):
        p = EpiParams.symmetric(n=25)

        with pytest.raises(ValueError, match='no s in s_grid'):
            tv_lower_profile(p, (40, 40), [5.0], 1000, seed=4)


@pytest.mark.slow
class TestExperimentsMonteCarlo:
    """Desk-scale Monte-Carlo checks on the symmetric preset."""

    def test_simulated_mean(self, symmetric):
        frame = simulated_mean(symmetric, (150, 150), [0.5, 1.0, 2.0], 10_000, seed=11)

        assert frame['pass'].all()

    def test_contraction(self, symmetric):
        report = contraction_check(symmetric, (120, 100), (100, 100), [0.5, 1.0, 2.0], 10_000, seed=12)

        assert report.initial_distance == 20.0
        assert report.all_passed

    def test_equilibrium_mean_and_scaling(self):
        small = equilibrium_sample(EpiParams.symmetric(n=100), 10_000, seed=13)
        large = equilibrium_sample(EpiParams.symmetric(n=400), 10_000, seed=14)

        assert equilibrium_summary(EpiParams.symmetric(n=100), small)['pass'].all()
        assert equilibrium_summary(EpiParams.symmetric(n=400), large)['pass'].all()
        ratio = np.cov(large.T) / np.cov(small.T)
        assert np.all((ratio >= 2.5) & (ratio <= 5.5))

    def test_deviation_exit_is_rare(self, symmetric):
        report = deviation_exit_fraction(symmetric, (150, 150), trials=1000, seed=15)

        assert report.threshold == pytest.approx(1600.0)
        assert report.passed()

    def test_profiles_around_travel_time(self):
        p = EpiParams.symmetric(n=400)
        eq = equilibrium_sample(p, 2000, seed=16)

        upper = coalescence_tv_upper(p, (600, 600), [0.0, 2.0, 4.0, 8.0], 2000, seed=17, v_samples=eq)
        # t_n(600, 600) is below 3, so the far start carries the s = 3 check
        lower = tv_lower_profile(p, (1200, 400), [0.0, 1.0, 2.0, 3.0], 2000, seed=18, eq_samples=eq)

        assert upper.values[-1] < 0.15
        assert np.all(np.diff(upper.values) <= 3 * upper.se[1:] + 1e-12)
        assert travel_time(p, (600, 600)) < 3.0
        assert lower.values[0] > 0.8
        # values are ordered by time, so s decreases along the profile
        assert np.all(np.diff(lower.values) <= 3 * lower.se[1:] + 3 * lower.se[:-1])

    def test_cutoff_grid(self):
        p = EpiParams.symmetric(n=400)

        report = epi_cutoff(p, 0.5, s_grid=np.arange(0.0, 8.01, 0.25), trials=1000, seed=19)

        assert len(report.starts) == 11
        upper_at_8 = [profile.value_at(report.travel_times[key] + 8.0) for key, profile in report.upper.items()]
        assert max(upper_at_8) < 0.15
        far = [key for key, t_n in report.travel_times.items() if t_n >= 3.0]
        assert far
        for key in far:
            assert report.lower[key].value_at(report.travel_times[key] - 3.0) > 0.8, key
        frame = report.profiles_frame()
        assert set(frame['side']) == {'lower', 'upper'}
        assert list(frame.columns) == ['x1', 'x2', 'side', 'time', 'value', 'se']
