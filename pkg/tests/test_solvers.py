import numpy as np
import pytest

from goldgen import dynamics as dyn
from goldgen import polycore as pc
from goldgen import solvers as sv
from goldgen.errors import DegenerateModes, NoPeriodFound, TrackingAmbiguity
from goldgen.permgen import canonical_sort
from goldgen.verify import set_distance

X0 = np.array([0.9 + 0.1j, -0.2 - 0.5j, -0.8 + 0.6j])
V0 = np.array([0.1 - 0.2j, 0.25 + 0.1j, -0.15 + 0.05j])


class TestLinearSeed:
    def test_modes_are_i_and_minus_a(self):
        a = 0.5
        st = sv.solve_linear_seed([1.0], [1j], a, +1, 2.0)
        np.testing.assert_allclose(st.x, [np.exp(2j)], atol=1e-12)
        st = sv.solve_linear_seed([1.0], [-a], a, +1, 2.0)
        np.testing.assert_allclose(st.x, [np.exp(-2 * a)], atol=1e-12)

    def test_initial_conditions(self):
        st = sv.solve_linear_seed(X0, V0, 0.3 - 0.2j, +1, 0.0)
        np.testing.assert_allclose(st.x, X0)
        np.testing.assert_allclose(st.v, V0)

    def test_satisfies_ode(self):
        a, t, h = 0.4 + 0.1j, 1.3, 1e-5
        xm = sv.solve_linear_seed(X0, V0, a, +1, t - h).x
        x0 = sv.solve_linear_seed(X0, V0, a, +1, t).x
        xp = sv.solve_linear_seed(X0, V0, a, +1, t + h).x
        acc = (xp - 2 * x0 + xm) / h**2
        vel = (xp - xm) / (2 * h)
        np.testing.assert_allclose(acc, (1j - a) * vel + 1j * a * x0, atol=1e-5)

    def test_degenerate_modes(self):
        # ia_sign=+1 modes are i and -a: confluent when a = -i
        with pytest.raises(DegenerateModes):
            sv.solve_linear_seed([1.0], [0.0], -1j, +1, 1.0)

    def test_both_signs_solve_their_ode(self):
        a, t, h = 0.5, 0.7, 1e-5
        for sgn in (+1, -1):
            xm = sv.solve_linear_seed(X0, V0, a, sgn, t - h).x
            x0 = sv.solve_linear_seed(X0, V0, a, sgn, t).x
            xp = sv.solve_linear_seed(X0, V0, a, sgn, t + h).x
            acc = (xp - 2 * x0 + xm) / h**2
            vel = (xp - xm) / (2 * h)
            np.testing.assert_allclose(
                acc, (1j - a) * vel + sgn * 1j * a * x0, atol=1e-5
            )


class TestIsoGoldfishClosedForm:
    def test_t0_returns_initial_set(self):
        out = sv.solve_iso_goldfish_at(X0, V0, 1.0, 0.0)
        np.testing.assert_allclose(out, canonical_sort(X0))

    def test_period_recurrence(self):
        out = sv.solve_iso_goldfish_at(X0, V0, 1.0, 2 * np.pi)
        np.testing.assert_allclose(out, canonical_sort(X0), atol=1e-10)

    def test_matches_ode_omega1(self):
        spec = dyn.ModelSpec("iso_goldfish", omega=1.0)
        grid = np.linspace(0.0, 2 * np.pi, 41)
        traj = dyn.integrate(spec, dyn.PhaseState(X0, V0), grid[-1], grid)
        for st, t in zip(traj.states, grid):
            alg = sv.solve_iso_goldfish_at(X0, V0, 1.0, t)
            assert set_distance(alg, st.x) < 1e-7

    def test_omega0_limit_is_goldfish(self):
        spec = dyn.ModelSpec("goldfish")
        grid = np.linspace(0.0, 0.8, 9)
        traj = dyn.integrate(spec, dyn.PhaseState(X0, V0), grid[-1], grid)
        for st, t in zip(traj.states, grid):
            alg = sv.solve_iso_goldfish_at(X0, V0, 0.0, t)
            assert set_distance(alg, st.x) < 1e-7

    def test_zero_velocity_is_stationary(self):
        out = sv.solve_iso_goldfish_at(X0, np.zeros(3), 1.0, 1.234)
        assert set_distance(out, X0) < 1e-10


class TestTrackZeros:
    def test_labels_follow_rotation(self):
        ts = np.linspace(0.0, 0.5, 21)
        frames = [np.array([np.exp(1j * t), -np.exp(1j * t)]) for t in ts]
        path = sv.track_zeros(frames, times=ts)
        np.testing.assert_allclose(path.values[:, 0], -np.exp(1j * ts))
        np.testing.assert_allclose(path.values[:, 1], np.exp(1j * ts))

    def test_accepts_polynomials(self):
        ts = np.linspace(0.0, 0.3, 11)
        frames = [
            pc.coeffs_from_zeros([1 + t, -1 - t, 1j * (0.5 + t)]) for t in ts
        ]
        path = sv.track_zeros(frames, times=ts)
        np.testing.assert_allclose(path.values[:, 2], 1 + ts, atol=1e-9)

    def test_coarse_grid_ambiguous(self):
        # antipodal pair rotating by pi/2 per frame: matchings tie exactly
        ts = np.array([0.0, np.pi / 2, np.pi])
        frames = [np.array([np.exp(1j * t), -np.exp(1j * t)]) for t in ts]
        with pytest.raises(TrackingAmbiguity):
            sv.track_zeros(frames, times=ts)

    def test_large_jump_rejected(self):
        frames = [np.array([1.0, -1.0]), np.array([1.0j, -1.0j])]
        with pytest.raises(TrackingAmbiguity):
            sv.track_zeros(frames)

    def test_needs_two_frames(self):
        with pytest.raises(TrackingAmbiguity):
            sv.track_zeros([np.array([1.0, -1.0])])

    def test_csv_format(self):
        ts = np.linspace(0.0, 0.2, 5)
        frames = [np.array([1 + t, -1 - t]) for t in ts]
        text = sv.track_zeros(frames, times=ts).to_csv()
        lines = text.strip().split("\n")
        assert lines[0] == "t,x1_re,x1_im,x2_re,x2_im"
        assert len(lines) == 6


class TestGenerationPath:
    @pytest.mark.parametrize("depth", [1, 2])
    @pytest.mark.parametrize("a", [0.0, 0.5])
    def test_matches_ode(self, depth, a):
        seed_spec = dyn.ModelSpec("linear_seed", a=a)
        mu = (2,) * depth
        grid = np.linspace(0.0, 2 * np.pi, 121)
        path = sv.solve_generation_path(
            seed_spec, dyn.PhaseState(X0, V0), mu, grid
        )
        gen_spec = dyn.ModelSpec("generation", depth=depth, seed=seed_spec, mu=mu)
        s0 = dyn.build_initial_state(dyn.PhaseState(X0, V0), mu)
        traj = dyn.integrate(gen_spec, s0, grid[-1], grid)
        dev = max(
            set_distance(path.values[i], traj.states[i].x)
            for i in range(len(grid))
        )
        assert dev < 1e-6

    def test_initial_frame_consistent_with_lift(self):
        seed_spec = dyn.ModelSpec("linear_seed", a=0.5)
        grid = np.linspace(0.0, 0.5, 11)
        path = sv.solve_generation_path(
            seed_spec, dyn.PhaseState(X0, V0), (3,), grid
        )
        s0 = dyn.build_initial_state(dyn.PhaseState(X0, V0), (3,))
        assert set_distance(path.values[0], s0.x) < 1e-10

    def test_iso_goldfish_seed_supported(self):
        seed_spec = dyn.ModelSpec("iso_goldfish", omega=1.0)
        grid = np.linspace(0.0, 1.0, 41)
        path = sv.solve_generation_path(
            seed_spec, dyn.PhaseState(X0, V0), (1,), grid
        )
        assert path.values.shape == (41, 3)


class TestDetectPeriod:
    def _cos_path(self, p, T, n_periods=8, pts_per=40):
        ts = np.linspace(0.0, n_periods * T, n_periods * pts_per + 1)
        vals = np.stack(
            [np.cos(2 * np.pi * ts / (p * T)),
             np.sin(2 * np.pi * ts / (p * T))], axis=1
        ).astype(np.complex128)
        return sv.LabeledPath(ts, vals)

    @pytest.mark.parametrize("p", [1, 2, 3])
    def test_finds_multiplier(self, p):
        rep = sv.detect_period(self._cos_path(p, 1.5), T=1.5, p_max=6)
        assert rep.multiplier == p
        assert rep.residual < 1e-9

    def test_no_period_raises(self):
        ts = np.linspace(0.0, 10.0, 401)
        vals = np.exp(ts)[:, None].astype(np.complex128)
        with pytest.raises(NoPeriodFound):
            sv.detect_period(sv.LabeledPath(ts, vals), T=1.0, p_max=6)

    def test_nonuniform_grid_rejected(self):
        ts = np.array([0.0, 0.1, 0.5, 0.6])
        vals = np.zeros((4, 1), dtype=np.complex128)
        with pytest.raises(ValueError):
            sv.detect_period(sv.LabeledPath(ts, vals), T=0.2, p_max=3)

    def test_incommensurate_period_rejected(self):
        path = self._cos_path(1, 1.5)
        with pytest.raises(ValueError):
            sv.detect_period(path, T=1.511, p_max=3)
