import numpy as np
import pytest

from goldgen import dynamics as dyn
from goldgen import polycore as pc
from goldgen.errors import CollisionError


def random_state(rng, n, gap=0.3):
    while True:
        x = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
        if pc.min_pairwise_gap(x) > gap:
            break
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return dyn.PhaseState(x, v)


class TestModelSpec:
    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            dyn.ModelSpec("bogus")

    def test_generation_needs_seed(self):
        with pytest.raises(ValueError):
            dyn.ModelSpec("generation", depth=1)
        with pytest.raises(ValueError):
            dyn.ModelSpec("generation", depth=0, seed=dyn.ModelSpec("goldfish"))

    def test_nested_generation_rejected(self):
        inner = dyn.ModelSpec("generation", depth=1, seed=dyn.ModelSpec("goldfish"))
        with pytest.raises(ValueError):
            dyn.ModelSpec("generation", depth=1, seed=inner)

    def test_ia_sign_validated(self):
        with pytest.raises(ValueError):
            dyn.ModelSpec("linear_seed", ia_sign=2)


class TestSeedRHS:
    def test_goldfish_two_body(self):
        s = dyn.PhaseState([1, -1], [1, 1])
        np.testing.assert_allclose(dyn.rhs_goldfish(s), [1, -1])

    def test_goldfish_zero_velocity(self):
        s = dyn.PhaseState([1, -1, 1j], [0, 0, 0])
        np.testing.assert_allclose(dyn.rhs_goldfish(s), 0)

    def test_iso_reduces_at_omega0(self):
        rng = np.random.default_rng(0)
        s = random_state(rng, 4)
        np.testing.assert_allclose(
            dyn.rhs_iso_goldfish(s, 0.0), dyn.rhs_goldfish(s)
        )

    def test_iso_extra_term(self):
        rng = np.random.default_rng(1)
        s = random_state(rng, 3)
        np.testing.assert_allclose(
            dyn.rhs_iso_goldfish(s, 2.5) - dyn.rhs_goldfish(s), 2.5j * s.v
        )

    def test_linear_seed_signs(self):
        s = dyn.PhaseState([1.0], [1.0])
        a = 0.5
        plus = dyn.rhs_linear_seed(s, a, +1)
        minus = dyn.rhs_linear_seed(s, a, -1)
        np.testing.assert_allclose(plus, [(1j - a) + 1j * a])
        np.testing.assert_allclose(minus, [(1j - a) - 1j * a])

    def test_collision_guard(self):
        s = dyn.PhaseState([0.0, 1e-12], [1.0, 1.0])
        with pytest.raises(CollisionError):
            dyn.rhs_goldfish(s)


class TestGenerationRHS:
    def test_depth1_iso_matches_transfer(self):
        # build x from a coefficient state, compare rhs against the
        # explicit transfer pipeline
        rng = np.random.default_rng(2)
        y_state = random_state(rng, 3)
        x = pc.zeros_from_coeffs(pc.MonicPoly(y_state.x)).zeros
        v = pc.zeros_velocity(x, y_state.v)
        spec = dyn.ModelSpec(
            "generation", depth=1, seed=dyn.ModelSpec("iso_goldfish", omega=1.0)
        )
        got = dyn.rhs(dyn.PhaseState(x, v), spec)
        y_ddot = dyn.rhs_iso_goldfish(y_state, 1.0)
        want = pc.zeros_acceleration(x, v, y_ddot)
        np.testing.assert_allclose(got, want, atol=1e-10)

    def test_depth2_equals_nesting_by_hand(self):
        rng = np.random.default_rng(3)
        s = random_state(rng, 3)
        spec2 = dyn.ModelSpec(
            "generation", depth=2, seed=dyn.ModelSpec("goldfish")
        )
        got = dyn.rhs(s, spec2)
        # manual two-level unwind
        signs = (-1.0) ** np.arange(1, 4)
        y = signs * pc.elem_sym_all(s.x)
        ydot = pc.coeffs_velocity(s.x, s.v)
        spec1 = dyn.ModelSpec(
            "generation", depth=1, seed=dyn.ModelSpec("goldfish")
        )
        yddot = dyn.rhs(dyn.PhaseState(y, ydot), spec1)
        want = pc.zeros_acceleration(s.x, s.v, yddot)
        np.testing.assert_allclose(got, want, atol=1e-9)

    def test_collision_reports_level(self):
        # coefficients coincide while zeros stay separated
        x = pc.zeros_from_coeffs(pc.MonicPoly([0.5, 0.5 + 1e-13])).zeros
        spec = dyn.ModelSpec(
            "generation", depth=1, seed=dyn.ModelSpec("goldfish")
        )
        with pytest.raises(CollisionError) as exc:
            dyn.rhs(dyn.PhaseState(x, [1.0, 1.0]), spec)
        assert exc.value.level == 1


class TestBuildInitialState:
    def test_depth1_positions_are_roots(self):
        seed = dyn.PhaseState([0.6 + 0.1j, -0.7 - 0.2j], [0.1, -0.3j])
        lifted = dyn.build_initial_state(seed, (1,))
        # coefficient vector is the sorted seed positions
        y = np.sort_complex(seed.x)
        want = pc.zeros_from_coeffs(pc.MonicPoly(y)).zeros
        np.testing.assert_allclose(np.sort_complex(lifted.x),
                                   np.sort_complex(want), atol=1e-10)

    def test_velocity_transfer_consistent(self):
        seed = dyn.PhaseState([0.6 + 0.1j, -0.7 - 0.2j, 0.2 + 0.9j],
                              [0.1, -0.3j, 0.2 + 0.1j])
        lifted = dyn.build_initial_state(seed, (3,))
        # invert: coefficients of lifted.x should move at the permuted
        # seed velocity
        ydot = pc.coeffs_velocity(lifted.x, lifted.v)
        order = np.lexsort((seed.x.imag, seed.x.real))
        from goldgen.permgen import apply_mu
        want = apply_mu(3, seed.v[order])
        np.testing.assert_allclose(ydot, want, atol=1e-10)

    def test_two_levels_compose(self):
        seed = dyn.PhaseState([0.6 + 0.1j, -0.7 - 0.2j], [0.1, -0.3j])
        once = dyn.build_initial_state(seed, (2,))
        twice_direct = dyn.build_initial_state(seed, (2, 1))
        twice_stepwise = dyn.build_initial_state(once, (1,))
        np.testing.assert_allclose(twice_direct.x, twice_stepwise.x, atol=1e-10)
        np.testing.assert_allclose(twice_direct.v, twice_stepwise.v, atol=1e-10)


class TestIntegrator:
    def test_linear_seed_against_closed_form(self):
        from goldgen.solvers import solve_linear_seed

        s0 = dyn.PhaseState([0.9 + 0.1j, -0.2 - 0.5j], [0.1 - 0.2j, 0.25 + 0.1j])
        spec = dyn.ModelSpec("linear_seed", a=0.5)
        grid = np.linspace(0.0, 3.0, 31)
        traj = dyn.integrate(spec, s0, 3.0, out_times=grid)
        for st, t in zip(traj.states, grid):
            ref = solve_linear_seed(s0.x, s0.v, 0.5, +1, t)
            np.testing.assert_allclose(st.x, ref.x, atol=1e-8)
            np.testing.assert_allclose(st.v, ref.v, atol=1e-8)

    def test_output_grid_respected(self):
        s0 = dyn.PhaseState([1.0, -1.0], [0.1, -0.1])
        grid = np.array([0.0, 0.25, 1.0, 1.5])
        traj = dyn.integrate(dyn.ModelSpec("goldfish"), s0, 1.5, out_times=grid)
        assert [s.t for s in traj.states] == list(grid)
        assert traj.steps > 0

    def test_grid_must_start_at_t0(self):
        s0 = dyn.PhaseState([1.0, -1.0], [0.1, -0.1])
        with pytest.raises(ValueError):
            dyn.integrate(dyn.ModelSpec("goldfish"), s0, 1.0,
                          out_times=[0.5, 1.0])

    def test_iso_goldfish_periodicity(self):
        # omega=2: base period pi; labeled positions recur up to a permutation,
        # and the coefficient path recurs exactly
        s0 = dyn.PhaseState([0.9 + 0.1j, -0.2 - 0.5j, -0.8 + 0.6j],
                            [0.1 - 0.2j, 0.25 + 0.1j, -0.15 + 0.05j])
        spec = dyn.ModelSpec("iso_goldfish", omega=2.0)
        T = np.pi
        traj = dyn.integrate(spec, s0, T, out_times=[0.0, T / 2, T])
        start = pc.coeffs_from_zeros(s0.x).coeffs
        end = pc.coeffs_from_zeros(traj.states[-1].x).coeffs
        np.testing.assert_allclose(end, start, atol=1e-7)

    def test_head_on_collision_detected(self):
        # velocities diverge approaching the collision, so the run aborts
        # either on the gap guard or on step-size collapse
        from goldgen.errors import StepSizeUnderflow

        s0 = dyn.PhaseState([1.0, -1.0], [-1.0, 1.0])
        with pytest.raises((CollisionError, StepSizeUnderflow)):
            dyn.integrate(dyn.ModelSpec("goldfish"), s0, 5.0,
                          out_times=np.linspace(0, 5, 11))

    def test_min_gap_tracked(self):
        s0 = dyn.PhaseState([1.0, -1.0], [0.1j, -0.1j])
        traj = dyn.integrate(dyn.ModelSpec("goldfish"), s0, 1.0,
                             out_times=np.linspace(0, 1, 11))
        assert 0 < traj.min_gap <= 2.0


class TestTrajectoryCSV:
    def test_header_and_shape(self):
        s0 = dyn.PhaseState([1.0, -1.0], [0.1, -0.1])
        traj = dyn.integrate(dyn.ModelSpec("goldfish"), s0, 0.5,
                             out_times=np.linspace(0, 0.5, 6))
        text = dyn.trajectory_to_csv(traj)
        lines = text.strip().split("\n")
        assert lines[0] == (
            "t,x1_re,x1_im,x2_re,x2_im,v1_re,v1_im,v2_re,v2_im"
        )
        assert len(lines) == 7

    def test_roundtrip_precision(self):
        s0 = dyn.PhaseState([1 / 3, -1.0], [0.1, -0.1])
        traj = dyn.integrate(dyn.ModelSpec("goldfish"), s0, 0.2,
                             out_times=[0.0, 0.2])
        text = dyn.trajectory_to_csv(traj)
        data = np.genfromtxt(text.splitlines(), delimiter=",", names=True)
        assert data["x1_re"][0] == 1 / 3
