"""Bundled verification suites.

Each suite returns a list of Check records (name, measured residual,
threshold, pass flag).  The CLI prints them; the acceptance tests assert
them.  All randomness is seeded for reproducibility.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dynamics, permgen, polycore, solvers, spectra
from .dynamics import ModelSpec, PhaseState
from .errors import DegenerateZeros


@dataclass
class Check:
    name: str
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.residual < self.threshold


def set_distance(a, b) -> float:
    """Max matched distance between two same-size point clouds under the
    optimal assignment."""
    from scipy.optimize import linear_sum_assignment

    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def _random_zero_sets(rng, count, n_range=(2, 8), sep=1e-3):
    """Well-separated random sets in the unit disc."""
    out = []
    while len(out) < count:
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        z = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
        if polycore.min_pairwise_gap(z) > sep:
            out.append(z)
    return out


def suite_identities(seed: int = 0, count: int = 200) -> list[Check]:
    rng = np.random.default_rng(seed)
    sets = _random_zero_sets(rng, count)
    worst_id = 0.0
    worst_rr = 0.0
    worst_vel = 0.0
    for z in sets:
        scale = max(1.0, float(np.max(np.abs(z))) ** len(z))
        p = polycore.coeffs_from_zeros(z)
        res = polycore.identity_residuals(p, polycore.ZeroSet(z, sep_tol=1e-6))
        worst_id = max(worst_id, res["identity1"] / scale, res["identity2"] / scale)
        r = polycore.r_matrix(z, sep_tol=1e-6)
        rinv = polycore.r_matrix_inverse(z, sep_tol=1e-6)
        eye = np.eye(len(z))
        worst_rr = max(
            worst_rr,
            float(np.max(np.abs(r @ rinv - eye))),
            float(np.max(np.abs(rinv @ r - eye))),
        )
        vd = rng.normal(size=len(z)) + 1j * rng.normal(size=len(z))
        back = polycore.coeffs_velocity(z, polycore.zeros_velocity(z, vd))
        worst_vel = max(worst_vel, float(np.max(np.abs(back - vd))))
    return [
        Check("identity1/identity2 residual", worst_id, 1e-9),
        Check("R * Rinv = I", worst_rr, 1e-9),
        Check("velocity transfer roundtrip", worst_vel, 1e-9),
    ]


def suite_radical_family(seed: int = 0, count: int = 50) -> list[Check]:
    rng = np.random.default_rng(seed)
    worst = [0.0, 0.0, 0.0]
    sizes_ok = True
    done = 0
    while done < count:
        b = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        c = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        try:
            fam = permgen.nested_radical_family(b, c, tol=1e-3)
        except DegenerateZeros:
            continue
        try:
            tree = permgen.generation_tree(
                permgen.MonicPoly([b, c]), depth=3
            )
        except Exception:
            continue
        for lvl in (1, 2, 3):
            engine = [node.poly for node in tree.level(lvl)]
            if len(engine) != len(fam[lvl - 1]):
                sizes_ok = False
                continue
            worst[lvl - 1] = max(
                worst[lvl - 1], permgen.match_poly_sets(engine, fam[lvl - 1])
            )
        done += 1
    checks = [
        Check(f"closed-form vs engine, generation {lvl}", worst[lvl - 1], 1e-9)
        for lvl in (1, 2, 3)
    ]
    checks.append(Check("level sizes (2, 4, 8)", 0.0 if sizes_ok else 1.0, 0.5))
    return checks


def suite_goldfish(seed: int = 0, n: int = 3, trials: int = 20) -> list[Check]:
    rng = np.random.default_rng(seed)
    omega = 1.0
    spec = ModelSpec("iso_goldfish", omega=omega)
    worst_mid = 0.0
    worst_ret = 0.0
    done = 0
    while done < trials:
        x0 = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
        v0 = 0.5 * (rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n))
        if polycore.min_pairwise_gap(x0) < 0.3:
            continue
        times = np.linspace(0.0, 2 * np.pi, 101)
        try:
            traj = dynamics.integrate(
                spec, PhaseState(x0, v0), 2 * np.pi, out_times=times
            )
            for st in traj.states:
                alg = solvers.solve_iso_goldfish_at(x0, v0, omega, st.t)
                worst_mid = max(worst_mid, set_distance(alg, st.x))
            final = solvers.solve_iso_goldfish_at(x0, v0, omega, 2 * np.pi)
            worst_ret = max(worst_ret, set_distance(final, x0))
        except DegenerateZeros:
            continue
        done += 1
    checks = [
        Check("ODE vs algebraic (iso-goldfish)", worst_mid, 1e-6),
        Check("set return after one period", worst_ret, 1e-6),
    ]
    checks += suite_linear_seed(seed)
    return checks


def suite_linear_seed(seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed + 1)
    n = 3
    a = 0.3 + 0.1j
    x0 = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
    v0 = 0.5 * (rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n))
    spec = ModelSpec("linear_seed", a=a, ia_sign=+1)
    times = np.linspace(0.0, 2 * np.pi, 101)
    traj = dynamics.integrate(spec, PhaseState(x0, v0), 2 * np.pi, out_times=times)
    worst = 0.0
    for st in traj.states:
        cf = solvers.solve_linear_seed(x0, v0, a, +1, st.t)
        worst = max(worst, float(np.max(np.abs(cf.x - st.x))))
    # observed order of the second finite difference vs the RHS
    t_probe = 1.0
    errs = []
    hs = [1e-2, 5e-3]
    for h in hs:
        sm = solvers.solve_linear_seed(x0, v0, a, +1, t_probe - h)
        s0 = solvers.solve_linear_seed(x0, v0, a, +1, t_probe)
        sp = solvers.solve_linear_seed(x0, v0, a, +1, t_probe + h)
        fd2 = (sp.x - 2 * s0.x + sm.x) / h**2
        acc = dynamics.rhs_linear_seed(s0, a, +1)
        errs.append(float(np.max(np.abs(fd2 - acc))))
    order = math.log(errs[0] / errs[1]) / math.log(hs[0] / hs[1])
    return [
        Check("linear seed: closed form vs integrator", worst, 1e-8),
        Check("linear seed: FD order >= 1.9", 1.9 - order, 0.0 + 1e-12),
    ]


def suite_generations(seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    n = 3
    checks = []

    # pointwise: general generation RHS vs the simplified depth-1 form.
    # The simplified expression carries the seed force's printed (-) sign,
    # so the generation model here nests the ia_sign=-1 seed.
    worst_simpl = 0.0
    a = 0.4 - 0.2j
    seed_spec = ModelSpec("linear_seed", a=a, ia_sign=-1)
    gen1 = ModelSpec("generation", depth=1, seed=seed_spec)
    count = 0
    while count < 100:
        nn = int(rng.integers(2, 5))
        x = rng.uniform(-1, 1, nn) + 1j * rng.uniform(-1, 1, nn)
        v = rng.uniform(-1, 1, nn) + 1j * rng.uniform(-1, 1, nn)
        if polycore.min_pairwise_gap(x) < 0.2:
            continue
        st = PhaseState(x, v)
        general = dynamics.rhs_generation(st, gen1)
        gold = dynamics.rhs_goldfish(st)
        pref = polycore.diff_prefactor(x)
        simplified = gold + (1j - a) * v - 1j * a * pref * x**nn
        worst_simpl = max(worst_simpl, float(np.max(np.abs(general - simplified))))
        count += 1
    checks.append(Check("depth-1 RHS vs simplified form", worst_simpl, 1e-10))

    # algebraic path vs direct integration, depth 1 and 2, a in {0, 0.5}
    for a_val in (0.0, 0.5):
        sspec = ModelSpec("linear_seed", a=a_val, ia_sign=+1)
        for depth in (1, 2):
            mu = tuple([2] * depth)
            x0 = np.array([0.9 + 0.1j, -0.2 - 0.5j, -0.8 + 0.6j])
            v0 = np.array([0.1 - 0.2j, 0.25 + 0.1j, -0.15 + 0.05j])
            seed_state = PhaseState(x0, v0)
            grid = np.linspace(0.0, 2 * np.pi, 241)
            path = solvers.solve_generation_path(sspec, seed_state, mu, grid)
            s0 = dynamics.build_initial_state(seed_state, mu)
            gspec = ModelSpec("generation", depth=depth, seed=sspec, mu=mu)
            traj = dynamics.integrate(gspec, s0, grid[-1], out_times=grid)
            worst = 0.0
            for k, st in enumerate(traj.states):
                worst = max(worst, set_distance(st.x, path.values[k]))
            checks.append(
                Check(
                    f"solvability depth {depth}, a={a_val}", worst, 1e-6
                )
            )

    # permutation machinery
    worst_rank = 0
    for nn in range(1, 7):
        for mu_i in range(1, math.factorial(nn) + 1):
            if permgen.perm_to_mu(permgen.mu_to_perm(mu_i, nn), nn) != mu_i:
                worst_rank += 1
    checks.append(Check("mu rank/unrank roundtrip (N<=6)", float(worst_rank), 0.5))

    import itertools

    bad = 0
    for nn in range(2, 5):
        z = np.array(
            [0.3 * k + 0.1j * ((-1) ** k) * k for k in range(1, nn + 1)],
            dtype=np.complex128,
        )
        parent = permgen.seed_node(polycore.coeffs_from_zeros(z))
        children = {
            tuple(
                np.round(
                    permgen.generation_step(parent, mu_i).poly.coeffs, 9
                ).tolist()
            )
            for mu_i in range(1, math.factorial(nn) + 1)
        }
        orderings = {
            tuple(np.round(np.array(p), 9).tolist())
            for p in itertools.permutations(parent.zeros.zeros)
        }
        if children != orderings:
            bad += 1
    checks.append(Check("children cover all orderings (N<=4)", float(bad), 0.5))
    return checks


def suite_isochrony(seed: int = 0) -> list[Check]:
    n = 3
    sspec0 = ModelSpec("linear_seed", a=0.0, ia_sign=+1)
    x0 = np.array([0.9 + 0.1j, -0.2 - 0.5j, -0.8 + 0.6j])
    v0 = np.array([0.1 - 0.2j, 0.25 + 0.1j, -0.15 + 0.05j])
    T = 2 * np.pi
    p_max = math.factorial(n)
    steps_per = 240
    grid = np.linspace(0.0, (p_max + 1) * T, (p_max + 1) * steps_per + 1)
    path = solvers.solve_generation_path(sspec0, PhaseState(x0, v0), (2,), grid)
    try:
        rep = solvers.detect_period(path, T, p_max)
        ok = 0.0
        residual = rep.residual
    except Exception:
        ok = 1.0
        residual = np.inf
    checks = [Check(f"a=0 generation-1 period p <= {p_max}", ok, 0.5)]

    # a > 0: asymptotic isochrony.  The configuration (as a set) at t+T
    # approaches the one at t; labels may still exchange, which is the
    # p > 1 phenomenon, so the decaying observable is the set deviation.
    sspec = ModelSpec("linear_seed", a=0.5, ia_sign=+1)
    grid = np.linspace(0.0, 6 * T, 6 * steps_per + 1)
    path = solvers.solve_generation_path(sspec, PhaseState(x0, v0), (2,), grid)
    devs = []
    for j in range(5):
        lo = j * steps_per
        hi = (j + 1) * steps_per
        devs.append(
            max(
                set_distance(a, b)
                for a, b in zip(
                    path.values[lo + steps_per : hi + steps_per],
                    path.values[lo:hi],
                )
            )
        )
    decreasing = all(devs[i + 1] < devs[i] for i in range(4))
    checks.append(
        Check("a=0.5 deviation strictly decreasing", 0.0 if decreasing else 1.0, 0.5)
    )
    return checks


def suite_hermite(n_max: int = 10) -> list[Check]:
    worst_eq = 0.0
    worst_spec = 0.0
    for n in range(2, n_max + 1):
        x = spectra.hermite_zeros(n)
        worst_eq = max(worst_eq, spectra.equilibrium_residual(x))
        lam = spectra.eig_small(spectra.m_matrix(x)).eigenvalues
        worst_spec = max(
            worst_spec, float(np.max(np.abs(np.sort(lam.real) - np.arange(n))))
        )
        worst_spec = max(worst_spec, float(np.max(np.abs(lam.imag))))
    checks = [
        Check("Hermite equilibrium residual", worst_eq, 1e-9),
        Check("spectrum of M = {0..N-1}", worst_spec, 1e-6),
    ]

    # all first-generation branches share the spectrum (exhaustive N <= 4)
    worst_branch = 0.0
    for n in (2, 3, 4):
        x = spectra.hermite_zeros(n)
        base = np.sort(spectra.eig_small(spectra.m_matrix(x)).eigenvalues.real)
        for mu1 in range(1, math.factorial(n) + 1):
            y = permgen.apply_mu(mu1, permgen.canonical_sort(x))
            zs = polycore.zeros_from_coeffs(polycore.MonicPoly(y))
            m1 = spectra.similarity_m1(x, zs.zeros)
            lam = spectra.eig_small(m1).eigenvalues
            worst_branch = max(
                worst_branch,
                float(np.max(np.abs(np.sort(lam.real) - base))),
                float(np.max(np.abs(lam.imag))),
            )
    checks.append(Check("branch spectra equal (N<=4)", worst_branch, 1e-6))

    # FD Jacobian of the equilibrium flow = i (I + M)
    worst_jac = 0.0
    for n in range(2, 9):
        x = spectra.hermite_zeros(n)
        jac = spectra.jacobian_fd(spectra.equilibrium_flow, x)
        target = 1j * (np.eye(n) + spectra.m_matrix(x))
        worst_jac = max(worst_jac, float(np.max(np.abs(jac - target))))
    checks.append(Check("FD Jacobian = i(I+M)", worst_jac, 1e-5))
    return checks


SUITES = {
    "identities": suite_identities,
    "radical-family": suite_radical_family,
    "goldfish": suite_goldfish,
    "generations": suite_generations,
    "isochrony": suite_isochrony,
    "hermite": suite_hermite,
}


def run_suite(name: str) -> list[Check]:
    if name == "all":
        out = []
        for fn in SUITES.values():
            out.extend(fn())
        return out
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    return SUITES[name]()
