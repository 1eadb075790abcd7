"""Goldfish-type right-hand sides and an adaptive ODE integrator.

The hierarchy: a solvable seed model (goldfish / isochronous goldfish /
linear two-mode seed) plus generation models whose accelerations follow
from the second-derivative transfer identity: the coefficient vector of
the associated polynomial evolves under the depth-(k-1) model, and the
coordinates are the polynomial's zeros.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import CollisionError, StepSizeUnderflow
from .polycore import (
    DEFAULT_SEP_TOL,
    coeffs_velocity,
    elem_sym_all,
    min_pairwise_gap,
    zeros_acceleration,
)

SEED_KINDS = ("goldfish", "iso_goldfish", "linear_seed")


@dataclass(frozen=True)
class PhaseState:
    x: np.ndarray
    v: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=np.complex128))
        object.__setattr__(self, "v", np.asarray(self.v, dtype=np.complex128))
        if self.x.shape != self.v.shape:
            raise ValueError("positions and velocities differ in shape")

    @property
    def n(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class ModelSpec:
    """Which member of the hierarchy to simulate.

    kind 'generation' wraps a solvable seed spec; `depth` counts how many
    zero->coefficient layers sit between the integrated coordinates and
    the seed.  `mu` only labels the initial-condition branch; the
    equations of motion themselves are mu-independent.
    """

    kind: str
    omega: float = 0.0
    a: complex = 0.0
    ia_sign: int = +1
    depth: int = 0
    seed: "ModelSpec | None" = None
    mu: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in SEED_KINDS + ("generation",):
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.kind == "generation":
            if self.seed is None or self.depth < 1:
                raise ValueError("generation model needs a seed and depth >= 1")
            if self.seed.kind not in SEED_KINDS:
                raise ValueError("generation must nest over a seed kind")
        if self.ia_sign not in (+1, -1):
            raise ValueError("ia_sign must be +1 or -1")


@dataclass
class IntegratorOptions:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    sep_tol: float = DEFAULT_SEP_TOL
    max_steps: int = 1_000_000
    first_step: float = 1e-4


@dataclass
class Trajectory:
    model: ModelSpec
    times: np.ndarray
    states: list[PhaseState]
    steps: int = 0
    rejected: int = 0
    min_gap: float = np.inf

    def positions(self) -> np.ndarray:
        return np.array([s.x for s in self.states])

    def velocities(self) -> np.ndarray:
        return np.array([s.v for s in self.states])


def _guard_gaps(x, sep_tol, level=None):
    gap = min_pairwise_gap(x)
    if gap <= sep_tol:
        raise CollisionError(
            f"minimum gap {gap:.3e} <= sep_tol {sep_tol:.3e}", level=level
        )
    return gap


def rhs_goldfish(s: PhaseState, sep_tol: float = DEFAULT_SEP_TOL) -> np.ndarray:
    """xddot_n = sum_{l != n} 2 xdot_n xdot_l / (x_n - x_l)."""
    _guard_gaps(s.x, sep_tol)
    diff = s.x[:, None] - s.x[None, :]
    np.fill_diagonal(diff, np.inf)
    return 2.0 * s.v * np.sum(s.v[None, :] / diff, axis=1)


def rhs_iso_goldfish(
    s: PhaseState, omega: float, sep_tol: float = DEFAULT_SEP_TOL
) -> np.ndarray:
    """Goldfish forces plus the isochronizing i*omega*xdot term."""
    return rhs_goldfish(s, sep_tol) + 1j * omega * s.v


def rhs_linear_seed(s: PhaseState, a: complex, ia_sign: int = +1) -> np.ndarray:
    """xddot_n = (i - a) xdot_n + ia_sign * i a x_n.

    ia_sign=-1 is the force as printed in the source model; ia_sign=+1 is
    the sign consistent with the model's displayed two-mode solution
    (modes e^{it}, e^{-at}).  Both are kept; +1 is the default everywhere
    a closed form is used as an oracle.
    """
    return (1j - a) * s.v + ia_sign * (1j * a * s.x)


def seed_rhs(s: PhaseState, spec: ModelSpec, sep_tol: float = DEFAULT_SEP_TOL) -> np.ndarray:
    if spec.kind == "goldfish":
        return rhs_goldfish(s, sep_tol)
    if spec.kind == "iso_goldfish":
        return rhs_iso_goldfish(s, spec.omega, sep_tol)
    if spec.kind == "linear_seed":
        return rhs_linear_seed(s, spec.a, spec.ia_sign)
    raise ValueError(f"not a seed kind: {spec.kind}")


def rhs_generation(
    s: PhaseState, spec: ModelSpec, sep_tol: float = DEFAULT_SEP_TOL
) -> np.ndarray:
    """Acceleration of a depth-k generation model.

    The coefficient vector y of prod(z - x_n) and its velocity are
    reconstructed algebraically from (x, xdot); its acceleration is the
    depth-(k-1) right-hand side; the second-derivative transfer identity
    then gives the acceleration of the zeros.
    """
    if spec.kind != "generation":
        return seed_rhs(s, spec, sep_tol)
    return _rhs_generation_level(s.x, s.v, spec, sep_tol, level=0)


def _rhs_generation_level(x, v, spec: ModelSpec, sep_tol, level: int) -> np.ndarray:
    try:
        _guard_gaps(x, sep_tol, level=level)
    except CollisionError:
        raise
    n = len(x)
    signs = (-1.0) ** np.arange(1, n + 1)
    y = signs * elem_sym_all(x)
    y_dot = coeffs_velocity(x, v)
    inner = spec.seed if spec.depth == 1 else replace(spec, depth=spec.depth - 1)
    if inner.kind == "generation":
        y_ddot = _rhs_generation_level(y, y_dot, inner, sep_tol, level=level + 1)
    else:
        try:
            y_ddot = seed_rhs(PhaseState(y, y_dot), inner, sep_tol)
        except CollisionError as e:
            raise CollisionError(str(e), level=level + 1) from e
    return zeros_acceleration(x, v, y_ddot)


def rhs(s: PhaseState, spec: ModelSpec, sep_tol: float = DEFAULT_SEP_TOL) -> np.ndarray:
    if spec.kind == "generation":
        return rhs_generation(s, spec, sep_tol)
    return seed_rhs(s, spec, sep_tol)


def build_initial_state(seed_state: PhaseState, mu, sep_tol: float = DEFAULT_SEP_TOL):
    """Lift seed initial data through a mu-address to generation-k data.

    Per level: sort the current positions canonically (velocities carried
    along), apply the level's permutation to get the next coefficient
    vector and its velocity, root-extract the next positions, and map the
    velocities through R.
    """
    # imported here to avoid a cycle at module import time
    from .permgen import apply_mu
    from .polycore import MonicPoly, r_matrix, zeros_from_coeffs

    mu = tuple(int(m) for m in mu)
    x = np.asarray(seed_state.x, dtype=np.complex128)
    v = np.asarray(seed_state.v, dtype=np.complex128)
    for j, mu_j in enumerate(mu):
        order = np.lexsort((x.imag, x.real))
        y = apply_mu(mu_j, x[order])
        y_dot = apply_mu(mu_j, v[order])
        try:
            zs = zeros_from_coeffs(MonicPoly(y))
        except Exception as e:
            raise type(e)(f"level {j + 1}: {e}") from e
        x = zs.zeros  # already canonically ordered
        v = r_matrix(x, sep_tol) @ y_dot
    return PhaseState(x, v, t=seed_state.t)


# Dormand-Prince 5(4) tableau
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)


def integrate(
    spec: ModelSpec,
    s0: PhaseState,
    t1: float,
    out_times=None,
    opts: IntegratorOptions | None = None,
) -> Trajectory:
    """Adaptive Dormand-Prince 5(4) with PI step control and collision guard.

    The complex state (x, v) is advanced directly (RK stages are linear
    combinations); the error norm runs over real and imaginary parts.
    Steps predicted to bring particles within 10*sep_tol of each other are
    rejected and halved; below sep_tol the integration aborts with
    CollisionError.
    """
    opts = opts or IntegratorOptions()
    t0 = s0.t
    if out_times is None:
        out_times = np.linspace(t0, t1, 201)
    out_times = np.asarray(out_times, dtype=float)
    if out_times[0] != t0:
        raise ValueError("output grid must start at the initial time")

    n = s0.n
    guarded = spec.kind in ("goldfish", "iso_goldfish", "generation")

    def f(t, u):
        state = PhaseState(u[:n], u[n:], t)
        acc = rhs(state, spec, opts.sep_tol)
        return np.concatenate([u[n:], acc])

    u = np.concatenate([s0.x, s0.v])
    t = t0
    h = min(opts.first_step, abs(t1 - t0))
    traj = Trajectory(model=spec, times=out_times, states=[])
    traj.states.append(PhaseState(u[:n].copy(), u[n:].copy(), t))
    out_idx = 1
    if guarded:
        traj.min_gap = min_pairwise_gap(u[:n])
    k0 = f(t, u)
    err_prev = 1.0
    while out_idx < len(out_times):
        target = out_times[out_idx]
        while t < target - 1e-14 * max(1.0, abs(target)):
            h = min(h, target - t)
            if h < 1e-14 * max(1.0, abs(t)):
                raise StepSizeUnderflow(f"step size underflow at t={t:.6g}")
            ks = [k0]
            collided = False
            try:
                for i in range(1, 7):
                    ui = u + h * sum(
                        aij * kj for aij, kj in zip(_DP_A[i], ks)
                    )
                    ks.append(f(t + _DP_C[i] * h, ui))
            except CollisionError as e:
                gap = min_pairwise_gap(u[:n])
                if gap <= opts.sep_tol:
                    raise
                collided = True
            if not collided:
                u5 = u + h * sum(b * k for b, k in zip(_DP_B5, ks))
                u4 = u + h * sum(b * k for b, k in zip(_DP_B4, ks))
                scale = opts.abs_tol + opts.rel_tol * np.maximum(
                    np.abs(u), np.abs(u5)
                )
                diff = u5 - u4
                err = np.sqrt(
                    np.mean((diff.real / scale) ** 2 + (diff.imag / scale) ** 2)
                )
                gap = min_pairwise_gap(u5[:n]) if guarded else np.inf
                if guarded and gap <= opts.sep_tol:
                    raise CollisionError(
                        f"collision at t~{t + h:.6g}: gap {gap:.3e}"
                    )
                if guarded and gap <= 10.0 * opts.sep_tol:
                    collided = True
            if collided:
                traj.rejected += 1
                h *= 0.5
                if h < 1e-12 * max(1.0, abs(t)):
                    gap = min_pairwise_gap(u[:n])
                    raise CollisionError(
                        f"collision approaching t~{t:.6g}: gap {gap:.3e} "
                        f"and shrinking, step size collapsed"
                    )
                continue
            if err <= 1.0:
                t += h
                u = u5
                k0 = ks[6]  # FSAL
                traj.steps += 1
                if guarded:
                    traj.min_gap = min(traj.min_gap, gap)
                # PI controller (order 5 propagating)
                fac = 0.9 * err ** -0.7 * err_prev ** 0.4 if err > 0 else 5.0
                err_prev = max(err, 1e-10)
                h *= min(5.0, max(0.2, fac))
            else:
                traj.rejected += 1
                h *= max(0.2, 0.9 * err ** -0.2)
            if traj.steps + traj.rejected > opts.max_steps:
                raise StepSizeUnderflow("step budget exhausted")
        traj.states.append(PhaseState(u[:n].copy(), u[n:].copy(), target))
        out_idx += 1
    return traj


def trajectory_to_csv(traj: Trajectory) -> str:
    """CSV with header t,x1_re,x1_im,...,xN_im,v1_re,...,vN_im at full
    precision (17 significant digits)."""
    n = traj.states[0].n
    cols = ["t"]
    cols += [f"x{i}_{p}" for i in range(1, n + 1) for p in ("re", "im")]
    cols += [f"v{i}_{p}" for i in range(1, n + 1) for p in ("re", "im")]
    lines = [",".join(cols)]
    for s in traj.states:
        row = [f"{s.t:.17g}"]
        for z in s.x:
            row += [f"{z.real:.17g}", f"{z.imag:.17g}"]
        for z in s.v:
            row += [f"{z.real:.17g}", f"{z.imag:.17g}"]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"
