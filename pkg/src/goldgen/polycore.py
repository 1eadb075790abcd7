"""Complex monic-polynomial algebra.

Symmetric functions, the zeros<->coefficients maps, a simultaneous
(Aberth-Ehrlich) root finder, the R / R^{-1} matrices and the first- and
second-derivative transfer relations between a polynomial's zeros and its
coefficients.

Conventions: a degree-N monic polynomial is stored as the ordered vector
(y_1, ..., y_N) where y_m multiplies z^{N-m}; the leading 1 is implicit.
All vectors are numpy complex128 arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateZeros, RootSolveFailed

DEFAULT_SEP_TOL = 1e-8
DEFAULT_ROOT_TOL = 1e-12
MAX_SWEEPS = 200


def _as_complex(v) -> np.ndarray:
    a = np.asarray(v, dtype=np.complex128)
    if a.ndim != 1:
        raise ValueError("expected a 1-d vector")
    if not np.all(np.isfinite(a)):
        raise ValueError("non-finite entries")
    return a


def min_pairwise_gap(x) -> float:
    """Smallest |x_i - x_j| over all pairs (inf for a single point)."""
    x = np.asarray(x, dtype=np.complex128)
    n = len(x)
    if n < 2:
        return np.inf
    d = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(d, np.inf)
    return float(d.min())


def check_distinct(x, sep_tol: float = DEFAULT_SEP_TOL) -> None:
    gap = min_pairwise_gap(x)
    if gap <= sep_tol:
        raise DegenerateZeros(
            f"minimum pairwise gap {gap:.3e} <= sep_tol {sep_tol:.3e}"
        )


@dataclass(frozen=True)
class MonicPoly:
    """Monic polynomial z^N + sum_m coeffs[m-1] z^{N-m}."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_complex(self.coeffs))
        if self.n < 1:
            raise ValueError("degree must be >= 1")

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def full_coeffs(self) -> np.ndarray:
        """Descending-power coefficients including the leading 1."""
        return np.concatenate(([1.0 + 0j], self.coeffs))


@dataclass(frozen=True)
class ZeroSet:
    """Unordered set of N pairwise-distinct zeros.

    Stored in an (arbitrary but fixed) order; equality of zero sets is
    always up to permutation.
    """

    zeros: np.ndarray
    sep_tol: float = DEFAULT_SEP_TOL

    def __post_init__(self):
        object.__setattr__(self, "zeros", _as_complex(self.zeros))
        check_distinct(self.zeros, self.sep_tol)

    @property
    def n(self) -> int:
        return len(self.zeros)


@dataclass
class RootOptions:
    root_tol: float = DEFAULT_ROOT_TOL
    sep_tol: float = DEFAULT_SEP_TOL
    max_sweeps: int = MAX_SWEEPS
    seed: int = 0


def elem_sym(z, m: int) -> complex:
    """Elementary symmetric polynomial sigma_m of the components of z."""
    z = _as_complex(z)
    n = len(z)
    if not 1 <= m <= n:
        raise ValueError(f"m={m} out of range [1, {n}]")
    # e_k via the generating product prod_i (1 + z_i t), kept exact in k
    e = np.zeros(n + 1, dtype=np.complex128)
    e[0] = 1.0
    for zi in z:
        e[1:] = e[1:] + zi * e[:-1]
    return complex(e[m])


def elem_sym_all(z) -> np.ndarray:
    """All sigma_m for m = 1..N, one pass of the generating recurrence."""
    z = _as_complex(z)
    n = len(z)
    e = np.zeros(n + 1, dtype=np.complex128)
    e[0] = 1.0
    for zi in z:
        e[1:] = e[1:] + zi * e[:-1]
    return e[1:]


def elem_sym_excl(z, n: int, m: int) -> complex:
    """sigma_{n,m}: Kronecker delta_{1m} plus the sum over (m-1)-element
    index subsets avoiding index n (indices 1-based)."""
    z = _as_complex(z)
    nn = len(z)
    if not 1 <= n <= nn:
        raise ValueError(f"n={n} out of range [1, {nn}]")
    if not 1 <= m <= nn:
        raise ValueError(f"m={m} out of range [1, {nn}]")
    if m == 1:
        return 1.0 + 0j
    rest = np.delete(z, n - 1)
    return elem_sym(rest, m - 1)


def elem_sym_excl_matrix(z) -> np.ndarray:
    """Matrix S with S[n-1, m-1] = sigma_{n,m}(z)."""
    z = _as_complex(z)
    nn = len(z)
    s = np.empty((nn, nn), dtype=np.complex128)
    for i in range(nn):
        rest = np.delete(z, i)
        s[i, 0] = 1.0
        if nn > 1:
            s[i, 1:] = elem_sym_all(rest)
    return s


def coeffs_from_zeros(zs) -> MonicPoly:
    """Vieta map: y_m = (-1)^m sigma_m of the zeros."""
    if isinstance(zs, ZeroSet):
        x = zs.zeros
    else:
        x = _as_complex(zs)
        check_distinct(x)
    # expand prod (z - x_i) by repeated convolution
    c = np.array([1.0 + 0j])
    for xi in x:
        c = np.convolve(c, [1.0 + 0j, -xi])
    return MonicPoly(c[1:])


def eval_poly(p: MonicPoly, z: complex) -> tuple[complex, complex]:
    """Horner evaluation returning (p(z), p'(z))."""
    val = 1.0 + 0j
    der = 0.0 + 0j
    for c in p.coeffs:
        der = der * z + val
        val = val * z + c
    return complex(val), complex(der)


def _aberth_initial(p: MonicPoly, seed: int) -> np.ndarray:
    n = p.n
    radius = 1.0 + float(np.max(np.abs(p.coeffs)))
    rng = np.random.default_rng(seed)
    offset = 0.4 + 0.01 * rng.standard_normal()
    angles = 2.0 * np.pi * np.arange(n) / n + offset
    # center on the mean of the roots so shifted polynomials start well
    center = -p.coeffs[0] / n
    return center + radius * np.exp(1j * angles)


def zeros_from_coeffs(p: MonicPoly, opts: RootOptions | None = None) -> ZeroSet:
    """All zeros of p by Aberth-Ehrlich simultaneous iteration.

    Initial guesses sit on a circle of radius 1 + max|y_m| around the root
    centroid; each root is Newton-polished afterwards.  Raises
    RootSolveFailed on non-convergence and DegenerateZeros when the result
    violates the separation tolerance.
    """
    opts = opts or RootOptions()
    n = p.n
    scale = max(1.0, float(np.max(np.abs(p.coeffs))))
    x = _aberth_initial(p, opts.seed)
    tol = opts.root_tol * scale
    converged = False
    for _ in range(opts.max_sweeps):
        vals = np.empty(n, dtype=np.complex128)
        ders = np.empty(n, dtype=np.complex128)
        for i in range(n):
            vals[i], ders[i] = eval_poly(p, x[i])
        if np.max(np.abs(vals)) <= tol:
            converged = True
            break
        newton = np.where(ders != 0, vals / np.where(ders == 0, 1, ders), 0)
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, np.inf)
        repulse = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - newton * repulse
        step = np.where(np.abs(denom) > 1e-300, newton / denom, newton)
        x = x - step
        if np.max(np.abs(step)) <= 1e-16 * (1.0 + np.max(np.abs(x))):
            converged = True
            break
    if not converged:
        vals = np.array([eval_poly(p, xi)[0] for xi in x])
        if np.max(np.abs(vals)) > tol:
            raise RootSolveFailed(
                f"Aberth iteration stalled; max residual {np.max(np.abs(vals)):.3e}"
            )
    # Newton polishing
    for i in range(n):
        for _ in range(5):
            v, d = eval_poly(p, x[i])
            if d == 0 or abs(v) <= 1e-3 * tol:
                break
            x[i] = x[i] - v / d
    vals = np.array([eval_poly(p, xi)[0] for xi in x])
    if np.max(np.abs(vals)) > tol:
        raise RootSolveFailed(
            f"root residual {np.max(np.abs(vals)):.3e} exceeds {tol:.3e}"
        )
    sep = opts.sep_tol * scale
    if min_pairwise_gap(x) <= sep:
        raise DegenerateZeros(
            f"near-multiple root: gap {min_pairwise_gap(x):.3e} <= {sep:.3e}"
        )
    order = np.lexsort((x.imag, x.real))
    return ZeroSet(x[order], sep_tol=sep)


def diff_prefactor(x) -> np.ndarray:
    """prod_{l != n} (x_n - x_l)^{-1} for each n, as a product of
    reciprocals to limit overflow."""
    x = _as_complex(x)
    n = len(x)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    with np.errstate(divide="raise"):
        recip = 1.0 / diff
    np.fill_diagonal(recip, 1.0)
    return np.prod(recip, axis=1)


def r_matrix(x, sep_tol: float = DEFAULT_SEP_TOL) -> np.ndarray:
    """R_{nm} = -[prod_{l != n} (x_n - x_l)^{-1}] x_n^{N-m}."""
    x = _as_complex(x)
    check_distinct(x, sep_tol)
    n = len(x)
    pref = diff_prefactor(x)
    powers = x[:, None] ** (n - 1 - np.arange(n))[None, :]
    return -pref[:, None] * powers


def r_matrix_inverse(x, sep_tol: float = DEFAULT_SEP_TOL) -> np.ndarray:
    """[R^{-1}]_{nm} = (-1)^n sigma_{m,n}(x), so that R R^{-1} = I."""
    x = _as_complex(x)
    check_distinct(x, sep_tol)
    n = len(x)
    s = elem_sym_excl_matrix(x)  # s[a-1, b-1] = sigma_{a,b}
    signs = (-1.0) ** (np.arange(1, n + 1))
    return signs[:, None] * s.T


def zeros_velocity(x, y_dot) -> np.ndarray:
    """xdot = R(x) ydot."""
    return r_matrix(x) @ _as_complex(y_dot)


def coeffs_velocity(x, x_dot) -> np.ndarray:
    """ydot_m = (-1)^m sum_n sigma_{n,m}(x) xdot_n (needs no distinctness)."""
    x = _as_complex(x)
    x_dot = _as_complex(x_dot)
    n = len(x)
    s = elem_sym_excl_matrix(x)
    signs = (-1.0) ** (np.arange(1, n + 1))
    return signs * (s.T @ x_dot)


def zeros_acceleration(x, x_dot, y_ddot) -> np.ndarray:
    """Transfer of second derivatives from coefficients to zeros:

    xddot_n = sum_{l != n} 2 xdot_n xdot_l / (x_n - x_l)
              - [prod_{l != n} (x_n - x_l)^{-1}] sum_m x_n^{N-m} yddot_m
    """
    x = _as_complex(x)
    x_dot = _as_complex(x_dot)
    y_ddot = _as_complex(y_ddot)
    check_distinct(x)
    n = len(x)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, np.inf)
    gold = 2.0 * x_dot * np.sum(x_dot[None, :] / diff, axis=1)
    pref = diff_prefactor(x)
    powers = x[:, None] ** (n - 1 - np.arange(n))[None, :]
    return gold - pref * (powers @ y_ddot)


def identity_residuals(p: MonicPoly, zs: ZeroSet) -> dict:
    """Residuals of the two zero/coefficient identities.

    identity1: max_n |x_n^N + sum_m y_m x_n^{N-m}|  (uses p's coefficients)
    identity2: same with y_m replaced by (-1)^m sigma_m of the zeros
    """
    if p.n != zs.n:
        raise ValueError("degree mismatch")
    r1 = max(abs(eval_poly(p, x)[0]) for x in zs.zeros)
    p2 = coeffs_from_zeros(zs)
    r2 = max(abs(eval_poly(p2, x)[0]) for x in zs.zeros)
    return {"identity1": float(r1), "identity2": float(r2)}
