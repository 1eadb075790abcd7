"""Permutation indexing and the generation construction.

A generation step turns the zeros of one monic polynomial into the
coefficients of the next: order the parent's zeros canonically, apply the
mu-th lexicographic permutation, and read the result as a coefficient
vector.  A depth-k tree therefore has (N!)^k nodes at level k, addressed
by k-vectors of permutation indices in [1, N!].

Also holds the closed-form N=2 family (three generations by nested square
roots) used as an independent oracle against the tree engine.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateZeros, GoldgenError, TreeBudgetExceeded
from .polycore import (
    DEFAULT_SEP_TOL,
    MonicPoly,
    RootOptions,
    ZeroSet,
    zeros_from_coeffs,
)

DEFAULT_NODE_BUDGET = 10**6


def canonical_sort(zs) -> np.ndarray:
    """Order zeros by ascending real part, ties by ascending imaginary part.

    This is the 'first permutation' of the unordered set; all mu-indexing
    is relative to it.
    """
    if isinstance(zs, ZeroSet):
        x, sep = zs.zeros, zs.sep_tol
    else:
        x = np.asarray(zs, dtype=np.complex128)
        sep = DEFAULT_SEP_TOL
    d = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(d, np.inf)
    if d.min() <= sep:
        raise DegenerateZeros("cannot canonically order near-coincident zeros")
    order = np.lexsort((x.imag, x.real))
    return x[order]


def mu_to_perm(mu: int, n: int) -> tuple[int, ...]:
    """The mu-th permutation of (1..n) in lexicographic order, mu in [1, n!].

    Factorial-base (Lehmer) unranking; mu=1 is the identity.
    """
    nf = math.factorial(n)
    if not 1 <= mu <= nf:
        raise ValueError(f"mu={mu} out of range [1, {nf}]")
    r = mu - 1
    avail = list(range(1, n + 1))
    out = []
    for i in range(n, 0, -1):
        f = math.factorial(i - 1)
        idx, r = divmod(r, f)
        out.append(avail.pop(idx))
    return tuple(out)


def perm_to_mu(perm, n: int | None = None) -> int:
    """Lexicographic rank (1-based) of a permutation of (1..n)."""
    perm = tuple(int(p) for p in perm)
    n = n if n is not None else len(perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {perm}")
    avail = list(range(1, n + 1))
    r = 0
    for i, p in enumerate(perm):
        idx = avail.index(p)
        r += idx * math.factorial(n - 1 - i)
        avail.pop(idx)
    return r + 1


def apply_mu(mu: int, values) -> np.ndarray:
    """Apply the mu-th permutation to an already-ordered vector."""
    values = np.asarray(values, dtype=np.complex128)
    perm = mu_to_perm(mu, len(values))
    return values[[p - 1 for p in perm]]


@dataclass(frozen=True)
class GenerationNode:
    address: tuple[int, ...]
    poly: MonicPoly
    zeros: ZeroSet


@dataclass
class GenerationTree:
    seed: GenerationNode
    depth: int
    nodes: dict[tuple[int, ...], GenerationNode] = field(default_factory=dict)
    # addresses whose expansion failed (value = error message)
    failed: dict[tuple[int, ...], str] = field(default_factory=dict)

    def level(self, k: int) -> list[GenerationNode]:
        return [n for a, n in sorted(self.nodes.items()) if len(a) == k]

    def to_json_dict(self) -> dict:
        def cvec(a):
            return [[float(z.real), float(z.imag)] for z in np.asarray(a)]

        return {
            "seed": cvec(self.seed.poly.coeffs),
            "depth": self.depth,
            "nodes": [
                {
                    "mu": list(addr),
                    "coeffs": cvec(node.poly.coeffs),
                    "zeros": cvec(node.zeros.zeros),
                }
                for addr, node in sorted(self.nodes.items())
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def seed_node(poly: MonicPoly, opts: RootOptions | None = None) -> GenerationNode:
    return GenerationNode((), poly, zeros_from_coeffs(poly, opts))


def generation_step(
    parent: GenerationNode, mu: int, opts: RootOptions | None = None
) -> GenerationNode:
    """Child polynomial whose coefficients are the mu-th ordering of the
    parent's zeros."""
    y = apply_mu(mu, canonical_sort(parent.zeros))
    child = MonicPoly(y)
    return GenerationNode(parent.address + (mu,), child, zeros_from_coeffs(child, opts))


def generation_tree(
    seed: MonicPoly,
    depth: int,
    prefix: tuple[int, ...] = (),
    node_budget: int = DEFAULT_NODE_BUDGET,
    opts: RootOptions | None = None,
) -> GenerationTree:
    """Expand the generation tree to the given depth.

    `prefix` restricts expansion to addresses starting with it.  Degenerate
    branches are recorded in `tree.failed` and not expanded further.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    n = seed.n
    nf = math.factorial(n)
    count = 0
    width = 1
    for k in range(1, depth + 1):
        if k <= len(prefix):
            count += 1
        else:
            width *= nf
            count += width
    if count > node_budget:
        raise TreeBudgetExceeded(
            f"tree would hold ~{count} nodes, budget is {node_budget}"
        )

    root = seed_node(seed, opts)
    tree = GenerationTree(seed=root, depth=depth)
    frontier = [root]
    for k in range(1, depth + 1):
        nxt = []
        for parent in frontier:
            if len(prefix) >= k:
                mus = [prefix[k - 1]]
            else:
                mus = range(1, nf + 1)
            for mu in mus:
                try:
                    child = generation_step(parent, mu, opts)
                except GoldgenError as e:
                    tree.failed[parent.address + (mu,)] = str(e)
                    continue
                tree.nodes[child.address] = child
                nxt.append(child)
        frontier = nxt
    return tree


def _psqrt(z: complex) -> complex:
    """Principal square root: nonnegative real part; on the negative real
    axis the branch with positive imaginary part."""
    r = complex(np.sqrt(complex(z)))
    if r.real < 0 or (r.real == 0 and r.imag < 0):
        r = -r
    return r


def nested_radical_family(
    b: complex, c: complex, tol: float = 1e-12
) -> tuple[list[MonicPoly], list[MonicPoly], list[MonicPoly]]:
    """Closed-form generations 1-3 for the quadratic seed z^2 + b z + c.

    Every radical is taken as the principal square root; the per-level
    polynomial *sets* are branch-independent, individual labels are not.
    """
    b = complex(b)
    c = complex(c)
    r0 = _psqrt(b * b - 4 * c)
    r11 = _psqrt(8 * b + 2 * b * b - 4 * c + 8 * r0 - 2 * b * r0)
    r12 = _psqrt(8 * b + 2 * b * b - 4 * c - 8 * r0 + 2 * b * r0)
    base2 = -8 * b + 4 * b * b - 8 * c
    r21 = _psqrt(base2 + 24 * r0 - 4 * b * r0 + 16 * r11 + 2 * b * r11 - 2 * r0 * r11)
    r22 = _psqrt(base2 + 24 * r0 - 4 * b * r0 - 16 * r11 - 2 * b * r11 + 2 * r0 * r11)
    r23 = _psqrt(base2 - 24 * r0 + 4 * b * r0 + 16 * r12 + 2 * b * r12 + 2 * r0 * r12)
    r24 = _psqrt(base2 - 24 * r0 + 4 * b * r0 - 16 * r12 - 2 * b * r12 - 2 * r0 * r12)
    for name, r in [("r0", r0), ("r11", r11), ("r12", r12), ("r21", r21),
                    ("r22", r22), ("r23", r23), ("r24", r24)]:
        if abs(r) < tol:
            raise DegenerateZeros(f"degenerate radicand: {name} ~ 0")

    def quad(u: complex, r: complex, s: float) -> MonicPoly:
        # z^2 + u (z + 1) + s r (z - 1) -> y = (u + s r, u - s r)
        return MonicPoly([u + s * r, u - s * r])

    gen1 = [quad(-b / 2, r0 / 2, s) for s in (+1.0, -1.0)]
    gen2 = [
        quad((b - r0) / 4, r11 / 4, +1.0),
        quad((b - r0) / 4, r11 / 4, -1.0),
        quad((b + r0) / 4, r12 / 4, +1.0),
        quad((b + r0) / 4, r12 / 4, -1.0),
    ]
    gen3 = [
        quad((-b + r0 - r11) / 8, r21 / 8, +1.0),
        quad((-b + r0 - r11) / 8, r21 / 8, -1.0),
        quad((-b + r0 + r11) / 8, r22 / 8, +1.0),
        quad((-b + r0 + r11) / 8, r22 / 8, -1.0),
        quad((-b - r0 - r12) / 8, r23 / 8, +1.0),
        quad((-b - r0 - r12) / 8, r23 / 8, -1.0),
        quad((-b - r0 + r12) / 8, r24 / 8, +1.0),
        quad((-b - r0 + r12) / 8, r24 / 8, -1.0),
    ]
    return gen1, gen2, gen3


def match_poly_sets(a: list[MonicPoly], b: list[MonicPoly]) -> float:
    """Max coefficient deviation under the optimal pairing of two equal-size
    polynomial families (greedy on a full distance matrix; sizes <= 8)."""
    if len(a) != len(b):
        raise ValueError("family sizes differ")
    import itertools

    ca = [p.coeffs for p in a]
    cb = [p.coeffs for p in b]
    best = np.inf
    for perm in itertools.permutations(range(len(b))):
        d = max(
            float(np.max(np.abs(ca[i] - cb[j]))) for i, j in enumerate(perm)
        )
        if d < best:
            best = d
    return best
