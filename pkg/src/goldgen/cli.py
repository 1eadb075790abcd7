"""Command-line front-end.

Subcommands: generate (tree JSON), simulate (trajectory CSV), solve
(labeled-path CSV), verify (acceptance suites), period (period report).

Exit codes: 0 ok, 1 verification failure, 2 usage/config error,
3 numerical failure.  Output files are written atomically.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import dynamics, permgen, solvers, verify
from .config import ConfigError, RunConfig, load_config
from .dynamics import trajectory_to_csv
from .errors import GoldgenError
from .polycore import MonicPoly

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".goldgen-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _out_path(cfg: RunConfig, args, default: str) -> str:
    return args.output or cfg.output or default


def cmd_generate(cfg: RunConfig, args) -> int:
    if cfg.seed_coeffs is None:
        print("generate: config needs seed_coeffs", file=sys.stderr)
        return EXIT_CONFIG
    depth = args.depth if args.depth is not None else cfg.depth
    try:
        tree = permgen.generation_tree(
            MonicPoly(cfg.seed_coeffs),
            depth,
            node_budget=cfg.node_budget,
            opts=cfg.root_options(),
        )
    except GoldgenError as e:
        print(f"generate: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    path = _out_path(cfg, args, "tree.json")
    _atomic_write(path, json.dumps(tree.to_json_dict(), indent=1))
    print(f"wrote {path}: {len(tree.nodes)} nodes, depth {depth}")
    if tree.failed:
        for addr, msg in tree.failed.items():
            print(f"  branch mu={list(addr)} halted: {msg}", file=sys.stderr)
    return EXIT_OK


def _initial_state(cfg: RunConfig):
    if cfg.initial is None:
        raise ConfigError("config needs an 'initial' block")
    if cfg.model is None:
        raise ConfigError("config needs a 'model' block")
    if cfg.model.kind == "generation":
        return dynamics.build_initial_state(
            cfg.initial, cfg.mu, sep_tol=cfg.tolerances.sep_tol
        )
    return cfg.initial


def cmd_simulate(cfg: RunConfig, args) -> int:
    try:
        s0 = _initial_state(cfg)
    except ConfigError as e:
        print(f"simulate: {e}", file=sys.stderr)
        return EXIT_CONFIG
    times = cfg.grid.times()
    try:
        traj = dynamics.integrate(
            cfg.model, s0, times[-1], out_times=times, opts=cfg.integrator_options()
        )
    except GoldgenError as e:
        loc = f" (level {e.level})" if getattr(e, "level", None) is not None else ""
        print(f"simulate: {type(e).__name__}{loc}: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    path = _out_path(cfg, args, "trajectory.csv")
    _atomic_write(path, trajectory_to_csv(traj))
    print(
        f"wrote {path}: {len(traj.states)} samples, {traj.steps} steps, "
        f"min gap {traj.min_gap:.3e}"
    )
    return EXIT_OK


def cmd_solve(cfg: RunConfig, args) -> int:
    if cfg.initial is None or cfg.model is None:
        print("solve: config needs 'initial' and 'model'", file=sys.stderr)
        return EXIT_CONFIG
    model = cfg.model
    seed_spec = model.seed if model.kind == "generation" else model
    if seed_spec.kind not in ("linear_seed", "iso_goldfish"):
        print(f"solve: seed kind {seed_spec.kind!r} has no closed form",
              file=sys.stderr)
        return EXIT_CONFIG
    mu = cfg.mu if model.kind == "generation" else ()
    times = cfg.grid.times()
    try:
        path = solvers.solve_generation_path(
            seed_spec, cfg.initial, mu, times, opts=cfg.root_options()
        )
    except GoldgenError as e:
        hint = ""
        if type(e).__name__ == "TrackingAmbiguity":
            hint = " (try a smaller dt_out)"
        print(f"solve: {type(e).__name__}: {e}{hint}", file=sys.stderr)
        return EXIT_NUMERIC
    out = _out_path(cfg, args, "path.csv")
    _atomic_write(out, path.to_csv())
    print(f"wrote {out}: {len(path.times)} samples")
    return EXIT_OK


def cmd_verify(args) -> int:
    names = [args.suite] if args.suite != "all" else list(verify.SUITES)
    all_ok = True
    for name in names:
        checks = verify.SUITES[name]()
        for c in checks:
            status = "PASS" if c.passed else "FAIL"
            print(
                f"[{status}] {name}: {c.name}  "
                f"(residual {c.residual:.3e}, threshold {c.threshold:.3e})"
            )
            all_ok = all_ok and c.passed
    return EXIT_OK if all_ok else EXIT_VERIFY


def cmd_period(args) -> int:
    try:
        data = np.genfromtxt(args.trajectory, delimiter=",", names=True)
    except OSError as e:
        print(f"period: {e}", file=sys.stderr)
        return EXIT_CONFIG
    names = [n for n in data.dtype.names if n.startswith("x")]
    times = np.asarray(data["t"], dtype=float)
    n = len(names) // 2
    values = np.empty((len(times), n), dtype=np.complex128)
    for i in range(1, n + 1):
        values[:, i - 1] = data[f"x{i}_re"] + 1j * data[f"x{i}_im"]
    path = solvers.LabeledPath(times, values)
    try:
        rep = solvers.detect_period(
            path, args.period, args.p_max, period_tol=args.tol
        )
    except GoldgenError as e:
        print(f"period: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_VERIFY
    print(json.dumps(rep.to_json_dict()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="goldgen",
        description="Generations of monic polynomials and solvable "
        "goldfish-type dynamics",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument("--config", required=True, help="JSON run config")
        p.add_argument("--output", help="override output path")

    g = sub.add_parser("generate", help="expand a generation tree to JSON")
    add_config(g)
    g.add_argument("--depth", type=int, default=None)

    s = sub.add_parser("simulate", help="integrate a model, write CSV")
    add_config(s)

    so = sub.add_parser("solve", help="algebraic solution path, write CSV")
    add_config(so)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument(
        "suite",
        choices=sorted(verify.SUITES) + ["all"],
    )

    p = sub.add_parser("period", help="detect the period of a CSV path")
    p.add_argument("trajectory", help="CSV file with t,x1_re,... columns")
    p.add_argument("--period", type=float, required=True, help="base period T")
    p.add_argument("--p-max", type=int, default=math.factorial(6))
    p.add_argument("--tol", type=float, default=1e-6)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "period":
        return cmd_period(args)
    try:
        cfg = load_config(args.config)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "generate":
        return cmd_generate(cfg, args)
    if args.command == "simulate":
        return cmd_simulate(cfg, args)
    if args.command == "solve":
        return cmd_solve(cfg, args)
    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())
