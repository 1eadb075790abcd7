"""Run configuration: JSON ingestion, schema validation, dataclasses."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import jsonschema
import numpy as np

from .dynamics import IntegratorOptions, ModelSpec, PhaseState
from .polycore import RootOptions


class ConfigError(Exception):
    pass


def _schema() -> dict:
    text = resources.files("goldgen").joinpath("config_schema.json").read_text()
    return json.loads(text)


def pairs_to_complex(pairs) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)


def complex_to_pairs(values) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values)]


@dataclass
class Tolerances:
    ode_rel: float = 1e-9
    ode_abs: float = 1e-12
    root_tol: float = 1e-12
    sep_tol: float = 1e-8
    period_tol: float = 1e-6


@dataclass
class Grid:
    t0: float = 0.0
    t1: float = 6.283185307179586
    dt_out: float = 0.01

    def times(self) -> np.ndarray:
        count = int(round((self.t1 - self.t0) / self.dt_out))
        if count < 1:
            raise ConfigError("grid must contain at least two output times")
        return self.t0 + self.dt_out * np.arange(count + 1)


@dataclass
class RunConfig:
    n: int = 2
    model: ModelSpec | None = None
    mu: tuple[int, ...] = ()
    seed_coeffs: np.ndarray | None = None
    depth: int = 0
    node_budget: int = 10**6
    initial: PhaseState | None = None
    grid: Grid = field(default_factory=Grid)
    tolerances: Tolerances = field(default_factory=Tolerances)
    output: str | None = None
    rng_seed: int = 0

    def root_options(self) -> RootOptions:
        t = self.tolerances
        return RootOptions(root_tol=t.root_tol, sep_tol=t.sep_tol, seed=self.rng_seed)

    def integrator_options(self) -> IntegratorOptions:
        t = self.tolerances
        return IntegratorOptions(rel_tol=t.ode_rel, abs_tol=t.ode_abs, sep_tol=t.sep_tol)


def load_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    return parse_config(raw)


def parse_config(raw: dict) -> RunConfig:
    try:
        jsonschema.validate(raw, _schema())
    except jsonschema.ValidationError as e:
        raise ConfigError(f"config rejected by schema: {e.message}") from e

    cfg = RunConfig()
    cfg.n = int(raw.get("n", 2))
    cfg.mu = tuple(int(m) for m in raw.get("mu", []))
    cfg.depth = int(raw.get("depth", 0))
    cfg.node_budget = int(raw.get("node_budget", 10**6))
    cfg.output = raw.get("output")
    cfg.rng_seed = int(raw.get("rng_seed", 0))
    if "grid" in raw:
        cfg.grid = Grid(**raw["grid"])
    if "tolerances" in raw:
        cfg.tolerances = Tolerances(**raw["tolerances"])
    if "seed_coeffs" in raw:
        cfg.seed_coeffs = pairs_to_complex(raw["seed_coeffs"])
    if "initial" in raw:
        pos = pairs_to_complex(raw["initial"]["positions"])
        vel = pairs_to_complex(raw["initial"]["velocities"])
        if len(pos) != len(vel):
            raise ConfigError("positions/velocities lengths differ")
        cfg.initial = PhaseState(pos, vel, t=cfg.grid.t0)
    if "model" in raw:
        m = raw["model"]
        a = complex(*m["a"]) if "a" in m else 0.0
        kind = m["kind"]
        if kind == "generation":
            seed_kind = m.get("seed_kind", "linear_seed")
            seed = ModelSpec(
                seed_kind,
                omega=float(m.get("omega", 0.0)),
                a=a,
                ia_sign=int(m.get("ia_sign", 1)),
            )
            try:
                cfg.model = ModelSpec(
                    "generation",
                    depth=int(m.get("depth", len(cfg.mu) or 1)),
                    seed=seed,
                    mu=cfg.mu,
                )
            except ValueError as e:
                raise ConfigError(str(e)) from e
        else:
            cfg.model = ModelSpec(
                kind,
                omega=float(m.get("omega", 0.0)),
                a=a,
                ia_sign=int(m.get("ia_sign", 1)),
            )
    return cfg
