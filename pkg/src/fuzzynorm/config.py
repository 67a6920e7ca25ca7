"""JSON run configuration for the command-line tool.

Schema (every key optional unless the command needs it)::

    {
      "space":    {"dimension": 2, "family": "crisp_induced", "norm": {"kind": "euclidean"}},
      "codomain": {"dimension": 2, "norm": {"kind": "max_norm"}},
      "plan":     {"seed": 0, "n_points": 256, "point_radius": 2.0, "a_range": [0.001, 1000.0],
                   "n_thresholds": 16, "equality_tol": 1e-9, "limit_tol": 1e-6, "max_witnesses": 8},
      "map":      {"name": "rigid", "seed": 7, "dim": 3, "translation": [1, 2, 3]},
      "sequence": {"name": "drift", "base": [0, 0], "n_max": 1000},
      "limit": [0, 0], "eps": 0.01, "a_grid": [1.0], "p_max": 10,
      "midpoint": {"a": [0, 0], "b": [2, 0], "s": 1.0, "n_starts": 64, "tol": 1e-9},
      "dimension": 2,
      "cert_tol": 1e-6, "tol": 1e-9, "dyadic_depth": 6
    }

A custom space names one of the built-in evaluators::

    {"dimension": 2, "family": "custom", "name": "squared_norm", "norm": {"kind": "euclidean"}}

Maps: ``rigid`` (seed, dim, translation), ``scaling`` (c, dim), ``identity``
(dim), ``sine_curve``, ``perturbed_isometry`` (seed, magnitude, dim).
Sequences: ``drift`` (base, n_max), ``constant`` (base, n_max),
``alternating`` (dim, n_max).
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import FuzzyNormError
from .fuzzy_norm import CUSTOM_EVALUATORS, FuzzyNormSpec
from .isometry import (
    make_identity,
    make_perturbed_isometry,
    make_rigid_map,
    make_scaling,
    make_sine_curve_map,
)
from .sampling import SamplePlan
from .sequences import SEQUENCES
from .vecspace import CrispNormKind


class ConfigError(FuzzyNormError):
    """A configuration value is missing or malformed; ``location`` is a dotted path."""

    def __init__(self, location: str, message: str):
        super().__init__(f"config error at {location}: {message}")
        self.location = location


def load(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("<file>", str(exc)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"<json line {exc.lineno}>", exc.msg) from None
    if not isinstance(data, dict):
        raise ConfigError("<root>", "top level must be an object")
    return data


def require(cfg: dict, key: str, where: str = ""):
    loc = f"{where}.{key}" if where else key
    if not isinstance(cfg, dict) or key not in cfg:
        raise ConfigError(loc, "missing")
    return cfg[key]


def _guard(location: str, build):
    try:
        return build()
    except ConfigError:
        raise
    except (FuzzyNormError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(location, str(exc)) from None


def parse_norm(cfg: dict, where: str) -> CrispNormKind:
    return _guard(where, lambda: CrispNormKind.from_dict(cfg))


def parse_space(cfg: dict, where: str = "space") -> FuzzyNormSpec:
    if not isinstance(cfg, dict):
        raise ConfigError(where, "must be an object")
    dim = require(cfg, "dimension", where)
    kind = parse_norm(cfg.get("norm", {"kind": "euclidean"}), f"{where}.norm")
    family = cfg.get("family", "crisp_induced")
    if family == "crisp_induced":
        return _guard(where, lambda: FuzzyNormSpec.crisp_induced(kind, dim))
    if family == "custom":
        name = require(cfg, "name", where)
        if name not in CUSTOM_EVALUATORS:
            raise ConfigError(f"{where}.name", f"unknown custom norm {name!r}; known: {sorted(CUSTOM_EVALUATORS)}")
        return _guard(where, lambda: FuzzyNormSpec.custom(CUSTOM_EVALUATORS[name](kind), dim, name))
    raise ConfigError(f"{where}.family", f"unknown family {family!r}")


def parse_plan(cfg: dict, seed: int | None = None) -> SamplePlan:
    data = dict(cfg.get("plan", {}))
    if seed is not None:
        data["seed"] = seed
    return _guard("plan", lambda: SamplePlan.from_dict(data))


_MAPS = {
    "rigid": lambda c: make_rigid_map(int(c.get("seed", 0)), int(require(c, "dim", "map")), c.get("translation")),
    "scaling": lambda c: make_scaling(float(require(c, "c", "map")), int(c.get("dim", 2))),
    "identity": lambda c: make_identity(int(require(c, "dim", "map"))),
    "sine_curve": lambda c: make_sine_curve_map(),
    "perturbed_isometry": lambda c: make_perturbed_isometry(
        int(c.get("seed", 0)), float(require(c, "magnitude", "map")), int(c.get("dim", 2))
    ),
}


def parse_map(cfg: dict):
    name = require(cfg, "name", "map")
    if name not in _MAPS:
        raise ConfigError("map.name", f"unknown map {name!r}; known: {sorted(_MAPS)}")
    return _guard("map", lambda: _MAPS[name](cfg))


def parse_sequence(cfg: dict):
    name = require(cfg, "name", "sequence")
    if name not in SEQUENCES:
        raise ConfigError("sequence.name", f"unknown sequence {name!r}; known: {sorted(SEQUENCES)}")
    n_max = int(cfg.get("n_max", 1000))
    if name == "alternating":
        return _guard("sequence", lambda: SEQUENCES[name](int(cfg.get("dim", 2)), n_max))
    base = require(cfg, "base", "sequence")
    return _guard("sequence", lambda: SEQUENCES[name](base, n_max))
