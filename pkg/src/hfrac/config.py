"""Flat key-value run configuration: load, override, validate, hash.

Configs are JSON objects with scalar or list values only.  Every key is
checked against the known set and every range is validated before any
computation starts; unknown keys are rejected by name.  Environment variables
prefixed HFRAC_ override file values, command-line flags override both.
"""
from __future__ import annotations

import hashlib
import inspect
import json
import os
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from . import group, profiles
from .errors import ConfigError
from .operators import FracParams, QuadConfig

COMMANDS = ("eval", "solve", "harnack", "asymptotics")

ENV_PREFIX = "HFRAC_"

# key: (type tag, default); list-typed defaults are copied on resolve
_KNOWN = {
    "command": ("str", None),
    "n": ("int", 1),
    "s": ("float", 0.5),
    "p": ("float", 2.0),
    "epsilon": ("float_or_null", None),
    "norm": ("str", "koranyi"),
    "h": ("float", 0.22),
    "radius": ("float", 1.0),
    "r_ext": ("float", 1.5),
    "center": ("list", None),
    "f": ("str", "constant"),
    "g": ("str", "constant"),
    "g_far": ("float", 0.0),
    "points": ("list", None),
    "s_list": ("list", []),
    "h_list": ("list", []),
    "t_list": ("list", [1.0]),
    "delta_list": ("list", [0.5, 1.0]),
    "robust_s_list": ("list", [0.6, 0.7, 0.8, 0.9]),
    "r": ("float", 0.23),
    "R": ("float", 1.4),
    "q": ("float", 1.5),
    "d": ("float", 0.1),
    "seed": ("int", 0),
    "out": ("str", "out"),
    "threads": ("int", 0),
    "quad_per_decade": ("int", 32),
    "quad_angular": ("int", 1024),
    "quad_rho_in": ("float", 1e-3),
}

_RESERVED = set(_KNOWN)


@dataclass
class RunConfig:
    """Validated, fully resolved run configuration."""

    command: str
    n: int
    s: float
    p: float
    epsilon: Optional[float]
    norm: str
    h: float
    radius: float
    r_ext: float
    center: list
    f: str
    g: str
    g_far: float
    points: list
    s_list: list
    h_list: list
    t_list: list
    delta_list: list
    robust_s_list: list
    r: float
    R: float
    q: float
    d: float
    seed: int
    out: str
    threads: int
    quad_per_decade: int
    quad_angular: int
    quad_rho_in: float
    f_params: dict = field(default_factory=dict)
    g_params: dict = field(default_factory=dict)

    def frac_params(self, s: Optional[float] = None) -> FracParams:
        norm = group.HomNorm(group.KORANYI if self.norm == "koranyi" else group.BOX)
        try:
            return FracParams(
                n=self.n, s=self.s if s is None else float(s), p=self.p,
                norm=norm, epsilon=self.epsilon,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def quad(self, seed_shift: int = 0) -> QuadConfig:
        return QuadConfig(
            rho_in=self.quad_rho_in, per_decade=self.quad_per_decade,
            angular=self.quad_angular, seed=self.seed + seed_shift,
        )

    def make_profile(self, which: str):
        name = self.f if which == "f" else self.g
        params = self.f_params if which == "f" else self.g_params
        return profiles.make(name, n=self.n, **params)

    def as_dict(self) -> dict:
        out = {}
        for key in _KNOWN:
            out[key] = getattr(self, key)
        for k, v in sorted(self.f_params.items()):
            out[f"f_{k}"] = v
        for k, v in sorted(self.g_params.items()):
            out[f"g_{k}"] = v
        return out

    def config_hash(self) -> str:
        text = json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def _coerce(key: str, tag: str, value):
    if tag == "str":
        if not isinstance(value, str):
            raise ConfigError(f"key {key!r} must be a string")
        return value
    if tag == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"key {key!r} must be an integer")
        return int(value)
    if tag == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"key {key!r} must be a number")
        return float(value)
    if tag == "float_or_null":
        if value is None:
            return None
        return _coerce(key, "float", value)
    if tag == "list":
        if not isinstance(value, list):
            raise ConfigError(f"key {key!r} must be a list")
        return value
    raise ConfigError(f"internal: unknown type tag for {key!r}")


def _check_profile_params(which: str, name: str, params: dict) -> None:
    if name not in profiles.PROFILES:
        known = ", ".join(sorted(profiles.PROFILES))
        raise ConfigError(f"unknown {which} profile {name!r}; known: {known}")
    sig = inspect.signature(profiles.PROFILES[name])
    for k in params:
        if k not in sig.parameters or k == "n":
            raise ConfigError(
                f"profile {name!r} has no parameter {k!r} "
                f"(offending key: {which}_{k})"
            )


def validate(raw: dict) -> RunConfig:
    """Coerce, range-check, and freeze a raw key-value mapping."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object of key-value pairs")
    fields: dict = {}
    f_params: dict = {}
    g_params: dict = {}
    for key, value in raw.items():
        if key in _KNOWN:
            fields[key] = _coerce(key, _KNOWN[key][0], value)
        elif key.startswith("f_") and len(key) > 2:
            f_params[key[2:]] = value
        elif key.startswith("g_") and len(key) > 2:
            g_params[key[2:]] = value
        else:
            raise ConfigError(f"unknown config key {key!r}")
    for key, (tag, default) in _KNOWN.items():
        if key not in fields:
            fields[key] = list(default) if isinstance(default, list) else default

    if fields["command"] is None:
        raise ConfigError("config key 'command' is required")
    if fields["command"] not in COMMANDS:
        raise ConfigError(
            f"unknown command {fields['command']!r}; known: {', '.join(COMMANDS)}"
        )
    if fields["norm"] not in ("koranyi", "box"):
        raise ConfigError("norm must be 'koranyi' or 'box'")
    d = group.dim_of(max(fields["n"], 1))
    if fields["center"] is None:
        fields["center"] = [0.0] * d
    if fields["points"] is None:
        fields["points"] = [[0.0] * d]

    cfg = RunConfig(f_params=f_params, g_params=g_params, **fields)
    cfg.frac_params()  # validates n, s, p, epsilon ranges
    _check_profile_params("f", cfg.f, cfg.f_params)
    _check_profile_params("g", cfg.g, cfg.g_params)

    if cfg.h <= 0:
        raise ConfigError("h must be positive")
    if cfg.radius <= 0:
        raise ConfigError("radius must be positive")
    if cfg.r_ext < cfg.radius:
        raise ConfigError("r_ext must not be smaller than radius")
    if len(cfg.center) != d:
        raise ConfigError(f"center must have {d} coordinates")
    for pt in cfg.points:
        if not isinstance(pt, list) or len(pt) != d:
            raise ConfigError(f"each point must be a list of {d} coordinates")
    for key in ("s_list", "h_list", "t_list", "delta_list", "robust_s_list"):
        vals = getattr(cfg, key)
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in vals):
            raise ConfigError(f"{key} must contain numbers only")
        setattr(cfg, key, [float(v) for v in vals])
    for sv in cfg.s_list + cfg.robust_s_list:
        if not 0.0 < sv < 1.0:
            raise ConfigError(f"s values must lie in (0,1); got {sv}")
    for hv in cfg.h_list:
        if hv <= 0:
            raise ConfigError("h_list entries must be positive")
    for tv in cfg.t_list:
        if tv <= 0:
            raise ConfigError("t_list entries must be positive")
    for dv in cfg.delta_list:
        if not 0.0 < dv <= 1.0:
            raise ConfigError("delta_list entries must lie in (0, 1]")
    if cfg.r <= 0 or cfg.R <= 0:
        raise ConfigError("r and R must be positive")
    if cfg.command == "harnack":
        if not 1.0 < cfg.q < cfg.p:
            raise ConfigError("q must lie strictly between 1 and p")
        if cfg.d <= 0:
            raise ConfigError("d must be positive")
    if cfg.seed < 0:
        raise ConfigError("seed must be nonnegative")
    if cfg.threads < 0:
        raise ConfigError("threads must be nonnegative")
    if cfg.quad_per_decade < 2 or cfg.quad_angular < 8:
        raise ConfigError("quadrature resolution too small to be meaningful")
    if cfg.quad_rho_in <= 0:
        raise ConfigError("quad_rho_in must be positive")
    return cfg


def _parse_env_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def load(path: str, overrides: Optional[dict] = None) -> RunConfig:
    """Read a JSON config file, apply HFRAC_ env and explicit overrides, validate."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object of key-value pairs")
    for name, text in sorted(os.environ.items()):
        if name.startswith(ENV_PREFIX) and len(name) > len(ENV_PREFIX):
            raw[name[len(ENV_PREFIX):].lower()] = _parse_env_value(text)
    for key, value in (overrides or {}).items():
        if value is not None:
            raw[key] = value
    return validate(raw)
