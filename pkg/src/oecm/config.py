"""Experiment configuration: INI file, environment and command-line layers.

Precedence, lowest to highest: built-in defaults, the config file,
``OECM_OUTPUT_DIR`` (output directory only), command-line flags.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .hamiltonian import DEFAULT_G, DEFAULT_H, DEFAULT_J
from .hilbert import PATTERNS

OUTPUT_ENV = "OECM_OUTPUT_DIR"


@dataclass(frozen=True)
class TypicalityConfig:
    n_sites: int = 6
    T: float = 500.0
    epsilon_dev: float = 0.05
    n_samples: int = 500
    # "asymptotic" substitutes f = 1, "full" uses f(eps, T) with the experiment epsilon
    f_mode: str = "asymptotic"
    d_eff_convention: str = "ensemble_mean"


@dataclass(frozen=True)
class ExperimentConfig:
    n_sites: int = 10
    g: float = DEFAULT_G
    h: float = DEFAULT_H
    j: float = DEFAULT_J
    initial_states: tuple = PATTERNS
    t_max: float = 1000.0
    dt: float = 0.05
    epsilon: float | str = "auto"
    entropy_base: float | str = "rank"
    output_dir: str = "oecm_output"
    seed: int = 0
    typicality: TypicalityConfig | None = field(default=None)


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def validate(config: ExperimentConfig) -> list[str]:
    """One message per offending field; empty iff :func:`run` accepts the config."""
    bad = []
    if not (isinstance(config.n_sites, int) and config.n_sites >= 2):
        bad.append(f"n_sites: must be an integer >= 2, got {config.n_sites!r}")
    elif config.n_sites > 14:
        bad.append(f"n_sites: dense diagonalization limited to 14 sites, got {config.n_sites}")
    for name in ("g", "h", "j"):
        if not _is_number(getattr(config, name)):
            bad.append(f"{name}: must be a real number")
    states = config.initial_states
    if not states:
        bad.append("initial_states: at least one state required")
    else:
        unknown = [s for s in states if str(s).lower() not in PATTERNS]
        if unknown:
            bad.append(f"initial_states: unknown {unknown}; choose from {list(PATTERNS)}")
        if len({str(s).lower() for s in states}) != len(states):
            bad.append("initial_states: duplicates")
    t_ok = _is_number(config.t_max) and config.t_max > 0
    dt_ok = _is_number(config.dt) and config.dt > 0
    if not t_ok:
        bad.append(f"t_max: must be positive, got {config.t_max!r}")
    if not dt_ok:
        bad.append(f"dt: must be positive, got {config.dt!r}")
    if t_ok and dt_ok and not config.dt < config.t_max:
        bad.append(f"dt: must be smaller than t_max ({config.dt!r} >= {config.t_max!r})")
    if config.epsilon != "auto" and not (_is_number(config.epsilon) and config.epsilon > 0):
        bad.append(f"epsilon: must be 'auto' or positive, got {config.epsilon!r}")
    if config.entropy_base != "rank" and not (_is_number(config.entropy_base) and config.entropy_base > 1):
        bad.append(f"entropy_base: must be 'rank' or a number > 1, got {config.entropy_base!r}")
    if not str(config.output_dir):
        bad.append("output_dir: empty path")
    if not isinstance(config.seed, int) or config.seed < 0:
        bad.append(f"seed: must be a non-negative integer, got {config.seed!r}")
    typ = config.typicality
    if typ is not None:
        if not (isinstance(typ.n_sites, int) and 2 <= typ.n_sites <= 12):
            bad.append(f"typicality.n_sites: must be an integer in 2..12, got {typ.n_sites!r}")
        if not (_is_number(typ.T) and typ.T > 0):
            bad.append(f"typicality.T: must be positive, got {typ.T!r}")
        if not (_is_number(typ.epsilon_dev) and typ.epsilon_dev > 0):
            bad.append(f"typicality.epsilon_dev: must be positive, got {typ.epsilon_dev!r}")
        if not (isinstance(typ.n_samples, int) and typ.n_samples >= 1):
            bad.append(f"typicality.n_samples: must be a positive integer, got {typ.n_samples!r}")
        if typ.f_mode not in ("asymptotic", "full"):
            bad.append(f"typicality.f_mode: must be 'asymptotic' or 'full', got {typ.f_mode!r}")
        if typ.d_eff_convention not in ("ensemble_mean", "per_sample_min"):
            bad.append(f"typicality.d_eff_convention: unknown {typ.d_eff_convention!r}")
    return bad


def _number_or(text: str, keyword: str):
    text = text.strip()
    if text.lower() == keyword:
        return keyword
    return float(text)


_PARSERS = {
    "n_sites": int,
    "g": float,
    "h": float,
    "j": float,
    "initial_states": lambda s: tuple(x.strip().lower() for x in s.split(",") if x.strip()),
    "t_max": float,
    "dt": float,
    "epsilon": lambda s: _number_or(s, "auto"),
    "entropy_base": lambda s: _number_or(s, "rank"),
    "output_dir": str,
    "seed": int,
}

_TYP_PARSERS = {
    "n_sites": int,
    "T": float,
    "epsilon_dev": float,
    "n_samples": int,
    "f_mode": str,
    "d_eff_convention": str,
}


def load_config(path, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Read an INI file with an ``[experiment]`` and an optional ``[typicality]`` section."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    parser.optionxform = str
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    cfg = base or ExperimentConfig()
    updates = {}
    if parser.has_section("experiment"):
        for key, raw in parser.items("experiment"):
            if key not in _PARSERS:
                raise KeyError(f"unknown key {key!r} in [experiment]")
            updates[key] = _PARSERS[key](raw)
    cfg = replace(cfg, **updates)
    if parser.has_section("typicality"):
        sect = dict(parser.items("typicality"))
        enabled = sect.pop("enabled", "true").strip().lower() in {"1", "true", "yes", "on"}
        typ = {}
        for key, raw in sect.items():
            if key not in _TYP_PARSERS:
                raise KeyError(f"unknown key {key!r} in [typicality]")
            typ[key] = _TYP_PARSERS[key](raw)
        cfg = replace(cfg, typicality=replace(TypicalityConfig(), **typ) if enabled else None)
    return cfg


def apply_environment(cfg: ExperimentConfig, environ=None) -> ExperimentConfig:
    environ = os.environ if environ is None else environ
    out = environ.get(OUTPUT_ENV)
    return replace(cfg, output_dir=out) if out else cfg


def dump_config(cfg: ExperimentConfig) -> str:
    """Inverse of :func:`load_config`, for recording the exact settings of a run."""
    lines = ["[experiment]"]
    for f in fields(cfg):
        if f.name == "typicality":
            continue
        value = getattr(cfg, f.name)
        if isinstance(value, tuple):
            value = ", ".join(value)
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{f.name} = {value}")
    if cfg.typicality is not None:
        lines += ["", "[typicality]", "enabled = true"]
        for f in fields(cfg.typicality):
            value = getattr(cfg.typicality, f.name)
            lines.append(f"{f.name} = {value!r}" if isinstance(value, float) else f"{f.name} = {value}")
    return "\n".join(lines) + "\n"


def output_path(cfg: ExperimentConfig) -> Path:
    return Path(cfg.output_dir)
