"""Run configuration: JSON file, ``key=value`` overrides, validation.

Schema (all keys optional, defaults from ``DEFAULTS``)::

    {
      "d": 2, "M": 64, "N": 128,
      "dt": 0.001, "t_end": 1.0, "snapshot_stride": 100,
      "seed": 0,
      "initial": {"preset": "decay", "bandwidth": 3, "amplitude": 0.5, "rate": 0.5},
      "invariant_orders": {"E": 4, "M": 2},
      "tolerances": {"drift_hard_limit": 1e-6, "herm_hard_limit": 1e-10, "norm_cap": 1e6},
      "spectra": true,
      "outputs": "run"
    }

``initial`` is one of ``{"preset": "cosine", "amplitude": a, "matrix": H}``,
``{"preset": "random", "bandwidth": B, "scale": s, "rate": r}``,
``{"preset": "decay", "bandwidth": B, "amplitude": a, "rate": r}`` or
``{"file": path}``.  ``H`` is a real nested list or ``{"re": .., "im": ..}``;
it defaults to the identity.
"""

from __future__ import annotations

import copy
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import fields
from .formats import FormatError, read_field
from .matrix_trig import MatrixField

log = logging.getLogger(__name__)

DEFAULTS: dict = {
    "d": 2,
    "M": 64,
    "N": 128,
    "dt": 1e-3,
    "t_end": 1.0,
    "snapshot_stride": 100,
    "seed": 0,
    "initial": {"preset": "decay", "bandwidth": 3, "amplitude": 0.5, "rate": 0.5},
    "invariant_orders": {"E": 4, "M": 2},
    "tolerances": {"drift_hard_limit": 1e-6, "herm_hard_limit": 1e-10, "norm_cap": 1e6},
    "spectra": True,
    "outputs": "run",
}

PRESETS = ("cosine", "random", "decay")


class ConfigError(ValueError):
    def __init__(self, key: str, msg: str):
        super().__init__(f"{key}: {msg}")
        self.key = key


@dataclass
class Tolerances:
    drift_hard_limit: float = 1e-6
    herm_hard_limit: float = 1e-10
    norm_cap: float = 1e6


@dataclass
class SimConfig:
    d: int = 2
    M: int = 64
    N: int = 128
    dt: float = 1e-3
    t_end: float = 1.0
    snapshot_stride: int = 100
    seed: int = 0
    initial: dict = field(default_factory=lambda: dict(DEFAULTS["initial"]))
    invariant_orders: dict = field(default_factory=lambda: dict(DEFAULTS["invariant_orders"]))
    tolerances: Tolerances = field(default_factory=Tolerances)
    spectra: bool = True
    outputs: str = "run"

    def to_dict(self) -> dict:
        return asdict(self)


def _merge(base: dict, extra: dict, prefix: str = "") -> dict:
    out = copy.deepcopy(base)
    for k, v in extra.items():
        key = prefix + k
        if isinstance(out.get(k), dict) and k != "initial":
            if not isinstance(v, dict):
                raise ConfigError(key, "expected an object")
            out[k] = _merge(out[k], v, key + ".")
        elif k not in out:
            raise ConfigError(key, "unknown key")
        else:
            out[k] = v
    return out


def load_config_dict(path=None, overrides=()) -> dict:
    raw = copy.deepcopy(DEFAULTS)
    if path is not None:
        try:
            user = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError("config", str(exc)) from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config line {exc.lineno}", exc.msg) from exc
        if not isinstance(user, dict):
            raise ConfigError("config", "top level must be an object")
        raw = _merge(raw, user)
    for item in overrides:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(item, "override must look like key=value")
        try:
            parsed = json.loads(value)
        except json.JSONDecodeError:
            parsed = value
        nested: dict = {}
        cur = nested
        parts = key.split(".")
        for p in parts[:-1]:
            cur = cur.setdefault(p, {})
        cur[parts[-1]] = parsed
        if parts[0] == "initial" and len(parts) > 1:
            raw["initial"] = {**raw["initial"], **nested["initial"]}
        else:
            raw = _merge(raw, nested)
    return raw


def _num(raw: dict, key: str, kind, lo=None, strict=False):
    v = raw[key]
    if kind is int and (isinstance(v, bool) or not isinstance(v, int)):
        raise ConfigError(key, f"expected an integer, got {v!r}")
    if kind is float:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(key, f"expected a number, got {v!r}")
        v = float(v)
    if lo is not None and (v <= lo if strict else v < lo):
        raise ConfigError(key, f"must be {'>' if strict else '>='} {lo}")
    return v


def parse_config(raw: dict) -> SimConfig:
    for key in ("initial", "invariant_orders", "tolerances"):
        if not isinstance(raw[key], dict):
            raise ConfigError(key, "expected an object")
    cfg = SimConfig(
        d=_num(raw, "d", int, 1),
        M=_num(raw, "M", int, 1),
        N=_num(raw, "N", int, 0),
        dt=_num(raw, "dt", float, 0, strict=True),
        t_end=_num(raw, "t_end", float, 0),
        snapshot_stride=_num(raw, "snapshot_stride", int, 1),
        seed=_num(raw, "seed", int, 0),
        initial=dict(raw["initial"]),
        invariant_orders=dict(raw["invariant_orders"]),
        spectra=bool(raw["spectra"]),
        outputs=str(raw["outputs"]),
    )
    if cfg.seed >= 2**64:
        raise ConfigError("seed", "must fit in 64 bits")
    tol = raw["tolerances"]
    cfg.tolerances = Tolerances(
        **{k: _num(tol, k, float, 0, strict=True) for k in ("drift_hard_limit", "herm_hard_limit", "norm_cap")}
    )
    for k in ("E", "M"):
        v = cfg.invariant_orders.get(k)
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise ConfigError(f"invariant_orders.{k}", "must be a nonnegative integer")
    _check_initial(cfg.initial)
    if cfg.N < 2 * cfg.M:
        log.warning("N=%d is below 2M=%d; spectra may be truncation-dominated", cfg.N, 2 * cfg.M)
    return cfg


def _check_initial(desc: dict):
    if "file" in desc:
        return
    preset = desc.get("preset")
    if preset not in PRESETS:
        raise ConfigError("initial.preset", f"must be one of {PRESETS} or give initial.file")
    if preset != "cosine":
        b = desc.get("bandwidth", 3)
        if isinstance(b, bool) or not isinstance(b, int) or b < 0:
            raise ConfigError("initial.bandwidth", "must be a nonnegative integer")


def load_config(path=None, overrides=()) -> SimConfig:
    return parse_config(load_config_dict(path, overrides))


def parse_matrix(obj, d: int) -> np.ndarray:
    if obj is None:
        return np.eye(d, dtype=np.complex128)
    if isinstance(obj, dict):
        m = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj.get("im", 0.0), dtype=float)
    else:
        m = np.asarray(obj, dtype=np.complex128)
    if m.shape != (d, d):
        raise ConfigError("initial.matrix", f"expected a {d}x{d} matrix")
    return m


def build_initial(desc: dict, d: int, seed: int) -> MatrixField:
    """Initial field from a preset descriptor or a field file."""
    if "file" in desc:
        try:
            U, _ = read_field(desc["file"])
        except (OSError, FormatError) as exc:
            raise ConfigError("initial.file", str(exc)) from exc
        if U.d != d:
            raise ConfigError("initial.file", f"field has d={U.d}, config has d={d}")
        return U
    rng = np.random.default_rng(seed)
    preset = desc.get("preset")
    if preset == "cosine":
        try:
            return fields.cosine(parse_matrix(desc.get("matrix"), d), desc.get("amplitude", 1.0))
        except ValueError as exc:
            raise ConfigError("initial.matrix", str(exc)) from exc
    if preset == "random":
        return fields.random_hermitian(
            d, desc.get("bandwidth", 3), rng, desc.get("scale", 1.0), desc.get("rate", 0.0)
        )
    if preset == "decay":
        return fields.decay(
            d, desc.get("bandwidth", 3), rng, desc.get("amplitude", 1.0), desc.get("rate", 0.5)
        )
    raise ConfigError("initial.preset", f"unknown preset {preset!r}")
