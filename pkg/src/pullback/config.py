"""Run configuration: defaults < config file < PULLBACK_* environment < flags."""

from dataclasses import dataclass, fields
import os

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import modular
from .dynamics import Tolerances
from .errors import DomainError

ENV_PREFIX = "PULLBACK_"


@dataclass(frozen=True)
class Config:
    conv: float = 1e-10
    fix: float = 1e-10
    cusp: float = 1e-6
    window: int = 25
    max_iter: int = 2000
    step_floor: float = 1e-4
    recursion: float = 1e-10
    max_word: int = 8
    theta_rel_tol: float = 1e-16
    format: str = ""
    seed: int = 0

    def tolerances(self):
        names = {f.name for f in fields(Tolerances)}
        return Tolerances(**{k: getattr(self, k) for k in names})

    def apply_globals(self):
        modular.THETA_REL_TOL = self.theta_rel_tol


def _flatten(d, out=None):
    out = {} if out is None else out
    for k, v in d.items():
        if isinstance(v, dict):
            _flatten(v, out)
        else:
            out[k.replace("-", "_")] = v
    return out


def _coerce(name, value):
    types = {f.name: f.type for f in fields(Config)}
    if name not in types:
        raise DomainError(f"unknown config key {name!r}")
    t = types[name]
    t = {"float": float, "int": int, "str": str}.get(t, t) if isinstance(t, str) else t
    try:
        return t(value)
    except (TypeError, ValueError):
        raise DomainError(f"bad value for {name}: {value!r}") from None


def load_config(path=None, env=None, overrides=None):
    values = {}
    if path:
        try:
            with open(path, "rb") as fh:
                values.update(_flatten(tomllib.load(fh)))
        except (OSError, tomllib.TOMLDecodeError) as e:
            raise DomainError(f"cannot read config {path}: {e}") from None
    env = os.environ if env is None else env
    for f in fields(Config):
        key = ENV_PREFIX + f.name.upper()
        if key in env:
            values[f.name] = env[key]
    for k, v in (overrides or {}).items():
        if v is not None:
            values[k] = v
    cfg = Config(**{k: _coerce(k, v) for k, v in values.items()})
    if cfg.window < 1 or cfg.max_iter < 0 or cfg.max_word < 0:
        raise DomainError("window >= 1, max_iter >= 0 and max_word >= 0 required")
    if cfg.format not in ("", "json", "csv", "table"):
        raise DomainError(f"unknown format {cfg.format!r}")
    return cfg

