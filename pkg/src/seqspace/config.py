"""Run configuration.

The config file is plain ``key = value`` lines; ``#`` starts a comment.
Recognised keys::

    precision = 50          # significant digits, at least 20
    psi = log2              # default Psi for Marcinkiewicz commands
    seed = 0
    format = json           # json | table | csv
    estimator_tolerance = 1e-6

``SEQSPACE_PRECISION`` in the environment overrides ``precision``.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, replace
from fractions import Fraction

from .errors import ConfigurationError

MIN_PRECISION = 20
FORMATS = ("json", "table", "csv")


@dataclass(frozen=True)
class Config:
    precision: int = 50
    psi: str = "log2"
    seed: int = 0
    format: str = "json"
    estimator_tolerance: Fraction = Fraction(1, 10**6)

    def __post_init__(self):
        if self.precision < MIN_PRECISION:
            raise ConfigurationError(f"precision must be at least {MIN_PRECISION} digits")
        if self.format not in FORMATS:
            raise ConfigurationError(f"format must be one of {', '.join(FORMATS)}")

    def as_dict(self) -> dict:
        d = asdict(self)
        d["estimator_tolerance"] = str(self.estimator_tolerance)
        return d


_CASTS = {
    "precision": int,
    "psi": str,
    "seed": int,
    "format": str,
    "estimator_tolerance": lambda s: Fraction(s),
}


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or key not in _CASTS:
            raise ConfigurationError(f"config line {lineno}: expected one of {', '.join(_CASTS)} = value")
        try:
            out[key] = _CASTS[key](value)
        except ValueError as exc:
            raise ConfigurationError(f"config line {lineno}: {exc}") from None
    return out


def load_config(path: str | None = None, env=None, **overrides) -> Config:
    """File values, then ``SEQSPACE_PRECISION``, then explicit overrides."""
    env = os.environ if env is None else env
    cfg = Config()
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                cfg = replace(cfg, **parse_config_text(fh.read()))
        except OSError as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc.strerror}") from None
    if env.get("SEQSPACE_PRECISION"):
        try:
            cfg = replace(cfg, precision=int(env["SEQSPACE_PRECISION"]))
        except ValueError:
            raise ConfigurationError("SEQSPACE_PRECISION must be an integer") from None
    clean = {k: v for k, v in overrides.items() if v is not None}
    return replace(cfg, **clean) if clean else cfg
