"""Scenario configuration files (JSON).

Example::

    {
      "tower": {"m1": "2", "m2": ["-1"]},
      "n": 6, "k": 1,
      "delta": ["0", "1"],
      "permutation": {"a": 1, "r": 4},
      "suites": ["all"],
      "seed": 0, "trials": 100
    }

Rationals are strings "p/q" (plain integers are accepted too).  Tower elements
are coordinate arrays in the basis {1, sqrt m1, sqrt m2, sqrt m1 sqrt m2};
shorter arrays are padded with zeros.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .fieldtower import FieldElement, TowerSpec

SUITES = ("clifford", "forms", "lie", "spin", "star", "L", "rationality", "real", "weights")
NEEDS_EVEN_N = {"L", "rationality", "weights"}
MAX_N = 8


class ConfigError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass
class ScenarioConfig:
    tower: TowerSpec
    n: int
    k: int
    delta: FieldElement
    permutation: tuple[int, int] | None = None
    suites: tuple[str, ...] = SUITES
    seed: int = 0
    trials: int = 100

    @property
    def m(self) -> int:
        return self.n // 2


def _int(obj: dict, key: str, default=None) -> int:
    v = obj.get(key, default)
    if v is None:
        raise ConfigError(key, "missing")
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(key, f"expected an integer, got {v!r}")
    return v


def _coords(value, field: str):
    if isinstance(value, (int, str)):
        value = [value]
    if not isinstance(value, list):
        raise ConfigError(field, f"expected a coordinate array, got {value!r}")
    try:
        return [Fraction(str(x)) for x in value]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(field, f"bad rational in {value!r} ({exc})") from None


def parse_config(obj: dict, *, suites: list[str] | None = None) -> ScenarioConfig:
    if not isinstance(obj, dict):
        raise ConfigError("config", "top level must be a JSON object")
    t = obj.get("tower")
    if not isinstance(t, dict):
        raise ConfigError("tower", "missing or not an object")
    m1 = t.get("m1")
    m2 = _coords(t.get("m2", -1), "tower.m2")
    try:
        tower = TowerSpec.from_json({"m1": None if m1 is None else str(m1), "m2": m2})
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError("tower", str(exc)) from None

    n = _int(obj, "n")
    if not 1 <= n <= MAX_N:
        raise ConfigError("n", f"must satisfy 1 <= n <= {MAX_N}")
    k = _int(obj, "k")
    if not 0 <= k <= n:
        raise ConfigError("k", f"must satisfy 0 <= k <= n = {n}")

    try:
        delta = tower.from_coords(_coords(obj.get("delta"), "delta"))
    except ValueError as exc:
        raise ConfigError("delta", str(exc)) from None
    if delta.is_zero():
        raise ConfigError("delta", "must be nonzero")
    if not delta.in_base:
        raise ConfigError("delta", "must lie in E0")

    perm = None
    p = obj.get("permutation")
    if p is not None:
        if not isinstance(p, dict):
            raise ConfigError("permutation", "expected an object {a, r}")
        a, r = _int(p, "a"), _int(p, "r")
        if not 0 <= a <= k:
            raise ConfigError("permutation.a", f"must satisfy 0 <= a <= k = {k}")
        if not 0 <= r <= n - k:
            raise ConfigError("permutation.r", f"must satisfy 0 <= r <= n - k = {n - k}")
        perm = (a, r)

    requested = suites if suites else obj.get("suites", ["all"])
    if not isinstance(requested, list) or not all(isinstance(s, str) for s in requested):
        raise ConfigError("suites", "expected a list of suite names")
    names: list[str] = []
    for s in requested:
        if s == "all":
            names.extend(SUITES)
        elif s in SUITES:
            names.append(s)
        else:
            raise ConfigError("suites", f"unknown suite {s!r}; choose from {', '.join(SUITES)}, all")
    chosen = tuple(s for s in SUITES if s in names)
    if n % 2 and NEEDS_EVEN_N & set(chosen):
        raise ConfigError("n", "n must be even for suites " + ", ".join(sorted(NEEDS_EVEN_N & set(chosen))))

    seed = _int(obj, "seed", 0)
    trials = _int(obj, "trials", 100)
    if trials < 0:
        raise ConfigError("trials", "must be non-negative")
    return ScenarioConfig(tower, n, k, delta, perm, chosen, seed, trials)


def load_config(path: str | Path, **kw) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}") from None
    return parse_config(obj, **kw)
