"""Planning configuration: every coefficient the programming rules use.

All weights, thresholds, bed rates, surgical parameters, cost tables,
the clinical priority hierarchy and the categorical code registry are
data, not code.  The shipped default profile lives in
``default_config.json`` next to this module.
"""

from __future__ import annotations

import hashlib
import json
from importlib import resources


class ConfigError(ValueError):
    pass


_LEVELS = ["Clinic", "Primary", "Secondary", "Tertiary"]


class PlanningConfig:
    """Immutable view over a validated planning-config document."""

    def __init__(self, data: dict):
        self._data = data
        self._validate()
        canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
        self.hash = hashlib.sha256(canonical.encode()).hexdigest()[:16]

    def __getitem__(self, key):
        return self._data[key]

    def get(self, key, default=None):
        return self._data.get(key, default)

    def as_dict(self) -> dict:
        return self._data

    def _validate(self):
        d = self._data
        for key in ("planning_years", "level_score", "bed_rate_per_1000",
                    "surgical_params", "department_catalog", "cost_table",
                    "priority_hierarchy", "code_registry", "defaults"):
            if key not in d:
                raise ConfigError(f"missing config section {key!r}")
        ls = d["level_score"]
        thresholds = ls["thresholds"]
        bounds = [thresholds[name] for name in _LEVELS[:-1]]
        if sorted(bounds) != bounds or len(set(bounds)) != len(bounds):
            raise ConfigError("level thresholds must be strictly increasing")
        for level, rate in d["bed_rate_per_1000"].items():
            if rate <= 0:
                raise ConfigError(f"bed rate for {level} must be positive")
        sp = d["surgical_params"]
        if not (0 < sp["or_utilization"] <= 1):
            raise ConfigError("or_utilization must lie in (0, 1]")
        if sp["daily_op_hours"] <= 0 or sp["annual_op_days"] <= 0:
            raise ConfigError("surgical calendar parameters must be positive")
        if not d["priority_hierarchy"]:
            raise ConfigError("priority hierarchy must be nonempty")
        if len(set(d["priority_hierarchy"])) != len(d["priority_hierarchy"]):
            raise ConfigError("priority hierarchy entries must be unique")
        for tier, cat in d["department_catalog"].items():
            for dept in cat["departments"]:
                for room in dept["rooms"]:
                    if room["unit_area"] <= 0:
                        raise ConfigError(
                            f"room {room['name']!r} in {dept['name']!r} ({tier}) has non-positive area")
                    if room["priority"] not in d["priority_hierarchy"]:
                        raise ConfigError(
                            f"room {room['name']!r} has unknown priority {room['priority']!r}")

    def priority_rank(self, priority: str) -> int:
        """0 = highest priority (first in the hierarchy)."""
        try:
            return self._data["priority_hierarchy"].index(priority)
        except ValueError:
            raise ConfigError(f"unknown priority class {priority!r}")

    def code_value(self, registry: str, code, default_key: str = "_default") -> float:
        reg = self._data["code_registry"].get(registry)
        if reg is None:
            raise ConfigError(f"no code registry {registry!r}")
        if code is not None and code in reg:
            return reg[code]
        if default_key in reg:
            return reg[default_key]
        raise ConfigError(f"code {code!r} not in registry {registry!r} and no default")


def load_config(path) -> PlanningConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return PlanningConfig(json.load(fh))


def load_default_config() -> PlanningConfig:
    text = resources.files("medbuild.program").joinpath("default_config.json").read_text()
    return PlanningConfig(json.loads(text))
