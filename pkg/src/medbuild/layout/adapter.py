"""Client interface for an out-of-process layout planner.

A planner takes a textual brief and returns scheme JSON.  Whatever comes
back is parsed and validated like any untrusted input; invalid schemes are
rejected, never repaired.
"""

from __future__ import annotations

from .generator import generate_schemes
from .model import LayoutParams, SchemePair, SitePolygon, parse_scheme_json, validate_scheme


class ExternalSchemeRejected(ValueError):
    """The external planner returned schemes that break hard constraints."""

    def __init__(self, violations):
        self.violations = violations
        lines = "; ".join(f"{v.path}: {v.message}" for v in violations)
        super().__init__(f"external schemes rejected: {lines}")


class SchemePlanner:
    """Planner protocol: text brief in, scheme JSON text out."""

    def plan(self, brief: str) -> str:
        raise NotImplementedError


class LocalPlanner(SchemePlanner):
    """Offline stand-in that answers with deterministically generated
    schemes; the brief must carry the (program, site, seed) context."""

    def __init__(self, program, site: SitePolygon, seed: int,
                 params: LayoutParams = LayoutParams()):
        self._program = program
        self._site = site
        self._seed = seed
        self._params = params

    def plan(self, brief: str) -> str:
        from .model import serialize_scheme_json

        pair = generate_schemes(self._program, self._site, self._seed, self._params)
        return serialize_scheme_json(pair)


def request_schemes(planner: SchemePlanner, brief: str, site: SitePolygon,
                    params: LayoutParams = LayoutParams()) -> SchemePair:
    """Ask a planner for schemes and enforce every hard constraint on the
    reply before letting it into the pipeline."""
    pair = parse_scheme_json(planner.plan(brief))
    violations = [*validate_scheme(pair.s1, site, params),
                  *validate_scheme(pair.s2, site, params)]
    if violations:
        raise ExternalSchemeRejected(violations)
    return pair
