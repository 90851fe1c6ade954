from .adapter import ExternalSchemeRejected, LocalPlanner, SchemePlanner, request_schemes
from .generator import admissible_typologies, generate_schemes, inscribed_rectangle
from .model import (
    AXIS_TYPES,
    TYPOLOGIES,
    Axis,
    AxisGraph,
    AxisScheme,
    LayoutParams,
    SchemaError,
    SchemePair,
    SitePolygon,
    SiteTooSmall,
    axis_graph,
    dominant_orientation,
    parse_scheme_json,
    schemes_distinct,
    serialize_scheme_json,
    validate_scheme,
)

__all__ = [
    "AXIS_TYPES",
    "TYPOLOGIES",
    "Axis",
    "AxisGraph",
    "AxisScheme",
    "ExternalSchemeRejected",
    "LayoutParams",
    "LocalPlanner",
    "SchemaError",
    "SchemePair",
    "SchemePlanner",
    "SitePolygon",
    "SiteTooSmall",
    "admissible_typologies",
    "axis_graph",
    "dominant_orientation",
    "generate_schemes",
    "inscribed_rectangle",
    "parse_scheme_json",
    "request_schemes",
    "schemes_distinct",
    "serialize_scheme_json",
    "validate_scheme",
]
