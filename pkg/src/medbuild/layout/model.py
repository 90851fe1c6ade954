"""Axis-scheme domain model: sites, axes, scheme validation, the snapped
endpoint graph and the wire JSON codec.

All coordinates are millimeters in the world frame.  A scheme's axis graph
must be a forest: merging endpoints within the snap tolerance, no cycle may
appear, so every connected component has exactly one path between any two
of its points.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass

from medbuild.dql import Violation

AXIS_TYPES = ("podium", "tower_mid", "tower_high")

TYPOLOGIES = (
    "main_street",
    "courtyard_campus",
    "podium_tower",
    "organic_aggregate",
    "dispersed_pavilions",
)

DEFAULT_SNAP_TOLERANCE = 500.0  # mm


class SchemaError(ValueError):
    """Wire-format violation; carries the offending JSON path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class SiteTooSmall(ValueError):
    pass


@dataclass(frozen=True)
class SitePolygon:
    vertices: tuple  # of (x, y) mm, implicit closure

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise ValueError("site polygon needs at least 3 vertices")
        if abs(self.signed_area()) <= 0:
            raise ValueError("site polygon has zero area")
        if _self_intersects(self.vertices):
            raise ValueError("site polygon is self-intersecting")

    def signed_area(self) -> float:
        s = 0.0
        pts = self.vertices
        for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]):
            s += x0 * y1 - x1 * y0
        return s / 2.0

    def area_m2(self) -> float:
        return abs(self.signed_area()) / 1e6

    def bounds(self):
        xs = [p[0] for p in self.vertices]
        ys = [p[1] for p in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def contains(self, x: float, y: float, eps: float = 1e-6) -> bool:
        """Interior or boundary membership (crossing test + edge distance)."""
        pts = self.vertices
        inside = False
        for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]):
            if _segment_distance(x, y, x0, y0, x1, y1) <= eps:
                return True
            if (y0 > y) != (y1 > y):
                t = (y - y0) / (y1 - y0)
                if x < x0 + t * (x1 - x0):
                    inside = not inside
        return inside


@dataclass(frozen=True)
class Axis:
    start: tuple  # (x, y) mm
    end: tuple
    axis_type: str = "podium"

    def __post_init__(self):
        if self.axis_type not in AXIS_TYPES:
            raise ValueError(f"unknown axis type {self.axis_type!r}")
        if self.length() <= 0:
            raise ValueError("axis has zero length")

    def length(self) -> float:
        return math.hypot(self.end[0] - self.start[0], self.end[1] - self.start[1])

    def direction(self) -> float:
        """Orientation in degrees, folded to [0, 180)."""
        ang = math.degrees(math.atan2(self.end[1] - self.start[1],
                                      self.end[0] - self.start[0]))
        return ang % 180.0


@dataclass
class AxisScheme:
    id: str
    building_mode: str
    axes: list
    typology: str = None  # annotation, not part of the wire format

    def __post_init__(self):
        if self.id not in ("S1", "S2"):
            raise ValueError("scheme id must be S1 or S2")
        if self.building_mode not in ("shared", "independent"):
            raise ValueError("building_mode must be shared or independent")
        if not self.axes:
            raise ValueError("scheme needs at least one axis")
        if self.typology is not None and self.typology not in TYPOLOGIES:
            raise ValueError(f"unknown typology {self.typology!r}")


@dataclass(frozen=True)
class SchemePair:
    s1: AxisScheme
    s2: AxisScheme

    def __post_init__(self):
        if not schemes_distinct(self.s1, self.s2):
            raise ValueError("schemes S1 and S2 are not distinct")


@dataclass(frozen=True)
class LayoutParams:
    """Geometric thresholds for validation and generation."""

    room_depth: float = 5000.0  # mm
    corridor_width: float = 2400.0
    min_axis_length: float = 3000.0
    snap_tolerance: float = DEFAULT_SNAP_TOLERANCE
    solar_spacing: float = 15000.0  # min clearance between parallel tower_high axes
    boundary_margin: float = 1000.0  # extra inset beyond the wing half-width
    orientation_threshold: float = 30.0  # degrees, scheme distinctness
    module_area: float = 25.0  # m², nominal room module for demand sizing
    podium_floors: int = 2
    tower_mid_floors: int = 6
    tower_high_floors: int = 12

    @property
    def wing_half_width(self) -> float:
        return self.room_depth + self.corridor_width / 2.0


@dataclass(frozen=True)
class AxisGraph:
    """Axes as edges over snap-merged endpoints."""

    nodes: tuple  # of (x, y), deterministic order
    edges: tuple  # of (node_u, node_v, axis_index)

    @property
    def component_count(self) -> int:
        parent = list(range(len(self.nodes)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        comps = len(self.nodes)
        for u, v, _ in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                comps -= 1
        return comps

    def degree_multiset(self) -> tuple:
        deg = [0] * len(self.nodes)
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(sorted(deg))


# --- internal geometry helpers -------------------------------------------


def _segment_distance(px, py, x0, y0, x1, y1) -> float:
    dx, dy = x1 - x0, y1 - y0
    denom = dx * dx + dy * dy
    if denom == 0:
        return math.hypot(px - x0, py - y0)
    t = max(0.0, min(1.0, ((px - x0) * dx + (py - y0) * dy) / denom))
    return math.hypot(px - (x0 + t * dx), py - (y0 + t * dy))


def _segments_cross(a, b, c, d) -> bool:
    def orient(p, q, r):
        v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
        return 0 if v == 0 else (1 if v > 0 else -1)

    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    return False


def _self_intersects(vertices) -> bool:
    n = len(vertices)
    edges = [(vertices[i], vertices[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue  # adjacent edges share a vertex
            if _segments_cross(edges[i][0], edges[i][1], edges[j][0], edges[j][1]):
                return True
    return False


def _segment_pair_distance(a: Axis, b: Axis) -> float:
    if _segments_cross(a.start, a.end, b.start, b.end):
        return 0.0
    return min(
        _segment_distance(a.start[0], a.start[1], *b.start, *b.end),
        _segment_distance(a.end[0], a.end[1], *b.start, *b.end),
        _segment_distance(b.start[0], b.start[1], *a.start, *a.end),
        _segment_distance(b.end[0], b.end[1], *a.start, *a.end),
    )


# --- operations -----------------------------------------------------------


def axis_graph(scheme: AxisScheme, snap_tolerance: float = DEFAULT_SNAP_TOLERANCE) -> AxisGraph:
    """Merge axis endpoints within snap_tolerance into shared nodes."""
    if snap_tolerance < 0:
        raise ValueError("snap tolerance must be >= 0")
    points = []
    for axis in scheme.axes:
        points.append(tuple(axis.start))
        points.append(tuple(axis.end))
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if math.dist(points[i], points[j]) <= snap_tolerance:
                parent[find(i)] = find(j)

    # one representative coordinate per merged group: member centroid
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    reps = {}
    for root, members in groups.items():
        cx = sum(points[i][0] for i in members) / len(members)
        cy = sum(points[i][1] for i in members) / len(members)
        reps[root] = (cx, cy)
    order = sorted(reps, key=lambda r: reps[r])
    node_index = {root: k for k, root in enumerate(order)}
    nodes = tuple(reps[root] for root in order)
    edges = tuple(
        (node_index[find(2 * k)], node_index[find(2 * k + 1)], k)
        for k in range(len(scheme.axes)))
    return AxisGraph(nodes=nodes, edges=edges)


def _find_cycles(graph: AxisGraph):
    """Cycle-closing edges with the axis indices of each smallest cycle."""
    parent = list(range(len(graph.nodes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    adjacency = {i: [] for i in range(len(graph.nodes))}
    cycles = []
    for u, v, axis_idx in graph.edges:
        if u == v:
            cycles.append([axis_idx])
            continue
        ru, rv = find(u), find(v)
        if ru == rv:
            # BFS through accepted edges for the unique existing u..v path
            prev = {u: None}
            queue = deque([u])
            while queue:
                node = queue.popleft()
                if node == v:
                    break
                for nxt, via in adjacency[node]:
                    if nxt not in prev:
                        prev[nxt] = (node, via)
                        queue.append(nxt)
            path = []
            node = v
            while prev[node] is not None:
                node, via = prev[node]
                path.append(via)
            cycles.append(sorted(path + [axis_idx]))
            continue
        parent[ru] = rv
        adjacency[u].append((v, axis_idx))
        adjacency[v].append((u, axis_idx))
    return cycles


def validate_scheme(scheme: AxisScheme, site: SitePolygon,
                    params: LayoutParams = LayoutParams()) -> list:
    """Check the hard geometric and topological constraints; violations are
    data, one entry per broken rule with the offending axis indices."""
    out = []
    sample_step = 1000.0  # mm between interior boundary samples
    for i, axis in enumerate(scheme.axes):
        if axis.length() < params.min_axis_length:
            out.append(Violation(
                "hard", f"axes[{i}]",
                f"axis shorter than minimum length {params.min_axis_length:g} mm"))
        steps = max(1, int(axis.length() // sample_step))
        for k in range(steps + 1):
            t = k / steps
            x = axis.start[0] + t * (axis.end[0] - axis.start[0])
            y = axis.start[1] + t * (axis.end[1] - axis.start[1])
            if not site.contains(x, y, eps=1.0):
                out.append(Violation(
                    "hard", f"axes[{i}]", "axis leaves the site boundary"))
                break

    graph = axis_graph(scheme, params.snap_tolerance)
    for cycle in _find_cycles(graph):
        listing = ", ".join(str(i) for i in cycle)
        out.append(Violation(
            "hard", "axes", f"closed loop through axes [{listing}]"))

    towers = [(i, a) for i, a in enumerate(scheme.axes) if a.axis_type == "tower_high"]
    for (i, a), (j, b) in ((p, q) for p in towers for q in towers if p[0] < q[0]):
        angle = abs(a.direction() - b.direction())
        angle = min(angle, 180.0 - angle)
        if angle <= 10.0 and _segment_pair_distance(a, b) < params.solar_spacing:
            out.append(Violation(
                "hard", f"axes[{i}]",
                f"tower axes {i} and {j} closer than solar spacing "
                f"{params.solar_spacing:g} mm"))
    return out


def dominant_orientation(scheme: AxisScheme) -> float:
    """Length-weighted mean axis direction in [0, 180) via angle doubling."""
    sx = sy = 0.0
    for axis in scheme.axes:
        theta = 2.0 * math.radians(axis.direction())
        sx += axis.length() * math.cos(theta)
        sy += axis.length() * math.sin(theta)
    if sx == 0 and sy == 0:
        return 0.0
    return (math.degrees(math.atan2(sy, sx)) / 2.0) % 180.0


def schemes_distinct(s1: AxisScheme, s2: AxisScheme,
                     params: LayoutParams = LayoutParams()) -> bool:
    if s1.typology is not None and s2.typology is not None and s1.typology != s2.typology:
        return True
    diff = abs(dominant_orientation(s1) - dominant_orientation(s2))
    if min(diff, 180.0 - diff) >= params.orientation_threshold:
        return True
    g1 = axis_graph(s1, params.snap_tolerance)
    g2 = axis_graph(s2, params.snap_tolerance)
    return g1.degree_multiset() != g2.degree_multiset()


# --- wire codec -----------------------------------------------------------

_AXIS_KEYS = {"start", "end", "type"}
_SCHEME_KEYS = {"id", "building_mode", "axes"}


def _require(obj: dict, keys: set, path: str):
    missing = keys - obj.keys()
    extra = obj.keys() - keys
    if missing:
        raise SchemaError(path, f"missing field {sorted(missing)[0]!r}")
    if extra:
        raise SchemaError(path, f"unexpected field {sorted(extra)[0]!r}")


def _parse_point(value, path: str) -> tuple:
    if (not isinstance(value, list) or len(value) != 2
            or not all(isinstance(c, int) and not isinstance(c, bool) for c in value)):
        raise SchemaError(path, "expected [x_mm, y_mm] with integer coordinates")
    return (value[0], value[1])


def _parse_scheme(obj, path: str) -> AxisScheme:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    _require(obj, _SCHEME_KEYS, path)
    if not isinstance(obj["axes"], list) or not obj["axes"]:
        raise SchemaError(f"{path}.axes", "expected a nonempty list")
    axes = []
    for k, axis_obj in enumerate(obj["axes"]):
        axis_path = f"{path}.axes[{k}]"
        if not isinstance(axis_obj, dict):
            raise SchemaError(axis_path, "expected an object")
        _require(axis_obj, _AXIS_KEYS, axis_path)
        if axis_obj["type"] not in AXIS_TYPES:
            raise SchemaError(f"{axis_path}.type", f"unknown axis type {axis_obj['type']!r}")
        start = _parse_point(axis_obj["start"], f"{axis_path}.start")
        end = _parse_point(axis_obj["end"], f"{axis_path}.end")
        if start == end:
            raise SchemaError(axis_path, "zero-length axis")
        axes.append(Axis(start=start, end=end, axis_type=axis_obj["type"]))
    try:
        return AxisScheme(id=obj["id"], building_mode=obj["building_mode"], axes=axes)
    except ValueError as exc:
        raise SchemaError(path, str(exc))


def parse_scheme_json(text: str) -> SchemePair:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc.msg}")
    if not isinstance(doc, dict):
        raise SchemaError("$", "expected an object")
    _require(doc, {"schemes"}, "$")
    schemes = doc["schemes"]
    if not isinstance(schemes, list) or len(schemes) != 2:
        raise SchemaError("$.schemes", "expected exactly two schemes")
    s1 = _parse_scheme(schemes[0], "$.schemes[0]")
    s2 = _parse_scheme(schemes[1], "$.schemes[1]")
    try:
        return SchemePair(s1=s1, s2=s2)
    except ValueError as exc:
        raise SchemaError("$.schemes", str(exc))


def _scheme_to_jsonable(scheme: AxisScheme) -> dict:
    return {
        "id": scheme.id,
        "building_mode": scheme.building_mode,
        "axes": [
            {
                "start": [int(round(a.start[0])), int(round(a.start[1]))],
                "end": [int(round(a.end[0])), int(round(a.end[1]))],
                "type": a.axis_type,
            }
            for a in scheme.axes
        ],
    }


def serialize_scheme_json(pair: SchemePair) -> str:
    doc = {"schemes": [_scheme_to_jsonable(pair.s1), _scheme_to_jsonable(pair.s2)]}
    return json.dumps(doc, indent=2)
