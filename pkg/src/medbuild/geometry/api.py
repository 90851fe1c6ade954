"""Typed surface over the overlay kernel.

Coordinates: the world plane is (x, y) in millimetres; the grid holds
signed integers at ``grid = round(mm * S)`` with S grid units per
millimetre (default 100).  Boolean results are hole-aware polygon trees,
canonicalised so identical inputs always produce identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import _kernel

GRID_LIMIT = 2**62


class InvalidPolygon(ValueError):
    """Operand ring is degenerate or self-intersecting."""


class DegenerateAxis(ValueError):
    """Axis segment has zero length."""


@dataclass(frozen=True)
class ScaleMap:
    """Grid units per millimetre; must be a positive integer."""

    s: int = 100

    def __post_init__(self):
        if not isinstance(self.s, int) or self.s <= 0:
            raise ValueError("scale factor must be a positive integer")


@dataclass(frozen=True)
class GridPolygon:
    """A single simple ring on the integer grid.

    orientation 'ccw' marks outer rings, 'cw' holes; the stated orientation
    must match the sign of the shoelace area.
    """

    ring: tuple
    orientation: str = "ccw"

    def __post_init__(self):
        ring = tuple((int(x), int(y)) for x, y in self.ring)
        object.__setattr__(self, "ring", ring)
        if len(ring) < 3:
            raise InvalidPolygon("ring needs at least 3 vertices")
        a2 = _kernel.area2(ring)
        if a2 == 0:
            raise InvalidPolygon("ring has zero area")
        if (a2 > 0) != (self.orientation == "ccw"):
            raise InvalidPolygon("orientation does not match winding")

    def area2(self) -> int:
        return _kernel.area2(self.ring)


@dataclass
class Region:
    """One nesting level of a polygon tree: outer ring, holes, islands."""

    outer: GridPolygon
    holes: list = field(default_factory=list)
    children: list = field(default_factory=list)


@dataclass
class PolygonTree:
    roots: list = field(default_factory=list)

    def area2(self) -> int:
        """Doubled net area in grid units squared (outer minus holes)."""
        total = 0
        stack = list(self.roots)
        while stack:
            region = stack.pop()
            total += region.outer.area2()
            for hole in region.holes:
                total += hole.area2()  # holes are CW, negative
            stack.extend(region.children)
        return total

    def all_rings(self):
        out = []
        stack = list(self.roots)
        while stack:
            region = stack.pop()
            out.append(region.outer.ring)
            for hole in region.holes:
                out.append(hole.ring)
            stack.extend(region.children)
        return out


# --- world <-> grid -------------------------------------------------------


def _round_half_away(v: float) -> int:
    return math.floor(v + 0.5) if v >= 0 else math.ceil(v - 0.5)


def to_grid(p, scale: ScaleMap):
    x = _round_half_away(p[0] * scale.s)
    y = _round_half_away(p[1] * scale.s)
    if abs(x) > GRID_LIMIT or abs(y) > GRID_LIMIT:
        raise OverflowError("scaled coordinate exceeds grid range")
    return (x, y)


def to_world(g, scale: ScaleMap):
    return (g[0] / scale.s, g[1] / scale.s)


# --- canonicalisation -----------------------------------------------------


def _canon_ring(ring, want_ccw):
    a2 = _kernel.area2(ring)
    if (a2 > 0) != want_ccw:
        ring = ring[::-1]
    start = min(range(len(ring)), key=lambda i: (ring[i][1], ring[i][0]))
    return tuple(ring[start:] + ring[:start])


def _ring_parity_point(ring):
    # doubled midpoint of the first edge; never a vertex of another
    # arrangement ring, so containment tests are unambiguous
    (ax, ay), (bx, by) = ring[0], ring[1]
    return (ax + bx, ay + by)


def _contains_doubled(ring, pt2):
    ring2 = [(2 * x, 2 * y) for x, y in ring]
    return _kernel.point_in_rings(pt2[0], pt2[1], [ring2])


def _build_tree(rings) -> PolygonTree:
    n = len(rings)
    probe = [_ring_parity_point(r) for r in rings]
    inside = [[False] * n for _ in range(n)]
    depth = [0] * n
    for i in range(n):
        for j in range(n):
            if i != j and _contains_doubled(rings[j], probe[i]):
                inside[i][j] = True
                depth[i] += 1
    order = sorted(range(n), key=lambda i: depth[i])
    regions = {}
    roots = []
    hole_of = {}
    for i in order:
        parent = None
        for j in range(n):
            if inside[i][j] and (parent is None or depth[j] > depth[parent]):
                parent = j
        if depth[i] % 2 == 0:
            region = Region(outer=GridPolygon(_canon_ring(list(rings[i]), True), "ccw"))
            regions[i] = region
            if parent is None:
                roots.append(region)
            else:
                regions[hole_of[parent]].children.append(region)
        else:
            hole = GridPolygon(_canon_ring(list(rings[i]), False), "cw")
            regions[parent].holes.append(hole)
            hole_of[i] = parent

    def ring_key(gp):
        return gp.ring[0]

    def sort_region(region):
        region.holes.sort(key=ring_key)
        region.children.sort(key=lambda r: ring_key(r.outer))
        for child in region.children:
            sort_region(child)

    roots.sort(key=lambda r: ring_key(r.outer))
    for region in roots:
        sort_region(region)
    return PolygonTree(roots=roots)


def tree_to_jsonable(tree: PolygonTree):
    def region_dict(region):
        return {
            "outer": [list(p) for p in region.outer.ring],
            "holes": [[list(p) for p in h.ring] for h in region.holes],
            "children": [region_dict(c) for c in region.children],
        }

    return {"roots": [region_dict(r) for r in tree.roots]}


# --- Boolean operations ---------------------------------------------------


def _as_groups(operand):
    """One even-odd ring group per polygon/tree operand."""
    if isinstance(operand, GridPolygon):
        if _kernel.ring_self_intersects(operand.ring):
            raise InvalidPolygon("self-intersecting ring")
        return [list(operand.ring)]
    if isinstance(operand, PolygonTree):
        return [list(r) for r in operand.all_rings()]
    raise TypeError("operand must be GridPolygon or PolygonTree")


def union(polygons) -> PolygonTree:
    groups = [_as_groups(p) for p in polygons]
    if not groups:
        return PolygonTree()
    rings = _kernel.overlay(groups, _kernel.OP_UNION)
    return _build_tree(rings)


def intersection(a, b) -> PolygonTree:
    rings = _kernel.overlay([_as_groups(a), _as_groups(b)], _kernel.OP_INTERSECTION)
    return _build_tree(rings)


def difference(a, b) -> PolygonTree:
    rings = _kernel.overlay([_as_groups(a), _as_groups(b)], _kernel.OP_DIFFERENCE)
    return _build_tree(rings)


# --- axis offsets ---------------------------------------------------------


def _offset_rectangle(start_mm, end_mm, half_mm, scale: ScaleMap) -> GridPolygon:
    sx, sy = start_mm
    ex, ey = end_mm
    dx = ex - sx
    dy = ey - sy
    length = math.hypot(dx, dy)
    if length <= 0:
        raise DegenerateAxis("axis has zero length")
    nx = -dy / length * half_mm
    ny = dx / length * half_mm
    corners = [
        (sx - nx, sy - ny),
        (ex - nx, ey - ny),
        (ex + nx, ey + ny),
        (sx + nx, sy + ny),
    ]
    ring = [to_grid(c, scale) for c in corners]
    if _kernel.area2(ring) < 0:
        ring = ring[::-1]
    return GridPolygon(tuple(ring), "ccw")


def axis_rectangle(axis, depth_mm, corridor_mm, scale: ScaleMap) -> GridPolygon:
    """Full double-loaded band for one axis: rooms both sides of the corridor,
    total width 2*depth + corridor."""
    if depth_mm <= 0:
        raise ValueError("room depth must be positive")
    half = depth_mm + corridor_mm / 2.0
    return _offset_rectangle(axis.start, axis.end, half, scale)


def corridor_rectangle(axis, corridor_mm, scale: ScaleMap) -> GridPolygon:
    if corridor_mm <= 0:
        raise ValueError("corridor width must be positive")
    return _offset_rectangle(axis.start, axis.end, corridor_mm / 2.0, scale)


def floor_contour(axes, depth_mm, corridor_mm, scale: ScaleMap) -> PolygonTree:
    if not axes:
        raise DegenerateAxis("no axes for contour")
    rects = [axis_rectangle(a, depth_mm, corridor_mm, scale) for a in axes]
    return union(rects)


# --- measurement ----------------------------------------------------------


def area(tree: PolygonTree, scale: ScaleMap) -> float:
    """Net area in square metres."""
    grid_area = tree.area2() / 2.0
    mm2 = grid_area / (scale.s * scale.s)
    return mm2 / 1e6


def point_in_tree(g, tree: PolygonTree) -> bool:
    return _kernel.point_in_rings(g[0], g[1], tree.all_rings())
