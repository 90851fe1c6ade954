"""Seeded axis-scheme generation.

Picks two admissible typologies for the site, draws their axis skeletons
inside the largest inscribed rectangle, upgrades axes to tower types when
the program cannot fit on podium floors alone, and guarantees that both
returned schemes validate cleanly.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

from .model import (
    Axis,
    AxisScheme,
    LayoutParams,
    SchemePair,
    SitePolygon,
    SiteTooSmall,
    schemes_distinct,
    validate_scheme,
)


@dataclass(frozen=True)
class Rect:
    x0: float
    y0: float
    x1: float
    y1: float

    @property
    def w(self) -> float:
        return self.x1 - self.x0

    @property
    def h(self) -> float:
        return self.y1 - self.y0

    @property
    def area_m2(self) -> float:
        return self.w * self.h / 1e6

    def inset(self, d: float) -> "Rect":
        return Rect(self.x0 + d, self.y0 + d, self.x1 - d, self.y1 - d)

    def valid(self) -> bool:
        return self.w > 0 and self.h > 0


@lru_cache(maxsize=64)
def inscribed_rectangle(site: SitePolygon, resolution: int = 96) -> Rect:
    """Largest axis-aligned rectangle inside the polygon, found on a raster
    (maximal-rectangle-in-binary-matrix over fully inside cells).

    Cached per (site, resolution): the raster pass dominates generation time
    and SitePolygon is immutable.
    """
    bx0, by0, bx1, by1 = site.bounds()
    dx = (bx1 - bx0) / resolution
    dy = (by1 - by0) / resolution
    inside = [[False] * resolution for _ in range(resolution)]
    for row in range(resolution):
        for col in range(resolution):
            x0 = bx0 + col * dx
            y0 = by0 + row * dy
            probes = ((x0, y0), (x0 + dx, y0), (x0, y0 + dy),
                      (x0 + dx, y0 + dy), (x0 + dx / 2, y0 + dy / 2))
            inside[row][col] = all(site.contains(x, y) for x, y in probes)

    best = None  # (area_cells, row, col, width, height)
    heights = [0] * resolution
    for row in range(resolution):
        for col in range(resolution):
            heights[col] = heights[col] + 1 if inside[row][col] else 0
        stack = []  # (start_col, height)
        for col in range(resolution + 1):
            h = heights[col] if col < resolution else 0
            start = col
            while stack and stack[-1][1] >= h:
                scol, sh = stack.pop()
                area = sh * (col - scol)
                if best is None or area > best[0]:
                    best = (area, row - sh + 1, scol, col - scol, sh)
                start = scol
            stack.append((start, h))
    if best is None or best[0] == 0:
        raise SiteTooSmall("no axis-aligned rectangle fits inside the site")
    _, row, col, width, height = best
    return Rect(bx0 + col * dx, by0 + row * dy,
                bx0 + (col + width) * dx, by0 + (row + height) * dy)


def _program_demand_m2(program, params: LayoutParams) -> float:
    """Total floor area demanded, rounded up to whole room modules."""
    net = sum(room.quantity * room.unit_area for room in program.rooms)
    return math.ceil(net / params.module_area) * params.module_area


def _wing_width(params: LayoutParams) -> float:
    return 2.0 * params.room_depth + params.corridor_width


def _usable_width(params: LayoutParams) -> float:
    """Room band on both sides of the corridor; the corridor itself does
    not count toward capacity."""
    return 2.0 * params.room_depth


def _axis_capacity_m2(axis: Axis, params: LayoutParams) -> float:
    floors = {
        "podium": params.podium_floors,
        "tower_mid": params.tower_mid_floors,
        "tower_high": params.tower_high_floors,
    }[axis.axis_type]
    return axis.length() * _usable_width(params) / 1e6 * floors


def _podium_capacity_m2(axes, params: LayoutParams) -> float:
    width = _usable_width(params)
    return sum(a.length() * width / 1e6 for a in axes) * params.podium_floors


def _assign_towers(axes, demand_m2: float, params: LayoutParams) -> list:
    """Upgrade axes until capacity covers demand; tower_high upgrades keep
    the solar spacing between parallel high towers."""
    axes = list(axes)
    # junction overlaps and corridor crossings eat into the nominal band
    demand_m2 = demand_m2 * 1.1
    capacity = sum(_axis_capacity_m2(a, params) for a in axes)
    if capacity >= demand_m2:
        return axes
    # longest wings first; index order breaks ties deterministically
    order = sorted(range(len(axes)), key=lambda i: (-axes[i].length(), i))
    for tower_type in ("tower_mid", "tower_high"):
        for i in order:
            if capacity >= demand_m2:
                return axes
            axis = axes[i]
            if axis.axis_type == tower_type:
                continue
            candidate = Axis(start=axis.start, end=axis.end, axis_type=tower_type)
            if tower_type == "tower_high" and _too_close_to_tower(candidate, axes, i, params):
                continue
            capacity -= _axis_capacity_m2(axis, params)
            axes[i] = candidate
            capacity += _axis_capacity_m2(candidate, params)
    return axes


def _too_close_to_tower(candidate: Axis, axes, self_index: int, params: LayoutParams) -> bool:
    from .model import _segment_pair_distance  # shared with the validator

    for j, other in enumerate(axes):
        if j == self_index or other.axis_type != "tower_high":
            continue
        angle = abs(candidate.direction() - other.direction())
        angle = min(angle, 180.0 - angle)
        if angle <= 10.0 and _segment_pair_distance(candidate, other) < params.solar_spacing:
            return True
    return False


def _swap(horiz: bool, x, y):
    return (x, y) if horiz else (y, x)


def _seg(horiz: bool, a, b, axis_type="podium") -> Axis:
    return Axis(start=_swap(horiz, *a), end=_swap(horiz, *b), axis_type=axis_type)


# Drawing strategies operate in a u/v frame: u runs along the core's long
# dimension; horiz=False mirrors u/v back to y/x.


def _draw_main_street(core: Rect, horiz: bool, demand: float,
                      params: LayoutParams, rng: random.Random) -> list:
    u0, u1 = (core.x0, core.x1) if horiz else (core.y0, core.y1)
    v0, v1 = (core.y0, core.y1) if horiz else (core.x0, core.x1)
    vc = (v0 + v1) / 2.0
    axes = [_seg(horiz, (u0, vc), (u1, vc))]
    wing_len = (v1 - v0) / 2.0
    if wing_len < params.min_axis_length:
        return axes
    # alternating sides: consecutive wings may sit at half the same-side pitch
    spacing = (_wing_width(params) + 4000.0) / 2.0
    max_wings = max(0, int((u1 - u0) // spacing) - 1)
    ground = _podium_capacity_m2(axes, params) / params.podium_floors
    per_wing = wing_len * _usable_width(params) / 1e6
    wanted = math.ceil(max(0.0, demand / params.podium_floors - ground) / per_wing)
    wanted = min(max_wings, max(wanted, 2 if max_wings >= 2 else max_wings))
    for k in range(wanted):
        u = u0 + spacing * (k + 1)
        sign = 1 if k % 2 == 0 else -1
        axes.append(_seg(horiz, (u, vc), (u, vc + sign * wing_len)))
    rng.random()  # keep the draw sequence aligned across strategies
    return axes


def _draw_courtyard(core: Rect, horiz: bool, demand: float,
                    params: LayoutParams, rng: random.Random) -> list:
    u0, u1 = (core.x0, core.x1) if horiz else (core.y0, core.y1)
    v0, v1 = (core.y0, core.y1) if horiz else (core.x0, core.x1)
    # base bar plus open parallel arms (U, E, comb) framing courtyards,
    # never a closed ring
    base = _seg(horiz, (u0, v0), (u1, v0))
    arm_len = v1 - v0
    pitch = _wing_width(params) + 4000.0
    max_arms = int((u1 - u0) // pitch) + 1
    per_arm = arm_len * _usable_width(params) / 1e6 * params.podium_floors
    base_cap = _podium_capacity_m2([base], params)
    wanted = 2
    if per_arm > 0:
        wanted = max(2, math.ceil((demand - base_cap) / per_arm))
    n_arms = min(max_arms, wanted)
    axes = [base]
    if n_arms >= 1 and arm_len >= params.min_axis_length:
        for k in range(n_arms):
            u = u0 if n_arms == 1 else u0 + (u1 - u0) * k / (n_arms - 1)
            axes.append(_seg(horiz, (u, v0), (u, v1)))
    rng.random()
    return axes


def _draw_podium_tower(core: Rect, horiz: bool, demand: float,
                       params: LayoutParams, rng: random.Random) -> list:
    u0, u1 = (core.x0, core.x1) if horiz else (core.y0, core.y1)
    v0, v1 = (core.y0, core.y1) if horiz else (core.x0, core.x1)
    width = _wing_width(params)
    spacing = max(width + 4000.0, params.solar_spacing)
    axes = [_seg(horiz, (u0, v0), (u1, v0))]
    tooth_len = v1 - v0
    if tooth_len >= params.min_axis_length:
        n = int((u1 - u0) // spacing) + 1
        for k in range(n):
            u = min(u0 + k * spacing, u1)
            axes.append(_seg(horiz, (u, v0), (u, v1)))
    rng.random()
    return axes


def _draw_organic(core: Rect, horiz: bool, demand: float,
                  params: LayoutParams, rng: random.Random) -> list:
    u0, u1 = (core.x0, core.x1) if horiz else (core.y0, core.y1)
    v0, v1 = (core.y0, core.y1) if horiz else (core.x0, core.x1)
    span_u = u1 - u0
    span_v = v1 - v0
    # segmented staircase spine adapting to the boundary
    va = v0 + span_v * 0.25
    vb = v0 + span_v * 0.75
    p0 = (u0, va)
    p1 = (u0 + span_u * 0.45, va)
    p2 = (p1[0], vb)
    p3 = (u1, vb)
    axes = [_seg(horiz, p0, p1), _seg(horiz, p1, p2)]
    if p3[0] - p2[0] >= params.min_axis_length:
        axes.append(_seg(horiz, p2, p3))
    # small cluster branches hanging off the bend points
    if va - v0 >= params.min_axis_length:
        axes.append(_seg(horiz, p1, (p1[0], v0)))
    if v1 - vb >= params.min_axis_length:
        axes.append(_seg(horiz, p2, (p2[0], v1)))
    rng.random()
    return axes


def _draw_dispersed(core: Rect, horiz: bool, demand: float,
                    params: LayoutParams, rng: random.Random) -> list:
    u0, u1 = (core.x0, core.x1) if horiz else (core.y0, core.y1)
    v0, v1 = (core.y0, core.y1) if horiz else (core.x0, core.x1)
    width = _wing_width(params)
    row_gap = width + 8000.0
    pav_len = max(params.min_axis_length, min(30000.0, (u1 - u0 - 8000.0) / 2.0))
    axes = []
    rows = max(1, int((v1 - v0) // row_gap) + 1)
    per_pav = pav_len * _usable_width(params) / 1e6 * params.podium_floors
    wanted = max(2, math.ceil(demand / per_pav))
    for r in range(rows):
        v = min(v0 + r * row_gap, v1)
        for side in (0, 1):
            if len(axes) >= wanted:
                break
            u = u0 if side == 0 else u1 - pav_len
            if u < u0 or u + pav_len > u1:
                continue
            # stagger alternate rows for the village feel
            shift = 2000.0 if r % 2 else 0.0
            if u + shift + pav_len <= u1:
                u += shift
            axes.append(_seg(horiz, (u, v), (u + pav_len, v)))
    rng.random()
    return axes


_STRATEGIES = {
    "main_street": _draw_main_street,
    "courtyard_campus": _draw_courtyard,
    "podium_tower": _draw_podium_tower,
    "organic_aggregate": _draw_organic,
    "dispersed_pavilions": _draw_dispersed,
}


def admissible_typologies(site: SitePolygon, rect: Rect, demand_m2: float,
                          params: LayoutParams) -> list:
    """Table-style suitability rules; always returns at least one entry."""
    core = rect.inset(params.wing_half_width + params.boundary_margin)
    out = []
    if not core.valid() or max(core.w, core.h) < params.min_axis_length:
        raise SiteTooSmall("site cannot host a minimum-length axis at the "
                           "configured room depth")
    aspect = max(rect.w, rect.h) / min(rect.w, rect.h)
    ground_target = demand_m2 / params.podium_floors
    if aspect >= 1.6:
        out.append("main_street")
    if rect.area_m2 >= 1.5 * ground_target and min(core.w, core.h) >= 2.0 * _wing_width(params):
        out.append("courtyard_campus")
    podium_max = 0.55 * rect.area_m2 * params.podium_floors
    if demand_m2 > 0.8 * podium_max:
        out.append("podium_tower")
    if rect.area_m2 < 0.55 * site.area_m2():
        out.append("organic_aggregate")
    if rect.area_m2 >= 4.0 * ground_target and rect.area_m2 >= 10000.0:
        out.append("dispersed_pavilions")
    if "main_street" not in out and len(out) < 2:
        out.append("main_street")
    return out


def _draw_scheme(typology: str, scheme_id: str, mode: str, core: Rect,
                 horiz: bool, demand: float, params: LayoutParams,
                 rng: random.Random) -> AxisScheme:
    axes = _STRATEGIES[typology](core, horiz, demand, params, rng)
    axes = [a for a in axes if a.length() >= params.min_axis_length]
    if not axes:
        raise SiteTooSmall(f"{typology} produced no usable axes")
    axes = _assign_towers(axes, demand, params)
    axes = [
        Axis(start=(round(a.start[0]), round(a.start[1])),
             end=(round(a.end[0]), round(a.end[1])),
             axis_type=a.axis_type)
        for a in axes
    ]
    return AxisScheme(id=scheme_id, building_mode=mode, axes=axes, typology=typology)


def _with_extra_wing(base: AxisScheme, core: Rect, horiz: bool,
                     params: LayoutParams) -> AxisScheme:
    """Variant of a scheme with one perpendicular podium wing hung off the
    first axis midpoint; changes the degree multiset, so always distinct."""
    a = base.axes[0]
    mx = (a.start[0] + a.end[0]) / 2.0
    my = (a.start[1] + a.end[1]) / 2.0
    if horiz:
        tip = (mx, core.y1)
    else:
        tip = (core.x1, my)
    wing = (tip[0] - mx, tip[1] - my)
    if math.hypot(*wing) < params.min_axis_length:
        return None
    axes = list(base.axes) + [Axis(start=(round(mx), round(my)),
                                   end=(round(tip[0]), round(tip[1])),
                                   axis_type="podium")]
    return AxisScheme(id="S2", building_mode="independent", axes=axes,
                      typology=base.typology)


def generate_schemes(program, site: SitePolygon, seed: int,
                     params: LayoutParams = LayoutParams()) -> SchemePair:
    """Two distinct, fully valid axis schemes for the program on this site.

    Pure in (program, site, seed, params).
    """
    rng = random.Random(seed)
    rect = inscribed_rectangle(site)
    demand = _program_demand_m2(program, params)
    if demand <= 0:
        raise ValueError("program has no rooms to house")
    typologies = admissible_typologies(site, rect, demand, params)
    order = list(typologies)
    rng.shuffle(order)
    horiz = rect.w >= rect.h
    for shrink in (0.0, 0.1, 0.2):
        core = rect.inset(params.wing_half_width + params.boundary_margin
                          + shrink * min(rect.w, rect.h) / 2.0)
        if not core.valid():
            continue
        if len(order) >= 2:
            t1, t2 = order[0], order[1]
        else:
            t1 = t2 = order[0]
        try:
            s1 = _draw_scheme(t1, "S1", "shared", core, horiz, demand, params, rng)
            s2 = _draw_scheme(t2, "S2", "independent", core, horiz, demand, params, rng)
        except SiteTooSmall:
            continue
        if validate_scheme(s1, site, params):
            continue
        if (validate_scheme(s2, site, params)
                or not schemes_distinct(s1, s2, params)):
            # same skeleton twice: vary topology, then orientation
            candidates = [_with_extra_wing(s1, core, horiz, params)]
            try:
                candidates.append(_draw_scheme(
                    t2, "S2", "independent", core, not horiz, demand, params, rng))
            except SiteTooSmall:
                pass
            s2 = None
            for cand in candidates:
                if cand is None:
                    continue
                if validate_scheme(cand, site, params):
                    continue
                if schemes_distinct(s1, cand, params):
                    s2 = cand
                    break
            if s2 is None:
                continue
        return SchemePair(s1=s1, s2=s2)
    raise SiteTooSmall("no admissible typology fits the program on this site")
