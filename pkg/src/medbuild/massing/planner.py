"""Floor planning and room allocation.

Stage 1 stacks floors until cumulative module capacity covers the program
with an overprovision margin; Stage 2 waterfalls rooms onto the lowest
floor that can hold them; Stage 3 (scene.py) packs each room into
structural grid cells.
"""

from __future__ import annotations

import math

from medbuild.geometry import (
    ScaleMap,
    area,
    corridor_rectangle,
    floor_contour,
    point_in_tree,
    to_grid,
    union,
)
from .model import FloorPlan, GridCell, MassingParams, RoomInstance, ZeroCapacity

MAX_FLOORS = 64  # hard stop; the tallest axis type bounds real growth anyway


def required_modules(program, params: MassingParams) -> int:
    """Whole-module demand, rounding each room up to full cells."""
    total = 0
    for room in program.rooms:
        total += room.quantity * max(
            1, math.ceil(room.unit_area / params.standard_room_module_area))
    return total


def room_instances(program, params: MassingParams) -> list:
    """Unfold RoomSpec quantities into placeable instances, in waterfall
    order: priority rank, then larger area, then name, then copy number."""
    instances = []
    for room in program.rooms:
        modules = max(1, math.ceil(room.unit_area / params.standard_room_module_area))
        for seq in range(1, room.quantity + 1):
            instances.append(RoomInstance(
                name=room.name,
                department=room.department,
                unit_area=room.unit_area,
                priority=room.priority,
                sequence=seq,
                modules=modules,
            ))
    return instances


def waterfall_order(instances, priority_rank) -> list:
    return sorted(instances, key=lambda r: (
        priority_rank(r.priority), -r.unit_area, r.name, r.sequence))


def axes_for_floor(scheme, floor_index: int, params: MassingParams) -> list:
    """Axes still present at this level, by their type's floor count."""
    if floor_index < 0:
        raise ValueError("floor index must be >= 0")
    return [a for a in scheme.axes
            if params.floors_by_axis_type[a.axis_type] > floor_index]


def _build_floor(index: int, axes, params: MassingParams) -> FloorPlan:
    scale = ScaleMap(s=params.scale)
    contour = floor_contour(axes, params.room_depth, params.corridor_width, scale)
    corridor = union([corridor_rectangle(a, params.corridor_width, scale)
                      for a in axes])
    usable = area(contour, scale) - area(corridor, scale)
    capacity = int(usable // params.standard_room_module_area)
    return FloorPlan(index=index, axes=list(axes), contour=contour,
                     corridor=corridor, usable_area=usable, capacity=capacity)


def calculate_optimal_floor_plan(program, scheme, params: MassingParams):
    """Stage 1.  Returns (floors, stop_reason); stop_reason is "capacity"
    when the overprovision target was met, "no_axes" on the early exit."""
    need = math.ceil(required_modules(program, params) * params.overprovision_factor)
    floors = []
    cumulative = 0
    index = 0
    while cumulative < need and index < MAX_FLOORS:
        axes = axes_for_floor(scheme, index, params)
        if not axes:
            if index == 0:
                raise ZeroCapacity("no axes reach the ground floor")
            return floors, "no_axes"
        floor = _build_floor(index, axes, params)
        if index == 0 and floor.capacity == 0:
            raise ZeroCapacity("ground floor cannot hold a single room module")
        floors.append(floor)
        cumulative += floor.capacity
        index += 1
    return floors, "capacity"


def generate_structural_grid(floor: FloorPlan, params: MassingParams) -> list:
    """Stage 3 support: module cells marching along each axis, both sides
    of the corridor, dropped when their center leaves the contour or falls
    into the corridor band; deduplicated by center."""
    scale = ScaleMap(s=params.scale)
    width = params.module_width
    offset = params.corridor_width / 2.0 + params.room_depth / 2.0
    cells = []
    seen = set()
    cell_id = 0
    for axis_index, axis in enumerate(floor.axes):
        ax, ay = axis.start
        bx, by = axis.end
        length = math.hypot(bx - ax, by - ay)
        ux, uy = (bx - ax) / length, (by - ay) / length
        px, py = -uy, ux
        count = int(length // width)
        for along in range(count):
            mx = ax + ux * (along + 0.5) * width
            my = ay + uy * (along + 0.5) * width
            for side in (1, -1):
                cx = mx + px * side * offset
                cy = my + py * side * offset
                g = to_grid((cx, cy), scale)
                if g in seen:
                    continue
                if not point_in_tree(g, floor.contour):
                    continue
                if point_in_tree(g, floor.corridor):
                    continue
                seen.add(g)
                hw, hd = width / 2.0, params.room_depth / 2.0
                corners = (
                    (cx - ux * hw - px * hd, cy - uy * hw - py * hd),
                    (cx + ux * hw - px * hd, cy + uy * hw - py * hd),
                    (cx + ux * hw + px * hd, cy + uy * hw + py * hd),
                    (cx - ux * hw + px * hd, cy - uy * hw + py * hd),
                )
                cells.append(GridCell(
                    cell_id=cell_id, axis_index=axis_index, along=along,
                    side=side, center=(cx, cy), corners=corners))
                cell_id += 1
    return cells


def _free_runs(floor: FloorPlan, taken: set):
    """Maximal runs of free cells with consecutive along positions on one
    axis side; ordered by axis, then side, then along."""
    lanes = {}
    for cell in floor.grid:
        if cell.cell_id not in taken:
            lanes.setdefault((cell.axis_index, -cell.side), []).append(cell)
    runs = []
    for key in sorted(lanes):
        current = []
        for cell in sorted(lanes[key], key=lambda c: c.along):
            if current and cell.along != current[-1].along + 1:
                runs.append(current)
                current = []
            current.append(cell)
        if current:
            runs.append(current)
    return runs


def _fit_run(floor: FloorPlan, taken: set, modules: int):
    """Best-fit contiguous run: smallest sufficient run, earliest on ties."""
    best = None
    for run in _free_runs(floor, taken):
        if len(run) >= modules:
            if best is None or len(run) < len(best):
                best = run
    if best is None:
        return None
    return best[:modules]


def _can_fit(floor: FloorPlan, taken: set, room: RoomInstance) -> bool:
    if floor.remaining_capacity < room.modules:
        return False
    return _fit_run(floor, taken, room.modules) is not None


def allocate_rooms(program, floors, params: MassingParams, priority_rank):
    """Stage 2 + cell packing.  Returns (kept_floors, unallocated).

    A room lands on the first floor that still has module capacity and a
    contiguous free cell run long enough; floors that end up empty are
    dropped; unallocated rooms fit no floor at their attempt.
    """
    from .model import RoomPlacement

    taken = {f.index: set() for f in floors}
    for floor in floors:
        if floor.grid is None:
            floor.grid = generate_structural_grid(floor, params)
    unallocated = []
    for room in waterfall_order(room_instances(program, params), priority_rank):
        placed = False
        for floor in floors:
            if not _can_fit(floor, taken[floor.index], room):
                continue
            cells = _fit_run(floor, taken[floor.index], room.modules)
            taken[floor.index].update(c.cell_id for c in cells)
            floor.allocated.append(RoomPlacement(
                room=room, floor_index=floor.index, cells=cells))
            placed = True
            break
        if not placed:
            unallocated.append(room)
    kept = [f for f in floors if f.allocated]
    return kept, unallocated
