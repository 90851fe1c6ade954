"""Massing domain types: parameters, floors, cell grid, placements, scene."""

from __future__ import annotations

from dataclasses import dataclass, field

DEFAULT_FLOORS_BY_AXIS_TYPE = {"podium": 2, "tower_mid": 6, "tower_high": 12}


class ZeroCapacity(ValueError):
    """The ground floor cannot hold even one room module."""


class UnsupportedFormat(ValueError):
    pass


@dataclass(frozen=True)
class MassingParams:
    room_depth: float = 5000.0  # mm
    corridor_width: float = 2400.0
    floor_height: float = 4000.0
    standard_room_module_area: float = 25.0  # m²
    floors_by_axis_type: dict = field(
        default_factory=lambda: dict(DEFAULT_FLOORS_BY_AXIS_TYPE))
    overprovision_factor: float = 1.3
    scale: int = 100  # grid units per mm

    def __post_init__(self):
        for name in ("room_depth", "corridor_width", "floor_height",
                     "standard_room_module_area", "overprovision_factor"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.overprovision_factor < 1:
            raise ValueError("overprovision_factor must be >= 1")
        f = self.floors_by_axis_type
        if not (f["podium"] <= f["tower_mid"] <= f["tower_high"]):
            raise ValueError("floor counts must be podium <= tower_mid <= tower_high")

    @property
    def module_width(self) -> float:
        """Along-axis cell width in mm for one standard module."""
        return self.standard_room_module_area * 1e6 / self.room_depth


@dataclass(frozen=True)
class GridCell:
    """One structural-grid slot: a module footprint beside an axis."""

    cell_id: int
    axis_index: int
    along: int
    side: int  # +1 / -1 of the axis direction
    center: tuple  # (x, y) mm
    corners: tuple  # 4 (x, y) mm, counter-clockwise


@dataclass(frozen=True)
class RoomInstance:
    """A single placeable room unfolded from a RoomSpec quantity."""

    name: str
    department: str
    unit_area: float
    priority: str
    sequence: int  # 1-based copy number within its spec
    modules: int  # cells required

    @property
    def key(self) -> str:
        return f"{self.department}/{self.name}#{self.sequence}"


@dataclass
class RoomPlacement:
    room: RoomInstance
    floor_index: int
    cells: list  # of GridCell


@dataclass
class FloorPlan:
    index: int
    axes: list
    contour: object  # PolygonTree
    corridor: object  # PolygonTree
    usable_area: float  # m²
    capacity: int  # modules
    allocated: list = field(default_factory=list)  # of RoomPlacement
    grid: list = None  # of GridCell, built on demand

    @property
    def allocated_modules(self) -> int:
        return sum(p.room.modules for p in self.allocated)

    @property
    def remaining_capacity(self) -> int:
        return self.capacity - self.allocated_modules


@dataclass
class SceneModule:
    """One axis-aligned box of the 3D massing model, millimeter units."""

    origin: tuple  # (x, y, z)
    size: tuple  # (w, d, h)
    room: str
    department: str
    floor: int


@dataclass
class SceneModel:
    floors: list  # of {index, usable_area, capacity, allocated_modules}
    modules: list  # of SceneModule
    unallocated: list  # of {room, department, unit_area, priority, quantity}
    metadata: dict
