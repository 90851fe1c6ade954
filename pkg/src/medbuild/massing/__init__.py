from .model import (
    DEFAULT_FLOORS_BY_AXIS_TYPE,
    FloorPlan,
    GridCell,
    MassingParams,
    RoomInstance,
    RoomPlacement,
    SceneModel,
    SceneModule,
    UnsupportedFormat,
    ZeroCapacity,
)
from .planner import (
    allocate_rooms,
    axes_for_floor,
    calculate_optimal_floor_plan,
    generate_structural_grid,
    required_modules,
    room_instances,
    waterfall_order,
)
from .scene import (
    SCENE_SCHEMA_VERSION,
    export_scene,
    scene_from_jsonable,
    scene_to_jsonable,
    synthesize_scene,
)

__all__ = [
    "DEFAULT_FLOORS_BY_AXIS_TYPE",
    "FloorPlan",
    "GridCell",
    "MassingParams",
    "RoomInstance",
    "RoomPlacement",
    "SCENE_SCHEMA_VERSION",
    "SceneModel",
    "SceneModule",
    "UnsupportedFormat",
    "ZeroCapacity",
    "allocate_rooms",
    "axes_for_floor",
    "calculate_optimal_floor_plan",
    "export_scene",
    "generate_structural_grid",
    "required_modules",
    "room_instances",
    "scene_from_jsonable",
    "scene_to_jsonable",
    "synthesize_scene",
    "waterfall_order",
]
