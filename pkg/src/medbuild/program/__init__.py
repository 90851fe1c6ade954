from .config import ConfigError, PlanningConfig, load_config, load_default_config
from .engine import (
    BedNeedBreakdown,
    CostEstimate,
    DepartmentSpec,
    DomainError,
    FunctionalProgram,
    RoomSpec,
    TrimAction,
    compile_departments,
    compute_bed_need,
    estimate_cost,
    generate_program,
    optimize_to_budget,
    program_to_jsonable,
    project_population,
    replay_trim_log,
    required_operating_rooms,
    score_hospital_level,
)

__all__ = [
    "BedNeedBreakdown",
    "ConfigError",
    "CostEstimate",
    "DepartmentSpec",
    "DomainError",
    "FunctionalProgram",
    "PlanningConfig",
    "RoomSpec",
    "TrimAction",
    "compile_departments",
    "compute_bed_need",
    "estimate_cost",
    "generate_program",
    "load_config",
    "load_default_config",
    "optimize_to_budget",
    "program_to_jsonable",
    "project_population",
    "replay_trim_log",
    "required_operating_rooms",
    "score_hospital_level",
]
