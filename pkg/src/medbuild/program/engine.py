"""Deterministic functional-programming rules: population projection, level
scoring, bed-need arithmetic, departmental room programs, costing and the
iterative budget trim with its open ledger.

Every coefficient comes from PlanningConfig; this module only wires the
formula chain.  All operations are pure functions of (record, config).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from medbuild.dql import DqlRecord
from .config import ConfigError, PlanningConfig

LEVELS = ["Clinic", "Primary", "Secondary", "Tertiary"]


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class BedNeedBreakdown:
    projected_population: float
    theoretical_total: float
    effective_existing: float
    net_base: float
    additions: tuple  # of (reason, beds); the level-size cap appears as a
    # negative entry so target_total stays ceil(net_base + sum(additions))
    target_total: int


@dataclass
class RoomSpec:
    name: str
    department: str
    quantity: int
    unit_area: float  # m², net
    priority: str
    template_area: float  # as configured, floor for area trims
    min_quantity: int = 0


@dataclass
class DepartmentSpec:
    name: str
    beds: int
    rooms: list


@dataclass(frozen=True)
class CostEstimate:
    estimated: float  # USD
    budget: float  # USD
    feasible: bool


@dataclass(frozen=True)
class TrimAction:
    target: str  # "department/room"
    kind: str  # "quantity" | "area"
    before: float
    after: float
    saved: float  # USD


@dataclass
class FunctionalProgram:
    level: str
    score: float
    primary_extension: bool
    beds: BedNeedBreakdown
    departments: list
    rooms: list
    cost: CostEstimate
    trim_log: list = field(default_factory=list)

    @property
    def total_rooms(self) -> int:
        return sum(r.quantity for r in self.rooms)

    def net_area(self) -> float:
        return sum(r.quantity * r.unit_area for r in self.rooms)


# --- helpers --------------------------------------------------------------


def _f(value, default=0.0) -> float:
    return default if value is None else float(value)


def _ramp(value: float, points) -> float:
    """Piecewise-linear interpolation over [(x, y), ...]; clamped outside."""
    if value <= points[0][0]:
        return points[0][1]
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        if value <= x1:
            return y0 + (y1 - y0) * (value - x0) / (x1 - x0)
    return points[-1][1]


def _health_complexity(record: DqlRecord) -> float:
    return sum(float(d.incidence) * float(d.resource_factor) for d in record.health.diseases)


def _infrastructure_index(record: DqlRecord, config: PlanningConfig) -> float:
    inf = record.infrastructure
    vals = [inf.fac, inf.water, inf.infra]
    present = [float(v) for v in vals if v is not None]
    if not present:
        return float(config["defaults"].get("infrastructure_index", 0.5))
    return sum(present) / len(present)


def _growth_rate(record: DqlRecord, config: PlanningConfig) -> float:
    g = record.population.growth_rate
    return float(config["defaults"]["growth_rate"]) if g is None else float(g)


def _rule_metric(path: str, record: DqlRecord, config: PlanningConfig, proj: float) -> float:
    """Numeric value for an additional-demand rule predicate."""
    if path == "maternal.health":
        return _f(record.maternal.health, config["defaults"]["maternal_health"])
    if path == "maternal.fert":
        return _f(record.maternal.fert, config["defaults"]["fertility"])
    if path == "social.conflict_level":
        return config.code_value("conflict", record.social.conflict)
    if path == "social.vio":
        return _f(record.social.vio)
    if path == "social.ref":
        return _f(record.social.ref)
    if path == "health.complexity":
        return _health_complexity(record)
    if path == "infrastructure.index":
        return _infrastructure_index(record, config)
    if path == "geoclimate.disaster_level":
        return config.code_value("disrisk", record.geoclimate.disrisk)
    raise ConfigError(f"unknown rule metric {path!r}")


_OPS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


# --- operations -----------------------------------------------------------


def project_population(pop: float, growth_rate: float, years: float) -> float:
    """pop * (1 + growth/100)^years, unrounded."""
    if pop <= 0:
        raise DomainError("population must be positive")
    if years < 0:
        raise DomainError("planning horizon must be >= 0")
    if growth_rate <= -100:
        raise DomainError("growth rate must exceed -100 %/yr")
    return pop * (1.0 + growth_rate / 100.0) ** years


def score_hospital_level(record: DqlRecord, config: PlanningConfig):
    """Multi-factor weighted score and the level band containing it."""
    ls = config["level_score"]
    weights = ls["weights"]
    proj = project_population(
        _f(record.population.pop), _growth_rate(record, config), config["planning_years"])
    score = 0.0
    for name, w in weights.items():
        if name == "population":
            score += w * _ramp(proj, ls["population_ramp"])
        elif name == "health":
            cap = ls["health_complexity_cap"]
            score += w * min(1.0, _health_complexity(record) / cap)
        elif name == "budget":
            score += w * _ramp(_f(record.economy.budget), ls["budget_ramp"])
        elif name == "infrastructure":
            score += w * _infrastructure_index(record, config)
        elif name == "conflict":
            score += w * config.code_value("conflict", record.social.conflict)
        elif name == "existing_gap":
            # fraction of theoretical provision NOT already covered locally
            fac = _f(record.infrastructure.fac, config["defaults"]["facility_coverage"])
            score += w * (1.0 - fac)
        else:
            raise ConfigError(f"modifier {name!r} has no scoring rule")
    thresholds = ls["thresholds"]
    level = "Tertiary"
    for name in LEVELS[:-1]:
        if score < thresholds[name]:
            level = name
            break
    return score, level


def primary_extension_flag(record: DqlRecord, level: str, config: PlanningConfig) -> bool:
    """Primary facilities gain a delivery-capability extension when maternal
    indicators demand it."""
    if level != "Primary":
        return False
    ext = config["primary_extension"]
    health = _f(record.maternal.health, config["defaults"]["maternal_health"])
    fert = _f(record.maternal.fert, config["defaults"]["fertility"])
    return health < ext["maternal_health_below"] or fert >= ext["fertility_at_least"]


def compute_bed_need(record: DqlRecord, config: PlanningConfig, level: str) -> BedNeedBreakdown:
    proj = project_population(
        _f(record.population.pop), _growth_rate(record, config), config["planning_years"])
    rate = config["bed_rate_per_1000"][level]
    theoretical = proj * rate / 1000.0
    beds = _f(record.existing.total_beds)
    quality = record.existing.quality_factor
    quality = float(config["defaults"]["quality_factor"]) if quality is None else float(quality)
    effective = beds * quality
    net_base = max(0.0, theoretical - effective)
    additions = []
    running = net_base
    for rule in config["additional_demand_rules"]:
        if rule.get("cap_at_level_max"):
            cap = config["max_beds"].get(level)
            if cap is not None and running > cap:
                additions.append((rule["name"], cap - running))
                running = cap
            continue
        metric = _rule_metric(rule["field"], record, config, proj)
        if _OPS[rule["op"]](metric, rule["threshold"]):
            if "beds_fraction_of_base" in rule:
                extra = rule["beds_fraction_of_base"] * net_base
            else:
                extra = float(rule["beds_absolute"])
            additions.append((rule["name"], extra))
            running += extra
    target = math.ceil(net_base + sum(b for _, b in additions))
    return BedNeedBreakdown(
        projected_population=proj,
        theoretical_total=theoretical,
        effective_existing=effective,
        net_base=net_base,
        additions=tuple(additions),
        target_total=max(0, target),
    )


def required_operating_rooms(specialties, existing_ors: int, config: PlanningConfig) -> int:
    """max(0, ceil(sum(beds*rate*duration) / (daily_h * days * utilization)) - existing)."""
    sp = config["surgical_params"]
    denom = sp["daily_op_hours"] * sp["annual_op_days"] * sp["or_utilization"]
    if denom <= 0:
        raise DomainError("non-positive surgical capacity denominator")
    demand_hours = sum(
        s["beds"] * s["surgery_rate"] * s["avg_duration"] for s in specialties)
    if demand_hours == 0:
        return 0
    return max(0, math.ceil(demand_hours / denom) - existing_ors)


def _surgical_specialties(total_beds: int, config: PlanningConfig):
    out = []
    for name, spec in sorted(config["surgical_params"]["specialties"].items()):
        out.append({
            "name": name,
            "beds": total_beds * spec["bed_share"],
            "surgery_rate": spec["surgery_rate"],
            "avg_duration": spec["avg_duration"],
        })
    return out


def _largest_remainder(total: int, shares) -> list:
    """Distribute an integer total over fractional shares; remainders go to
    the largest shares, ties broken by position."""
    if total <= 0 or not shares:
        return [0] * len(shares)
    norm = sum(shares)
    raw = [total * s / norm for s in shares]
    base = [math.floor(r) for r in raw]
    leftover = total - sum(base)
    order = sorted(range(len(shares)), key=lambda i: (-(raw[i] - base[i]), i))
    for i in order[:leftover]:
        base[i] += 1
    return base


def _room_count(rule: dict, ctx: dict) -> int:
    if "fixed" in rule:
        return int(rule["fixed"])
    if "per_beds" in rule:
        return math.ceil(ctx["dept_beds"] * rule["per_beds"] - 1e-9)
    if "per_total_beds" in rule:
        return math.ceil(ctx["total_beds"] * rule["per_total_beds"] - 1e-9)
    if "per_1000_pop" in rule:
        return math.ceil(ctx["proj_pop"] / 1000.0 * rule["per_1000_pop"] - 1e-9)
    if rule.get("or_demand"):
        return ctx["net_ors"]
    raise ConfigError(f"room count rule {rule!r} not understood")


def compile_departments(level: str, record: DqlRecord, beds: BedNeedBreakdown,
                        config: PlanningConfig, primary_ext: bool = False):
    """Instantiate the level's department catalog into (departments, rooms)."""
    catalog = config["department_catalog"].get(level)
    if catalog is None:
        raise ConfigError(f"no department catalog for level {level!r}")
    total_beds = beds.target_total
    existing_ors = int(_f(record.existing.or_rooms))
    net_ors = required_operating_rooms(
        _surgical_specialties(total_beds, config), existing_ors, config)
    depts_cfg = catalog["departments"]
    bed_shares = [d.get("bed_share", 0.0) for d in depts_cfg]
    bed_alloc = _largest_remainder(total_beds, bed_shares) if sum(bed_shares) > 0 else [0] * len(depts_cfg)

    departments = []
    rooms = []
    for dept_cfg, dept_beds in zip(depts_cfg, bed_alloc):
        dept = DepartmentSpec(name=dept_cfg["name"], beds=dept_beds, rooms=[])
        ctx = {
            "dept_beds": dept_beds,
            "total_beds": total_beds,
            "proj_pop": beds.projected_population,
            "net_ors": net_ors,
        }
        for tmpl in dept_cfg["rooms"]:
            when = tmpl.get("when", "always")
            if when == "primary_extension" and not primary_ext:
                continue
            if when == "has_beds" and dept_beds == 0:
                continue
            count = _room_count(tmpl["count"], ctx)
            if count <= 0:
                continue
            room = RoomSpec(
                name=tmpl["name"],
                department=dept.name,
                quantity=count,
                unit_area=float(tmpl["unit_area"]),
                priority=tmpl["priority"],
                template_area=float(tmpl["unit_area"]),
                min_quantity=int(tmpl.get("min_quantity", 0)),
            )
            dept.rooms.append(room)
            rooms.append(room)
        if dept.rooms or dept.beds:
            departments.append(dept)
    return departments, rooms


def estimate_cost(rooms, record: DqlRecord, config: PlanningConfig,
                  budget_musd: float = None) -> CostEstimate:
    ct = config["cost_table"]
    mat_mult = config.code_value("material_multiplier", record.geoclimate.mat)
    gdp = _f(record.economy.gdp, config["defaults"]["gdp"])
    labor_mult = None
    for upper, mult in ct["labor_bands"]:
        if upper is None or gdp <= upper:
            labor_mult = mult
            break
    if labor_mult is None:
        raise ConfigError("labor bands do not cover this GDP")
    net = sum(r.quantity * r.unit_area for r in rooms)
    gross = net * ct["circulation_factor"]
    estimated = gross * ct["base_rate_per_m2"] * mat_mult * labor_mult
    if budget_musd is None:
        budget_musd = _f(record.economy.budget)
    budget = budget_musd * 1e6
    return CostEstimate(estimated=estimated, budget=budget, feasible=estimated <= budget)


def gross_area(program: FunctionalProgram, config: PlanningConfig) -> float:
    """Programmed gross floor area (rooms plus circulation), m²."""
    return program.net_area() * config["cost_table"]["circulation_factor"]


def _trim_candidates(program: FunctionalProgram, config: PlanningConfig):
    protected = config.get("protected_priority", "critical")
    nprio = len(config["priority_hierarchy"])
    cands = []
    for room in program.rooms:
        if room.priority == protected:
            continue
        rank = config.priority_rank(room.priority)
        contribution = room.quantity * room.unit_area
        if room.quantity > room.min_quantity:
            cands.append(((nprio - rank, -contribution, room.name), "quantity", room))
        elif room.quantity > 0 and room.unit_area > room.template_area * 0.8 + 1e-9:
            cands.append(((nprio - rank, -contribution, room.name), "area", room))
    # lowest priority first, then largest cost contribution, then name
    cands.sort(key=lambda c: (-c[0][0], c[0][1], c[0][2]))
    return cands


def optimize_to_budget(program: FunctionalProgram, config: PlanningConfig) -> FunctionalProgram:
    """Trim the lowest-priority trimmable rooms, one step at a time, until
    the estimate fits the budget or nothing trimmable remains."""
    record = program._record  # attached by generate_program / callers
    budget_musd = program.cost.budget / 1e6
    while program.cost.estimated > program.cost.budget:
        cands = _trim_candidates(program, config)
        if not cands:
            program.cost = replace(program.cost, feasible=False)
            return program
        _, kind, room = cands[0]
        before_cost = program.cost.estimated
        if kind == "quantity":
            before = room.quantity
            room.quantity -= 1
            after = room.quantity
        else:
            before = room.unit_area
            room.unit_area = max(room.template_area * 0.8, room.unit_area * 0.95)
            after = room.unit_area
        program.cost = estimate_cost(program.rooms, record, config, budget_musd)
        program.trim_log.append(TrimAction(
            target=f"{room.department}/{room.name}",
            kind=kind,
            before=before,
            after=after,
            saved=before_cost - program.cost.estimated,
        ))
    program.cost = replace(program.cost, feasible=True)
    return program


def replay_trim_log(pretrim: FunctionalProgram, trim_log, config: PlanningConfig) -> FunctionalProgram:
    """Apply a recorded ledger to an untrimmed program; used to audit that
    the ledger reproduces the trimmed outcome exactly."""
    record = pretrim._record
    budget_musd = pretrim.cost.budget / 1e6
    by_target = {f"{r.department}/{r.name}": r for r in pretrim.rooms}
    for action in trim_log:
        room = by_target[action.target]
        if action.kind == "quantity":
            room.quantity = int(action.after)
        else:
            room.unit_area = action.after
    pretrim.cost = estimate_cost(pretrim.rooms, record, config, budget_musd)
    pretrim.cost = replace(pretrim.cost, feasible=pretrim.cost.estimated <= pretrim.cost.budget)
    pretrim.trim_log = list(trim_log)
    return pretrim


def generate_program(record: DqlRecord, config: PlanningConfig) -> FunctionalProgram:
    """Full chain: project -> score -> beds -> departments -> cost -> budget."""
    score, level = score_hospital_level(record, config)
    primary_ext = primary_extension_flag(record, level, config)
    beds = compute_bed_need(record, config, level)
    departments, rooms = compile_departments(level, record, beds, config, primary_ext)
    cost = estimate_cost(rooms, record, config)
    program = FunctionalProgram(
        level=level,
        score=score,
        primary_extension=primary_ext,
        beds=beds,
        departments=departments,
        rooms=rooms,
        cost=cost,
    )
    program._record = record
    return optimize_to_budget(program, config)


# --- serialisation --------------------------------------------------------


def program_to_jsonable(program: FunctionalProgram, config: PlanningConfig) -> dict:
    return {
        "level": program.level,
        "score": round(program.score, 6),
        "primary_extension": program.primary_extension,
        "beds": {
            "projected_population": round(program.beds.projected_population, 3),
            "theoretical_total": round(program.beds.theoretical_total, 3),
            "effective_existing": round(program.beds.effective_existing, 3),
            "net_base": round(program.beds.net_base, 3),
            "additions": [[reason, round(b, 3)] for reason, b in program.beds.additions],
            "target_total": program.beds.target_total,
        },
        "departments": [
            {
                "name": d.name,
                "beds": d.beds,
                "rooms": [
                    {
                        "name": r.name,
                        "quantity": r.quantity,
                        "unit_area": round(r.unit_area, 3),
                        "priority": r.priority,
                    }
                    for r in d.rooms
                ],
            }
            for d in program.departments
        ],
        "totals": {
            "rooms": program.total_rooms,
            "net_area": round(program.net_area(), 3),
            "gross_area": round(gross_area(program, config), 3),
        },
        "cost": {
            "estimated": round(program.cost.estimated, 2),
            "budget": round(program.cost.budget, 2),
            "feasible": program.cost.feasible,
        },
        "trim_log": [
            {
                "target": t.target,
                "kind": t.kind,
                "before": round(t.before, 3),
                "after": round(t.after, 3),
                "saved": round(t.saved, 2),
            }
            for t in program.trim_log
        ],
    }
