"""Massing tests: floor stacking, waterfall allocation, grid, scene export."""

import json
import math

import pytest

from medbuild.dql import parse_dql
from medbuild.layout import Axis, AxisScheme, generate_schemes
from medbuild.massing import (
    MassingParams,
    UnsupportedFormat,
    ZeroCapacity,
    allocate_rooms,
    calculate_optimal_floor_plan,
    export_scene,
    generate_structural_grid,
    required_modules,
    room_instances,
    scene_from_jsonable,
    scene_to_jsonable,
    synthesize_scene,
    waterfall_order,
)
from medbuild.program import generate_program
from conftest import SITES
from fixtures import SCENARIOS, TOWNSHIP_DQL


@pytest.fixture(scope="module")
def params():
    return MassingParams()


@pytest.fixture(scope="module")
def township_program(config):
    return generate_program(parse_dql(TOWNSHIP_DQL), config)


@pytest.fixture(scope="module")
def township_scheme(township_program):
    return generate_schemes(township_program, SITES["rect_wide"], 7).s1


class TestDemand:
    def test_required_modules_oracle(self, township_program, params):
        expect = sum(
            r.quantity * max(1, math.ceil(r.unit_area / 25.0))
            for r in township_program.rooms)
        assert required_modules(township_program, params) == expect

    def test_instances_unfold_quantities(self, township_program, params):
        instances = room_instances(township_program, params)
        assert len(instances) == sum(r.quantity for r in township_program.rooms)
        keys = [r.key for r in instances]
        assert len(set(keys)) == len(keys)

    def test_waterfall_order_priority_then_size(self, township_program, params, config):
        ordered = waterfall_order(room_instances(township_program, params),
                                  config.priority_rank)
        ranks = [config.priority_rank(r.priority) for r in ordered]
        assert ranks == sorted(ranks)
        for a, b in zip(ordered, ordered[1:]):
            if a.priority == b.priority:
                assert a.unit_area >= b.unit_area


class TestFloorStacking:
    def test_capacity_stop_reaches_overprovision(self, township_program,
                                                 township_scheme, params):
        floors, stop = calculate_optimal_floor_plan(
            township_program, township_scheme, params)
        need = math.ceil(required_modules(township_program, params)
                         * params.overprovision_factor)
        total = sum(f.capacity for f in floors)
        assert stop == "capacity"
        assert total >= need
        assert total - floors[-1].capacity < need  # last floor was necessary

    def test_no_axes_early_exit(self, township_program, params):
        # podium-only scheme: nothing rises past its floor count
        scheme = AxisScheme(id="S1", building_mode="shared", axes=[
            Axis(start=(0.0, 0.0), end=(30000.0, 0.0), axis_type="podium")])
        floors, stop = calculate_optimal_floor_plan(township_program, scheme, params)
        assert stop == "no_axes"
        assert len(floors) == params.floors_by_axis_type["podium"]

    def test_zero_capacity_raises(self, township_program, params):
        scheme = AxisScheme(id="S1", building_mode="shared", axes=[
            Axis(start=(0.0, 0.0), end=(300.0, 0.0), axis_type="podium")])
        with pytest.raises(ZeroCapacity):
            calculate_optimal_floor_plan(township_program, scheme, params)


class TestStructuralGrid:
    def test_cells_inside_contour_outside_corridor(self, township_program,
                                                   township_scheme, params):
        from medbuild.geometry import ScaleMap, point_in_tree, to_grid
        floors, _ = calculate_optimal_floor_plan(
            township_program, township_scheme, params)
        scale = ScaleMap(s=params.scale)
        floor = floors[0]
        cells = generate_structural_grid(floor, params)
        assert cells
        centers = set()
        for cell in cells:
            g = to_grid(cell.center, scale)
            assert g not in centers  # deduplicated
            centers.add(g)
            assert point_in_tree(g, floor.contour)
            assert not point_in_tree(g, floor.corridor)

    def test_cell_size_is_one_module(self, params):
        assert params.module_width * params.room_depth == pytest.approx(
            params.standard_room_module_area * 1e6)


class TestAllocation:
    def _run(self, program, scheme, params, config):
        floors, _ = calculate_optimal_floor_plan(program, scheme, params)
        return allocate_rooms(program, floors, params, config.priority_rank)

    def test_room_conservation(self, config, params):
        for name, dql, _, _, _, _ in SCENARIOS:
            program = generate_program(parse_dql(dql), config)
            pair = generate_schemes(program, SITES["rect_wide"], 11)
            for scheme in (pair.s1, pair.s2):
                kept, unallocated = self._run(program, scheme, params, config)
                placed = sum(len(f.allocated) for f in kept)
                assert placed + len(unallocated) == len(
                    room_instances(program, params)), name

    def test_placements_are_contiguous_runs(self, township_program,
                                            township_scheme, params, config):
        kept, _ = self._run(township_program, township_scheme, params, config)
        for floor in kept:
            for placement in floor.allocated:
                assert len(placement.cells) == placement.room.modules
                lanes = {(c.axis_index, c.side) for c in placement.cells}
                assert len(lanes) == 1
                alongs = sorted(c.along for c in placement.cells)
                assert alongs == list(range(alongs[0], alongs[0] + len(alongs)))

    def test_no_cell_shared_between_rooms(self, township_program,
                                          township_scheme, params, config):
        kept, _ = self._run(township_program, township_scheme, params, config)
        for floor in kept:
            ids = [c.cell_id for p in floor.allocated for c in p.cells]
            assert len(ids) == len(set(ids))

    def test_unallocated_fit_no_floor(self, config, params):
        from medbuild.massing.planner import _can_fit
        program = generate_program(parse_dql(SCENARIOS[1][1]), config)
        pair = generate_schemes(program, SITES["rect_tight"], 3)
        floors, _ = calculate_optimal_floor_plan(program, pair.s2, params)
        kept, unallocated = allocate_rooms(program, floors, params,
                                           config.priority_rank)
        taken = {f.index: {c.cell_id for p in f.allocated for c in p.cells}
                 for f in kept}
        for room in unallocated:
            for floor in kept:
                assert not _can_fit(floor, taken[floor.index], room)

    def test_module_area_within_one_module_of_room(self, township_program,
                                                   township_scheme, params, config):
        kept, _ = self._run(township_program, township_scheme, params, config)
        for floor in kept:
            for p in floor.allocated:
                provided = len(p.cells) * params.standard_room_module_area
                assert provided >= p.room.unit_area
                assert provided - p.room.unit_area < params.standard_room_module_area


class TestScene:
    def _scene(self, config, params, seed=7):
        program = generate_program(parse_dql(TOWNSHIP_DQL), config)
        scheme = generate_schemes(program, SITES["rect_wide"], seed).s1
        floors, stop = calculate_optimal_floor_plan(program, scheme, params)
        kept, unallocated = allocate_rooms(program, floors, params,
                                           config.priority_rank)
        return synthesize_scene(kept, unallocated, params,
                                {"scheme": scheme.id, "stop_reason": stop})

    def test_module_count_matches_allocation(self, config, params):
        scene = self._scene(config, params)
        by_floor = {f["index"]: f["allocated_modules"] for f in scene.floors}
        counted = {}
        for m in scene.modules:
            counted[m.floor] = counted.get(m.floor, 0) + 1
        assert counted == {k: v for k, v in by_floor.items() if v}

    def test_json_round_trip(self, config, params):
        scene = self._scene(config, params)
        doc = scene_to_jsonable(scene)
        assert doc["schema_version"] == 1
        again = scene_to_jsonable(scene_from_jsonable(doc))
        assert again == doc

    def test_export_byte_deterministic(self, config, params):
        a = export_scene(self._scene(config, params), "scene-json")
        b = export_scene(self._scene(config, params), "scene-json")
        assert a == b
        assert a.endswith(b"\n")

    def test_obj_structure(self, config, params):
        scene = self._scene(config, params)
        obj = export_scene(scene, "obj").decode()
        n = len(scene.modules)
        lines = obj.splitlines()
        assert sum(1 for l in lines if l.startswith("v ")) == 8 * n
        assert sum(1 for l in lines if l.startswith("f ")) == 12 * n
        assert sum(1 for l in lines if l.startswith("g ")) == len(
            {m.room for m in scene.modules})

    def test_unknown_format_rejected(self, config, params):
        with pytest.raises(UnsupportedFormat):
            export_scene(self._scene(config, params), "stl")
