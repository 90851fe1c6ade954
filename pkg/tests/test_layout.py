"""Axis scheme tests: wire format, graph topology, constraints, generator."""

import json
import random

import pytest

from medbuild.dql import parse_dql
from medbuild.layout import (
    Axis,
    AxisScheme,
    LayoutParams,
    SchemaError,
    SchemePair,
    SitePolygon,
    SiteTooSmall,
    axis_graph,
    dominant_orientation,
    generate_schemes,
    inscribed_rectangle,
    parse_scheme_json,
    schemes_distinct,
    serialize_scheme_json,
    validate_scheme,
)
from medbuild.program import generate_program
from conftest import SITES, rect_site
from fixtures import TOWNSHIP_DQL


def _scheme(axes, scheme_id="S1", mode="shared"):
    return AxisScheme(id=scheme_id, building_mode=mode, axes=list(axes))


def _axis(x0, y0, x1, y1, axis_type="podium"):
    return Axis(start=(float(x0), float(y0)), end=(float(x1), float(y1)),
                axis_type=axis_type)


def dfs_has_cycle(graph):
    """Independent cycle oracle: DFS over the multigraph, edge ids tracked
    so a parallel edge counts as a cycle but backtracking does not."""
    adjacency = {i: [] for i in range(len(graph.nodes))}
    for u, v, k in graph.edges:
        if u == v:
            return True
        adjacency[u].append((v, k))
        adjacency[v].append((u, k))
    seen = set()
    for start in range(len(graph.nodes)):
        if start in seen:
            continue
        stack = [(start, None)]
        seen.add(start)
        while stack:
            node, via = stack.pop()
            for nxt, k in adjacency[node]:
                if k == via:
                    continue
                if nxt in seen:
                    return True
                seen.add(nxt)
                stack.append((nxt, k))
    return False


class TestWireFormat:
    def _doc(self):
        return {"schemes": [
            {"id": "S1", "building_mode": "shared", "axes": [
                {"start": [0, 0], "end": [40000, 0], "type": "podium"}]},
            {"id": "S2", "building_mode": "independent", "axes": [
                {"start": [0, 0], "end": [0, 40000], "type": "tower_mid"}]},
        ]}

    def test_round_trip_fixpoint(self):
        text = json.dumps(self._doc())
        pair = parse_scheme_json(text)
        canonical = serialize_scheme_json(pair)
        assert serialize_scheme_json(parse_scheme_json(canonical)) == canonical

    @pytest.mark.parametrize("mutate,path_part", [
        (lambda d: d["schemes"][0].pop("id"), "schemes[0]"),
        (lambda d: d["schemes"][0].update(extra=1), "schemes[0]"),
        (lambda d: d["schemes"][0]["axes"][0].pop("type"), "axes[0]"),
        (lambda d: d["schemes"][0]["axes"][0].update(start=[0.5, 0]), "start"),
        (lambda d: d["schemes"].pop(), "schemes"),
        (lambda d: d["schemes"][0].update(building_mode="bogus"), "schemes[0]"),
        (lambda d: d["schemes"][0]["axes"][0].update(type="skyscraper"), "type"),
    ])
    def test_strict_rejection_with_path(self, mutate, path_part):
        doc = self._doc()
        mutate(doc)
        with pytest.raises(SchemaError) as err:
            parse_scheme_json(json.dumps(doc))
        assert path_part in err.value.path

    def test_non_json_rejected(self):
        with pytest.raises(SchemaError):
            parse_scheme_json("not json at all")


class TestAxisGraph:
    def test_endpoints_snap_within_tolerance(self):
        s = _scheme([_axis(0, 0, 20000, 0), _axis(20400, 0, 20400, 20000)])
        g = axis_graph(s, snap_tolerance=500)
        assert len(g.nodes) == 3
        assert g.component_count == 1
        assert g.degree_multiset() == (1, 1, 2)

    def test_endpoints_apart_stay_separate(self):
        s = _scheme([_axis(0, 0, 20000, 0), _axis(20600, 0, 20600, 20000)])
        g = axis_graph(s, snap_tolerance=500)
        assert len(g.nodes) == 4
        assert g.component_count == 2

    def test_fuzzed_acyclicity_matches_dfs(self):
        rng = random.Random(17)
        from medbuild.layout.model import _find_cycles
        for _ in range(200):
            axes = []
            pts = [(rng.randrange(0, 100) * 1000.0, rng.randrange(0, 100) * 1000.0)
                   for _ in range(rng.randint(2, 7))]
            for _ in range(rng.randint(1, 8)):
                a, b = rng.sample(range(len(pts)), 2)
                if pts[a] != pts[b]:
                    axes.append(Axis(start=pts[a], end=pts[b], axis_type="podium"))
            if not axes:
                continue
            g = axis_graph(_scheme(axes), 500)
            assert bool(_find_cycles(g)) == dfs_has_cycle(g)


class TestValidation:
    SITE = rect_site(100000, 80000)

    def test_valid_tree_passes(self):
        s = _scheme([_axis(10000, 40000, 90000, 40000),
                     _axis(50000, 40000, 50000, 70000)])
        assert validate_scheme(s, self.SITE) == []

    def test_min_length(self):
        s = _scheme([_axis(10000, 10000, 12000, 10000)])
        assert any("minimum length" in v.message for v in validate_scheme(s, self.SITE))

    def test_boundary_escape(self):
        s = _scheme([_axis(10000, 40000, 150000, 40000)])
        assert any("boundary" in v.message for v in validate_scheme(s, self.SITE))

    def test_triangle_cycle_detected(self):
        s = _scheme([_axis(10000, 10000, 60000, 10000),
                     _axis(60000, 10000, 35000, 50000),
                     _axis(35000, 50000, 10000, 10000)])
        assert any("loop" in v.message for v in validate_scheme(s, self.SITE))

    def test_solar_spacing_between_parallel_towers(self):
        close = _scheme([
            _axis(10000, 20000, 80000, 20000, "tower_high"),
            _axis(10000, 30000, 80000, 30000, "tower_high")])
        spaced = _scheme([
            _axis(10000, 20000, 80000, 20000, "tower_high"),
            _axis(10000, 35000, 80000, 35000, "tower_high")])
        assert any("solar" in v.message for v in validate_scheme(close, self.SITE))
        assert not any("solar" in v.message for v in validate_scheme(spaced, self.SITE))

    def test_perpendicular_towers_exempt(self):
        s = _scheme([
            _axis(10000, 20000, 80000, 20000, "tower_high"),
            _axis(45000, 25000, 45000, 75000, "tower_high")])
        assert not any("solar" in v.message for v in validate_scheme(s, self.SITE))


class TestDistinctness:
    def _pair(self, axes1, axes2):
        return _scheme(axes1, "S1"), _scheme(axes2, "S2")

    def test_identical_not_distinct(self):
        a = [_axis(0, 0, 50000, 0), _axis(25000, 0, 25000, 30000)]
        s1, s2 = self._pair(a, list(a))
        assert not schemes_distinct(s1, s2)

    def test_rotation_beyond_threshold_distinct(self):
        s1, s2 = self._pair(
            [_axis(0, 0, 50000, 0)],
            [_axis(0, 0, 43301, 25000)])  # 30 degrees
        assert schemes_distinct(s1, s2)

    def test_degree_multiset_difference_distinct(self):
        s1, s2 = self._pair(
            [_axis(0, 0, 50000, 0), _axis(25000, 0, 25000, 30000)],
            [_axis(0, 0, 50000, 0), _axis(50000, 0, 50000, 30000)])
        assert schemes_distinct(s1, s2)

    def test_dominant_orientation_folds_to_half_circle(self):
        s1 = _scheme([_axis(0, 0, 50000, 0)])
        s2 = _scheme([_axis(50000, 0, 0, 0)])
        assert dominant_orientation(s1) == pytest.approx(dominant_orientation(s2))


class TestInscribedRectangle:
    def test_rectangle_site_recovers_most_area(self):
        site = rect_site(100000, 60000)
        rect = inscribed_rectangle(site)
        assert rect.w * rect.h >= 0.9 * 100000 * 60000

    def test_rect_lies_inside_polygon(self):
        for site in SITES.values():
            rect = inscribed_rectangle(site)
            for x in (rect.x0, rect.x1):
                for y in (rect.y0, rect.y1):
                    assert site.contains(x, y, eps=2000.0)


@pytest.fixture(scope="module")
def township_program(config):
    return generate_program(parse_dql(TOWNSHIP_DQL), config)


class TestGenerator:
    def test_pairs_valid_across_seeds_and_sites(self, township_program):
        params = LayoutParams()
        for site in SITES.values():
            for seed in range(10):
                pair = generate_schemes(township_program, site, seed, params)
                for scheme in (pair.s1, pair.s2):
                    assert validate_scheme(scheme, site, params) == []
                    assert not dfs_has_cycle(axis_graph(scheme, params.snap_tolerance))
                assert schemes_distinct(pair.s1, pair.s2)

    def test_deterministic_per_seed(self, township_program):
        site = SITES["rect_wide"]
        a = serialize_scheme_json(generate_schemes(township_program, site, 3))
        b = serialize_scheme_json(generate_schemes(township_program, site, 3))
        assert a == b

    def test_seeds_can_differ(self, township_program):
        site = SITES["rect_wide"]
        outs = {serialize_scheme_json(generate_schemes(township_program, site, s))
                for s in range(8)}
        assert len(outs) > 1

    def test_too_small_site_raises(self, township_program):
        with pytest.raises(SiteTooSmall):
            generate_schemes(township_program, rect_site(4000, 4000), 0)


class TestAdapter:
    def test_local_planner_round_trip(self, township_program):
        from medbuild.layout import LocalPlanner, request_schemes
        site = SITES["rect_wide"]
        planner = LocalPlanner(township_program, site, 5)
        pair = request_schemes(planner, "brief", site)
        assert isinstance(pair, SchemePair)
        for scheme in (pair.s1, pair.s2):
            assert validate_scheme(scheme, site) == []

    def test_invalid_external_scheme_rejected_not_repaired(self):
        from medbuild.layout import ExternalSchemeRejected, request_schemes

        class BadPlanner:
            def plan(self, brief):
                doc = {"schemes": [
                    {"id": "S1", "building_mode": "shared", "axes": [
                        {"start": [0, 0], "end": [1000, 0], "type": "podium"}]},
                    {"id": "S2", "building_mode": "shared", "axes": [
                        {"start": [0, 0], "end": [0, 4000], "type": "podium"}]},
                ]}
                return json.dumps(doc)

        with pytest.raises(ExternalSchemeRejected):
            request_schemes(BadPlanner(), "brief", SITES["rect_wide"])
