"""Overlay kernel tests: oracle equivalence, exactness, determinism."""

import random

import pytest

from medbuild.geometry import (
    GridPolygon,
    InvalidPolygon,
    ScaleMap,
    area,
    axis_rectangle,
    corridor_rectangle,
    difference,
    floor_contour,
    intersection,
    kernel_backend,
    load_pure_kernel,
    point_in_tree,
    to_grid,
    to_world,
    tree_to_jsonable,
    union,
)


# --- brute-force even-odd oracle -----------------------------------------


def _on_segment(px, py, ax, ay, bx, by):
    cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    if cross != 0:
        return False
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def on_boundary(px, py, rings):
    for ring in rings:
        for i in range(len(ring)):
            ax, ay = ring[i]
            bx, by = ring[(i + 1) % len(ring)]
            if _on_segment(px, py, ax, ay, bx, by):
                return True
    return False


def inside_rings(px, py, rings):
    """Even-odd membership by exact integer ray casting (boundary excluded)."""
    parity = False
    for ring in rings:
        for i in range(len(ring)):
            ax, ay = ring[i]
            bx, by = ring[(i + 1) % len(ring)]
            if (ay > py) != (by > py):
                # x coordinate of the edge at height py, compared exactly
                # via cross-multiplication
                t_num = (py - ay) * (bx - ax)
                if by > ay:
                    crosses = (ax - px) * (by - ay) + t_num > 0
                else:
                    crosses = (ax - px) * (by - ay) + t_num < 0
                if crosses:
                    parity = not parity
    return parity


def _rand_rect(rng, lo=0, hi=128):
    x0 = rng.randrange(lo, hi - 8, 4)
    y0 = rng.randrange(lo, hi - 8, 4)
    w = rng.randrange(8, hi - x0, 4)
    h = rng.randrange(8, hi - y0, 4)
    return GridPolygon(((x0, y0), (x0 + w, y0), (x0 + w, y0 + h), (x0, y0 + h)))


def _rand_diamond(rng):
    cx = rng.randrange(24, 104, 4)
    cy = rng.randrange(24, 104, 4)
    r = rng.randrange(8, 24, 4)
    return GridPolygon(((cx + r, cy), (cx, cy + r), (cx - r, cy), (cx, cy - r)))


def _rand_shape(rng):
    return _rand_diamond(rng) if rng.random() < 0.3 else _rand_rect(rng)


def check_against_oracle(rng, ops=("union", "intersection", "difference")):
    """One random configuration vs the brute-force oracle; returns the
    number of compared cells (boundary-degenerate cells are excluded
    because even-odd membership is undefined on the boundary)."""
    op = rng.choice(ops)
    a = [_rand_shape(rng) for _ in range(rng.randint(1, 2))]
    b = [_rand_shape(rng) for _ in range(rng.randint(1, 2))]
    ga = [list(p.ring) for p in a]
    gb = [list(p.ring) for p in b]
    if op == "union":
        result = union(a + b)
    elif op == "intersection":
        result = intersection(union(a), union(b))
    else:
        result = difference(union(a), union(b))
    result_rings = result.all_rings()
    compared = 0
    for cy in range(1, 128, 2):
        for cx in range(1, 128, 2):
            if on_boundary(cx, cy, ga + gb) or on_boundary(cx, cy, result_rings):
                continue
            # each operand is the OR of its simple shapes
            in_a = any(inside_rings(cx, cy, [ring]) for ring in ga)
            in_b = any(inside_rings(cx, cy, [ring]) for ring in gb)
            if op == "union":
                expect = in_a or in_b
            elif op == "intersection":
                expect = in_a and in_b
            else:
                expect = in_a and not in_b
            got = point_in_tree((cx, cy), result)
            assert got == expect, (op, (cx, cy), [p.ring for p in a + b])
            compared += 1
    return compared


class TestOracle:
    def test_random_configurations(self):
        rng = random.Random(99)
        total = 0
        for _ in range(60):
            total += check_against_oracle(rng)
        assert total > 60 * 3000  # the skipped boundary sliver stays tiny

    def test_inclusion_exclusion_exact(self):
        rng = random.Random(5)
        for _ in range(100):
            a, b = _rand_shape(rng), _rand_shape(rng)
            u = union([a, b]).area2()
            i = intersection(a, b).area2()
            assert u + i == a.area2() + b.area2()

    def test_difference_complements_intersection(self):
        rng = random.Random(6)
        for _ in range(100):
            a, b = _rand_shape(rng), _rand_shape(rng)
            d = difference(a, b).area2()
            i = intersection(a, b).area2()
            assert d + i == a.area2()


class TestDeterminism:
    def test_repeated_overlays_byte_identical(self):
        rng = random.Random(11)
        shapes = [_rand_shape(rng) for _ in range(6)]
        import json
        first = json.dumps(tree_to_jsonable(union(shapes)), sort_keys=True)
        for _ in range(5):
            assert json.dumps(tree_to_jsonable(union(shapes)), sort_keys=True) == first

    def test_operand_order_irrelevant_for_union(self):
        rng = random.Random(12)
        shapes = [_rand_shape(rng) for _ in range(5)]
        base = tree_to_jsonable(union(shapes))
        for _ in range(5):
            rng.shuffle(shapes)
            assert tree_to_jsonable(union(shapes)) == base


class TestKernelParity:
    def test_pure_matches_compiled(self):
        pure = load_pure_kernel()
        from medbuild.geometry import api
        rng = random.Random(21)
        for _ in range(40):
            shapes = [_rand_shape(rng) for _ in range(3)]
            groups = [[list(p.ring)] for p in shapes]
            compiled_rings = api._kernel.overlay(groups, api._kernel.OP_UNION)
            pure_rings = pure.overlay(groups, pure.OP_UNION)
            assert compiled_rings == pure_rings

    def test_backend_reported(self):
        assert kernel_backend() in ("compiled", "pure")


class TestWorldGrid:
    def test_round_half_away_from_zero(self):
        s = ScaleMap(s=100)
        assert to_grid((0.005, -0.005), s) == (1, -1)
        assert to_grid((0.004, -0.004), s) == (0, 0)

    def test_round_trip(self):
        s = ScaleMap(s=100)
        assert to_world(to_grid((123.45, -67.89), s), s) == \
            pytest.approx((123.45, -67.89))


class TestAxisBands:
    S = ScaleMap(s=100)

    def _axis(self, start, end):
        from medbuild.layout import Axis
        return Axis(start=start, end=end, axis_type="podium")

    def test_single_axis_area(self):
        # 30 m axis, 5 m rooms both sides + 2.4 m corridor -> 30 * 12.4 m2
        axis = self._axis((0.0, 0.0), (30000.0, 0.0))
        tree = floor_contour([axis], 5000, 2400, self.S)
        assert area(tree, self.S) == pytest.approx(30 * 12.4)

    def test_corridor_band_area(self):
        axis = self._axis((0.0, 0.0), (30000.0, 0.0))
        band = union([corridor_rectangle(axis, 2400, self.S)])
        assert area(band, self.S) == pytest.approx(30 * 2.4)

    def test_crossing_axes_merge_once(self):
        a = self._axis((0.0, 0.0), (40000.0, 0.0))
        b = self._axis((20000.0, -20000.0), (20000.0, 20000.0))
        tree = floor_contour([a, b], 5000, 2400, self.S)
        overlap = 12.4 * 12.4
        assert area(tree, self.S) == pytest.approx(40 * 12.4 + 40 * 12.4 - overlap)

    def test_diagonal_axis_area(self):
        axis = self._axis((0.0, 0.0), (30000.0, 30000.0))
        tree = floor_contour([axis], 5000, 2400, self.S)
        length = (2 * 30.0 ** 2) ** 0.5
        assert area(tree, self.S) == pytest.approx(length * 12.4, rel=1e-3)


class TestValidation:
    def test_zero_area_ring_rejected(self):
        with pytest.raises(InvalidPolygon):
            GridPolygon(((0, 0), (10, 0), (20, 0)))

    def test_orientation_mismatch_rejected(self):
        with pytest.raises(InvalidPolygon):
            GridPolygon(((0, 0), (0, 10), (10, 10), (10, 0)), "ccw")

    def test_self_intersection_rejected_in_ops(self):
        bowtie = GridPolygon.__new__(GridPolygon)
        object.__setattr__(bowtie, "ring", ((0, 0), (10, 10), (10, 0), (0, 10)))
        object.__setattr__(bowtie, "orientation", "ccw")
        with pytest.raises(InvalidPolygon):
            union([bowtie])
