"""Tests for the unit-disk-graph matching algorithms."""
from __future__ import annotations

import math
import random
from decimal import Decimal, getcontext
from itertools import combinations

import pytest

from planematch.blossom import AbstractGraph, bottleneck_crossing, max_matching
from planematch.errors import DisconnectedInput
from planematch.geometry import SCALE, PointSet, cross_ids
from planematch.matching import Matching, validate
from planematch.proximity import disk_graph, emst5
from planematch.udg import one_third, plane_matching

S = SCALE
getcontext().prec = 50


def ps(*coords):
    return PointSet((round(x * S), round(y * S)) for x, y in coords)


def exact_total(pts, pairs) -> Decimal:
    return sum(Decimal(pts.sq_dist(a, b)).sqrt() for a, b in pairs)


def test_one_third_single_edge():
    pts = ps((0, 0), (1, 0))
    m = Matching.of(pts, [(0, 1)])
    out, trace = one_third(pts, m)
    assert out.pairs == ((0, 1),)
    assert trace.steps == []


def test_one_third_perpendicular_no_rotation():
    # Crossing at 90 degrees > pi/3: no rotation, classes split them.
    pts = ps((0, 0), (2, 0), (1, 1), (1, -1))
    m = Matching.of(pts, [(0, 1), (2, 3)])
    out, trace = one_third(pts, m)
    assert trace.steps == []
    assert out.size == 1
    assert validate(pts, out).is_plane


def test_one_third_small_angle_rotates():
    # Crossing angle about 11 degrees <= pi/3: rotate to the two short ends.
    pts = ps((0, 0), (2, 0), (0, -0.2), (2, 0.2))
    m = Matching.of(pts, [(0, 1), (2, 3)])
    out, trace = one_third(pts, m)
    assert len(trace.steps) == 1
    assert set(trace.steps[0].added) == {(0, 2), (1, 3)}
    assert out.size == 2
    assert validate(pts, out).is_plane


def test_one_third_trace_strictly_decreasing():
    rng = random.Random(99)
    for _ in range(100):
        n = rng.choice([4, 6, 8, 10, 12])
        coords = set()
        while len(coords) < n:
            coords.add((rng.randrange(0, 12 * S), rng.randrange(0, 12 * S)))
        pts = PointSet(sorted(coords))
        cross = bottleneck_crossing(pts)
        out, trace = one_third(pts, cross.matching)
        assert not trace.capped
        # Strict decrease, certified with 50-digit decimal arithmetic.
        prev = None
        for step in trace.steps:
            if prev is not None:
                assert exact_total(pts, step_pairs) > exact_total(pts, new_pairs)
            step_pairs = list(step.removed)
            new_pairs = list(step.added)
            assert exact_total(pts, step_pairs) > exact_total(pts, new_pairs)
            prev = step
        rep = validate(pts, out)
        assert rep.is_matching and rep.is_plane
        assert out.size >= math.ceil(cross.matching.size / 3)
        assert out.bottleneck_sq <= cross.matching.bottleneck_sq


def test_one_third_fixpoint_angles_large():
    # At the fixpoint every crossing pair meets at an angle above pi/3 and
    # each direction class is internally non-crossing.
    rng = random.Random(41)
    from planematch.udg import _direction_class, _rotation_pairing

    for _ in range(40):
        n = rng.choice([6, 8, 10])
        coords = set()
        while len(coords) < n:
            coords.add((rng.randrange(0, 9 * S), rng.randrange(0, 9 * S)))
        pts = PointSet(sorted(coords))
        cross = bottleneck_crossing(pts)
        out, trace = one_third(pts, cross.matching)
        # Recover the fixpoint matching from the trace.
        pairs = set(cross.matching.pairs)
        for step in trace.steps:
            pairs.discard(step.removed[0])
            pairs.discard(step.removed[1])
            pairs.add(step.added[0])
            pairs.add(step.added[1])
        pairs = sorted(pairs)
        for e1, e2 in combinations(pairs, 2):
            if cross_ids(pts, *e1, *e2):
                assert _rotation_pairing(pts, e1, e2) is None
            if _direction_class(pts, *e1) == _direction_class(pts, *e2):
                assert not cross_ids(pts, *e1, *e2)


def test_plane_matching_collinear_four():
    pts = ps((0, 0), (1, 0), (2, 0), (3, 0))
    m = plane_matching(pts)
    assert m.pairs == ((0, 1), (2, 3))


def test_plane_matching_star():
    coords = [(0.0, 0.0)]
    for k in range(5):
        a = 2 * math.pi * k / 5
        # Slightly under unit length so 6-decimal rounding stays inside 1.
        coords.append((0.99999 * math.cos(a), 0.99999 * math.sin(a)))
    pts = ps(*coords)
    m = plane_matching(pts)
    assert m.size == 1
    assert 0 in m.pairs[0]


def test_plane_matching_two_points():
    pts = ps((0, 0), (1, 0))
    m = plane_matching(pts)
    assert m.pairs == ((0, 1),)


def test_plane_matching_disconnected_raises():
    pts = ps((0, 0), (10, 0))
    with pytest.raises(DisconnectedInput):
        plane_matching(pts)


def connected_udg_points(rng, n):
    """Random points whose unit disk graph is connected (growth process)."""
    coords = [(0, 0)]
    seen = {(0, 0)}
    while len(coords) < n:
        bx, by = coords[rng.randrange(len(coords))]
        ang = rng.random() * 2 * math.pi
        r = 0.2 + 0.75 * rng.random()
        c = (bx + round(r * math.cos(ang) * S), by + round(r * math.sin(ang) * S))
        if c not in seen:
            seen.add(c)
            coords.append(c)
    return PointSet(sorted(coords))


def test_plane_matching_bound_and_mst_edges_random():
    rng = random.Random(2718)
    for _ in range(40):
        n = rng.randrange(2, 80)
        pts = connected_udg_points(rng, n)
        tree = emst5(pts)
        m = plane_matching(pts)
        rep = validate(pts, m)
        assert rep.is_matching and rep.is_plane
        assert m.size >= math.ceil((n - 1) / 5)
        tree_edges = set(tree.edges())
        assert all(e in tree_edges for e in m.pairs)


def path_points(rng, n):
    """Points whose unit disk graph is exactly a path."""
    coords = [(0, 0)]
    x, y = 0.0, 0.0
    heading = 0.0
    while len(coords) < n:
        heading += (rng.random() - 0.5) * 0.5
        x += 0.9 * math.cos(heading)
        y += 0.9 * math.sin(heading)
        coords.append((round(x * S), round(y * S)))
    return PointSet(coords)


def cycle_points(n):
    r = 0.95 * n / (2 * math.pi)
    return PointSet(
        (round(r * math.cos(2 * math.pi * k / n) * S),
         round(r * math.sin(2 * math.pi * k / n) * S))
        for k in range(n)
    )


def blossom_max_size(pts, sq_radius) -> int:
    g = disk_graph(pts, sq_radius)
    ag = AbstractGraph.from_edges(pts.n, g.edges())
    return len(max_matching(ag))


def test_tree_and_cycle_udg_maximum():
    rng = random.Random(5)
    for trial in range(20):
        if trial % 2 == 0:
            n = rng.randrange(3, 30)
            pts = path_points(rng, n)
        else:
            n = rng.randrange(8, 30)
            pts = cycle_points(n)
        g = disk_graph(pts, S * S)
        degs = sorted(len(a) for a in g.adj)
        # Confirm the instance really is a path or a cycle.
        if trial % 2 == 0:
            if degs[:2] != [1, 1] or any(d > 2 for d in degs):
                continue
        else:
            if any(d != 2 for d in degs):
                continue
        m = plane_matching(pts)
        assert m.size == blossom_max_size(pts, S * S)
