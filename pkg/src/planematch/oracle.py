"""Brute-force exact solvers for desk-scale instances.

``exact_bottleneck_plane`` enumerates perfect non-crossing matchings by
always matching the lowest unmatched point, pruning crossing or already-worse
branches, and returns the lexicographically least optimum. It is the ground
truth every approximation guarantee is checked against.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InstanceTooLarge, NoPlanePerfectMatching, OddPointCount
from .geometry import PointSet, segments_cross_coords
from .matching import Matching
from .proximity import DiskGraph

MAX_ORACLE_POINTS = 16


@dataclass(frozen=True)
class OracleResult:
    bottleneck_sq: int
    matching: Matching
    explored: int


def exact_bottleneck_plane(pts: PointSet) -> OracleResult:
    """Exact bottleneck plane perfect matching for n <= 16, n even."""
    n = pts.n
    if n % 2 != 0:
        raise OddPointCount(f"n must be even, got {n}")
    if n > MAX_ORACLE_POINTS:
        raise InstanceTooLarge(f"oracle limited to n <= {MAX_ORACLE_POINTS}")
    if n == 0:
        return OracleResult(0, Matching.of(pts, []), 1)
    xs, ys = pts.xs, pts.ys
    sq = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = pts.sq_dist(i, j)
            sq[i][j] = d
            sq[j][i] = d

    best_pairs: list[tuple[int, int]] | None = None
    best_bq: int | None = None
    explored = 0
    matched = [False] * n
    chosen: list[tuple[int, int]] = []

    def crosses_chosen(i: int, j: int) -> bool:
        for a, b in chosen:
            if segments_cross_coords(
                xs[a], ys[a], xs[b], ys[b], xs[i], ys[i], xs[j], ys[j]
            ):
                return True
        return False

    def rec(cur_bq: int) -> None:
        nonlocal best_pairs, best_bq, explored
        i = 0
        while i < n and matched[i]:
            i += 1
        if i == n:
            explored += 1
            if best_bq is None or cur_bq < best_bq:
                best_bq = cur_bq
                best_pairs = list(chosen)
            return
        matched[i] = True
        for j in range(i + 1, n):
            if matched[j]:
                continue
            d = sq[i][j]
            nb = d if d > cur_bq else cur_bq
            if best_bq is not None and nb >= best_bq:
                continue
            if crosses_chosen(i, j):
                continue
            matched[j] = True
            chosen.append((i, j))
            rec(nb)
            chosen.pop()
            matched[j] = False
        matched[i] = False

    rec(0)
    if best_pairs is None:
        raise NoPlanePerfectMatching("enumeration found no plane perfect matching")
    return OracleResult(
        bottleneck_sq=best_bq,
        matching=Matching.of(pts, best_pairs),
        explored=explored,
    )


def exact_max_plane_matching(g: DiskGraph, pts: PointSet) -> Matching:
    """Maximum-cardinality non-crossing matching using only edges of ``g``.

    Branch and bound over edge inclusion with crossing pruning; n <= 16.
    """
    n = g.n
    if n > MAX_ORACLE_POINTS:
        raise InstanceTooLarge(f"oracle limited to n <= {MAX_ORACLE_POINTS}")
    edges = g.edges()
    xs, ys = pts.xs, pts.ys
    m = len(edges)
    best: list[tuple[int, int]] = []
    chosen: list[tuple[int, int]] = []
    used = [False] * n

    def rec(idx: int) -> None:
        nonlocal best
        if len(chosen) + (m - idx) <= len(best):
            return
        free = n - 2 * len(chosen)
        if len(chosen) + free // 2 <= len(best):
            return
        if idx == m:
            if len(chosen) > len(best):
                best = list(chosen)
            return
        a, b = edges[idx]
        if not used[a] and not used[b]:
            ok = True
            for c, d in chosen:
                if segments_cross_coords(
                    xs[c], ys[c], xs[d], ys[d], xs[a], ys[a], xs[b], ys[b]
                ):
                    ok = False
                    break
            if ok:
                used[a] = used[b] = True
                chosen.append((a, b))
                rec(idx + 1)
                chosen.pop()
                used[a] = used[b] = False
        rec(idx + 1)

    rec(0)
    return Matching.of(pts, best)
