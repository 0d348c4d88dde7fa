"""Maximum-cardinality matching in general graphs (blossom shrinking) and
the possibly-crossing bottleneck perfect matching built on top of it.

The matcher is the classic augmenting-path algorithm with blossom
contraction via base pointers; worst case O(V^3), which is ample for the
distance-set binary search used here.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import OddPointCount
from .geometry import PointSet
from .matching import Matching
from .proximity import disk_graph


@dataclass(frozen=True)
class AbstractGraph:
    """A simple undirected graph with no geometry attached."""

    n: int
    adj: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges) -> "AbstractGraph":
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                continue
            adj[u].add(v)
            adj[v].add(u)
        return cls(n=n, adj=tuple(tuple(sorted(a)) for a in adj))


def max_matching_pairs(n: int, adj) -> list[tuple[int, int]]:
    """Maximum-cardinality matching as a sorted list of vertex pairs."""
    match = [-1] * n
    p = [-1] * n
    base = list(range(n))
    used = [False] * n
    blossom = [False] * n

    # Greedy initialization cuts down the number of augmenting searches.
    for v in range(n):
        if match[v] == -1:
            for u in adj[v]:
                if match[u] == -1:
                    match[v] = u
                    match[u] = v
                    break

    def lca(a: int, b: int) -> int:
        used_path = [False] * n
        x = a
        while True:
            x = base[x]
            used_path[x] = True
            if match[x] == -1:
                break
            x = p[match[x]]
        y = b
        while True:
            y = base[y]
            if used_path[y]:
                return y
            y = p[match[y]]

    def mark_path(v: int, b: int, child: int) -> None:
        while base[v] != b:
            blossom[base[v]] = True
            blossom[base[match[v]]] = True
            p[v] = child
            child = match[v]
            v = p[match[v]]

    def find_path(root: int) -> bool:
        for i in range(n):
            used[i] = False
            p[i] = -1
            base[i] = i
        used[root] = True
        q = deque([root])
        while q:
            v = q.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and p[match[to]] != -1):
                    curbase = lca(v, to)
                    for i in range(n):
                        blossom[i] = False
                    mark_path(v, curbase, to)
                    mark_path(to, curbase, v)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = curbase
                            if not used[i]:
                                used[i] = True
                                q.append(i)
                elif p[to] == -1:
                    p[to] = v
                    if match[to] == -1:
                        # Augment along the alternating path to the root.
                        u = to
                        while u != -1:
                            pv = p[u]
                            ppv = match[pv]
                            match[u] = pv
                            match[pv] = u
                            u = ppv
                        return True
                    used[match[to]] = True
                    q.append(match[to])
        return False

    for v in range(n):
        if match[v] == -1:
            find_path(v)
    return sorted((v, match[v]) for v in range(n) if match[v] > v)


def max_matching(g: AbstractGraph) -> tuple[tuple[int, int], ...]:
    """Maximum-cardinality matching of an abstract graph."""
    return tuple(max_matching_pairs(g.n, g.adj))


@dataclass(frozen=True)
class BottleneckCrossingResult:
    """Minimum bottleneck over all (possibly crossing) perfect matchings."""

    bottleneck_sq: int
    matching: Matching


def bottleneck_crossing(pts: PointSet) -> BottleneckCrossingResult:
    """Minimum lambda in the pairwise-distance set such that the disk graph
    of radius lambda admits a perfect matching, plus a witness matching.
    """
    n = pts.n
    if n % 2 != 0:
        raise OddPointCount(f"n must be even, got {n}")
    if n == 0:
        return BottleneckCrossingResult(0, Matching.of(pts, []))
    dists = sorted({pts.sq_dist(i, j) for i in range(n) for j in range(i + 1, n)})

    def feasible(sq: int):
        g = disk_graph(pts, sq)
        pairs = max_matching_pairs(n, g.adj)
        return pairs if len(pairs) * 2 == n else None

    lo, hi = 0, len(dists) - 1
    witness = feasible(dists[hi])
    assert witness is not None  # complete graph always has a perfect matching
    while lo < hi:
        mid = (lo + hi) // 2
        pairs = feasible(dists[mid])
        if pairs is not None:
            witness = pairs
            hi = mid
        else:
            lo = mid + 1
    return BottleneckCrossingResult(
        bottleneck_sq=dists[hi], matching=Matching.of(pts, witness)
    )
