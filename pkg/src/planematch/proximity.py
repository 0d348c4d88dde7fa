"""Proximity structures: Delaunay triangulation, degree-bounded Euclidean
MST, threshold forests, disk graphs, second-closest queries and skeletons.

The Delaunay triangulation is computed with scipy (Qhull) and then repaired
into a canonical exact triangulation: every internal edge is certified with
an exact integer incircle test, locally non-Delaunay edges are flipped, and
exactly co-circular quads are flipped to the lexicographically smaller
diagonal. The result is deterministic and always contains the Euclidean MST.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import TooFewPoints
from .geometry import PointSet, angle_exactly_third_pi, orient, sort_clockwise


@dataclass(frozen=True)
class Triangulation:
    """Edge and triangle lists of a planar triangulation over point ids."""

    edges: tuple[tuple[int, int], ...]
    triangles: tuple[tuple[int, int, int], ...]


@dataclass
class Tree:
    """A tree over a subset of point ids with exact squared edge lengths."""

    vertices: tuple[int, ...]
    adj: dict[int, list[int]]
    edge_sq: dict[tuple[int, int], int]

    @property
    def n(self) -> int:
        return len(self.vertices)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        return list(self.edge_sq.keys())

    def leaves(self) -> list[int]:
        return [v for v in self.vertices if len(self.adj[v]) == 1]

    def max_edge_sq(self) -> int:
        return max(self.edge_sq.values(), default=0)

    def total_sq_lengths(self) -> list[int]:
        return sorted(self.edge_sq.values())


@dataclass
class Forest:
    """Vertex-disjoint trees jointly covering a point set."""

    trees: list[Tree]
    threshold_sq: Optional[int] = None
    last_edge: Optional[tuple[int, int]] = None

    def tree_of(self) -> dict[int, int]:
        owner: dict[int, int] = {}
        for idx, t in enumerate(self.trees):
            for v in t.vertices:
                owner[v] = idx
        return owner


@dataclass
class DiskGraph:
    """Adjacency of all point pairs at squared distance <= sq_radius."""

    adj: list[list[int]]
    sq_radius: int

    @property
    def n(self) -> int:
        return len(self.adj)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                if u < v:
                    out.append((u, v))
        return out


@dataclass
class SkeletonTree:
    """Induced subtree on the internal (degree >= 2) vertices of a tree."""

    tree: Tree
    back_map: tuple[int, ...]  # skeleton vertex ids, identical to source ids

    @property
    def n(self) -> int:
        return self.tree.n


def _edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _coord_edge_key(pts: PointSet, u: int, v: int):
    a = (pts.xs[u], pts.ys[u])
    b = (pts.xs[v], pts.ys[v])
    return (a, b) if a < b else (b, a)


def _collinear_chain(pts: PointSet) -> Triangulation:
    order = sorted(range(pts.n), key=lambda i: (pts.xs[i], pts.ys[i]))
    edges = tuple(_edge_key(order[i], order[i + 1]) for i in range(pts.n - 1))
    return Triangulation(edges=edges, triangles=())


def _incircle_det_int(pts: PointSet, a: int, b: int, c: int, d: int) -> int:
    xs, ys = pts.xs, pts.ys
    adx = xs[a] - xs[d]
    ady = ys[a] - ys[d]
    bdx = xs[b] - xs[d]
    bdy = ys[b] - ys[d]
    cdx = xs[c] - xs[d]
    cdy = ys[c] - ys[d]
    ad2 = adx * adx + ady * ady
    bd2 = bdx * bdx + bdy * bdy
    cd2 = cdx * cdx + cdy * cdy
    return (
        adx * (bdy * cd2 - cdy * bd2)
        - ady * (bdx * cd2 - cdx * bd2)
        + ad2 * (bdx * cdy - cdx * bdy)
    )


class _FlipMesh:
    """Minimal editable triangulation supporting Lawson flips."""

    def __init__(self, pts: PointSet, triangles: list[list[int]]):
        self.pts = pts
        self.tris: list[Optional[list[int]]] = []
        self.edge_map: dict[tuple[int, int], list[int]] = {}
        for t in triangles:
            self._add_tri(t)

    def _add_tri(self, t) -> int:
        a, b, c = t
        xs, ys = self.pts.xs, self.pts.ys
        if orient(xs[a], ys[a], xs[b], ys[b], xs[c], ys[c]) < 0:
            a, b, c = a, c, b
        idx = len(self.tris)
        self.tris.append([a, b, c])
        for e in (_edge_key(a, b), _edge_key(b, c), _edge_key(a, c)):
            self.edge_map.setdefault(e, []).append(idx)
        return idx

    def _remove_tri(self, idx: int) -> None:
        a, b, c = self.tris[idx]
        for e in (_edge_key(a, b), _edge_key(b, c), _edge_key(a, c)):
            lst = self.edge_map[e]
            lst.remove(idx)
            if not lst:
                del self.edge_map[e]
        self.tris[idx] = None

    def opposite(self, tri_idx: int, edge: tuple[int, int]) -> int:
        for v in self.tris[tri_idx]:
            if v not in edge:
                return v
        raise AssertionError("edge not part of triangle")

    def flip(self, edge: tuple[int, int]) -> Optional[tuple[int, int]]:
        """Replace the diagonal ``edge`` of its two incident triangles by the
        other diagonal; returns the new edge, or None if not flippable."""
        tris = self.edge_map.get(edge)
        if tris is None or len(tris) != 2:
            return None
        t1, t2 = tris
        p = self.opposite(t1, edge)
        q = self.opposite(t2, edge)
        u, v = edge
        xs, ys = self.pts.xs, self.pts.ys
        # The quad u-p-v-q must be strictly convex for the flip to be valid.
        o_up = orient(xs[p], ys[p], xs[q], ys[q], xs[u], ys[u])
        o_vq = orient(xs[p], ys[p], xs[q], ys[q], xs[v], ys[v])
        if o_up == 0 or o_vq == 0 or o_up == o_vq:
            return None
        self._remove_tri(max(t1, t2))
        self._remove_tri(min(t1, t2))
        self._add_tri([p, q, u])
        self._add_tri([p, q, v])
        return _edge_key(p, q)

    def live_triangles(self) -> list[tuple[int, int, int]]:
        return [tuple(sorted(t)) for t in self.tris if t is not None]

    def live_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edge_map.keys())


def _canonicalize(pts: PointSet, mesh: _FlipMesh) -> None:
    """Lawson flip loop with exact incircle tests.

    Flips every locally non-Delaunay internal edge, and flips exactly
    co-circular quads whose other diagonal has a lexicographically smaller
    coordinate key. Terminates because each flip strictly decreases the
    lifted potential or, at equal potential, the sorted edge-key multiset.
    """
    pending = list(mesh.edge_map.keys())
    in_queue = set(pending)
    guard = 0
    limit = 20 * max(1, len(mesh.edge_map)) + 1000
    while pending:
        guard += 1
        if guard > limit:
            raise RuntimeError("delaunay canonicalization did not converge")
        edge = pending.pop()
        in_queue.discard(edge)
        tris = mesh.edge_map.get(edge)
        if tris is None or len(tris) != 2:
            continue
        t1, t2 = tris
        p = mesh.opposite(t1, edge)
        q = mesh.opposite(t2, edge)
        a, b, c = mesh.tris[t1]
        det = _incircle_det_int(pts, a, b, c, q)
        do_flip = False
        if det > 0:
            do_flip = True
        elif det == 0:
            alt = _edge_key(p, q)
            if _coord_edge_key(pts, *alt) < _coord_edge_key(pts, *edge):
                do_flip = True
        if not do_flip:
            continue
        new_edge = mesh.flip(edge)
        if new_edge is None:
            continue
        for t in mesh.edge_map[new_edge]:
            tri = mesh.tris[t]
            for e in (
                _edge_key(tri[0], tri[1]),
                _edge_key(tri[1], tri[2]),
                _edge_key(tri[0], tri[2]),
            ):
                if e != new_edge and e not in in_queue:
                    pending.append(e)
                    in_queue.add(e)


def delaunay(pts: PointSet) -> Triangulation:
    """Delaunay triangulation with exact, deterministic tie handling.

    Co-circular ties are resolved toward the lexicographically smallest
    diagonal. Fully collinear input degenerates to the consecutive-pair
    chain, which still contains the Euclidean MST.
    """
    n = pts.n
    if n < 2:
        raise TooFewPoints(f"need at least 2 points, got {n}")
    if n == 2:
        return Triangulation(edges=(_edge_key(0, 1),), triangles=())
    xs, ys = pts.xs, pts.ys
    collinear = True
    for k in range(2, n):
        if orient(xs[0], ys[0], xs[1], ys[1], xs[k], ys[k]) != 0:
            collinear = False
            break
    if collinear:
        return _collinear_chain(pts)

    from scipy.spatial import Delaunay as _SciDelaunay
    from scipy.spatial import QhullError

    coords = pts.coords_float()
    try:
        tri = _SciDelaunay(coords)
    except QhullError:
        tri = _SciDelaunay(coords, qhull_options="QJ")

    simplices = tri.simplices.tolist()
    mesh = _FlipMesh(pts, simplices)
    _canonicalize(pts, mesh)
    # Points dropped by Qhull merging (exact duplicates are impossible, but
    # near-collinear boundary points can vanish) would break MST coverage;
    # verify coverage and fail loudly if violated.
    covered = set()
    for e in mesh.edge_map.keys():
        covered.add(e[0])
        covered.add(e[1])
    if len(covered) != n:
        missing = [i for i in range(n) if i not in covered]
        raise RuntimeError(f"triangulation dropped points: {missing[:5]}")
    return Triangulation(
        edges=tuple(mesh.live_edges()),
        triangles=tuple(mesh.live_triangles()),
    )


class _UnionFind:
    __slots__ = ("parent", "size")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def sorted_candidate_edges(pts: PointSet, edges) -> list[tuple[int, int, int]]:
    """Edges as (sq_length, u, v), sorted by (length, lexicographic pair)."""
    out = []
    for u, v in edges:
        if u > v:
            u, v = v, u
        out.append((pts.sq_dist(u, v), u, v))
    out.sort()
    return out


def _degree_reduce(pts: PointSet, adj: dict[int, set[int]]) -> None:
    """Reduce every degree-6 vertex by the exact pi/3 local exchange.

    In a Euclidean MST a degree-6 vertex forces six equal-length edges at
    exactly pi/3 apart; replacing one of a consecutive pair by the leaf-leaf
    edge keeps total weight and lowers the degree. The exchange endpoint is
    chosen to avoid creating new degree-6 vertices whenever possible.
    """
    over = [v for v, nb in adj.items() if len(nb) >= 6]
    guard = 0
    while over:
        guard += 1
        if guard > 10 * len(adj) + 100:
            raise RuntimeError("degree reduction did not converge")
        v = over.pop()
        if len(adj[v]) < 6:
            continue
        nbrs = sort_clockwise(pts, v, sorted(adj[v]), sorted(adj[v])[0])
        k = len(nbrs)
        candidates = []
        for i in range(k):
            u, w = nbrs[i], nbrs[(i + 1) % k]
            if angle_exactly_third_pi(pts, u, v, w):
                candidates.append((u, w))
        if not candidates:
            raise RuntimeError("degree-6 vertex without an exact pi/3 pair")
        # Keep the edge to the endpoint of lowest degree; the kept endpoint
        # gains the new leaf-leaf edge.
        best = None
        for u, w in candidates:
            for keep, drop in ((u, w), (w, u)):
                key = (len(adj[keep]), keep, drop)
                if best is None or key < best[0]:
                    best = (key, keep, drop)
        _, keep, drop = best
        adj[v].remove(drop)
        adj[drop].remove(v)
        adj[keep].add(drop)
        adj[drop].add(keep)
        for x in (keep, drop, v):
            if len(adj[x]) >= 6:
                over.append(x)


def _tree_from_adj(pts: PointSet, vertices, adj) -> Tree:
    verts = tuple(sorted(vertices))
    tadj = {v: sorted(adj[v]) for v in verts}
    edge_sq = {}
    for v in verts:
        for u in tadj[v]:
            if v < u:
                edge_sq[(v, u)] = pts.sq_dist(v, u)
    return Tree(vertices=verts, adj=tadj, edge_sq=edge_sq)


def emst5(pts: PointSet) -> Tree:
    """Euclidean minimum spanning tree with maximum degree at most five.

    Kruskal over the Delaunay edges with (length, lexicographic) tie order,
    followed by the exact pi/3 exchange on any degree-6 vertex. Total weight
    equals the unconstrained EMST weight.
    """
    n = pts.n
    if n < 1:
        raise TooFewPoints("need at least 1 point")
    adj: dict[int, set[int]] = {i: set() for i in range(n)}
    if n == 1:
        return _tree_from_adj(pts, [0], adj)
    tri = delaunay(pts)
    uf = _UnionFind(n)
    taken = 0
    for _, u, v in sorted_candidate_edges(pts, tri.edges):
        if uf.union(u, v):
            adj[u].add(v)
            adj[v].add(u)
            taken += 1
            if taken == n - 1:
                break
    _degree_reduce(pts, adj)
    return _tree_from_adj(pts, range(n), adj)


def forest_leq(tree: Tree, sq_limit: int, pts: PointSet) -> Forest:
    """Forest of the tree edges with squared length at most ``sq_limit``."""
    adj: dict[int, set[int]] = {v: set() for v in tree.vertices}
    for (u, v), sq in tree.edge_sq.items():
        if sq <= sq_limit:
            adj[u].add(v)
            adj[v].add(u)
    seen: set[int] = set()
    trees: list[Tree] = []
    for start in tree.vertices:
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        trees.append(_tree_from_adj(pts, comp, adj))
    trees.sort(key=lambda t: t.vertices[0])
    return Forest(trees=trees, threshold_sq=sq_limit)


def disk_graph(pts: PointSet, sq_radius: int) -> DiskGraph:
    """Graph joining point pairs at squared distance <= sq_radius.

    Built by grid bucketing with cells of side about the radius, so the
    construction cost is proportional to the output for dispersed inputs.
    """
    import math as _math

    n = pts.n
    adj: list[list[int]] = [[] for _ in range(n)]
    if n == 0 or sq_radius < 0:
        return DiskGraph(adj=adj, sq_radius=sq_radius)
    xs, ys = pts.xs, pts.ys
    cell = max(1, _math.isqrt(sq_radius) + 1)
    buckets: dict[tuple[int, int], list[int]] = {}
    for i in range(n):
        buckets.setdefault((xs[i] // cell, ys[i] // cell), []).append(i)
    for (cx, cy), members in buckets.items():
        neighborhood = []
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                neighborhood.extend(buckets.get((cx + dx, cy + dy), ()))
        for i in members:
            xi, yi = xs[i], ys[i]
            for j in neighborhood:
                if j <= i:
                    continue
                dx = xi - xs[j]
                dy = yi - ys[j]
                if dx * dx + dy * dy <= sq_radius:
                    adj[i].append(j)
                    adj[j].append(i)
    for lst in adj:
        lst.sort()
    return DiskGraph(adj=adj, sq_radius=sq_radius)


class NearestIndex:
    """Static k-nearest-neighbour index over a PointSet.

    Backed by a scipy cKDTree for candidate generation; the final choice is
    always made with exact integer squared distances and lexicographic id
    tie-breaks, escalating the candidate count when float ties are possible.
    """

    def __init__(self, pts: PointSet):
        from scipy.spatial import cKDTree

        self.pts = pts
        self._tree = cKDTree(pts.coords_float())

    def second_closest(self, p: int, v: int) -> int:
        pts = self.pts
        n = pts.n
        k = min(n, 8)
        coords = pts.coords_float()
        while True:
            dists, idxs = self._tree.query(coords[p], k=k)
            idx_list = np.atleast_1d(idxs).tolist()
            best = None
            for j in idx_list:
                if j == p or j == v or j >= n:
                    continue
                key = (pts.sq_dist(p, j), j)
                if best is None or key < best:
                    best = key
            if best is not None:
                # Escalate when unseen points could still tie or beat the
                # current best within float tolerance.
                if k < n:
                    horizon = float(np.atleast_1d(dists)[-1])
                    if horizon * horizon <= best[0] * (1 + 1e-9):
                        k = min(n, k * 2)
                        continue
                return best[1]
            if k >= n:
                raise TooFewPoints("no candidate point besides p and v")
            k = min(n, k * 2)

    def second_closest_batch(self, queries: list[tuple[int, int]]) -> list[int]:
        """Vectorized second_closest for many (p, v) pairs."""
        if not queries:
            return []
        pts = self.pts
        n = pts.n
        coords = pts.coords_float()
        k = min(n, 8)
        qc = coords[[p for p, _ in queries]]
        dists, idxs = self._tree.query(qc, k=k)
        dists = np.atleast_2d(dists)
        idxs = np.atleast_2d(idxs)
        out: list[int] = []
        for row, (p, v) in enumerate(queries):
            best = None
            for col in range(idxs.shape[1]):
                j = int(idxs[row, col])
                if j == p or j == v or j >= n:
                    continue
                key = (pts.sq_dist(p, j), j)
                if best is None or key < best:
                    best = key
            horizon = float(dists[row, -1])
            if best is None or (
                k < n and horizon * horizon <= best[0] * (1 + 1e-9)
            ):
                out.append(self.second_closest(p, v))
            else:
                out.append(best[1])
        return out


_NN_CACHE: dict[int, NearestIndex] = {}


def nearest_index(pts: PointSet) -> NearestIndex:
    """The per-PointSet nearest-neighbour index, built once and cached."""
    key = id(pts)
    idx = _NN_CACHE.get(key)
    if idx is None or idx.pts is not pts:
        idx = NearestIndex(pts)
        _NN_CACHE.clear()
        _NN_CACHE[key] = idx
    return idx


def second_closest(pts: PointSet, p: int, v: int) -> int:
    """The nearest point to p among all points except p and v.

    Distance ties break toward the smaller id.
    """
    if pts.n < 3:
        raise TooFewPoints("second_closest needs at least 3 points")
    pts.check_id(p)
    pts.check_id(v)
    return nearest_index(pts).second_closest(p, v)


def skeleton(tree: Tree) -> SkeletonTree:
    """The induced subtree on vertices of degree >= 2.

    Empty for trees with at most two vertices; an isolated vertex also
    yields an empty skeleton.
    """
    internal = [v for v in tree.vertices if len(tree.adj[v]) >= 2]
    internal_set = set(internal)
    adj = {v: [u for u in tree.adj[v] if u in internal_set] for v in internal}
    edge_sq = {}
    for v in internal:
        for u in adj[v]:
            if v < u:
                edge_sq[(v, u)] = tree.edge_sq[_edge_key(v, u)]
    sk = Tree(vertices=tuple(internal), adj=adj, edge_sq=edge_sq)
    return SkeletonTree(tree=sk, back_map=tuple(internal))
