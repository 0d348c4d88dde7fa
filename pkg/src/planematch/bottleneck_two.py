"""Second bottleneck approximation: a plane matching of size at least 2n/5
whose edges are at most (sqrt(2)+sqrt(3)) times the optimal plane bottleneck.

Kruskal over the Delaunay edges stops as soon as every component is even;
each resulting tree (an exact MST of its points, reduced to degree five) is
then consumed iteratively. While the tree is large and some skeleton leaf is
not an anchor, a local leaf or leaf-pair is matched (Step 1). When every
skeleton leaf is an anchor, a leaf of the second-level skeleton is resolved
through one of four convex-empty-region cases (Step 2). Trees of at most six
vertices and single-vertex second-level skeletons end in closed-form base
cases. Every iteration matches at least four fifths of what it removes.
"""
from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

from .errors import (
    DegeneratePolygon,
    InvariantViolation,
    NotSkeletonLeaf,
    OddPointCount,
    TooFewPoints,
)
from .geometry import (
    PointSet,
    cmp_cw_angle,
    cmp_unsigned_angle,
    convex_empty,
    cw_ge_pi,
    cw_le_half_pi,
    dot_sign,
    orientation,
    sort_clockwise,
)
from .matching import Matching
from .proximity import (
    Forest,
    Tree,
    _degree_reduce,
    _tree_from_adj,
    delaunay,
    sorted_candidate_edges,
)


@dataclass
class EvenForest:
    """Kruskal prefix forest whose trees all have even vertex counts."""

    forest: Forest
    last_edge: tuple[int, int]
    last_sq: int


@dataclass(frozen=True)
class AnchorInfo:
    """An anchor: a skeleton leaf with two tree leaves spanning at least pi
    clockwise, plus its internal neighbour."""

    vertex: int
    leaf_a: int
    leaf_b: int
    internal: int


@dataclass
class TreeMatchResult:
    pairs: list[tuple[int, int]]
    rounds: list[tuple[int, int]]  # (vertices removed, vertices matched)
    regions: list[tuple[int, ...]]  # convex regions backing non-tree edges


def even_forest(pts: PointSet) -> EvenForest:
    """Kruskal over Delaunay edges in (length, lexicographic) order, stopped
    at the first prefix in which every component has even size.

    Each tree is the exact MST of its vertex set; the degree-five exchange is
    applied so downstream degree and angle assumptions hold.
    """
    n = pts.n
    if n % 2 != 0:
        raise OddPointCount(f"n must be even, got {n}")
    if n < 2:
        raise TooFewPoints("need at least 2 points")
    tri = delaunay(pts)
    parent = list(range(n))
    size = [1] * n

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    adj: dict[int, set[int]] = {i: set() for i in range(n)}
    odd = n
    last_edge = None
    last_sq = None
    for sq, u, v in sorted_candidate_edges(pts, tri.edges):
        ru, rv = find(u), find(v)
        if ru == rv:
            continue
        if size[ru] % 2 == 1 and size[rv] % 2 == 1:
            odd -= 2
        if size[ru] < size[rv]:
            ru, rv = rv, ru
        parent[rv] = ru
        size[ru] += size[rv]
        adj[u].add(v)
        adj[v].add(u)
        last_edge = (u, v) if u < v else (v, u)
        last_sq = sq
        if odd == 0:
            break
    if odd != 0 or last_edge is None:
        raise InvariantViolation("even forest construction did not terminate")
    _degree_reduce(pts, adj)
    seen: set[int] = set()
    trees: list[Tree] = []
    for s in range(n):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        trees.append(_tree_from_adj(pts, comp, adj))
    return EvenForest(
        forest=Forest(trees=trees, last_edge=last_edge),
        last_edge=last_edge,
        last_sq=last_sq,
    )


def is_anchor(pts: PointSet, tree: Tree, v: int) -> bool:
    """True iff skeleton leaf ``v`` has exactly one internal neighbour and
    exactly two leaf neighbours spanning a clockwise angle of at least pi.

    Raises NotSkeletonLeaf when v is not a leaf of the skeleton tree.
    """
    if v not in tree.adj or len(tree.adj[v]) < 2:
        raise NotSkeletonLeaf(f"vertex {v} is not internal")
    internal = [u for u in tree.adj[v] if len(tree.adj[u]) >= 2]
    if len(internal) > 1:
        raise NotSkeletonLeaf(f"vertex {v} has {len(internal)} internal neighbours")
    leaves = [u for u in tree.adj[v] if len(tree.adj[u]) == 1]
    if len(internal) != 1 or len(leaves) != 2:
        return False
    w = internal[0]
    u1, u2 = sort_clockwise(pts, v, leaves, w)
    return cw_ge_pi(pts, u1, v, u2)


class _TreeMatcher:
    """Incremental matcher for one even tree.

    Maintains degrees, internal-neighbour counts and the second-level
    skeleton membership under batched vertex removals, each update touching
    only a constant-size neighbourhood.
    """

    def __init__(self, pts: PointSet, tree: Tree, validate_regions: bool = False):
        self.pts = pts
        self.tree = tree
        self.validate_regions = validate_regions
        self.alive: set[int] = set(tree.vertices)
        self.adj: dict[int, set[int]] = {v: set(tree.adj[v]) for v in tree.vertices}
        self.deg: dict[int, int] = {v: len(self.adj[v]) for v in tree.vertices}
        self.int_deg: dict[int, int] = {
            v: sum(1 for u in self.adj[v] if self.deg[u] >= 2)
            for v in tree.vertices
        }
        self.t_size = tree.n
        self.tdp: set[int] = {
            v
            for v in tree.vertices
            if self.deg[v] >= 2 and self.int_deg[v] >= 2
        }
        self.pairs: list[tuple[int, int]] = []
        self.rounds: list[tuple[int, int]] = []
        self.regions: list[tuple[int, ...]] = []
        self.heap1: list[int] = []
        self.heap2: list[int] = []
        self.in1: set[int] = set()
        self.in2: set[int] = set()
        for v in tree.vertices:
            self._push1(v)
            self._push2(v)

    # -- structure maintenance -------------------------------------------

    def _push1(self, v: int) -> None:
        if v in self.alive and self.deg[v] >= 2 and self.int_deg[v] <= 1:
            if v not in self.in1:
                heapq.heappush(self.heap1, v)
                self.in1.add(v)

    def _push2(self, v: int) -> None:
        if v in self.tdp and v not in self.in2:
            heapq.heappush(self.heap2, v)
            self.in2.add(v)

    def _remove(self, removed: list[int], matched: int) -> None:
        self.rounds.append((len(removed), matched))
        rset = set(removed)
        if len(rset) != len(removed):
            raise InvariantViolation("duplicate vertex in removal batch")
        adj, deg, int_deg = self.adj, self.deg, self.int_deg
        was_int = {r: deg[r] >= 2 for r in removed}
        det: dict[int, int] = defaultdict(int)
        det_int: dict[int, int] = defaultdict(int)
        for r in removed:
            for s in adj[r]:
                if s in rset:
                    continue
                det[s] += 1
                if was_int[r]:
                    det_int[s] += 1
        flipped = []
        for s, cnt in det.items():
            old_deg = deg[s]
            deg[s] = old_deg - cnt
            int_deg[s] -= det_int[s]
            adj[s].difference_update(rset)
            if old_deg >= 2 and deg[s] <= 1:
                flipped.append(s)
        for r in removed:
            self.alive.discard(r)
            self.tdp.discard(r)
            adj[r] = set()
            deg[r] = 0
            int_deg[r] = 0
        self.t_size -= len(removed)
        for s in flipped:
            for t in adj[s]:
                int_deg[t] -= 1
        affected = set(det.keys())
        for s in flipped:
            affected.update(adj[s])
        for x in affected:
            if deg[x] >= 2 and int_deg[x] >= 2:
                self.tdp.add(x)
            else:
                self.tdp.discard(x)
        push_set = set(affected)
        for x in affected:
            push_set.update(adj[x])
        for x in push_set:
            if x in self.alive:
                self._push1(x)
                self._push2(x)

    # -- local predicates --------------------------------------------------

    def _leaves_of(self, v: int) -> list[int]:
        return sorted(u for u in self.adj[v] if self.deg[u] == 1)

    def _internal_nbr(self, v: int) -> Optional[int]:
        for u in self.adj[v]:
            if self.deg[u] >= 2:
                return u
        return None

    def _is_anchor(self, v: int) -> bool:
        if self.deg[v] != 3 or self.int_deg[v] != 1:
            return False
        w = self._internal_nbr(v)
        leaves = self._leaves_of(v)
        u1, u2 = sort_clockwise(self.pts, v, leaves, w)
        return cw_ge_pi(self.pts, u1, v, u2)

    def _anchor_leaves(self, v: int, w: int) -> tuple[int, int]:
        leaves = self._leaves_of(v)
        if len(leaves) != 2:
            raise InvariantViolation(f"anchor {v} has {len(leaves)} leaves")
        u1, u2 = sort_clockwise(self.pts, v, leaves, w)
        return u1, u2

    def _tdp_degree(self, v: int) -> int:
        return sum(1 for u in self.adj[v] if u in self.tdp)

    def _pop_step1(self) -> Optional[int]:
        while self.heap1:
            v = heapq.heappop(self.heap1)
            self.in1.discard(v)
            if v not in self.alive or self.deg[v] < 2 or self.int_deg[v] > 1:
                continue
            if self._is_anchor(v):
                continue
            return v
        return None

    def _pop_step2(self) -> Optional[int]:
        while self.heap2:
            v = heapq.heappop(self.heap2)
            self.in2.discard(v)
            if v not in self.tdp:
                continue
            if self._tdp_degree(v) != 1:
                continue
            return v
        return None

    def _add_pair(self, a: int, b: int) -> None:
        self.pairs.append((a, b) if a < b else (b, a))

    def _add_region(self, poly: tuple[int, ...]) -> None:
        self.regions.append(poly)
        if self.validate_regions and not convex_empty(self.pts, poly):
            raise InvariantViolation(f"region {poly} is not convex and empty")

    def _merge_last_rounds(self, count: int) -> None:
        """Fold the last ``count`` removal batches into one accounting round
        (used when one logical iteration removes vertices in stages)."""
        if count <= 1 or len(self.rounds) < count:
            return
        tail = self.rounds[-count:]
        del self.rounds[-count:]
        self.rounds.append(
            (sum(r for r, _ in tail), sum(m for _, m in tail))
        )

    # -- step 1 -------------------------------------------------------------

    def _step1(self, v: int) -> None:
        w = self._internal_nbr(v)
        if w is None:
            raise InvariantViolation("skeleton-isolated vertex in a large tree")
        leaves = self._leaves_of(v)
        k = len(leaves)
        if k == 1:
            self._add_pair(v, leaves[0])
            self._remove([v, leaves[0]], 2)
            return
        order = sort_clockwise(self.pts, v, leaves, w)
        for i in range(k - 1):
            u1, u2 = order[i], order[i + 1]
            if not cw_ge_pi(self.pts, u1, v, u2):
                self._add_pair(u1, u2)
                self._add_region((u1, v, u2))
                self._remove([u1, u2], 2)
                return
        raise InvariantViolation(
            "no consecutive leaf pair below pi at a non-anchor skeleton leaf"
        )

    # -- step 2 and base case machinery --------------------------------------

    def _resolve_hub(
        self,
        w: int,
        y: Optional[int],
        anchors_cw: list[int],
        x_cw: list[int],
    ) -> None:
        """Match around a hub vertex ``w`` whose non-leaf neighbours other
        than ``y`` are all anchors, then remove the consumed cluster."""
        pts = self.pts
        k = len(anchors_cw)
        ab = {v: self._anchor_leaves(v, w) for v in anchors_cw}
        removed: list[int] = [w]
        for v in anchors_cw:
            removed.extend((v, ab[v][0], ab[v][1]))
        if self.validate_regions and k >= 1:
            # The interleaved sequence a_1, v_1, b_1, ..., a_k, v_k, b_k must
            # be clockwise-sorted around the hub.
            seq: list[int] = []
            for v in anchors_cw:
                seq.extend((ab[v][0], v, ab[v][1]))
            ref = y if y is not None else seq[0]
            for i in range(len(seq) - 1):
                if cmp_cw_angle(pts, ref, w, seq[i], ref, w, seq[i + 1]) > 0:
                    raise InvariantViolation(
                        "anchor leaves are not clockwise-sorted around the hub"
                    )
        pairs_before = len(self.pairs)

        def right_of(p: int, x: int) -> bool:
            return orientation(pts, x, w, p) < 0

        def left_of(p: int, x: int) -> bool:
            return orientation(pts, x, w, p) > 0

        if k == 1:
            (v1,) = anchors_cw
            a1, b1 = ab[v1]
            if len(x_cw) >= 3:
                removed.extend(x_cw[2:])
                x_cw = x_cw[:2]
            if len(x_cw) <= 1:
                self._add_pair(a1, v1)
                self._add_pair(b1, w)
                self._add_region((b1, v1, w))
                removed.extend(x_cw)
            else:
                # Order the two leaves by their unsigned angle to the anchor.
                c = cmp_unsigned_angle(pts, v1, w, x_cw[0], v1, w, x_cw[1])
                x1, x2 = (x_cw[0], x_cw[1]) if c <= 0 else (x_cw[1], x_cw[0])
                removed.extend((x1, x2))
                if dot_sign(pts, v1, w, x1) >= 0:
                    if cw_le_half_pi(pts, x1, w, v1):
                        self._add_pair(v1, a1)
                        self._add_pair(b1, x1)
                        self._add_region((v1, b1, w, x1))
                        self._add_pair(x2, w)
                    else:
                        self._add_pair(v1, b1)
                        self._add_pair(a1, x1)
                        self._add_region((v1, x1, w, a1))
                        self._add_pair(x2, w)
                else:
                    self._add_pair(v1, a1)
                    self._add_pair(b1, w)
                    self._add_region((b1, v1, w))
                    self._add_pair(x1, x2)
                    self._add_region((x1, w, x2))
        elif k == 2:
            v1, v2 = anchors_cw
            a1, b1 = ab[v1]
            a2, b2 = ab[v2]
            if len(x_cw) >= 2:
                removed.extend(x_cw[1:])
                x_cw = x_cw[:1]
            if not x_cw:
                self._add_pair(v1, a1)
                self._add_pair(b1, w)
                self._add_region((b1, v1, w))
                self._add_pair(v2, a2)
            else:
                x = x_cw[0]
                removed.append(x)
                between = self._between(w, y, anchors_cw, x, v1, v2)
                if between:
                    if right_of(a1, x):
                        self._add_pair(x, a1)
                        self._add_region((x, w, a1, v1))
                        self._add_pair(v1, b1)
                        self._add_pair(v2, a2)
                        self._add_pair(b2, w)
                        self._add_region((b2, v2, w))
                    else:
                        self._add_pair(x, b2)
                        self._add_region((w, x, v2, b2))
                        self._add_pair(v2, a2)
                        self._add_pair(v1, a1)
                        self._add_pair(b1, w)
                        self._add_region((b1, v1, w))
                else:
                    if left_of(b1, x):
                        self._add_pair(x, b1)
                        self._add_region((w, x, v1, b1))
                        self._add_pair(v1, a1)
                        self._add_pair(v2, a2)
                        self._add_pair(b2, w)
                        self._add_region((b2, v2, w))
                    else:
                        self._add_pair(x, a2)
                        self._add_region((x, w, a2, v2))
                        self._add_pair(v2, b2)
                        self._add_pair(v1, a1)
                        self._add_pair(b1, w)
                        self._add_region((b1, v1, w))
        elif k == 3:
            v1, v2, v3 = anchors_cw
            if len(x_cw) >= 2:
                removed.extend(x_cw[1:])
                x_cw = x_cw[:1]
            if not x_cw:
                self._pair_three_anchors(w, anchors_cw, ab, used=None)
            else:
                x = x_cw[0]
                removed.append(x)
                slot = self._slot(w, y, anchors_cw, x)
                if 0 < slot < 3:
                    i, j = slot - 1, slot  # between anchors_cw[i] and [j]
                    vi, vj = anchors_cw[i], anchors_cw[j]
                    ai, bi = ab[vi]
                    aj, bj = ab[vj]
                    if right_of(ai, x):
                        self._add_pair(x, ai)
                        self._add_region((x, w, ai, vi))
                        self._add_pair(vi, bi)
                        self._pair_three_anchors(w, anchors_cw, ab, used=vi)
                    else:
                        self._add_pair(x, bj)
                        self._add_region((w, x, vj, bj))
                        self._add_pair(vj, aj)
                        self._pair_three_anchors(w, anchors_cw, ab, used=vj)
                else:
                    # Before the first anchor or after the last: mirror case.
                    if slot == 0:
                        vi, vj = anchors_cw[0], anchors_cw[1]
                    else:
                        vi, vj = anchors_cw[1], anchors_cw[2]
                    ai, bi = ab[vi]
                    aj, bj = ab[vj]
                    if left_of(bi, x):
                        self._add_pair(x, bi)
                        self._add_region((w, x, vi, bi))
                        self._add_pair(vi, ai)
                        self._pair_three_anchors(w, anchors_cw, ab, used=vi)
                    else:
                        self._add_pair(x, aj)
                        self._add_region((x, w, aj, vj))
                        self._add_pair(vj, bj)
                        self._pair_three_anchors(w, anchors_cw, ab, used=vj)
        elif k == 4:
            if x_cw:
                removed.extend(x_cw)
            self._case_four(w, anchors_cw, ab)
        else:
            raise InvariantViolation(f"hub with {k} anchors")

        matched_new = 2 * (len(self.pairs) - pairs_before)
        self._remove(removed, matched_new)

    def _pair_three_anchors(self, w, anchors_cw, ab, used) -> None:
        """Pair the anchors not consumed by a polygon with their first
        leaves, and w with the lowest free second leaf."""
        free_b = []
        for v in anchors_cw:
            if v == used:
                continue
            a, b = ab[v]
            self._add_pair(v, a)
            free_b.append((v, b))
        v, b = free_b[0]
        self._add_pair(b, w)
        self._add_region((b, v, w))

    def _slot(self, w, y, anchors_cw, x) -> int:
        """Angular slot of leaf x among the anchors: i means between
        anchors_cw[i-1] and anchors_cw[i]; 0 means before the first; k means
        after the last."""
        order = self._hub_order(w, y)
        pos = {u: i for i, u in enumerate(order)}
        px = pos[x]
        for i, v in enumerate(anchors_cw):
            if px < pos[v]:
                return i
        return len(anchors_cw)

    def _between(self, w, y, anchors_cw, x, v1, v2) -> bool:
        order = self._hub_order(w, y)
        pos = {u: i for i, u in enumerate(order)}
        return pos[v1] < pos[x] < pos[v2]

    def _hub_order(self, w, y) -> list[int]:
        others = [u for u in self.adj[w] if u != y]
        if y is not None:
            return sort_clockwise(self.pts, w, others, y)
        ref = min(u for u in others if self.deg[u] >= 2)
        return sort_clockwise(self.pts, w, others, ref)

    def _case_four(self, w, anchors_cw, ab) -> None:
        pts = self.pts
        v = anchors_cw

        def left_of(p: int, x: int) -> bool:
            return orientation(pts, x, w, p) > 0

        spans = []
        a1, b1 = ab[v[0]]
        a2, b2 = ab[v[1]]
        a3, b3 = ab[v[2]]
        a4, b4 = ab[v[3]]
        span_a = (0, 1) if left_of(b2, a1) else (2, 3)
        span_b = (1, 2) if left_of(b3, a2) else (3, 0)
        shared = set(span_a) & set(span_b)
        if len(shared) != 1:
            raise InvariantViolation("pentagon spans share no anchor")
        s = shared.pop()
        vs = v[s]
        as_, bs = ab[vs]

        def wedge_args(span):
            # vs as the right anchor: wedge cw(b_s, v_s, w); as the left
            # anchor: wedge cw(w, v_s, a_s).
            if span[1] == s:
                return (bs, vs, w)
            return (w, vs, as_)

        wa = wedge_args(span_a)
        wb = wedge_args(span_b)
        c = cmp_cw_angle(pts, *wa, *wb)
        if c < 0:
            chosen = span_a
        elif c > 0:
            chosen = span_b
        else:
            key_a = tuple(sorted((v[span_a[0]], v[span_a[1]])))
            key_b = tuple(sorted((v[span_b[0]], v[span_b[1]])))
            chosen = span_a if key_a <= key_b else span_b
        li, ri = chosen
        vl, vr = v[li], v[ri]
        al, bl = ab[vl]
        ar, br = ab[vr]
        self._add_pair(al, br)
        self._add_region((al, vl, vr, br, w))
        self._add_pair(vl, bl)
        self._add_pair(vr, ar)
        free_b = []
        for i in range(4):
            if i in chosen:
                continue
            vm = v[i]
            am, bm = ab[vm]
            self._add_pair(vm, am)
            free_b.append((i, vm, bm))
        free_b.sort()
        _, vf, bf = free_b[0]
        self._add_pair(bf, w)
        self._add_region((bf, vf, w))

    def _step2(self, w: int) -> None:
        y = None
        for u in self.adj[w]:
            if u in self.tdp:
                y = u
                break
        if y is None:
            raise InvariantViolation("second-skeleton leaf without neighbour")
        order = self._hub_order(w, y)
        anchors_cw = [u for u in order if self.deg[u] >= 2]
        x_cw = [u for u in order if self.deg[u] == 1]
        for v in anchors_cw:
            if not self._is_anchor(v):
                raise InvariantViolation(f"hub neighbour {v} is not an anchor")
        self._resolve_hub(w, y, anchors_cw, x_cw)

    def _base_case_hub(self, w: int) -> None:
        """Single second-level-skeleton vertex: consume the whole tree."""
        order = self._hub_order(w, None)
        anchors_cw = [u for u in order if self.deg[u] >= 2]
        x_cw = [u for u in order if self.deg[u] == 1]
        k = len(anchors_cw)
        merge_rounds = 1
        if k < 2:
            raise InvariantViolation("base hub must touch at least two anchors")
        if k == 2 and len(x_cw) == 3:
            # Two cyclically consecutive leaves exist; pair the first such.
            pos = {u: i for i, u in enumerate(order)}
            m = len(order)
            pair = None
            for i in range(m):
                u1, u2 = order[i], order[(i + 1) % m]
                if self.deg[u1] == 1 and self.deg[u2] == 1:
                    pair = (u1, u2)
                    break
            if pair is None:
                raise InvariantViolation("no consecutive leaf pair at the hub")
            if cw_ge_pi(self.pts, pair[0], w, pair[1]):
                raise InvariantViolation("consecutive hub leaves span >= pi")
            self._add_pair(*pair)
            self._add_region((pair[0], w, pair[1]))
            self._remove(list(pair), 2)
            x_cw = [u for u in x_cw if u not in pair]
            merge_rounds = 2
        if k == 5:
            v5 = anchors_cw[4]
            a5, b5 = self._anchor_leaves(v5, w)
            self._add_pair(v5, a5)
            self._remove([v5, a5, b5], 2)
            anchors_cw = anchors_cw[:4]
            merge_rounds += 1
        self._resolve_hub(w, None, anchors_cw, x_cw)
        self._merge_last_rounds(merge_rounds)

    # -- base case: at most six vertices -------------------------------------

    def _match_four(self, vs: list[int]) -> None:
        pts = self.pts
        center = None
        for v in vs:
            if self.deg[v] == 3:
                center = v
                break
        pairs_before = len(self.pairs)
        if center is None:
            # Path: each end pairs with its neighbour.
            ends = sorted(v for v in vs if self.deg[v] == 1)
            e1 = ends[0]
            n1 = next(iter(self.adj[e1]))
            rest = [v for v in vs if v not in (e1, n1)]
            self._add_pair(e1, n1)
            self._add_pair(rest[0], rest[1])
        else:
            leaves = self._leaves_of(center)
            best = None
            for i in range(3):
                for j in range(i + 1, 3):
                    cand = (leaves[i], leaves[j])
                    if best is None or (
                        cmp_unsigned_angle(
                            pts, cand[0], center, cand[1], best[0], center, best[1]
                        )
                        < 0
                    ):
                        best = cand
            rest = [u for u in leaves if u not in best][0]
            self._add_pair(*best)
            self._add_region((best[0], center, best[1]))
            self._add_pair(center, rest)
        self._remove(list(vs), 2 * (len(self.pairs) - pairs_before))

    def _match_star6(self, center: int) -> None:
        pts = self.pts
        leaves = self._leaves_of(center)
        ref = leaves[0]
        order = [ref] + sort_clockwise(pts, center, [u for u in leaves if u != ref], ref)
        gaps_ok = [
            not cw_ge_pi(pts, order[i], center, order[(i + 1) % 5])
            for i in range(5)
        ]
        for i in range(5):
            if gaps_ok[i] and gaps_ok[(i + 2) % 5]:
                p1 = (order[i], order[(i + 1) % 5])
                p2 = (order[(i + 2) % 5], order[(i + 3) % 5])
                spare = order[(i + 4) % 5]
                self._add_pair(*p1)
                self._add_region((p1[0], center, p1[1]))
                self._add_pair(*p2)
                self._add_region((p2[0], center, p2[1]))
                self._add_pair(center, spare)
                self._remove([center] + leaves, 6)
                return
        raise InvariantViolation("no two disjoint sub-pi gaps in a 5-star")

    def _match_six_two_centers(self, v1: int, v2: int) -> None:
        pts = self.pts
        a1, b1 = self._anchor_leaves(v1, v2)
        a2, b2 = self._anchor_leaves(v2, v1)
        anch1 = cw_ge_pi(pts, a1, v1, b1)
        anch2 = cw_ge_pi(pts, a2, v2, b2)
        pairs_before = len(self.pairs)
        if not anch1 and not anch2:
            self._add_pair(a1, b1)
            self._add_region((a1, v1, b1))
            self._add_pair(a2, b2)
            self._add_region((a2, v2, b2))
            self._add_pair(v1, v2)
        elif anch1 and anch2:
            if cw_le_half_pi(pts, v1, v2, a2):
                self._add_pair(v1, b1)
                self._add_pair(v2, b2)
                self._add_pair(a1, a2)
                self._add_region((v1, a2, v2, a1))
            elif cw_le_half_pi(pts, b2, v2, v1):
                self._add_pair(v1, a1)
                self._add_pair(v2, a2)
                self._add_pair(b1, b2)
                self._add_region((v1, b1, v2, b2))
            else:
                raise InvariantViolation("two-anchor hub without a half-pi wedge")
        else:
            if anch2:
                v1, v2 = v2, v1
                a1, b1 = self._anchor_leaves(v1, v2)
                a2, b2 = self._anchor_leaves(v2, v1)
            # v1 is the anchor. Its spare leaf pairs across to v2 through an
            # empty triangle at v1; pick the smaller wedge, verify at runtime.
            options = [
                ((v1, a1), (b1, v2), (b1, v1, v2)),
                ((v1, b1), (a1, v2), (v2, v1, a1)),
            ]
            c = cmp_cw_angle(pts, b1, v1, v2, v2, v1, a1)
            ordered = options if c <= 0 else options[::-1]
            done = False
            for spoke, chord, tri in ordered:
                try:
                    ok = convex_empty(pts, tri)
                except DegeneratePolygon:
                    ok = False
                if ok:
                    self._add_pair(*spoke)
                    self._add_pair(*chord)
                    self.regions.append(tri)
                    self._add_pair(a2, b2)
                    self._add_region((a2, v2, b2))
                    done = True
                    break
            if not done:
                raise InvariantViolation("one-anchor six-vertex case failed")
        self._remove(
            [v1, v2, a1, b1, a2, b2], 2 * (len(self.pairs) - pairs_before)
        )

    def _base_small(self) -> None:
        t = self.t_size
        vs = sorted(self.alive)
        if t == 0:
            return
        if t in (1, 3):
            raise InvariantViolation(f"unreachable base case t={t}")
        if t == 2:
            a, b = vs
            if b not in self.adj[a]:
                raise InvariantViolation("two leftover vertices not adjacent")
            self._add_pair(a, b)
            self._remove(vs, 2)
            return
        if t == 4:
            self._match_four(vs)
            return
        if t == 5:
            maxdeg = max(self.deg[v] for v in vs)
            cands = sorted(
                u
                for u in vs
                if self.deg[u] == 1
                and any(self.deg[x] == maxdeg for x in self.adj[u])
            )
            if not cands:
                raise InvariantViolation("five-vertex tree without droppable leaf")
            drop = cands[0]
            self._remove([drop], 0)
            self._match_four(sorted(self.alive))
            self._merge_last_rounds(2)
            return
        # t == 6
        for u in vs:
            if self.deg[u] == 1:
                d = next(iter(self.adj[u]))
                if self.deg[d] == 2:
                    self._add_pair(u, d)
                    self._remove([u, d], 2)
                    self._match_four(sorted(self.alive))
                    return
        centers = [v for v in vs if self.deg[v] == 5]
        if centers:
            self._match_star6(centers[0])
            return
        deg3 = sorted(v for v in vs if self.deg[v] == 3)
        if len(deg3) != 2 or deg3[1] not in self.adj[deg3[0]]:
            raise InvariantViolation("unexpected six-vertex tree shape")
        self._match_six_two_centers(deg3[0], deg3[1])

    # -- driver ---------------------------------------------------------------

    def run(self) -> TreeMatchResult:
        if self.t_size % 2 != 0:
            raise OddPointCount(f"tree has odd size {self.t_size}")
        while self.t_size > 6:
            v = self._pop_step1()
            if v is not None:
                self._step1(v)
                continue
            if len(self.tdp) == 1:
                self._base_case_hub(next(iter(self.tdp)))
                return TreeMatchResult(self.pairs, self.rounds, self.regions)
            w = self._pop_step2()
            if w is None:
                raise InvariantViolation("no second-skeleton leaf available")
            self._step2(w)
        self._base_small()
        return TreeMatchResult(self.pairs, self.rounds, self.regions)


def match_tree_detailed(
    pts: PointSet, tree: Tree, validate_regions: bool = False
) -> TreeMatchResult:
    """Full matching result for one even tree, with instrumentation."""
    return _TreeMatcher(pts, tree, validate_regions).run()


def match_tree_second(
    pts: PointSet, tree: Tree, validate_regions: bool = False
) -> Matching:
    """Plane matching of one even tree covering at least 4/5 of the vertices
    removed in every iteration (hence at least 2n/5 pairs overall), with all
    edges within (sqrt(2)+sqrt(3)) times the tree's longest edge."""
    res = match_tree_detailed(pts, tree, validate_regions)
    return Matching.of(pts, res.pairs)


def second_approx(pts: PointSet, validate_regions: bool = False) -> Matching:
    """Plane matching of size at least 2n/5 whose bottleneck is at most
    (sqrt(2)+sqrt(3)) times the optimal plane-perfect-matching bottleneck."""
    n = pts.n
    if n % 2 != 0:
        raise OddPointCount(f"n must be even, got {n}")
    if n == 0:
        return Matching.of(pts, [])
    ef = even_forest(pts)
    pairs: list[tuple[int, int]] = []
    for tree in ef.forest.trees:
        res = match_tree_detailed(pts, tree, validate_regions)
        pairs.extend(res.pairs)
    return Matching.of(pts, pairs)
