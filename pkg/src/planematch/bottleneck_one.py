"""First bottleneck approximation: a plane matching of size at least n/5
whose edges are no longer than the optimal plane-perfect-matching bottleneck.

The driver binary-searches the sorted MST edge lengths for the shortest
threshold the decision procedure cannot refute, which yields a forest of
even trees plus one stored seed pair per tree that has two leaves on a
common node. Each tree is then matched by skeleton peeling with three
upgrades: a degree-four iteration already meets the bound, an exact pi/3
leaf pair is rewired into the leaf-leaf edge plus a spare spoke, and
otherwise the run restarts from the stored seed pair.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import OddPointCount, SeedRequired
from .geometry import PointSet, angle_exactly_third_pi
from .matching import Matching
from .proximity import Forest, Tree, emst5, forest_leq, nearest_index
from .udg import consecutive_leaf_pairs, run_peeling


@dataclass(frozen=True)
class SeedTriple:
    """A stored leaf and its second-closest point within the same tree."""

    p: int
    p_prime: int
    tree: int


@dataclass
class CriticalEdgeResult:
    edge: tuple[int, int]
    sq_length: int
    forest: Forest
    seeds: list[SeedTriple]


def compare_to_opt(
    pts: PointSet, mst: Tree, sq_lambda: int
) -> Optional[list[SeedTriple]]:
    """Decision procedure for one threshold of the forest binary search.

    Returns None (refuted: the threshold is certainly below the optimal
    bottleneck) when some tree of the threshold forest has odd size, or when
    a tree with two leaves on one node stores a second-closest point outside
    that tree. Otherwise returns the list of stored seed triples.
    """
    if pts.n % 2 != 0:
        raise OddPointCount(f"n must be even, got {pts.n}")
    forest = forest_leq(mst, sq_lambda, pts)
    owner = forest.tree_of()
    checks: list[tuple[int, int, int, int]] = []  # (tree_idx, v, p, q)
    for idx, tree in enumerate(forest.trees):
        if tree.n % 2 != 0:
            return None
        found = None
        for v in tree.vertices:
            leaf_nbrs = [u for u in tree.adj[v] if len(tree.adj[u]) == 1]
            if len(leaf_nbrs) >= 2:
                found = (idx, v, leaf_nbrs[0], leaf_nbrs[1])
                break
        if found is not None:
            checks.append(found)
    if not checks:
        return []
    nn = nearest_index(pts)
    queries = []
    for _, v, p, q in checks:
        queries.append((p, v))
        queries.append((q, v))
    answers = nn.second_closest_batch(queries)
    seeds: list[SeedTriple] = []
    for row, (idx, v, p, q) in enumerate(checks):
        pp = answers[2 * row]
        qq = answers[2 * row + 1]
        if (pts.sq_dist(p, pp), 0) <= (pts.sq_dist(q, qq), 1):
            leaf, other = p, pp
        else:
            leaf, other = q, qq
        if owner.get(other) != idx:
            return None
        seeds.append(SeedTriple(p=leaf, p_prime=other, tree=idx))
    return seeds


def critical_edge(pts: PointSet) -> CriticalEdgeResult:
    """Shortest MST edge length whose threshold forest survives the decision
    procedure, together with that forest and its stored seeds.

    The refuted lengths form a prefix of the sorted edge lengths (evenness
    persists once reached), and the full MST always survives, so the binary
    search boundary is well defined and at most the optimal bottleneck.
    """
    n = pts.n
    if n % 2 != 0:
        raise OddPointCount(f"n must be even, got {n}")
    if n < 2:
        raise OddPointCount("need at least 2 points")
    mst = emst5(pts)
    lengths = sorted(set(mst.edge_sq.values()))
    results: dict[int, Optional[list[SeedTriple]]] = {}

    def probe(i: int) -> Optional[list[SeedTriple]]:
        if i not in results:
            results[i] = compare_to_opt(pts, mst, lengths[i])
        return results[i]

    lo, hi = 0, len(lengths) - 1
    if probe(lo) is not None:
        hi = lo
    else:
        # Invariant: probe(lo) is None, probe(hi) is not.
        assert probe(hi) is not None
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if probe(mid) is None:
                lo = mid
            else:
                hi = mid
    sq = lengths[hi]
    edge = min(e for e, d in mst.edge_sq.items() if d == sq)
    seeds = probe(hi)
    forest = forest_leq(mst, sq, pts)
    return CriticalEdgeResult(edge=edge, sq_length=sq, forest=forest, seeds=seeds)


def _split_components(tree: Tree, removed: set[int]) -> list[Tree]:
    from .proximity import _tree_from_adj  # shared tree builder

    seen = set(removed)
    comps: list[list[int]] = []
    for s in tree.vertices:
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            x = stack.pop()
            for y in tree.adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        comps.append(comp)
    out = []
    for comp in comps:
        adj = {v: [u for u in tree.adj[v] if u not in removed] for v in comp}
        out.append(
            Tree(
                vertices=tuple(sorted(comp)),
                adj={v: sorted(us) for v, us in adj.items()},
                edge_sq={
                    (min(v, u), max(v, u)): tree.edge_sq[(min(v, u), max(v, u))]
                    for v in comp
                    for u in adj[v]
                    if v < u
                },
            )
        )
    return out


def match_tree_first(
    pts: PointSet, tree: Tree, seed: Optional[SeedTriple] = None
) -> Matching:
    """Plane matching of one even tree with at least n/5 of its vertices'
    pairs, every edge bounded by the tree's longest edge, the seed pair, or
    an equilateral side.

    Plain peeling suffices whenever some iteration sees degree at most four.
    Failing that, an iteration with two consecutive leaves at exactly pi/3
    trades its spoke for the equilateral leaf-leaf edge plus a spare spoke.
    Otherwise the peeling restarts pre-matched with the seed pair, either
    avoiding edges that cross it (seed partner is a leaf) or splitting the
    tree at the seed partner and peeling the parts.
    """
    if tree.n == 0:
        return Matching.of(pts, [])
    base = run_peeling(pts, tree)
    if tree.n <= 2 or any(it.deg <= 4 for it in base.iterations):
        return Matching.of(pts, base.pairs)

    for it in base.iterations:
        for uj, uk in consecutive_leaf_pairs(pts, it):
            if not angle_exactly_third_pi(pts, uj, it.v, uk):
                continue
            spare = [u for u in it.leaves if u not in (uj, uk)]
            if not spare or it.matched is None:
                continue
            pairs = [pr for pr in base.pairs if pr != it.matched]
            pairs.append((min(uj, uk), max(uj, uk)))
            s = spare[0]
            pairs.append((min(it.v, s), max(it.v, s)))
            return Matching.of(pts, pairs)

    if seed is None:
        raise SeedRequired(
            "every iteration had degree five and no exact pi/3 leaf pair; "
            "a seed pair is required"
        )
    p, pp = seed.p, seed.p_prime
    seed_pair = (min(p, pp), max(p, pp))
    if len(tree.adj[pp]) == 1:
        res = run_peeling(
            pts,
            tree,
            init_pairs=[seed_pair],
            forbidden=frozenset((p, pp)),
            avoid=(p, pp),
        )
        return Matching.of(pts, res.pairs)
    # Seed partner is internal: split the tree there, drop the matched leaf,
    # and peel every part while still avoiding the seed segment.
    parts = _split_components(tree, {p, pp})
    pairs: list[tuple[int, int]] = [seed_pair]
    for part in parts:
        sub = run_peeling(pts, part, avoid=(p, pp))
        pairs.extend(sub.pairs)
    return Matching.of(pts, pairs)


def first_approx(pts: PointSet, seed_source: str = "critical") -> Matching:
    """Plane matching of size at least n/5 with bottleneck at most the
    optimal plane bottleneck.

    ``seed_source`` selects where restart seeds come from: "critical" uses
    the binary-search decision procedure; "crossing" derives the forest from
    the crossing bottleneck matching and seeds from its leaf-leaf edges.
    """
    n = pts.n
    if n % 2 != 0:
        raise OddPointCount(f"n must be even, got {n}")
    if n == 0:
        return Matching.of(pts, [])
    if seed_source == "critical":
        ce = critical_edge(pts)
        forest = ce.forest
        seed_by_tree = {s.tree: s for s in ce.seeds}
    elif seed_source == "crossing":
        from .blossom import bottleneck_crossing

        bc = bottleneck_crossing(pts)
        mst = emst5(pts)
        forest = forest_leq(mst, bc.bottleneck_sq, pts)
        owner = forest.tree_of()
        seed_by_tree = {}
        for a, b in bc.matching.pairs:
            ta = owner[a]
            if owner[b] != ta or ta in seed_by_tree:
                continue
            tr = forest.trees[ta]
            if len(tr.adj[a]) == 1 and len(tr.adj[b]) == 1:
                seed_by_tree[ta] = SeedTriple(p=a, p_prime=b, tree=ta)
    else:
        raise ValueError(f"unknown seed_source {seed_source!r}")

    pairs: list[tuple[int, int]] = []
    for idx, tree in enumerate(forest.trees):
        m = match_tree_first(pts, tree, seed_by_tree.get(idx))
        pairs.extend(m.pairs)
    return Matching.of(pts, pairs)
