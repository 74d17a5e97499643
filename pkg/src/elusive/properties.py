"""Graph-property deciders over partial colorings, plus the graph utilities the strategies use.

Three semantics are supported:

* ``INFINITE_TAIL``: the position lives on N; every edge outside the window
  is white.  Each property has a hand-derived rule that is sound at finite
  turns (see ``_infinite_tail``).
* ``FiniteUniverse(m)``: the game is on the complete graph with vertices
  ``0..m-1``.
* ``LimitRedFill(withheld)``: the end position on N reached if every edge not
  yet played, except ``withheld``, is eventually colored red.  Used to
  certify Seeker traps whose win only happens at the limit.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable

from .board import GREEN, RED, Board, Pair, iter_bits, low_mask
from .errors import UnsupportedSemantics


class DecisionStatus(str, Enum):
    DECIDED_IN = "decided_in"
    DECIDED_OUT = "decided_out"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class PropertyId:
    tag: str
    param: int | None = None

    def __post_init__(self):
        bounds = {"cycle": 3, "girth": 3, "diameter": 1, "degree": 1, "indep": 1}
        if self.tag not in _TAGS:
            raise ValueError(f"unknown property {self.tag!r}")
        if self.tag in bounds:
            if self.param is None or self.param < bounds[self.tag]:
                raise ValueError(f"{self.tag} needs an integer parameter >= {bounds[self.tag]}")
        elif self.param is not None:
            raise ValueError(f"{self.tag} takes no parameter")

    def __str__(self) -> str:
        return self.tag if self.param is None else f"{self.tag}:{self.param}"

    @classmethod
    def parse(cls, text: str) -> "PropertyId":
        tag, _, arg = text.partition(":")
        return cls(tag, int(arg) if arg else None)


_TAGS = {
    "connected",
    "bipartite",
    "cycle",
    "girth",
    "diameter",
    "degree",
    "indep",
    "no-isolated",
    "nonempty",
    "trivial",
}

CONNECTED = PropertyId("connected")
BIPARTITE = PropertyId("bipartite")
NO_ISOLATED = PropertyId("no-isolated")
NONEMPTY = PropertyId("nonempty")
TRIVIAL = PropertyId("trivial")


def contains_cycle(k: int) -> PropertyId:
    return PropertyId("cycle", k)


def girth_at_most(k: int) -> PropertyId:
    return PropertyId("girth", k)


def diameter_at_most(d: int) -> PropertyId:
    return PropertyId("diameter", d)


def max_degree_at_least(d: int) -> PropertyId:
    return PropertyId("degree", d)


def independent_edges(k: int) -> PropertyId:
    return PropertyId("indep", k)


MONOTONE = {"connected", "cycle", "girth", "diameter", "degree", "indep", "no-isolated", "nonempty"}
ANTIMONOTONE = {"bipartite"}


class _InfiniteTail:
    def __repr__(self):
        return "INFINITE_TAIL"


INFINITE_TAIL = _InfiniteTail()


@dataclass(frozen=True)
class FiniteUniverse:
    m: int  # vertex count

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("finite universe needs at least one vertex")


@dataclass(frozen=True)
class LimitRedFill:
    withheld: frozenset = frozenset()


# -- graph utilities ---------------------------------------------------------


def adjacency(edges: Iterable[Pair]) -> dict[int, int]:
    adj: dict[int, int] = {}
    for u, v in edges:
        adj[u] = adj.get(u, 0) | (1 << v)
        adj[v] = adj.get(v, 0) | (1 << u)
    return adj


class UnionFind:
    def __init__(self):
        self.parent: dict[int, int] = {}

    def find(self, x: int) -> int:
        parent = self.parent
        parent.setdefault(x, x)
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
        if ra > rb:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def components(edges: Iterable[Pair], support: Iterable[int]) -> list[set[int]]:
    """Connected components of ``support`` under ``edges``, ordered by least vertex."""
    uf = UnionFind()
    support = list(support)
    for v in support:
        uf.find(v)
    for u, v in edges:
        uf.union(u, v)
    groups: dict[int, set[int]] = {}
    for v in support:
        groups.setdefault(uf.find(v), set()).add(v)
    return sorted(groups.values(), key=min)


def odd_cycle_exists(edges: Iterable[Pair]) -> tuple[bool, list[int] | None]:
    """BFS 2-coloring; on failure returns an odd cycle as a closed vertex sequence (first vertex not repeated)."""
    adj = adjacency(edges)
    side: dict[int, int] = {}
    parent: dict[int, int] = {}
    depth: dict[int, int] = {}
    for root in sorted(adj):
        if root in side:
            continue
        side[root], parent[root], depth[root] = 0, root, 0
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in iter_bits(adj[v]):
                if w not in side:
                    side[w] = 1 - side[v]
                    parent[w] = v
                    depth[w] = depth[v] + 1
                    queue.append(w)
                elif side[w] == side[v]:
                    return True, _tree_cycle(v, w, parent, depth)
    return False, None


def _tree_cycle(a: int, b: int, parent: dict, depth: dict) -> list[int]:
    left, right = [a], [b]
    while depth[a] > depth[b]:
        a = parent[a]
        left.append(a)
    while depth[b] > depth[a]:
        b = parent[b]
        right.append(b)
    while a != b:
        a, b = parent[a], parent[b]
        left.append(a)
        right.append(b)
    right.pop()
    return left + right[::-1]


def is_bipartite(edges: Iterable[Pair]) -> bool:
    return not odd_cycle_exists(edges)[0]


def max_matching(edges: Iterable[Pair]) -> list[Pair]:
    """Maximum-cardinality matching of a general graph (Edmonds' blossom algorithm)."""
    edges = sorted(set(edges))
    verts = sorted({x for e in edges for x in e})
    index = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[index[u]].append(index[v])
        adj[index[v]].append(index[u])
    match = [-1] * n

    def augment_from(root: int) -> tuple[int, list[int]]:
        used = [False] * n
        p = [-1] * n
        base = list(range(n))
        used[root] = True
        queue = deque([root])

        def lca(a: int, b: int) -> int:
            seen = [False] * n
            while True:
                a = base[a]
                seen[a] = True
                if match[a] == -1:
                    break
                a = p[match[a]]
            while True:
                b = base[b]
                if seen[b]:
                    return b
                b = p[match[b]]

        def mark(v: int, b: int, child: int, blossom: list) -> None:
            while base[v] != b:
                blossom[base[v]] = blossom[base[match[v]]] = True
                p[v] = child
                child = match[v]
                v = p[match[v]]

        while queue:
            v = queue.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and p[match[to]] != -1):
                    cur = lca(v, to)
                    blossom = [False] * n
                    mark(v, cur, to, blossom)
                    mark(to, cur, v, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif p[to] == -1:
                    p[to] = v
                    if match[to] == -1:
                        return to, p
                    used[match[to]] = True
                    queue.append(match[to])
        return -1, p

    for i in range(n):
        if match[i] != -1:
            continue
        v, p = augment_from(i)
        while v != -1:
            pv = p[v]
            nxt = match[pv]
            match[v] = pv
            match[pv] = v
            v = nxt
    return [(verts[i], verts[j]) for i, j in enumerate(match) if i < j]


def max_matching_size(edges: Iterable[Pair]) -> int:
    return len(max_matching(edges))


def shortest_path_len(edges: Iterable[Pair], a: int, b: int) -> float:
    """BFS distance from ``a`` to ``b``; ``math.inf`` when disconnected."""
    if a == b:
        return 0
    adj = adjacency(edges)
    seen = 1 << a
    frontier = 1 << a
    dist = 0
    while frontier:
        dist += 1
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= adj.get(v, 0)
        nxt &= ~seen
        if nxt >> b & 1:
            return dist
        seen |= nxt
        frontier = nxt
    return math.inf


def cycle_of_length_exists(edges: Iterable[Pair], k: int) -> bool:
    """Exact search for a simple cycle with exactly ``k`` edges.

    Each cycle is found from its least vertex ``s``; the DFS only visits
    vertices above ``s``.
    """
    if k < 3:
        raise ValueError("cycles have length >= 3")
    adj = adjacency(edges)
    for s in sorted(adj):
        above = ~low_mask(s + 1)
        if (adj[s] & above).bit_count() < 2:
            continue

        def extend(v: int, visited: int, length: int) -> bool:
            if length == k - 1:
                return bool(adj[v] >> s & 1)
            for w in iter_bits(adj[v] & above & ~visited):
                if extend(w, visited | (1 << w), length + 1):
                    return True
            return False

        for w in iter_bits(adj[s] & above):
            if extend(w, (1 << s) | (1 << w), 1):
                return True
    return False


def girth(edges: Iterable[Pair]) -> float:
    """Length of a shortest cycle (``math.inf`` for forests)."""
    adj = adjacency(edges)
    best = math.inf
    for root in adj:
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            if 2 * dist[v] + 1 >= best:
                break
            for w in iter_bits(adj[v]):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    parent[w] = v
                    queue.append(w)
                elif parent[v] != w:
                    best = min(best, dist[v] + dist[w] + 1)
    return best


def all_pairs_within(adj: dict[int, int], verts: list[int], d: int) -> bool:
    """True iff every pair of ``verts`` is joined by a path of length <= d in ``adj``."""
    target = 0
    for v in verts:
        target |= 1 << v
    for v in verts:
        seen = frontier = 1 << v
        for _ in range(d):
            nxt = 0
            for w in iter_bits(frontier):
                nxt |= adj.get(w, 0)
            frontier = nxt & ~seen
            seen |= nxt
            if not frontier:
                break
        if seen & target != target:
            return False
    return True


# -- property evaluation on complete information --------------------------


def holds(p: PropertyId, edges: Iterable[Pair], n_vertices: int | None = None) -> bool:
    """Does the graph have property ``p``?

    With ``n_vertices`` the graph lives on ``0..n_vertices-1``; with ``None``
    it is a graph on N with finitely many edges (so infinitely many isolated
    vertices).
    """
    edges = set(edges)
    tag, k = p.tag, p.param
    if tag == "trivial":
        return True
    if tag == "nonempty":
        return bool(edges)
    if tag == "bipartite":
        return is_bipartite(edges)
    if tag == "cycle":
        return cycle_of_length_exists(edges, k)
    if tag == "girth":
        return girth(edges) <= k
    if tag == "degree":
        adj = adjacency(edges)
        return any(m.bit_count() >= k for m in adj.values())
    if tag == "indep":
        return max_matching_size(edges) >= k
    if n_vertices is None:
        # finitely many edges on N: never connected, always has isolated vertices
        return False
    verts = list(range(n_vertices))
    adj = adjacency(edges)
    if tag == "no-isolated":
        return all(adj.get(v, 0) for v in verts)
    if tag == "connected":
        return len(components(edges, verts)) == 1
    if tag == "diameter":
        return len(components(edges, verts)) == 1 and all_pairs_within(adj, verts, k)
    raise ValueError(f"unhandled property {p}")


def _monotone_decision(p: PropertyId, green, upper, n_vertices) -> DecisionStatus:
    """For monotone p compare the green graph and green+white."""
    if p.tag == "trivial":
        return DecisionStatus.DECIDED_IN
    if p.tag in MONOTONE:
        if holds(p, green, n_vertices):
            return DecisionStatus.DECIDED_IN
        if not holds(p, upper, n_vertices):
            return DecisionStatus.DECIDED_OUT
        return DecisionStatus.UNDECIDED
    if p.tag in ANTIMONOTONE:
        if holds(p, upper, n_vertices):
            return DecisionStatus.DECIDED_IN
        if not holds(p, green, n_vertices):
            return DecisionStatus.DECIDED_OUT
        return DecisionStatus.UNDECIDED
    raise UnsupportedSemantics(f"no decision rule for {p}")


def decide_sets(p: PropertyId, green: Iterable[Pair], white: Iterable[Pair], n_vertices: int | None) -> DecisionStatus:
    """Decision status when the white set is exactly ``white`` (finite)."""
    green = set(green)
    return _monotone_decision(p, green, green | set(white), n_vertices)


def _infinite_tail(p: PropertyId, b: Board) -> DecisionStatus:
    tag = p.tag
    if tag == "trivial":
        return DecisionStatus.DECIDED_IN
    if tag in ("connected", "no-isolated"):
        # green is finite (never spanning, always isolated vertices); complete-minus-finite-red
        # is connected with no isolated vertex
        return DecisionStatus.UNDECIDED
    if tag == "diameter":
        # complete minus finitely many red edges has diameter <= 2
        if p.param == 1 and b.red_count:
            return DecisionStatus.DECIDED_OUT
        return DecisionStatus.UNDECIDED
    if tag == "bipartite":
        if odd_cycle_exists(b.green_edges())[0]:
            return DecisionStatus.DECIDED_OUT
        return DecisionStatus.UNDECIDED
    # cycle, girth, degree, indep, nonempty: the infinite white tail always realizes them
    if holds(p, b.green_edges(), None):
        return DecisionStatus.DECIDED_IN
    return DecisionStatus.UNDECIDED


def decide(p: PropertyId, b: Board, s=INFINITE_TAIL) -> DecisionStatus:
    """Can Seeker decide ``p`` at position ``b`` under semantics ``s``?"""
    if s is INFINITE_TAIL:
        return _infinite_tail(p, b)
    if isinstance(s, FiniteUniverse):
        if b.window > s.m:
            raise UnsupportedSemantics(f"board touches vertex {b.window - 1} outside universe of {s.m}")
        green = set(b.green_edges())
        white = [(u, v) for u, v in combinations(range(s.m), 2) if (u, v) not in b.colors]
        return decide_sets(p, green, white, s.m)
    if isinstance(s, LimitRedFill):
        white = [e for e in s.withheld if b.is_white(e)]
        return decide_sets(p, b.green_edges(), white, None)
    raise UnsupportedSemantics(f"unknown semantics {s!r}")


def decide_by_completions(p: PropertyId, green: Iterable[Pair], white: Iterable[Pair], n_vertices: int) -> DecisionStatus:
    """Definitional decision: enumerate every completion of the white edges."""
    green = list(green)
    white = list(white)
    seen = set()
    for mask in range(1 << len(white)):
        chosen = [e for i, e in enumerate(white) if mask >> i & 1]
        seen.add(holds(p, green + chosen, n_vertices))
        if len(seen) == 2:
            return DecisionStatus.UNDECIDED
    return DecisionStatus.DECIDED_IN if seen == {True} else DecisionStatus.DECIDED_OUT
