"""Exact (non-induced) subgraph counts: cliques, cycles and arbitrary small patterns."""

from __future__ import annotations

import time
from dataclasses import dataclass

from .errors import DomainError, SizeError
from .graph import Graph, SubgraphPattern, automorphism_count

DEFAULT_R_MAX = 8
BRUTEFORCE_MAX_NODES = 12


@dataclass(frozen=True)
class CountResult:
    pattern: SubgraphPattern
    count: int
    elapsed: float  # seconds

    @property
    def elapsed_ms(self) -> float:
        return 1000.0 * self.elapsed


def degeneracy_order(g: Graph) -> list[int]:
    """Vertices in smallest-last order (repeatedly remove a minimum-degree vertex)."""
    n = g.n
    deg = [len(a) for a in g.adjacency]
    maxdeg = max(deg, default=0)
    buckets: list[set[int]] = [set() for _ in range(maxdeg + 1)]
    for v, d in enumerate(deg):
        buckets[d].add(v)
    removed = [False] * n
    order = []
    d = 0
    for _ in range(n):
        d = max(d - 1, 0)
        while not buckets[d]:
            d += 1
        v = buckets[d].pop()
        removed[v] = True
        order.append(v)
        for w in g.adjacency[v]:
            if not removed[w]:
                buckets[deg[w]].discard(w)
                deg[w] -= 1
                buckets[deg[w]].add(w)
    return order


def _forward_sets(g: Graph) -> list[set[int]]:
    pos = [0] * g.n
    for i, v in enumerate(degeneracy_order(g)):
        pos[v] = i
    return [{w for w in g.adjacency[v] if pos[w] > pos[v]} for v in range(g.n)]


def _clique_count(g: Graph, r: int) -> int:
    if r == 1:
        return g.n
    if r == 2:
        return g.edge_count
    out = _forward_sets(g)

    def extend(cands: set[int], k: int) -> int:
        # number of k-subsets of cands forming a clique together with the prefix
        if k == 1:
            return len(cands)
        total = 0
        for v in cands:
            nxt = cands & out[v]
            if len(nxt) >= k - 1:
                total += extend(nxt, k - 1)
        return total

    return sum(extend(out[v], r - 1) for v in range(g.n) if len(out[v]) >= r - 1)


def count_cliques(g: Graph, r: int) -> CountResult:
    """Number of r-cliques in ``g``."""
    if r < 1:
        raise DomainError(f"clique order must be >= 1, got {r}")
    t0 = time.perf_counter()
    c = _clique_count(g, r)
    return CountResult(SubgraphPattern.clique(r), c, time.perf_counter() - t0)


def _four_cycles(g: Graph) -> int:
    # each 4-cycle has two diagonals; a pair {u, w} with c common neighbours
    # is the diagonal of C(c, 2) of them
    codeg: dict[tuple[int, int], int] = {}
    for nb in g.adjacency:
        k = len(nb)
        for i in range(k):
            u = nb[i]
            for j in range(i + 1, k):
                key = (u, nb[j])
                codeg[key] = codeg.get(key, 0) + 1
    return sum(c * (c - 1) // 2 for c in codeg.values()) // 2


def _cycles_by_paths(g: Graph, r: int) -> int:
    """Enumerate simple paths anchored at each cycle's smallest vertex.

    A path ``s, v1, ..., v_{r-1}`` with all ``v_i > s``, ``v1 < v_{r-1}`` and
    ``v_{r-1}`` adjacent to ``s`` is emitted once per cycle.  Vertices farther
    than ``r // 2`` from ``s`` (inside the allowed vertex set) cannot lie on such a
    cycle, and a partial path is cut when it cannot return in time.
    """
    adj = g.adjacency
    half = r // 2
    total = 0
    for s in range(g.n):
        # BFS restricted to vertices > s
        dist = {s: 0}
        frontier = [s]
        for d in range(1, half + 1):
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if w > s and w not in dist:
                        dist[w] = d
                        nxt.append(w)
            frontier = nxt
        if len(dist) < r:
            continue
        closing = {w for w in adj[s] if w > s}
        if len(closing) < 2:
            continue
        path = [s]
        on_path = {s}

        def walk(u: int) -> int:
            depth = len(path)
            if depth == r:
                return 1 if u in closing and path[1] < u else 0
            found = 0
            for w in adj[u]:
                dw = dist.get(w)
                # after stepping to w, r - depth edges remain to close the cycle
                if dw is None or w in on_path or dw > r - depth:
                    continue
                path.append(w)
                on_path.add(w)
                found += walk(w)
                path.pop()
                on_path.discard(w)
            return found

        total += walk(s)
    return total


def count_cycles(g: Graph, r: int, r_max: int = DEFAULT_R_MAX, method: str = "auto") -> CountResult:
    """Number of simple r-cycles in ``g``, each counted once.

    ``method="paths"`` forces the anchored path enumeration for every ``r``;
    the default uses triangle and co-degree shortcuts for ``r = 3, 4``.
    """
    if not 3 <= r <= r_max:
        raise DomainError(f"cycle length {r} outside supported range [3, {r_max}]")
    t0 = time.perf_counter()
    if method == "paths":
        c = _cycles_by_paths(g, r)
    elif r == 3:
        c = _clique_count(g, 3)
    elif r == 4:
        c = _four_cycles(g)
    else:
        c = _cycles_by_paths(g, r)
    return CountResult(SubgraphPattern.cycle(r), c, time.perf_counter() - t0)


def _pattern_order(pattern: SubgraphPattern) -> list[int]:
    nbrs = {v: set() for v in range(pattern.r)}
    for u, v in pattern.edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    order: list[int] = []
    seen: set[int] = set()
    for root in sorted(nbrs, key=lambda v: -len(nbrs[v])):
        if root in seen:
            continue
        seen.add(root)
        queue = [root]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in sorted(nbrs[v]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


def count_embeddings(g: Graph, pattern: SubgraphPattern) -> int:
    """Number of injective maps V(R) -> V(G) sending every pattern edge to an edge."""
    order = _pattern_order(pattern)
    pos = {v: i for i, v in enumerate(order)}
    # for each pattern vertex, the earlier-placed neighbours it must attach to
    back = [[] for _ in order]
    for u, v in pattern.edges:
        a, b = (u, v) if pos[u] < pos[v] else (v, u)
        back[pos[b]].append(pos[a])
    nsets = g.neighbor_sets()
    image = [-1] * len(order)
    used = set()

    def place(i: int) -> int:
        if i == len(order):
            return 1
        if back[i]:
            cands = set(nsets[image[back[i][0]]])
            for j in back[i][1:]:
                cands &= nsets[image[j]]
        else:
            cands = range(g.n)
        total = 0
        for w in cands:
            if w in used:
                continue
            image[i] = w
            used.add(w)
            total += place(i + 1)
            used.discard(w)
        return total

    return place(0)


def count_pattern_bruteforce(g: Graph, pattern: SubgraphPattern) -> CountResult:
    """N_R(G) as (edge-preserving injective maps) / |Aut(R)|."""
    if g.n > BRUTEFORCE_MAX_NODES and pattern.r > 3:
        raise SizeError(
            f"brute force needs n <= {BRUTEFORCE_MAX_NODES} or a pattern with <= 3 nodes "
            f"(n={g.n}, r={pattern.r})"
        )
    t0 = time.perf_counter()
    maps = count_embeddings(g, pattern)
    aut = automorphism_count(pattern)
    q, rem = divmod(maps, aut)
    if rem:
        raise ArithmeticError(f"{maps} embeddings not divisible by |Aut| = {aut}")
    return CountResult(pattern, q, time.perf_counter() - t0)


def count_pattern(g: Graph, pattern: SubgraphPattern, r_max: int = DEFAULT_R_MAX) -> CountResult:
    """Dispatch to the fastest exact counter for ``pattern``."""
    if pattern.kind == "clique":
        return count_cliques(g, pattern.r)
    if pattern.kind == "cycle" and pattern.r <= r_max:
        return count_cycles(g, pattern.r, r_max=r_max)
    return count_pattern_bruteforce(g, pattern)
