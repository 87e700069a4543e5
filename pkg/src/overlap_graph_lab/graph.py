"""Simple undirected graphs, small pattern graphs and edge-set arithmetic."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError, ParseError, SizeError

MAX_CUSTOM_NODES = 8


def normalize_edge(u: int, v: int) -> tuple[int, int]:
    if u == v:
        raise DomainError(f"self-loop at node {u}")
    return (u, v) if u < v else (v, u)


def incident_node_count(edges: Iterable[tuple[int, int]]) -> int:
    """Number of distinct endpoints of an edge collection."""
    nodes = set()
    for u, v in edges:
        nodes.add(u)
        nodes.add(v)
    return len(nodes)


def incident_nodes(edges: Iterable[tuple[int, int]]) -> frozenset[int]:
    return frozenset(x for e in edges for x in e)


def falling_factorial(x, r: int):
    """Return x (x-1) ... (x-r+1).

    Integer and Fraction inputs stay exact (Python integers do not overflow);
    floats are multiplied in floating point.  For integer ``0 <= x < r`` the
    product contains a zero factor and the result is 0.
    """
    if r < 0:
        raise DomainError(f"falling factorial order must be >= 0, got {r}")
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, int):
        if 0 <= x < r:
            return 0
        if x >= 0:
            return math.perm(x, r)
    out = 1 if isinstance(x, (int, Fraction)) else 1.0
    for i in range(r):
        out *= x - i
    return out


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on nodes ``0..n-1`` with sorted adjacency tuples."""

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    edge_count: int

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        if n < 0:
            raise DomainError(f"node count must be >= 0, got {n}")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise DomainError(f"self-loop at node {u}")
            if v not in nbrs[u]:
                nbrs[u].add(v)
                nbrs[v].add(u)
                m += 1
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs), m)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, tuple(() for _ in range(n)), 0)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_edges(n, itertools.combinations(range(n), 2))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n)))

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges())

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.adjacency[u]
        # bisect on the sorted tuple
        lo, hi = 0, len(nb)
        while lo < hi:
            mid = (lo + hi) // 2
            if nb[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(nb) and nb[lo] == v

    def neighbor_sets(self) -> list[set[int]]:
        return [set(a) for a in self.adjacency]

    def density(self) -> float:
        pairs = self.n * (self.n - 1) // 2
        return self.edge_count / pairs if pairs else 0.0

    def with_edge(self, u: int, v: int) -> "Graph":
        return Graph.from_edges(self.n, self.edges() + [(u, v)])


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges())
        offset += g.n
    return Graph.from_edges(offset, edges)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


# ---------------------------------------------------------------- edge lists


def read_edge_list(path) -> Graph:
    with open(path) as fh:
        return parse_edge_list(fh.read())


def parse_edge_list(text: str) -> Graph:
    """Parse ``n m`` header followed by ``u v`` lines (0-based)."""
    lines = [(i + 1, ln.split()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, toks) for i, toks in lines if toks and not toks[0].startswith("#")]
    if not lines:
        raise ParseError("empty edge list: missing 'n m' header")
    lineno, head = lines[0]
    try:
        n, m = (int(t) for t in head)
    except ValueError:
        raise ParseError(f"line {lineno}: expected header 'n m', got {' '.join(head)!r}")
    seen: set[tuple[int, int]] = set()
    for lineno, toks in lines[1:]:
        if len(toks) != 2:
            raise ParseError(f"line {lineno}: expected 'u v'")
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer node id")
        if u == v:
            raise ParseError(f"line {lineno}: self-loop {u}-{v}")
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"line {lineno}: node id out of range [0, {n})")
        e = (min(u, v), max(u, v))
        if e in seen:
            raise ParseError(f"line {lineno}: duplicate edge {u}-{v}")
        seen.add(e)
    if len(seen) != m:
        raise ParseError(f"header announces {m} edges but {len(seen)} were listed")
    return Graph.from_edges(n, seen)


def format_edge_list(g: Graph) -> str:
    out = [f"{g.n} {g.edge_count}"]
    out.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(out) + "\n"


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_edge_list(g))


# ------------------------------------------------------------------ patterns


def _is_connected(r: int, edges: Sequence[tuple[int, int]]) -> bool:
    if r <= 1:
        return True
    nbrs: dict[int, list[int]] = {v: [] for v in range(r)}
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        for w in nbrs[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == r


def _count_automorphisms(r: int, edges: Sequence[tuple[int, int]]) -> int:
    if r > MAX_CUSTOM_NODES:
        raise SizeError(
            f"automorphism enumeration limited to {MAX_CUSTOM_NODES} nodes, pattern has {r}"
        )
    eset = set(edges)
    count = 0
    for perm in itertools.permutations(range(r)):
        if all(normalize_edge(perm[u], perm[v]) in eset for u, v in edges):
            count += 1
    return count


@dataclass(frozen=True)
class SubgraphPattern:
    """A small pattern graph ``R`` on nodes ``0..r-1``.

    Build with :meth:`clique`, :meth:`cycle` or :meth:`custom`; ``aut`` is
    filled in at construction (closed form for cliques and cycles).
    """

    kind: str
    r: int
    edges: tuple[tuple[int, int], ...]
    aut: int = field(compare=False)

    @property
    def s(self) -> int:
        return len(self.edges)

    @classmethod
    def clique(cls, r: int) -> "SubgraphPattern":
        if r < 1:
            raise DomainError(f"clique order must be >= 1, got {r}")
        return cls("clique", r, tuple(itertools.combinations(range(r), 2)), math.factorial(r))

    @classmethod
    def cycle(cls, r: int) -> "SubgraphPattern":
        if r < 3:
            raise DomainError(f"cycle length must be >= 3, got {r}")
        edges = tuple(sorted(normalize_edge(i, (i + 1) % r) for i in range(r)))
        return cls("cycle", r, edges, 2 * r)

    @classmethod
    def custom(cls, edges: Iterable[Sequence[int]], allow_disconnected: bool = False) -> "SubgraphPattern":
        """Pattern from an edge list; nodes are relabelled densely in sorted order."""
        raw = [normalize_edge(int(u), int(v)) for u, v in edges]
        if not raw:
            raise DomainError("custom pattern needs at least one edge")
        if len(set(raw)) != len(raw):
            raise DomainError("custom pattern has duplicate edges")
        labels = {v: i for i, v in enumerate(sorted(incident_nodes(raw)))}
        r = len(labels)
        if r > MAX_CUSTOM_NODES:
            raise SizeError(f"custom patterns are capped at {MAX_CUSTOM_NODES} nodes, got {r}")
        rel = tuple(sorted(normalize_edge(labels[u], labels[v]) for u, v in raw))
        if not allow_disconnected and not _is_connected(r, rel):
            raise DomainError("pattern must be connected")
        return cls("custom", r, rel, _count_automorphisms(r, rel))

    @classmethod
    def path(cls, k: int) -> "SubgraphPattern":
        """Path with ``k`` edges."""
        return cls.custom([(i, i + 1) for i in range(k)])

    @classmethod
    def star(cls, k: int) -> "SubgraphPattern":
        """Star with ``k`` edges."""
        return cls.custom([(0, i) for i in range(1, k + 1)])

    @property
    def label(self) -> str:
        if self.kind in ("clique", "cycle"):
            return f"{self.kind}:{self.r}"
        return "custom:" + ",".join(f"{u}-{v}" for u, v in self.edges)

    def is_connected(self) -> bool:
        return _is_connected(self.r, self.edges)

    def as_graph(self) -> Graph:
        return Graph.from_edges(self.r, self.edges)

    def __str__(self) -> str:
        return self.label


def automorphism_count(pattern: SubgraphPattern, enumerate_: bool = False) -> int:
    """|Aut(R)|; closed form for cliques and cycles unless ``enumerate_`` is set."""
    if enumerate_ or pattern.kind == "custom":
        return _count_automorphisms(pattern.r, pattern.edges)
    return pattern.aut


def parse_pattern(spec: str) -> SubgraphPattern:
    """Parse ``clique:4``, ``cycle:5`` or ``custom:0-1,1-2,2-0``."""
    kind, _, arg = spec.strip().partition(":")
    kind = kind.lower()
    try:
        if kind == "clique":
            return SubgraphPattern.clique(int(arg))
        if kind == "cycle":
            return SubgraphPattern.cycle(int(arg))
        if kind == "custom":
            edges = []
            for tok in arg.replace(";", ",").split(","):
                tok = tok.strip()
                if tok:
                    u, v = tok.split("-")
                    edges.append((int(u), int(v)))
            return SubgraphPattern.custom(edges)
    except ValueError as exc:
        raise ParseError(f"bad pattern spec {spec!r}: {exc}") from None
    raise ParseError(f"unknown pattern kind in {spec!r}; expected clique:, cycle: or custom:")
