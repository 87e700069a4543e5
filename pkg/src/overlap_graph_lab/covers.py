"""Edge partitions and covers of small graphs, and exhaustive checks of the
node-count inequalities they satisfy.

All enumerations work on bitmasks over the pattern's edge list, so a block
``E`` is an int whose bit ``i`` marks ``pattern.edges[i]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import DomainError, SizeError
from .graph import SubgraphPattern, normalize_edge

MAX_PARTITION_EDGES = 8
MAX_COVER_EDGES = 6
MAX_COVER_BLOCKS = 4

BELL = (1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975, 678570, 4213597)


def restricted_growth_strings(k: int, max_blocks: int | None = None) -> Iterator[tuple[int, ...]]:
    """All restricted growth strings of length ``k`` in lexicographic order.

    ``a[0] = 0`` and ``a[i] <= max(a[:i]) + 1``; each one encodes a set
    partition of ``range(k)`` with item ``i`` in block ``a[i]``.  With
    ``max_blocks`` only partitions into at most that many blocks are produced.
    """
    cap = k if max_blocks is None else max_blocks
    if k > 0 and cap < 1:
        return
    if k == 0:
        yield ()
        return
    a = [0] * k
    mx = [0] * k  # mx[i] = max(a[:i+1])

    def rec(i: int):
        if i == k:
            yield tuple(a)
            return
        for b in range(min(mx[i - 1] + 2, cap)):
            a[i] = b
            mx[i] = max(mx[i - 1], b)
            yield from rec(i + 1)

    yield from rec(1)


def _node_mask(edges: Sequence[tuple[int, int]], mask: int) -> int:
    nodes = 0
    i = 0
    while mask:
        if mask & 1:
            u, v = edges[i]
            nodes |= (1 << u) | (1 << v)
        mask >>= 1
        i += 1
    return nodes


@dataclass(frozen=True)
class EdgeCover:
    """Collection of nonempty edge sets whose union is the full edge set."""

    blocks: tuple[frozenset[tuple[int, int]], ...]
    is_partition: bool = field(init=False)
    has_overlapping_pair: bool = field(init=False)
    shares_edge: bool = field(init=False)

    def __post_init__(self):
        if any(not b for b in self.blocks):
            raise DomainError("cover blocks must be nonempty")
        disjoint = sum(len(b) for b in self.blocks) == len(frozenset().union(*self.blocks))
        object.__setattr__(self, "is_partition", disjoint)
        vsets = [frozenset(x for e in b for x in e) for b in self.blocks]
        overlap = shares = False
        for i, j in itertools.combinations(range(len(self.blocks)), 2):
            if len(vsets[i] & vsets[j]) >= 2:
                overlap = True
            if self.blocks[i] & self.blocks[j]:
                shares = True
        object.__setattr__(self, "has_overlapping_pair", overlap)
        object.__setattr__(self, "shares_edge", shares)

    def covers(self, edges) -> bool:
        return frozenset().union(*self.blocks) == frozenset(edges)

    def excess(self) -> int:
        """Sum over blocks of (incident nodes - 1)."""
        return sum(len({x for e in b for x in e}) - 1 for b in self.blocks)


def _partition_masks(s: int) -> Iterator[list[int]]:
    for rgs in restricted_growth_strings(s):
        blocks = [0] * (max(rgs) + 1)
        for i, b in enumerate(rgs):
            blocks[b] |= 1 << i
        yield blocks


def enumerate_partitions(edges: Sequence[tuple[int, int]]) -> Iterator[EdgeCover]:
    """Every set partition of ``edges`` once, in restricted-growth-string order."""
    edges = [normalize_edge(*e) for e in edges]
    if len(edges) > MAX_PARTITION_EDGES:
        raise SizeError(f"partition enumeration limited to {MAX_PARTITION_EDGES} edges, got {len(edges)}")
    full = frozenset(edges)
    for masks in _partition_masks(len(edges)):
        cover = EdgeCover(
            tuple(frozenset(edges[i] for i in range(len(edges)) if m >> i & 1) for m in masks)
        )
        if not cover.covers(full):
            raise AssertionError("partition does not cover the edge set")
        yield cover


def enumerate_covers(edges: Sequence[tuple[int, int]], max_blocks: int = MAX_COVER_BLOCKS) -> Iterator[tuple[int, ...]]:
    """Multisets of at most ``max_blocks`` nonempty edge subsets (as bitmasks)
    whose union is every edge."""
    s = len(edges)
    full = (1 << s) - 1
    subsets = range(1, full + 1)
    for t in range(1, max_blocks + 1):
        for combo in itertools.combinations_with_replacement(subsets, t):
            u = 0
            for c in combo:
                u |= c
            if u == full:
                yield combo


@dataclass
class CheckReport:
    lemma: str
    cases_checked: int = 0
    violations: int = 0
    tight_cases: int = 0
    failures: list = field(default_factory=list)

    def merge(self, other: "CheckReport") -> "CheckReport":
        self.cases_checked += other.cases_checked
        self.violations += other.violations
        self.tight_cases += other.tight_cases
        self.failures.extend(other.failures)
        return self

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def csv_row(self) -> str:
        return f"{self.lemma},{self.cases_checked},{self.violations}"


def check_cover_excess(pattern: SubgraphPattern, max_blocks: int = MAX_COVER_BLOCKS) -> CheckReport:
    """Check the cover inequalities for a connected pattern over all covers
    with at most ``max_blocks`` blocks.

    For every cover: sum(||E|| - 1) >= r - 1.  When two blocks share at least
    two incident nodes the bound improves to ``r``; when two blocks share an
    edge, sum(|E|) >= s + 1.  ``tight_cases`` counts covers attaining
    ``r - 1`` while having no pair of blocks sharing two nodes.
    """
    if not pattern.is_connected():
        raise DomainError("cover check needs a connected pattern")
    s, r = pattern.s, pattern.r
    if s > MAX_COVER_EDGES:
        raise SizeError(f"cover enumeration limited to {MAX_COVER_EDGES} edges, got {s}")
    edges = pattern.edges
    nodes_of = [0] * (1 << s)
    order_of = [0] * (1 << s)
    for mask in range(1, 1 << s):
        nm = _node_mask(edges, mask)
        nodes_of[mask] = nm
        order_of[mask] = bin(nm).count("1")
    rep = CheckReport("1")
    for combo in enumerate_covers(edges, max_blocks):
        rep.cases_checked += 1
        excess = sum(order_of[c] - 1 for c in combo)
        vertex_overlap = edge_overlap = False
        for a, b in itertools.combinations(combo, 2):
            if bin(nodes_of[a] & nodes_of[b]).count("1") >= 2:
                vertex_overlap = True
            if a & b:
                edge_overlap = True
        bad = []
        if excess < r - 1:
            bad.append("first")
        if vertex_overlap and excess < r:
            bad.append("overlap")
        if edge_overlap and sum(bin(c).count("1") for c in combo) < s + 1:
            bad.append("simple")
        if bad:
            rep.violations += 1
            rep.failures.append((pattern.label, combo, bad))
        if excess == r - 1 and not vertex_overlap:
            rep.tight_cases += 1
    return rep


def star_equality_case(k: int) -> bool:
    """True when the singleton partition of a k-edge star attains sum(||E|| - 1) = |V| - 1."""
    star = SubgraphPattern.star(k)
    singletons = EdgeCover(tuple(frozenset([e]) for e in star.edges))
    return singletons.excess() == star.r - 1 and not singletons.has_overlapping_pair


def check_disjoint_partitions(r1: SubgraphPattern, r2: SubgraphPattern, relabel: bool = True) -> CheckReport:
    """For every partition of E(R1) u E(R2) of two node-disjoint connected
    patterns: sum(||E|| - 1) >= |V(R1)| + |V(R2)| - 2 + (#blocks meeting both)."""
    if not (r1.is_connected() and r2.is_connected()):
        raise DomainError("disjoint-union check needs connected patterns")
    off = r1.r if relabel else 0
    e1 = list(r1.edges)
    e2 = [(u + off, v + off) for u, v in r2.edges]
    v1 = {x for e in e1 for x in e}
    v2 = {x for e in e2 for x in e}
    if v1 & v2:
        raise DomainError("disjoint-union check needs node-disjoint patterns")
    edges = e1 + e2
    if len(edges) > MAX_COVER_EDGES:
        raise SizeError(f"disjoint-union check limited to {MAX_COVER_EDGES} combined edges, got {len(edges)}")
    mask1 = (1 << len(e1)) - 1
    mask2 = ((1 << len(edges)) - 1) ^ mask1
    bound_base = r1.r + r2.r - 2
    rep = CheckReport("2")
    for blocks in _partition_masks(len(edges)):
        rep.cases_checked += 1
        excess = sum(bin(_node_mask(edges, b)).count("1") - 1 for b in blocks)
        mixed = sum(1 for b in blocks if b & mask1 and b & mask2)
        if excess < bound_base + mixed:
            rep.violations += 1
            rep.failures.append((r1.label, r2.label, blocks))
        elif excess == bound_base + mixed:
            rep.tight_cases += 1
    return rep


def check_clique_splits(r: int) -> CheckReport:
    """Every split of E(K_r) into two nonempty blocks has a block touching all r nodes."""
    if not 3 <= r <= 5:
        raise SizeError(f"clique split check supports 3 <= r <= 5, got {r}")
    edges = SubgraphPattern.clique(r).edges
    s = len(edges)
    full = (1 << s) - 1
    all_nodes = (1 << r) - 1
    rep = CheckReport("6")
    # block containing edge 0 is `mask`; skip the trivial one-block split
    for rest in range(0, 1 << (s - 1)):
        mask = (rest << 1) | 1
        if mask == full:
            continue
        rep.cases_checked += 1
        if _node_mask(edges, mask) != all_nodes and _node_mask(edges, full ^ mask) != all_nodes:
            rep.violations += 1
            rep.failures.append((r, mask))
    return rep


# ------------------------------------------------------------ pattern census


def _canonical(r: int, edges: Sequence[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    best = None
    for perm in itertools.permutations(range(r)):
        form = tuple(sorted(normalize_edge(perm[u], perm[v]) for u, v in edges))
        if best is None or form < best:
            best = form
    return best


def connected_patterns(max_edges: int) -> list[SubgraphPattern]:
    """All connected graphs with 1..max_edges edges, one per isomorphism class."""
    if max_edges > MAX_COVER_EDGES:
        raise SizeError(f"pattern census limited to {MAX_COVER_EDGES} edges")
    level = {((0, 1),)}
    found = list(level)
    for _ in range(1, max_edges):
        nxt = set()
        for edges in level:
            r = max(max(e) for e in edges) + 1
            present = set(edges)
            for u in range(r):
                for v in range(u + 1, r + 1):
                    if (u, v) in present:
                        continue
                    rr = r + 1 if v == r else r
                    nxt.add(_canonical(rr, list(edges) + [(u, v)]))
        level = nxt
        found.extend(sorted(level))
    return [SubgraphPattern.custom(e) for e in found]
