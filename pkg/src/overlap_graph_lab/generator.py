"""Sampling graphs as a union of independent random layers.

Each layer draws a (size, strength) pair from the layer distribution, picks a
uniform node subset of that size, and keeps every pair inside the subset
independently with probability equal to the strength.

Seeding
-------
Layer ``k`` of a graph with seed ``s`` draws from ``random.Random(child_seed(s, k))``.
``child_seed`` folds its arguments through the splitmix64 finalizer::

    h = mix64(s + GOLDEN)
    for key in keys:
        h = mix64(h ^ mix64(key + GOLDEN))

with all arithmetic modulo 2**64.  The derivation is pure, so any layer can be
regenerated on its own and the output does not depend on evaluation order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError, LayerSizeError
from .graph import Graph
from .layers import LayerDistribution, LayerSample

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def child_seed(seed: int, *keys: int) -> int:
    h = mix64(seed + GOLDEN)
    for k in keys:
        h = mix64(h ^ mix64(k + GOLDEN))
    return h


@dataclass(frozen=True)
class ModelParams:
    n: int
    m: int
    dist: LayerDistribution
    seed: int = 0

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise DomainError(f"n and m must be >= 0, got n={self.n}, m={self.m}")
        if not 0 <= self.seed <= MASK64:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


class Layer(NamedTuple):
    index: int
    sample: LayerSample
    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]


def _layer(k: int, n: int, dist: LayerDistribution, seed: int, scratch: list[int]) -> Layer:
    rng = random.Random(child_seed(seed, k))
    x, y = dist.sample(rng)
    if x > n:
        raise LayerSizeError(k, x, n)
    # partial Fisher-Yates on the shared index array, undone afterwards
    swaps = []
    for i in range(x):
        j = rng.randrange(i, n)
        scratch[i], scratch[j] = scratch[j], scratch[i]
        swaps.append(j)
    nodes = sorted(scratch[:x])
    for i in range(x - 1, -1, -1):
        j = swaps[i]
        scratch[i], scratch[j] = scratch[j], scratch[i]

    rnd = rng.random
    edges = []
    for a in range(x):
        u = nodes[a]
        for b in range(a + 1, x):
            if rnd() < y:
                edges.append((u, nodes[b]))
    return Layer(k, LayerSample(x, y), tuple(nodes), tuple(edges))


def generate_layers(params: ModelParams) -> list[Layer]:
    """Full layer decomposition; its edge union is ``generate(params)``."""
    scratch = list(range(params.n))
    return [_layer(k, params.n, params.dist, params.seed, scratch) for k in range(params.m)]


def generate(params: ModelParams) -> Graph:
    """Sample one graph: the union of ``m`` independent layers."""
    scratch = list(range(params.n))
    union: set[tuple[int, int]] = set()
    for k in range(params.m):
        union.update(_layer(k, params.n, params.dist, params.seed, scratch).edges)
    return Graph.from_edges(params.n, union)


def format_layers(layers: list[Layer]) -> str:
    """One line per layer: ``k x y : v1 v2 ... ; u1-w1 u2-w2 ...``."""
    lines = []
    for layer in layers:
        nodes = " ".join(map(str, layer.nodes))
        edges = " ".join(f"{u}-{v}" for u, v in layer.edges)
        lines.append(f"{layer.index} {layer.sample.x} {layer.sample.y} : {nodes} ; {edges}".rstrip())
    return "\n".join(lines) + ("\n" if lines else "")
