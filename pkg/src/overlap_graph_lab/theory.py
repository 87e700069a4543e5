"""Closed-form predictions and finite-size inclusion-exclusion bounds.

Notation: a mapping ``phi`` assigns each pattern edge to the layer that
generates it.  ``U`` sums Pr(layer k covers phi^-1(k) for all k) over every
mapping, ``L`` sums the joint probabilities over ordered pairs of distinct
mappings, and ``U - L/2 <= Pr(G contains R) <= U``.

Layer ``k`` covers a fixed edge set ``E`` with probability
``(pi)_{||E||,|E|} / (n)_{||E||}``, independently across layers.  Two mappings
with the same preimage partition differ only by an injective relabelling of
layers, so a partition into ``t`` blocks carries weight ``(m)_t``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .covers import MAX_PARTITION_EDGES, _node_mask, _partition_masks, restricted_growth_strings
from .errors import DomainError, SizeError
from .graph import SubgraphPattern, falling_factorial
from .layers import LayerDistribution, cross_moment

CORRECTION_NOTE = "leading term; true mean carries an unevaluated (1 + O(1/n)) factor"
MAX_L_EDGES = 6
MAX_DIRECT_MAPPINGS = 10**6


@dataclass(frozen=True)
class TheoryPrediction:
    leading: float
    correction_note: str = CORRECTION_NOTE
    q_rate: Optional[float] = None


@dataclass(frozen=True)
class BoundParams:
    x: float
    y: float
    c: Optional[float] = None

    def __post_init__(self):
        if not self.x > 0:
            raise DomainError(f"bound parameter x must be positive, got {self.x}")
        if not 0 < self.y <= 1:
            raise DomainError(f"bound parameter y must lie in (0, 1], got {self.y}")


@dataclass(frozen=True)
class InclusionBounds:
    u_exact: float
    l_upper: float
    f_lower: float
    f_upper: float


def expected_cliques_leading(m: int, dist: LayerDistribution, r: int, q_rate: float | None = None) -> TheoryPrediction:
    """(1/r!) m (pi)_{r, r(r-1)/2}."""
    if r < 2:
        raise DomainError(f"clique order must be >= 2, got {r}")
    lead = m * cross_moment(dist, r, r * (r - 1) // 2) / math.factorial(r)
    return TheoryPrediction(lead, q_rate=q_rate)


def expected_cycles_leading(m: int, dist: LayerDistribution, r: int, q_rate: float | None = None) -> TheoryPrediction:
    """(1/(2r)) m (pi)_{r, r}."""
    if r < 3:
        raise DomainError(f"cycle length must be >= 3, got {r}")
    return TheoryPrediction(m * cross_moment(dist, r, r) / (2 * r), q_rate=q_rate)


def expected_leading(pattern: SubgraphPattern, m: int, dist: LayerDistribution) -> TheoryPrediction:
    """Single-layer leading term m (pi)_{r,s} / |Aut(R)| for any pattern."""
    if pattern.kind == "clique" and pattern.r >= 2:
        return expected_cliques_leading(m, dist, pattern.r)
    if pattern.kind == "cycle":
        return expected_cycles_leading(m, dist, pattern.r)
    return TheoryPrediction(m * cross_moment(dist, pattern.r, pattern.s) / pattern.aut)


class _CoverProb:
    """Memoised Pr(one layer covers an edge set with profile (a, b))."""

    def __init__(self, n: int, dist: LayerDistribution, exact: bool):
        self.n = n
        self.dist = dist
        self.exact = exact
        self.cache: dict[tuple[int, int], object] = {}

    def __call__(self, a: int, b: int):
        key = (a, b)
        val = self.cache.get(key)
        if val is None:
            mom = cross_moment(self.dist, a, b)
            den = falling_factorial(self.n, a)
            val = Fraction(mom) / den if self.exact else float(mom) / den
            self.cache[key] = val
        return val


def _check_domain(pattern: SubgraphPattern, n: int, m: int) -> None:
    if n < pattern.r:
        raise DomainError(f"n={n} is smaller than the pattern order r={pattern.r}")
    if m < 0:
        raise DomainError(f"m must be >= 0, got {m}")


def exact_U(pattern: SubgraphPattern, n: int, m: int, dist: LayerDistribution, exact: bool = False):
    """Sum over mappings of Pr(A_phi), via a sum over edge partitions.

    With ``exact=True`` the sum is carried out in rational arithmetic over the
    moment values.
    """
    _check_domain(pattern, n, m)
    s = pattern.s
    if s > MAX_PARTITION_EDGES:
        raise SizeError(f"partition sum limited to {MAX_PARTITION_EDGES} edges, got {s}")
    edges = pattern.edges
    prob = _CoverProb(n, dist, exact)
    total = Fraction(0) if exact else 0.0
    for blocks in _partition_masks(s):
        t = len(blocks)
        if t > m:
            continue
        term = falling_factorial(m, t)
        for b in blocks:
            term *= prob(bin(_node_mask(edges, b)).count("1"), bin(b).count("1"))
        total += term
    return total


def exact_L(pattern: SubgraphPattern, n: int, m: int, dist: LayerDistribution, exact: bool = False):
    """Sum of Pr(A_phi, A_psi) over ordered pairs of distinct mappings.

    The pair (phi, psi) is encoded as a labelling of 2s slots, slot ``i`` for
    ``phi(e_i)`` and slot ``s + i`` for ``psi(e_i)``.  The joint probability
    only depends on which slots share a layer, i.e. on a set partition of the
    slots, and each partition with ``t`` blocks is realised by ``(m)_t`` pairs.
    Layer ``k`` must cover the union of the edges of its slots.
    """
    _check_domain(pattern, n, m)
    s = pattern.s
    if s > MAX_L_EDGES:
        raise SizeError(f"pair enumeration limited to {MAX_L_EDGES} edges, got {s}")
    edges = pattern.edges
    prob = _CoverProb(n, dist, exact)
    ff = [falling_factorial(m, t) for t in range(2 * s + 1)]
    total = Fraction(0) if exact else 0.0
    for rgs in restricted_growth_strings(2 * s, max_blocks=m):
        if rgs[:s] == rgs[s:]:
            continue  # phi == psi
        masks: dict[int, int] = {}
        for i, b in enumerate(rgs):
            masks[b] = masks.get(b, 0) | (1 << (i % s))
        term = ff[len(masks)]
        for mask in masks.values():
            term *= prob(bin(_node_mask(edges, mask)).count("1"), bin(mask).count("1"))
            if not term:
                break
        total += term
    return total


def _layer_events(pattern: SubgraphPattern, n: int, m: int, dist: LayerDistribution, exact: bool):
    edges = pattern.edges
    prob = _CoverProb(n, dist, exact)
    one = Fraction(1) if exact else 1.0

    def joint(*maps) -> object:
        per_layer: dict[int, int] = {}
        for phi in maps:
            for i, k in enumerate(phi):
                per_layer[k] = per_layer.get(k, 0) | (1 << i)
        p = one
        for mask in per_layer.values():
            p *= prob(bin(_node_mask(edges, mask)).count("1"), bin(mask).count("1"))
        return p

    return joint


def direct_U(pattern: SubgraphPattern, n: int, m: int, dist: LayerDistribution, exact: bool = False):
    """Reference value of U by enumerating all m^s mappings."""
    _check_domain(pattern, n, m)
    if m**pattern.s > MAX_DIRECT_MAPPINGS:
        raise SizeError(f"m^s = {m ** pattern.s} mappings exceeds {MAX_DIRECT_MAPPINGS}")
    joint = _layer_events(pattern, n, m, dist, exact)
    total = Fraction(0) if exact else 0.0
    for phi in itertools.product(range(m), repeat=pattern.s):
        total += joint(phi)
    return total


def direct_L(pattern: SubgraphPattern, n: int, m: int, dist: LayerDistribution, exact: bool = False):
    """Reference value of L by enumerating all ordered pairs of mappings."""
    _check_domain(pattern, n, m)
    if m ** (2 * pattern.s) > MAX_DIRECT_MAPPINGS:
        raise SizeError(f"m^(2s) = {m ** (2 * pattern.s)} mapping pairs exceeds {MAX_DIRECT_MAPPINGS}")
    joint = _layer_events(pattern, n, m, dist, exact)
    maps = list(itertools.product(range(m), repeat=pattern.s))
    total = Fraction(0) if exact else 0.0
    for phi in maps:
        for psi in maps:
            if phi != psi:
                total += joint(phi, psi)
    return total


# ------------------------------------------------------------ explicit bounds


def default_bound_params(dist: LayerDistribution) -> BoundParams:
    """x = largest attainable size, y = largest attainable strength."""
    x = max(dist.max_size, 1)
    y = dist.max_strength
    return BoundParams(x, y if y > 0 else 1.0)


def edge_profiles(pattern: SubgraphPattern) -> set[tuple[int, int]]:
    """Distinct (incident nodes, edges) pairs over nonempty edge subsets."""
    edges = pattern.edges
    return {
        (bin(_node_mask(edges, mask)).count("1"), bin(mask).count("1"))
        for mask in range(1, 1 << pattern.s)
    }


def bound_constant(pattern: SubgraphPattern, dist: LayerDistribution, x: float, y: float) -> float:
    """max over nonempty E of (pi)_{||E||,|E|} / (x^||E|| y^|E|)."""
    if pattern.s > MAX_PARTITION_EDGES:
        raise SizeError(f"subset sweep limited to {MAX_PARTITION_EDGES} edges")
    return max(float(cross_moment(dist, a, b)) / (x**a * y**b) for a, b in edge_profiles(pattern))


def _expm1(z: float) -> float:
    try:
        return math.expm1(z)
    except OverflowError:
        return math.inf


def closed_form_bounds(
    pattern: SubgraphPattern,
    n: int,
    m: int,
    bp: BoundParams | None = None,
    dist: LayerDistribution | None = None,
) -> tuple[float, float]:
    """Closed-form upper bounds on U and L.

    u = (exp(r! c x m / n) - 1) s^s x^(r-1) y^s n^(1-r)
    l = (exp(r! c x m / n) - 1) (2s)^(2s) x^r y^(s+1) n^(-r)
    """
    if bp is None:
        if dist is None:
            raise DomainError("closed_form_bounds needs BoundParams or a distribution")
        bp = default_bound_params(dist)
    if n < bp.x:
        raise DomainError(f"n={n} is smaller than x={bp.x}")
    c = bp.c
    if c is None:
        if dist is None:
            raise DomainError("c is unset and no distribution was given")
        c = bound_constant(pattern, dist, bp.x, bp.y)
    r, s, x, y = pattern.r, pattern.s, float(bp.x), float(bp.y)
    grow = _expm1(math.factorial(r) * c * x * m / n)
    if grow == 0:
        return 0.0, 0.0
    u = grow * s**s * x ** (r - 1) * y**s * float(n) ** (1 - r)
    l = grow * (2 * s) ** (2 * s) * x**r * y ** (s + 1) * float(n) ** (-r)
    return u, l


# ----------------------------------------------------------- expected counts


def inclusion_bounds(
    pattern: SubgraphPattern,
    n: int,
    m: int,
    dist: LayerDistribution,
    l_method: str = "auto",
    bp: BoundParams | None = None,
) -> InclusionBounds:
    """U, an upper bound on L, and the Bonferroni interval for Pr(G contains R).

    ``l_method`` is ``"exact"`` (pair-partition sum), ``"closed_form"`` (closed
    form) or ``"auto"`` (exact for patterns with at most 4 edges).
    """
    u = exact_U(pattern, n, m, dist)
    if l_method not in ("auto", "exact", "closed_form"):
        raise DomainError(f"unknown l_method {l_method!r}")
    if l_method == "auto":
        l_method = "exact" if pattern.s <= 4 else "closed_form"
    if m <= 1:
        l = 0.0  # a single layer admits one mapping, so no pairs
    elif l_method == "exact":
        l = exact_L(pattern, n, m, dist)
    else:
        l = closed_form_bounds(pattern, n, m, bp=bp, dist=dist)[1]
    return InclusionBounds(u, l, max(u - l / 2, 0.0), min(u, 1.0))


def expected_count_bracket(
    pattern: SubgraphPattern, n: int, m: int, dist: LayerDistribution, l_method: str = "auto"
) -> tuple[float, float]:
    """Interval containing E N_R(G) = (n)_r / |Aut(R)| * Pr(G contains R)."""
    b = inclusion_bounds(pattern, n, m, dist, l_method=l_method)
    scale = falling_factorial(n, pattern.r) / pattern.aut
    return scale * b.f_lower, scale * b.f_upper


def matched_er_probability(n: int, m: int, dist: LayerDistribution) -> float:
    """Marginal edge probability of the model, 1 - (1 - (pi)_{2,1}/(n)_2)^m."""
    if n < 2:
        raise DomainError(f"need n >= 2 for an edge probability, got {n}")
    inner = float(cross_moment(dist, 2, 1)) / falling_factorial(n, 2)
    if not 0 <= inner <= 1:
        raise DomainError(f"per-layer pair probability {inner} outside [0, 1]")
    return -math.expm1(m * math.log1p(-inner)) if inner < 1 else (1.0 if m > 0 else 0.0)


def er_expected_count(n: int, p: float, pattern: SubgraphPattern) -> float:
    """E N_R in G(n, p): (n)_r / |Aut(R)| * p^s."""
    if not 0 <= p <= 1:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    return falling_factorial(n, pattern.r) / pattern.aut * p**pattern.s
