"""Layer-type distributions over (size, strength) and their factorial cross-moments.

Three families are supported: a point mass, a finite table (which lets the
strength depend on the size) and a binomial size with constant strength.
All moments are exact for these families; a Monte Carlo estimator is kept
alongside for cross-checking.
"""

from __future__ import annotations

import bisect
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, DomainError
from .graph import falling_factorial

DEFAULT_MOMENT_SAMPLES = 1_000_000
WEIGHT_TOL = 1e-9


class LayerSample(NamedTuple):
    x: int
    y: float


def _check_strength(y) -> None:
    if not 0 <= y <= 1:
        raise ConfigError(f"strength must lie in [0, 1], got {y}")


def _check_size(x) -> None:
    if isinstance(x, bool) or not isinstance(x, (int, np.integer)) or x < 0:
        raise ConfigError(f"layer size must be an integer >= 0, got {x!r}")


class LayerDistribution:
    """Base class; subclasses implement the sampling law and moments."""

    moment_samples: int

    def sample(self, rng) -> LayerSample:
        raise NotImplementedError

    def sample_many(self, gen: np.random.Generator, size: int) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def cross_moment(self, r: int, s: int):
        raise NotImplementedError

    def truncated_cross_moment(self, a: int, b: int, M: int):
        raise NotImplementedError

    @property
    def max_size(self) -> int:
        raise NotImplementedError

    @property
    def max_strength(self):
        raise NotImplementedError

    @property
    def spec(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.spec


@dataclass(frozen=True)
class PointMass(LayerDistribution):
    x: int
    y: float
    moment_samples: int = field(default=DEFAULT_MOMENT_SAMPLES, compare=False)

    def __post_init__(self):
        _check_size(self.x)
        _check_strength(self.y)

    def sample(self, rng) -> LayerSample:
        return LayerSample(self.x, self.y)

    def sample_many(self, gen, size):
        return np.full(size, self.x, dtype=np.int64), np.full(size, float(self.y))

    def cross_moment(self, r, s):
        return falling_factorial(self.x, r) * self.y**s

    def truncated_cross_moment(self, a, b, M):
        return self.cross_moment(a, b) if self.x > M else 0

    @property
    def max_size(self):
        return self.x

    @property
    def max_strength(self):
        return self.y

    @property
    def spec(self):
        return f"point:x={self.x},y={self.y}"


@dataclass(frozen=True)
class FiniteTable(LayerDistribution):
    """Finite law: rows ``(x_i, y_i, w_i)`` with weights summing to one."""

    rows: tuple[tuple[int, float, float], ...]
    moment_samples: int = field(default=DEFAULT_MOMENT_SAMPLES, compare=False)

    def __post_init__(self):
        if not self.rows:
            raise ConfigError("table distribution needs at least one row")
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        for x, y, w in rows:
            _check_size(x)
            _check_strength(y)
            if not w > 0:
                raise ConfigError(f"table weights must be positive, got {w}")
        total = sum(w for _, _, w in rows)
        if abs(total - 1) > WEIGHT_TOL:
            raise ConfigError(f"table weights sum to {total}, expected 1")

    @cached_property
    def _cdf(self) -> list[float]:
        acc, out = 0.0, []
        for _, _, w in self.rows:
            acc += float(w)
            out.append(acc)
        return out

    def sample(self, rng) -> LayerSample:
        i = bisect.bisect_right(self._cdf, rng.random() * self._cdf[-1])
        x, y, _ = self.rows[min(i, len(self.rows) - 1)]
        return LayerSample(x, y)

    def sample_many(self, gen, size):
        xs = np.array([r[0] for r in self.rows], dtype=np.int64)
        ys = np.array([float(r[1]) for r in self.rows])
        w = np.array([float(r[2]) for r in self.rows])
        idx = gen.choice(len(self.rows), size=size, p=w / w.sum())
        return xs[idx], ys[idx]

    def cross_moment(self, r, s):
        return sum(w * falling_factorial(x, r) * y**s for x, y, w in self.rows)

    def truncated_cross_moment(self, a, b, M):
        return sum(w * falling_factorial(x, a) * y**b for x, y, w in self.rows if x > M)

    @property
    def max_size(self):
        return max(x for x, _, _ in self.rows)

    @property
    def max_strength(self):
        return max(y for _, y, _ in self.rows)

    @property
    def spec(self):
        return "table:" + ";".join(f"({x},{y},{w})" for x, y, w in self.rows)


@dataclass(frozen=True)
class BinomialSize(LayerDistribution):
    """Size ~ Bin(N, p), constant strength ``y``."""

    N: int
    p: float
    y: float
    moment_samples: int = field(default=DEFAULT_MOMENT_SAMPLES, compare=False)

    def __post_init__(self):
        _check_size(self.N)
        if not 0 <= self.p <= 1:
            raise ConfigError(f"binomial p must lie in [0, 1], got {self.p}")
        _check_strength(self.y)

    def pmf(self, k: int):
        if not 0 <= k <= self.N:
            return 0
        return math.comb(self.N, k) * self.p**k * (1 - self.p) ** (self.N - k)

    @cached_property
    def _cdf(self) -> list[float]:
        acc, out = 0.0, []
        for k in range(self.N + 1):
            acc += float(self.pmf(k))
            out.append(acc)
        return out

    def sample(self, rng) -> LayerSample:
        k = bisect.bisect_right(self._cdf, rng.random() * self._cdf[-1])
        return LayerSample(min(k, self.N), self.y)

    def sample_many(self, gen, size):
        return gen.binomial(self.N, float(self.p), size=size).astype(np.int64), np.full(size, float(self.y))

    def cross_moment(self, r, s):
        # E[(X)_r] = (N)_r p^r for the binomial law
        return falling_factorial(self.N, r) * self.p**r * self.y**s

    def truncated_cross_moment(self, a, b, M):
        return sum(
            falling_factorial(k, a) * self.pmf(k) for k in range(max(M + 1, 0), self.N + 1)
        ) * self.y**b

    @property
    def max_size(self):
        return self.N

    @property
    def max_strength(self):
        return self.y

    @property
    def spec(self):
        return f"binom:N={self.N},p={self.p},y={self.y}"


def sample_layer(dist: LayerDistribution, rng) -> LayerSample:
    """Draw one (size, strength) pair using a ``random.Random``-like stream."""
    return dist.sample(rng)


def cross_moment(dist: LayerDistribution, r: int, s: int):
    """E[(X)_r Y^s]."""
    if r < 0 or s < 0:
        raise DomainError(f"moment orders must be >= 0, got ({r}, {s})")
    return dist.cross_moment(r, s)


def truncated_cross_moment(dist: LayerDistribution, a: int, b: int, M: int):
    """E[(X)_a Y^b 1(X > M)]."""
    if a < 0 or b < 0 or M < 0:
        raise DomainError(f"orders and threshold must be >= 0, got ({a}, {b}, {M})")
    return dist.truncated_cross_moment(a, b, M)


def monte_carlo_cross_moment(
    dist: LayerDistribution, r: int, s: int, samples: int | None = None, seed: int = 0
) -> tuple[float, float]:
    """Sample estimate of E[(X)_r Y^s] and its standard error."""
    samples = samples or dist.moment_samples
    gen = np.random.default_rng(seed)
    x, y = dist.sample_many(gen, samples)
    x = x.astype(float)
    ff = np.ones(samples)
    for i in range(r):
        ff *= x - i
    vals = ff * y**s
    se = vals.std(ddof=1) / math.sqrt(samples) if samples > 1 else float("nan")
    return float(vals.mean()), float(se)


# -------------------------------------------------------------------- parsing

_KV = re.compile(r"^\s*(\w+)\s*=\s*([^,]+?)\s*$")


def _kv(body: str) -> dict[str, str]:
    out = {}
    for part in body.split(","):
        if not part.strip():
            continue
        m = _KV.match(part)
        if not m:
            raise ConfigError(f"expected key=value, got {part!r}")
        out[m.group(1)] = m.group(2)
    return out


def _int(s: str, what: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise ConfigError(f"{what} must be an integer, got {s!r}") from None


def _float(s: str, what: str) -> float:
    try:
        return float(s)
    except ValueError:
        raise ConfigError(f"{what} must be a number, got {s!r}") from None


def parse_distribution(spec: str) -> LayerDistribution:
    """Parse ``point:x=5,y=0.5``, ``table:(2,1.0,0.5);(3,0.2,0.5)`` or
    ``binom:N=10,p=0.3,y=0.5``."""
    kind, sep, body = spec.strip().partition(":")
    if not sep:
        raise ConfigError(f"distribution spec {spec!r} lacks a 'kind:' prefix")
    kind = kind.strip().lower()
    if kind == "point":
        kv = _kv(body)
        try:
            return PointMass(_int(kv["x"], "x"), _float(kv["y"], "y"))
        except KeyError as exc:
            raise ConfigError(f"point distribution missing {exc.args[0]}") from None
    if kind == "binom":
        kv = _kv(body)
        try:
            return BinomialSize(_int(kv["N"], "N"), _float(kv["p"], "p"), _float(kv["y"], "y"))
        except KeyError as exc:
            raise ConfigError(f"binom distribution missing {exc.args[0]}") from None
    if kind == "table":
        rows = []
        for chunk in body.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            if not (chunk.startswith("(") and chunk.endswith(")")):
                raise ConfigError(f"table row must look like (x,y,w), got {chunk!r}")
            parts = chunk[1:-1].split(",")
            if len(parts) != 3:
                raise ConfigError(f"table row must have three entries, got {chunk!r}")
            rows.append((_int(parts[0], "x"), _float(parts[1], "y"), _float(parts[2], "w")))
        return FiniteTable(tuple(rows))
    raise ConfigError(f"unknown distribution kind {kind!r}")
