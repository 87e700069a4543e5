"""Seeded Monte Carlo experiments: generate replicates, count motifs, compare
with the leading-order prediction, write CSV.

Replicate ``i`` at node count ``n`` uses graph seed ``child_seed(base_seed, n, i)``
(see :mod:`overlap_graph_lab.generator`), so rows do not depend on the number of
workers or the order in which replicates finish.
"""

from __future__ import annotations

import csv
import io
import math
import os
import statistics
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .counting import count_pattern
from .errors import ConfigError, DomainError, LayerSizeError, SchemaError
from .generator import MASK64, ModelParams, child_seed, generate
from .graph import SubgraphPattern, parse_pattern
from .layers import LayerDistribution, PointMass, parse_distribution
from .theory import expected_leading

CSV_VERSION_LINE = "# overlap-graph-lab v1"
ROW_FIELDS = ("n", "m", "pattern", "replicate", "seed", "count", "theory_leading", "ratio", "elapsed_ms")
SUMMARY_FIELDS = ("n", "m", "pattern", "replicates", "mean_count", "sd_count", "mean_ratio", "rel_halfwidth95")


@dataclass
class ExperimentConfig:
    n_values: list[int]
    dist: LayerDistribution
    patterns: list[SubgraphPattern]
    replicates: int = 1
    base_seed: int = 0
    m_values: Optional[list[int]] = None
    m_ratio: Optional[float] = None
    output: Optional[str] = None
    threads: int = 1
    timing: bool = False

    def m_for(self, n: int) -> int:
        if self.m_values is not None:
            return self.m_values[self.n_values.index(n)]
        return int(round(self.m_ratio * n))

    def validate(self) -> None:
        if not self.n_values:
            raise ConfigError("at least one n value is required")
        if len(set(self.n_values)) != len(self.n_values):
            raise ConfigError("n values must be distinct")
        if self.replicates < 1:
            raise ConfigError(f"replicates must be >= 1, got {self.replicates}")
        if not self.patterns:
            raise ConfigError("at least one pattern is required")
        if (self.m_values is None) == (self.m_ratio is None):
            raise ConfigError("give exactly one of an explicit m list or an m ratio")
        if self.m_values is not None:
            if len(self.m_values) != len(self.n_values):
                raise ConfigError("explicit m list must match the n list in length")
            if any(m < 0 for m in self.m_values):
                raise ConfigError("m values must be >= 0")
        elif not self.m_ratio > 0:
            raise ConfigError(f"m ratio must be positive, got {self.m_ratio}")
        if not 0 <= self.base_seed <= MASK64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        for n in self.n_values:
            if n < self.dist.max_size:
                raise ConfigError(f"n={n} is smaller than the largest layer size {self.dist.max_size}")
        if self.output:
            parent = os.path.dirname(os.path.abspath(self.output))
            if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
                raise ConfigError(f"output directory {parent!r} is not writable")


@dataclass(frozen=True)
class ExperimentRow:
    n: int
    m: int
    pattern: str
    replicate: int
    seed: int
    count: int
    theory_leading: float
    ratio: Optional[float]
    elapsed_ms: Optional[float]

    def cells(self) -> list[str]:
        return [
            str(self.n),
            str(self.m),
            self.pattern,
            str(self.replicate),
            str(self.seed),
            str(self.count),
            repr(float(self.theory_leading)),
            "" if self.ratio is None else repr(self.ratio),
            "" if self.elapsed_ms is None else f"{self.elapsed_ms:.3f}",
        ]


@dataclass(frozen=True)
class SummaryRow:
    n: int
    m: int
    pattern: str
    replicates: int
    mean_count: float
    sd_count: float
    mean_ratio: Optional[float]
    rel_halfwidth95: Optional[float]

    def cells(self) -> list[str]:
        fmt = lambda v: "" if v is None else repr(float(v))
        return [str(self.n), str(self.m), self.pattern, str(self.replicates),
                fmt(self.mean_count), fmt(self.sd_count), fmt(self.mean_ratio), fmt(self.rel_halfwidth95)]


@dataclass
class ExperimentResult:
    rows: list[ExperimentRow]
    summary: list[SummaryRow]
    failures: list[tuple[int, int, str]] = field(default_factory=list)

    def counts(self, n: int, pattern: str) -> list[int]:
        return [r.count for r in self.rows if r.n == n and r.pattern == pattern]


def _replicate(task) -> tuple[list[ExperimentRow], Optional[tuple[int, int, str]]]:
    n, m, rep, base_seed, dist, patterns, leads, timing = task
    seed = child_seed(base_seed, n, rep)
    try:
        g = generate(ModelParams(n, m, dist, seed))
    except LayerSizeError as exc:
        return [], (n, rep, str(exc))
    rows = []
    for pat, lead in zip(patterns, leads):
        t0 = time.perf_counter()
        c = count_pattern(g, pat).count
        ms = 1000 * (time.perf_counter() - t0)
        ratio = c / lead if lead > 0 else None
        rows.append(ExperimentRow(n, m, pat.label, rep, seed, c, lead, ratio, ms if timing else None))
    return rows, None


def _map(fn, tasks: Sequence, threads: int):
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * threads))))
    return [fn(t) for t in tasks]


def summarize(rows: Iterable[ExperimentRow]) -> list[SummaryRow]:
    groups: dict[tuple[int, str], list[ExperimentRow]] = {}
    for r in rows:
        groups.setdefault((r.n, r.pattern), []).append(r)
    out = []
    for (n, pat), rs in groups.items():
        counts = [r.count for r in rs]
        mean = statistics.fmean(counts)
        sd = statistics.stdev(counts) if len(counts) > 1 else 0.0
        ratios = [r.ratio for r in rs if r.ratio is not None]
        mean_ratio = statistics.fmean(ratios) if ratios else None
        hw = 1.96 * sd / math.sqrt(len(counts)) / mean if mean > 0 else None
        out.append(SummaryRow(n, rs[0].m, pat, len(rs), mean, sd, mean_ratio, hw))
    return out


def format_rows(rows: Sequence[ExperimentRow], failures: Sequence[tuple[int, int, str]] = ()) -> str:
    buf = io.StringIO()
    buf.write(CSV_VERSION_LINE + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ROW_FIELDS)
    for r in rows:
        w.writerow(r.cells())
    for n, rep, msg in failures:
        buf.write(f"# error n={n} replicate={rep}: {msg}\n")
    return buf.getvalue()


def format_summary(summary: Sequence[SummaryRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_FIELDS)
    for s in summary:
        w.writerow(s.cells())
    return buf.getvalue()


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run every (n, replicate), count every pattern, optionally write CSV."""
    config.validate()
    order = {p.label: i for i, p in enumerate(config.patterns)}
    tasks = []
    for n in config.n_values:
        m = config.m_for(n)
        leads = [expected_leading(p, m, config.dist).leading for p in config.patterns]
        for rep in range(config.replicates):
            tasks.append((n, m, rep, config.base_seed, config.dist, config.patterns, leads, config.timing))
    rows: list[ExperimentRow] = []
    failures = []
    for rs, fail in _map(_replicate, tasks, config.threads):
        rows.extend(rs)
        if fail:
            failures.append(fail)
    rows.sort(key=lambda r: (r.n, order[r.pattern], r.replicate))
    result = ExperimentResult(rows, summarize(rows), sorted(failures))
    if config.output:
        with open(config.output, "w", newline="") as fh:
            fh.write(format_rows(rows, result.failures))
    return result


# ------------------------------------------------------------- regime demo


@dataclass(frozen=True)
class RegimeSummary:
    n: int
    m: int
    p: float
    replicates: int
    mean_c4: float
    mean_k4: float
    sd_c4: float
    sd_k4: float
    leading_c4: float
    leading_k4: float

    def cells(self) -> list[str]:
        return [str(self.n), str(self.m), repr(self.p), str(self.replicates),
                repr(self.mean_c4), repr(self.mean_k4), repr(self.leading_c4), repr(self.leading_k4)]


REGIME_FIELDS = ("n", "m", "p", "replicates", "mean_C4", "mean_K4", "leading_C4", "leading_K4")


def run_regime_demo(
    n: int,
    epsilon_exponent: float,
    replicates: int,
    base_seed: int = 0,
    p: float | None = None,
    threads: int = 1,
) -> RegimeSummary:
    """Layers of five nodes with strength p = n^-e and m = n; compare 4-cycles with 4-cliques.

    ``p`` overrides the exponent when given.
    """
    if n < 5:
        raise DomainError(f"n must be at least the layer size 5, got {n}")
    if n < 1000:
        warnings.warn(f"n={n} is below the intended scale of 1000", stacklevel=2)
    if p is None:
        if not 1 / 8 < epsilon_exponent < 1 / 4:
            warnings.warn(
                f"exponent {epsilon_exponent} outside (1/8, 1/4): cycles-without-cliques regime not targeted",
                stacklevel=2,
            )
        p = float(n) ** (-epsilon_exponent)
    cfg = ExperimentConfig(
        n_values=[n], m_values=[n], dist=PointMass(5, p),
        patterns=[SubgraphPattern.cycle(4), SubgraphPattern.clique(4)],
        replicates=replicates, base_seed=base_seed, threads=threads,
    )
    res = run_experiment(cfg)
    c4, k4 = res.summary  # pattern order of cfg
    ff4 = 5 * 4 * 3 * 2
    return RegimeSummary(
        n, n, p, replicates, c4.mean_count, k4.mean_count, c4.sd_count, k4.sd_count,
        n * ff4 * p**4 / 8, n * ff4 * p**6 / 24,
    )


# ---------------------------------------------------------- convergence table


@dataclass(frozen=True)
class ConvergenceRow:
    pattern: str
    n: int
    replicates: int
    mean_ratio: float
    sd_ratio: float


@dataclass
class ConvergenceTable:
    rows: list[ConvergenceRow]
    sd_nonincreasing: dict[str, bool]

    def format(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("pattern", "n", "replicates", "mean_ratio", "sd_ratio", "sd_nonincreasing"))
        for r in self.rows:
            w.writerow((r.pattern, r.n, r.replicates, repr(r.mean_ratio), repr(r.sd_ratio),
                        str(self.sd_nonincreasing[r.pattern]).lower()))
        return buf.getvalue()


def read_rows(path) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    header = reader.fieldnames or []
    for col in ("n", "pattern", "ratio"):
        if col not in header:
            raise SchemaError(f"{path}: missing column {col!r}")
    return list(reader)


def summarize_convergence(paths: Sequence) -> ConvergenceTable:
    """Per pattern and n, the mean and SD of count/leading across replicates."""
    ratios: dict[tuple[str, int], list[float]] = {}
    for path in paths:
        for row in read_rows(path):
            if row["ratio"] == "":
                continue
            ratios.setdefault((row["pattern"], int(row["n"])), []).append(float(row["ratio"]))
    ns = {n for _, n in ratios}
    if len(ns) < 2:
        raise ConfigError(f"convergence summary needs at least two distinct n values, got {sorted(ns)}")
    rows = []
    for (pat, n), vals in sorted(ratios.items()):
        sd = statistics.stdev(vals) if len(vals) > 1 else 0.0
        rows.append(ConvergenceRow(pat, n, len(vals), statistics.fmean(vals), sd))
    flags = {}
    for pat in {r.pattern for r in rows}:
        sds = [r.sd_ratio for r in rows if r.pattern == pat]
        flags[pat] = all(b <= a for a, b in zip(sds, sds[1:]))
    return ConvergenceTable(rows, flags)


# ------------------------------------------------------------- config files


def parse_config_text(text: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment line."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"config line {lineno}: expected 'key = value'")
        out[key.strip().lower()] = value.strip()
    return out


def _int_list(value: str, what: str) -> list[int]:
    try:
        return [int(v) for v in value.replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"{what} must be a list of integers, got {value!r}") from None


def config_from_mapping(values: dict[str, str]) -> ExperimentConfig:
    """Build a config from string values (config file merged with CLI flags).

    Keys: ``n``, ``m`` or ``m_ratio``, ``dist``, ``patterns`` (whitespace
    separated), ``replicates``, ``seed``, ``output``, ``threads``, ``timing``.
    """
    known = {"n", "m", "m_ratio", "dist", "patterns", "replicates", "seed", "output", "threads", "timing"}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key in ("n", "dist", "patterns"):
        if key not in values:
            raise ConfigError(f"config is missing {key!r}")
    try:
        m_ratio = float(values["m_ratio"]) if "m_ratio" in values else None
        replicates = int(values.get("replicates", "1"))
        seed = int(values.get("seed", "0"))
        threads = int(values.get("threads", "1"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    m_values = _int_list(values["m"], "m") if "m" in values else None
    if m_values is None and m_ratio is None:
        m_ratio = 1.0
    cfg = ExperimentConfig(
        n_values=_int_list(values["n"], "n"),
        m_values=m_values,
        m_ratio=m_ratio,
        dist=parse_distribution(values["dist"]),
        patterns=[parse_pattern(p) for p in values["patterns"].split()],
        replicates=replicates,
        base_seed=seed,
        output=values.get("output") or None,
        threads=threads,
        timing=values.get("timing", "false").lower() in ("1", "true", "yes"),
    )
    cfg.validate()
    return cfg
