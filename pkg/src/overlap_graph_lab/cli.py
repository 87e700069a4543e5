"""Command line entry point: ``overlap-graph-lab <subcommand> ...``.

Exit codes: 0 success, 1 usage or config error, 2 verification failure,
3 runtime guard violation.
"""

from __future__ import annotations

import argparse
import sys
import warnings

from . import covers, theory
from .counting import count_pattern
from .errors import ConfigError, OverlapGraphError
from .experiment import (
    REGIME_FIELDS,
    config_from_mapping,
    format_rows,
    format_summary,
    parse_config_text,
    run_experiment,
    run_regime_demo,
    summarize_convergence,
)
from .generator import ModelParams, format_layers, generate, generate_layers
from .graph import SubgraphPattern, falling_factorial, format_edge_list, parse_pattern, read_edge_list, write_edge_list
from .layers import parse_distribution

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_GUARD = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _global_flags() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--seed", type=int, help="base seed (unsigned 64-bit)")
    g.add_argument("--threads", type=int, help="worker processes for replicates")
    g.add_argument("--config", help="key = value config file; flags override it")
    g.add_argument("--out", help="output path")
    return p


def _load_config(args) -> dict[str, str]:
    if not args.config:
        return {}
    try:
        with open(args.config) as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config!r}: {exc}") from None


def _need(args, cfg: dict, name: str, key: str | None = None, conv=str):
    val = getattr(args, name, None)
    if val is not None:
        return val
    key = key or name
    if key in cfg:
        try:
            return conv(cfg[key])
        except ValueError:
            raise ConfigError(f"bad value for {key!r}: {cfg[key]!r}") from None
    raise ConfigError(f"--{name.replace('_', '-')} is required")


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _patterns(args, cfg) -> list[SubgraphPattern]:
    specs = args.pattern or cfg.get("patterns", "").split()
    if not specs:
        raise ConfigError("--pattern is required")
    return [parse_pattern(s) for s in specs]


# ------------------------------------------------------------- subcommands


def cmd_generate(args) -> int:
    cfg = _load_config(args)
    n = _need(args, cfg, "n", conv=int)
    m = _need(args, cfg, "m", conv=int)
    dist = parse_distribution(_need(args, cfg, "dist"))
    seed = args.seed if args.seed is not None else int(cfg.get("seed", "0"))
    params = ModelParams(n, m, dist, seed)
    g = generate(params)
    out = args.out or cfg.get("output")
    if out:
        write_edge_list(g, out)
    else:
        sys.stdout.write(format_edge_list(g))
    if args.layers:
        with open(args.layers, "w") as fh:
            fh.write(format_layers(generate_layers(params)))
    return EXIT_OK


def cmd_count(args) -> int:
    cfg = _load_config(args)
    g = read_edge_list(_need(args, cfg, "input", "in"))
    lines = ["pattern,count,elapsed_ms"]
    for pat in _patterns(args, cfg):
        res = count_pattern(g, pat, r_max=args.r_max)
        label = f'"{pat.label}"' if "," in pat.label else pat.label
        lines.append(f"{label},{res.count},{res.elapsed_ms:.3f}")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_theory(args) -> int:
    cfg = _load_config(args)
    n = _need(args, cfg, "n", conv=int)
    m = _need(args, cfg, "m", conv=int)
    dist = parse_distribution(_need(args, cfg, "dist"))
    p_er = theory.matched_er_probability(n, m, dist)
    lines = ["pattern,leading,U,L_upper,f_lower,f_upper,EN_lower,EN_upper,p_er"]
    for pat in _patterns(args, cfg):
        lead = theory.expected_leading(pat, m, dist).leading
        b = theory.inclusion_bounds(pat, n, m, dist, l_method=args.l_method)
        scale = falling_factorial(n, pat.r) / pat.aut
        label = f'"{pat.label}"' if "," in pat.label else pat.label
        vals = [lead, b.u_exact, b.l_upper, b.f_lower, b.f_upper, scale * b.f_lower, scale * b.f_upper, p_er]
        lines.append(label + "," + ",".join(repr(float(v)) for v in vals))
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_bounds(args) -> int:
    cfg = _load_config(args)
    n = _need(args, cfg, "n", conv=int)
    m = _need(args, cfg, "m", conv=int)
    dist = parse_distribution(_need(args, cfg, "dist"))
    default = theory.default_bound_params(dist)
    bp = theory.BoundParams(
        args.x if args.x is not None else default.x,
        args.y if args.y is not None else default.y,
        args.c,
    )
    lines = ["pattern,x,y,c,u_bound,l_bound"]
    for pat in _patterns(args, cfg):
        c = bp.c if bp.c is not None else theory.bound_constant(pat, dist, bp.x, bp.y)
        u, l = theory.closed_form_bounds(pat, n, m, theory.BoundParams(bp.x, bp.y, c))
        label = f'"{pat.label}"' if "," in pat.label else pat.label
        lines.append(f"{label},{bp.x!r},{bp.y!r},{c!r},{u!r},{l!r}")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    pats = [parse_pattern(p) for p in args.pattern or []]
    pats2 = [parse_pattern(p) for p in args.pattern2 or []]
    if args.lemma == "1":
        targets = pats or covers.connected_patterns(args.max_edges)
        rep = covers.CheckReport("1")
        for p in targets:
            rep.merge(covers.check_cover_excess(p))
    elif args.lemma == "2":
        if pats:
            if len(pats2) != len(pats):
                raise ConfigError("--lemma 2 needs one --pattern2 per --pattern")
            pairs = list(zip(pats, pats2))
        else:
            pool = covers.connected_patterns(args.max_edges - 1)
            pairs = [(a, b) for i, a in enumerate(pool) for b in pool[i:] if a.s + b.s <= args.max_edges]
        rep = covers.CheckReport("2")
        for a, b in pairs:
            rep.merge(covers.check_disjoint_partitions(a, b))
    else:
        orders = [p.r for p in pats] if pats else [3, 4, 5]
        for p in pats:
            if p.kind != "clique":
                raise ConfigError("--lemma 6 applies to cliques; use --pattern clique:r")
        rep = covers.CheckReport("6")
        for r in orders:
            rep.merge(covers.check_clique_splits(r))
    _write("lemma,cases_checked,violations\n" + rep.csv_row() + "\n", args.out)
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def _experiment_values(args) -> dict[str, str]:
    values = _load_config(args)
    flag_map = {
        "n": " ".join(map(str, args.n)) if args.n else None,
        "m": " ".join(map(str, args.m)) if args.m else None,
        "m_ratio": None if args.m_ratio is None else str(args.m_ratio),
        "dist": args.dist,
        "patterns": " ".join(args.pattern) if args.pattern else None,
        "replicates": None if args.replicates is None else str(args.replicates),
        "seed": None if args.seed is None else str(args.seed),
        "output": args.out,
        "threads": None if args.threads is None else str(args.threads),
        "timing": "true" if args.timing else None,
    }
    for k, v in flag_map.items():
        if v is not None:
            values[k] = v
    if args.m or args.m_ratio is not None:
        # a flag for one m rule replaces the config's other rule
        values.pop("m_ratio" if args.m else "m", None)
    return values


def cmd_experiment(args) -> int:
    cfg = config_from_mapping(_experiment_values(args))
    res = run_experiment(cfg)
    if cfg.output:
        sys.stdout.write(format_summary(res.summary))
    else:
        sys.stdout.write(format_rows(res.rows, res.failures))
        sys.stderr.write(format_summary(res.summary))
    return EXIT_GUARD if res.failures else EXIT_OK


def cmd_regime(args) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        s = run_regime_demo(args.n, args.exponent, args.replicates, args.seed or 0, p=args.p,
                            threads=args.threads or 1)
    for w in caught:
        sys.stderr.write(f"warning: {w.message}\n")
    _write(",".join(REGIME_FIELDS) + "\n" + ",".join(s.cells()) + "\n", args.out)
    return EXIT_OK


def cmd_summarize(args) -> int:
    table = summarize_convergence(args.csv)
    _write(table.format(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = _Parser(prog="overlap-graph-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", parents=[common], help="sample one graph")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--dist")
    p.add_argument("--layers", help="also dump the layer decomposition here")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("count", parents=[common], help="count subgraphs in an edge list")
    p.add_argument("--in", dest="input")
    p.add_argument("--pattern", action="append")
    p.add_argument("--r-max", type=int, default=8)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("theory", parents=[common], help="leading terms and inclusion-exclusion bracket")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--dist")
    p.add_argument("--pattern", action="append")
    p.add_argument("--l-method", choices=["auto", "exact", "closed_form"], default="auto")
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("bounds", parents=[common], help="closed-form bounds on U and L")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--dist")
    p.add_argument("--pattern", action="append")
    p.add_argument("--x", type=float)
    p.add_argument("--y", type=float)
    p.add_argument("--c", type=float)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", parents=[common], help="exhaustive cover-inequality checks")
    p.add_argument("--lemma", choices=["1", "2", "6"], required=True)
    p.add_argument("--pattern", action="append")
    p.add_argument("--pattern2", action="append")
    p.add_argument("--max-edges", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", parents=[common], help="seeded Monte Carlo run to CSV")
    p.add_argument("--n", type=int, nargs="+")
    p.add_argument("--m", type=int, nargs="+")
    p.add_argument("--m-ratio", type=float)
    p.add_argument("--dist")
    p.add_argument("--pattern", action="append")
    p.add_argument("--replicates", type=int)
    p.add_argument("--timing", action="store_true", help="fill the elapsed_ms column")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("regime-demo", parents=[common], help="4-cycles without 4-cliques")
    p.add_argument("--n", type=int, default=4096)
    p.add_argument("--exponent", type=float, default=3 / 16)
    p.add_argument("--p", type=float, help="use this strength instead of n^-exponent")
    p.add_argument("--replicates", type=int, default=50)
    p.set_defaults(func=cmd_regime)

    p = sub.add_parser("summarize", parents=[common], help="ratio SD per n from experiment CSVs")
    p.add_argument("csv", nargs="+")
    p.set_defaults(func=cmd_summarize)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "command", None) == "verify" and args.max_edges is None:
        args.max_edges = 5 if args.lemma == "1" else 6
    try:
        return args.func(args)
    except OverlapGraphError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
