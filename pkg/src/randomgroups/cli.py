"""Command line front end.

Subcommands map one-to-one onto the library layers: sample, link,
spectrum, criterion, match, embed, sweep.  Machine-readable output goes
to stdout (or --out), a one-line human summary goes to stderr.

Exit codes: 0 success, 1 usage error (bad or missing flags), 2 runtime
failure (unreadable input, sampling budget exhausted, and the like).
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import embed as embed_mod
from . import experiments as exp_mod
from .linkgraph import (
    build_link_graph,
    collapse_duplicates,
    is_bipartite,
    is_connected,
    parse_graph_text,
    split_link_parts,
    write_graph_text,
)
from .matching import (
    DEFAULT_BUDGET,
    DEFAULT_RESTARTS,
    build_hypergraph,
    extract_permutation_subsets,
    find_perfect_matching,
    parse_hypergraph_text,
    sample_hypergraph,
    write_hypergraph_text,
)
from .models import (
    parse_presentation_text,
    sample_graph,
    sample_gromov,
    sample_permutation_model,
    sample_triangular,
    write_presentation_text,
)
from .spectral import eig_symmetric, laplacian, spectral_criterion
from .words import word_from_text, word_to_text

PRESENTATION_MODELS = (
    "gromov",
    "gromov-restricted",
    "triangular",
    "positive-triangular",
    "permutation",
)
GRAPH_MODELS = (
    "configuration",
    "configuration_reduced",
    "gnp",
    "gnm",
    "bipartite_regular",
)


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1; the default ArgumentParser would use 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require(parser: _Parser, args, names: list[str]) -> None:
    for name in names:
        if getattr(args, name.lstrip("-").replace("-", "_")) is None:
            parser.error(f"{name} is required for this mode")


def _check_ranges(parser: _Parser, args) -> None:
    # flag-level range problems are usage errors, not runtime failures
    d = getattr(args, "d", None)
    if d is not None and not 0 < d < 1:
        parser.error("--d must lie in (0, 1)")
    p = getattr(args, "p", None)
    if p is not None and not 0 <= p <= 1:
        parser.error("--p must lie in [0, 1]")


def _check_table_length(parser: _Parser, l: int) -> None:
    if l < 3 or l % 3:
        parser.error("--l must be a positive multiple of 3 for word tables")


# ------------------------------------------------------------- sample


def _cmd_sample(parser: _Parser, args) -> int:
    rng = random.Random(args.seed)
    _check_ranges(parser, args)
    if args.graph is not None:
        params = {}
        for key in ("n", "v", "p", "M"):
            val = getattr(args, key)
            if val is not None:
                params[key] = val
        need = {
            "configuration": ["--n", "--v"],
            "configuration_reduced": ["--n", "--v"],
            "gnp": ["--n", "--p"],
            "gnm": ["--n", "--M"],
            "bipartite_regular": ["--n", "--v"],
        }[args.graph]
        _require(parser, args, need)
        g = sample_graph(args.graph, rng, **params)
        _emit(write_graph_text(g), args.out)
        print(
            f"sampled {args.graph} graph: {g.vertex_count} vertices, "
            f"{g.edge_count()} edges",
            file=sys.stderr,
        )
        return 0
    if args.hypergraph:
        _require(parser, args, ["--parts", "--M"])
        h = sample_hypergraph(args.parts, args.M, rng, reduced=args.reduced)
        _emit(write_hypergraph_text(h), args.out)
        print(
            f"sampled hypergraph: parts of {h.part_size}, {len(h.edges)} edges",
            file=sys.stderr,
        )
        return 0
    model = args.model
    if model is None:
        parser.error("one of --model, --graph, --hypergraph is required")
    if model == "gromov":
        _require(parser, args, ["--n", "--l", "--d"])
        pres = sample_gromov(args.n, args.l, args.d, rng, count=args.count)
    elif model == "gromov-restricted":
        _require(parser, args, ["--n", "--l", "--d"])
        _check_table_length(parser, args.l)
        pres = embed_mod.sample_gromov_restricted(
            args.n, args.l, args.d, rng, count_scale=args.count_scale, count=args.count
        )
    elif model in ("triangular", "positive-triangular"):
        _require(parser, args, ["--m", "--d"])
        pres = sample_triangular(
            args.m, args.d, rng, positive=model == "positive-triangular", count=args.count
        )
    else:
        _require(parser, args, ["--n", "--v"])
        pres, _ = sample_permutation_model(args.n, args.v, rng, reduced=args.reduced)
    _emit(write_presentation_text(pres), args.out)
    print(
        f"sampled {pres.model_tag} presentation: {pres.generator_count} generators, "
        f"{len(pres.relators)} relators",
        file=sys.stderr,
    )
    return 0


# --------------------------------------------------------------- link


def _cmd_link(parser: _Parser, args) -> int:
    pres = parse_presentation_text(_read_input(args.input))
    if args.parts:
        blocks = []
        for i, part in enumerate(split_link_parts(pres), start=1):
            blocks.append(f"part={i}\n" + write_graph_text(part))
        _emit("\n".join(blocks), args.out)
        print("link graph split into 3 parts", file=sys.stderr)
        return 0
    g = build_link_graph(pres)
    removed_edges = 0
    if args.collapse:
        g, removed = collapse_duplicates(g)
        removed_edges = removed.edge_count()
    _emit(write_graph_text(g), args.out)
    conn = "connected" if is_connected(g) else "disconnected"
    bip = "bipartite" if is_bipartite(g) else "non-bipartite"
    extra = f", {removed_edges} duplicate edges removed" if args.collapse else ""
    print(
        f"link graph: {g.vertex_count} vertices, {g.edge_count()} edges, "
        f"{conn}, {bip}{extra}",
        file=sys.stderr,
    )
    return 0


# ------------------------------------------------------------ spectrum


def _cmd_spectrum(parser: _Parser, args) -> int:
    text = _read_input(args.input)
    if args.presentation:
        g = build_link_graph(parse_presentation_text(text))
    else:
        g = parse_graph_text(text)
    # the walk form is the normalized one conjugated by the square-root
    # degree matrix, so its spectrum comes from the symmetric matrix
    mat = laplacian(g, kind="normalized" if args.kind == "walk" else args.kind)
    vals = [float(v) for v in eig_symmetric(mat)]
    _emit("".join(f"{v!r}\n" for v in vals), args.out)
    second = vals[1] if len(vals) > 1 else float("nan")
    print(
        f"{args.kind} laplacian spectrum of {g.vertex_count} vertices: "
        f"second smallest {second:.6f}",
        file=sys.stderr,
    )
    return 0


# ----------------------------------------------------------- criterion


def _cmd_criterion(parser: _Parser, args) -> int:
    pres = parse_presentation_text(_read_input(args.input))
    holds, report = spectral_criterion(pres)
    _emit(report.to_json() + "\n", args.out)
    verdict = "holds" if holds else "fails"
    detail = f"lambda1={report.lambda1:.6f}" if report.connected else report.reason
    print(f"criterion {verdict}: {detail}", file=sys.stderr)
    return 0


# --------------------------------------------------------------- match


def _cmd_match(parser: _Parser, args) -> int:
    text = _read_input(args.input)
    if args.v is not None:
        pres = parse_presentation_text(text)
        status, pairs = extract_permutation_subsets(
            pres,
            args.v,
            mode=args.mode,
            budget=args.budget,
            restarts=args.restarts,
            seed=args.seed,
        )
        lines = [f"status={status}"]
        if pairs is not None:
            lines.append(f"reduced={'true' if pairs.reduced else 'false'}")
            for pi1, pi2 in pairs.pairs:
                lines.append("pi1 " + " ".join(str(i) for i in pi1))
                lines.append("pi2 " + " ".join(str(i) for i in pi2))
        _emit("\n".join(lines) + "\n", args.out)
        print(f"permutation extraction: {status}", file=sys.stderr)
        return 0
    if args.hypergraph:
        h = parse_hypergraph_text(text)
    else:
        h = build_hypergraph(parse_presentation_text(text))
    res = find_perfect_matching(
        h, mode=args.mode, budget=args.budget, restarts=args.restarts, seed=args.seed
    )
    lines = [f"status={res.status}"]
    if res.found:
        lines.append(f"reduced={'true' if res.matching.reduced else 'false'}")
        for t in res.matching.edges:
            lines.append(word_to_text(t))
    _emit("\n".join(lines) + "\n", args.out)
    print(f"perfect matching: {res.status}", file=sys.stderr)
    return 0


# --------------------------------------------------------------- embed


def _cmd_embed(parser: _Parser, args) -> int:
    _check_table_length(parser, args.l)
    table = embed_mod.build_word_table(args.n, args.l)
    if args.word is not None:
        w = word_from_text(args.word)
        prefix, factors = embed_mod.coset_normal_form(w, table)
        lines = [
            "prefix " + word_to_text(prefix),
            "factors " + " ".join(str(f) for f in factors),
        ]
        _emit("\n".join(lines) + "\n", args.out)
        print(
            f"normal form: prefix length {len(prefix)}, {len(factors)} factors",
            file=sys.stderr,
        )
        return 0
    if args.presentation is not None:
        pres = parse_presentation_text(_read_input(args.presentation))
        image = embed_mod.phi_map(pres, table)
        _emit(write_presentation_text(image), args.out)
        print(
            f"mapped {len(pres.relators)} relators into rank {image.generator_count}",
            file=sys.stderr,
        )
        return 0
    _emit("".join(word_to_text(w) + "\n" for w in table.words), args.out)
    print(f"word table: {len(table.words)} words of length {table.k}", file=sys.stderr)
    return 0


# --------------------------------------------------------------- sweep


def _parse_cell(spec: str) -> dict:
    cell = {}
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise ValueError(f"cell entry {chunk!r} is not key=value")
        key, raw = chunk.split("=", 1)
        key = key.strip()
        raw = raw.strip()
        if raw.lower() in ("true", "false"):
            cell[key] = raw.lower() == "true"
            continue
        try:
            cell[key] = int(raw)
        except ValueError:
            try:
                cell[key] = float(raw)
            except ValueError:
                cell[key] = raw
    return cell


def _cmd_sweep(parser: _Parser, args) -> int:
    try:
        cells = [_parse_cell(s) for s in args.cell]
    except ValueError as exc:
        parser.error(f"--cell: {exc}")
    cfg = exp_mod.SweepConfig(
        experiment=args.experiment,
        cells=cells,
        trials=args.trials,
        master_seed=args.seed,
        mode=args.mode,
        jobs=args.jobs,
        timings=args.timings,
    )
    try:
        cfg.validate()
    except ValueError as exc:
        parser.error(str(exc))
    records = exp_mod.run_sweep(cfg)
    if args.format == "jsonl":
        text = exp_mod.write_jsonl(records, cfg)
    else:
        text = exp_mod.write_csv(records, cfg)
    _emit(text, args.out)
    print(
        f"sweep {cfg.experiment}: {len(cells)} cells x {cfg.trials} trials, "
        f"{len(records)} records",
        file=sys.stderr,
    )
    return 0


# --------------------------------------------------------------- wiring


def build_parser() -> _Parser:
    parser = _Parser(prog="randomgroups")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", parents=[], help="sample a presentation or graph")
    p.add_argument("--model", choices=PRESENTATION_MODELS)
    p.add_argument("--graph", choices=GRAPH_MODELS)
    p.add_argument("--hypergraph", action="store_true")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--d", type=float)
    p.add_argument("--v", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--M", type=int)
    p.add_argument("--parts", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--count-scale", type=float, default=0.5)
    p.add_argument("--reduced", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sample, subparser=p)

    p = sub.add_parser("link", help="build the link graph of a presentation")
    p.add_argument("input", help="presentation file, or - for stdin")
    p.add_argument("--parts", action="store_true")
    p.add_argument("--collapse", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_link, subparser=p)

    p = sub.add_parser("spectrum", help="laplacian eigenvalues of a graph")
    p.add_argument("input", help="graph file, or - for stdin")
    p.add_argument("--presentation", action="store_true")
    p.add_argument("--kind", choices=("normalized", "walk"), default="normalized")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_spectrum, subparser=p)

    p = sub.add_parser("criterion", help="spectral criterion report")
    p.add_argument("input", help="presentation file, or - for stdin")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_criterion, subparser=p)

    p = sub.add_parser("match", help="perfect matchings in the relator hypergraph")
    p.add_argument("input", help="presentation or hypergraph file, or - for stdin")
    p.add_argument("--hypergraph", action="store_true")
    p.add_argument("--v", type=int)
    p.add_argument("--mode", choices=("exact", "heuristic"), default="heuristic")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_match, subparser=p)

    p = sub.add_parser("embed", help="word table, normal forms, relator images")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--word")
    p.add_argument("--presentation")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_embed, subparser=p)

    p = sub.add_parser("sweep", help="seeded Monte Carlo parameter sweeps")
    p.add_argument("--experiment", choices=exp_mod.EXPERIMENTS, required=True)
    p.add_argument("--cell", action="append", required=True, metavar="K=V,K=V")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("exact", "heuristic"), default="heuristic")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timings", action="store_true")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sweep, subparser=p)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args.subparser, args)
    except SystemExit:
        raise
    except (OSError, ValueError, AssertionError, json.JSONDecodeError) as exc:
        print(f"randomgroups: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
