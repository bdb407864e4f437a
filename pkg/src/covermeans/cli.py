"""Command line front end.

Exit status: 0 on success (or a passing verification), 1 when a
verification fails, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import cover, generators
from .cover import Arc, EdgeSphere, Horocycle, RegionError, Sphere, Tube
from .graph import GraphError, Multigraph, classify, load_graph, squared_graph
from .means import mean_series
from .spectral import (
    DEFAULT_EPSILON,
    HypothesisError,
    analyze,
    check_gap_lemma,
    edge_laplacian,
    laplacian_spectrum,
    merge_eigenvalues,
    vertex_laplacian,
)
from .verify import cross_check_theorem

OUTDIR_ENV = "COVERMEANS_OUTDIR"


class UsageError(Exception):
    pass


# -- inputs --------------------------------------------------------------------


def read_graph(args) -> tuple[Multigraph, dict]:
    if args.gen:
        return _generated(args.gen)
    src = args.graph
    path = Path(src)
    if path.is_file():
        try:
            g = load_graph(path.read_text(encoding="utf-8"))
        except GraphError as exc:
            raise UsageError(f"{path}: {exc}") from None
        return g, {"source": str(path), "n_vertices": g.n_vertices, "n_edges": g.n_edges}
    name = src.replace(":", " ").split()[0] if src.strip() else ""
    if name in generators.NAMES:
        return _generated(src)
    raise UsageError(f"{src}: no such file (and not a generator name)")


def _generated(spec: str) -> tuple[Multigraph, dict]:
    try:
        g = generators.from_spec(spec)
    except (ValueError, RuntimeError) as exc:
        raise UsageError(f"generator {spec!r}: {exc}") from None
    return g, {"source": spec, "n_vertices": g.n_vertices, "n_edges": g.n_edges}


def read_function(path: str, n: int, exact: bool) -> list:
    """CSV ``id,value`` rows covering every id 0..n-1; a header row is allowed."""
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{path}: no such file")
    values: dict[int, object] = {}
    with p.open(encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or row[0].strip().startswith("#"):
                continue
            if lineno == 1 and row[0].strip().lower() == "id":
                continue
            try:
                key = int(row[0])
                val = Fraction(row[1].strip()) if exact else float(row[1])
            except (ValueError, IndexError):
                raise UsageError(f"{path}:{lineno}: expected 'id,value'") from None
            values[key] = val
    missing = sorted(set(range(n)) - set(values))
    if missing or len(values) != n:
        raise UsageError(f"{path}: function must give exactly ids 0..{n - 1} (missing {missing[:5]})")
    return [values[i] for i in range(n)]


def parse_base(g: Multigraph, kind: str, base: str):
    """Vertex for spheres, ``u,v`` or ``u,v,edge`` for arcs, a file for tubes and horocycles."""
    try:
        if kind in ("sphere", "edgesphere"):
            v0 = int(base)
            if not 0 <= v0 < g.n_vertices:
                raise UsageError(f"base vertex {v0} out of range")
            return v0
        if kind == "arc":
            parts = [int(t) for t in base.replace(" ", "").split(",")]
            if len(parts) not in (2, 3):
                raise UsageError("arc base must be 'u,v' or 'u,v,edge'")
            return g.dart(parts[0], parts[1], parts[2] if len(parts) == 3 else None)
        path = Path(base)
        if not path.is_file():
            raise UsageError(f"{base}: no such file")
        text = path.read_text(encoding="utf-8")
        if kind == "tube":
            return cover.parse_walk_paths(g, text.splitlines())
        if kind == "horocycle":
            return cover.parse_ray(g, text)
    except (GraphError, RegionError, ValueError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"bad base {base!r}: {exc}") from None
    raise UsageError(f"unknown region type {kind!r}")


def make_region(kind: str, base, r: int):
    return {
        "sphere": lambda: Sphere(base, r),
        "edgesphere": lambda: EdgeSphere(base, r),
        "arc": lambda: Arc(base, r),
        "tube": lambda: Tube(tuple(base), r),
        "horocycle": lambda: Horocycle(base, r),
    }[kind]()


# -- outputs -------------------------------------------------------------------


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return repr(float(x))


def emit(text: str, args, default_name: str) -> None:
    out = args.out
    if out is None and os.environ.get(OUTDIR_ENV):
        out = str(Path(os.environ[OUTDIR_ENV]) / default_name)
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"{out}: cannot write report: {exc}") from None


# -- subcommands -------------------------------------------------------------------


def classification_dict(g: Multigraph) -> dict:
    cls = classify(g)
    return {
        "regular_q": cls.regular_q,
        "semiregular_pq": list(cls.semiregular_pq) if cls.semiregular_pq else None,
        "bipartite_part_sizes": [len(p) for p in cls.bipartite_parts] if cls.bipartite_parts else None,
        "simple": cls.simple,
        "ramanujan": cls.ramanujan,
    }


def cmd_spectrum(args) -> int:
    g, info = read_graph(args)
    out = {"graph": info, "classification": classification_dict(g), "operator": args.operator}
    try:
        report = analyze(g, args.operator, args.epsilon)
        out.update(report.to_dict())
        out["beta_note"] = None
    except (HypothesisError, GraphError) as exc:
        if args.operator == "edge" and not g.is_simple:
            raise UsageError(str(exc)) from None
        lap = vertex_laplacian(g) if args.operator == "vertex" else edge_laplacian(g)
        degrees = g.degrees if args.operator == "vertex" else None
        mus = laplacian_spectrum(lap, degrees)
        out.update(
            {
                "beta": None,
                "beta_note": str(exc),
                "epsilon": args.epsilon,
                "params": {},
                "spectral_gap": None,
                "forbidden_interval": None,
                "eigenvalues": [
                    {"mu": mu, "multiplicity": m, "discriminant": None, "case": None, "rate": None}
                    for mu, m in merge_eigenvalues(mus)
                ],
            }
        )
    gap = None
    if args.operator == "edge" and g.is_simple and classify(g).semiregular_pq is not None:
        check = check_gap_lemma(g)
        gap = {
            "holds": check.holds,
            "interval": list(check.interval),
            "offending": list(check.offending),
            "max_charpoly_residual": check.max_residual,
        }
    out["gap_lemma"] = gap
    emit(dump_json(out), args, "spectrum.json")
    return 0


def cmd_region(args) -> int:
    g, _ = read_graph(args)
    if args.r < 0:
        raise UsageError("--r must be non-negative")
    base = parse_base(g, args.type, args.base)
    try:
        counts = cover.region_counts(g, make_region(args.type, base, args.r))
    except RegionError as exc:
        raise UsageError(str(exc)) from None
    buf = io.StringIO()
    buf.write("id,count\n")
    for k in sorted(counts):
        buf.write(f"{k},{counts[k]}\n")
    emit(buf.getvalue(), args, "region.csv")
    return 0


def cmd_mean(args) -> int:
    g, _ = read_graph(args)
    if args.rmax < 0:
        raise UsageError("--rmax must be non-negative")
    on = "edges" if args.type == "edgesphere" else args.on
    n = g.n_vertices if on == "vertices" else g.n_edges
    values = read_function(args.function, n, args.exact)
    base = parse_base(g, args.type, args.base)
    try:
        series = mean_series(g, values, args.type, base, args.rmax, on=on, exact=args.exact)
    except (RegionError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    buf = io.StringIO()
    buf.write("r,mean,abs_error\n")
    for r, m in enumerate(series.values):
        err = abs(m - series.target) if args.exact else abs(float(m) - float(series.target))
        buf.write(f"{r},{_fmt(m)},{_fmt(err)}\n")
    emit(buf.getvalue(), args, "mean.csv")
    return 0


def cmd_verify(args) -> int:
    g, info = read_graph(args)
    if args.rmax < 8:
        raise UsageError("--rmax must be at least 8")
    try:
        report = cross_check_theorem(
            g, args.theorem, trials=args.trials, seed=args.seed, rmax=args.rmax, epsilon=args.epsilon, graph_info=info
        )
    except HypothesisError as exc:
        raise UsageError(f"hypothesis violated: {exc}") from None
    emit(dump_json(report.to_dict()), args, "verify.json")
    return 0 if report.passed else 1


def cmd_gprime(args) -> int:
    g, _ = read_graph(args)
    try:
        gp, ids = squared_graph(g, args.part)
    except GraphError as exc:
        raise UsageError(str(exc)) from None
    header = "# squared graph on part {}; original ids: {}\n".format(args.part, " ".join(map(str, ids)))
    emit(header + gp.to_text(), args, "gprime.txt")
    return 0


def cmd_generate(args) -> int:
    g, _ = _generated(" ".join([args.name] + args.params))
    emit(g.to_text(), args, "graph.txt")
    return 0


# -- parser ------------------------------------------------------------------------


def _graph_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", help="edge-list file, or a generator spec such as 'petersen' or 'complete:4'")
    src.add_argument("--gen", help="generator spec, e.g. 'complete-bipartite:3,4' or 'random-regular:20,3,7'")
    p.add_argument("--out", help="output file ('-' for stdout); default $%s/<name> or stdout" % OUTDIR_ENV)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="covermeans", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="Laplacian spectrum, case analysis and convergence rate (JSON)")
    _graph_args(p)
    p.add_argument("--operator", choices=("vertex", "edge"), default="vertex")
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.set_defaults(func=cmd_spectrum)

    kinds = ("sphere", "edgesphere", "arc", "tube", "horocycle")
    p = sub.add_parser("region", help="projection counts of a cover region (CSV id,count)")
    _graph_args(p)
    p.add_argument("--type", choices=kinds, required=True)
    p.add_argument("--base", required=True, help="v0 | u,v[,edge] | tube walk file | ray file")
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("mean", help="mean series over a growing region (CSV r,mean,abs_error)")
    _graph_args(p)
    p.add_argument("--function", required=True, help="CSV id,value")
    p.add_argument("--on", choices=("vertices", "edges"), default="vertices")
    p.add_argument("--type", choices=kinds, default="sphere")
    p.add_argument("--base", required=True)
    p.add_argument("--rmax", type=int, required=True)
    p.add_argument("--exact", action="store_true", help="exact rational arithmetic")
    p.set_defaults(func=cmd_mean)

    p = sub.add_parser("verify", help="check a convergence theorem on random functions (JSON verdict)")
    _graph_args(p)
    p.add_argument("--theorem", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rmax", type=int, default=20)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gprime", help="squared graph on one bipartition class (edge list)")
    _graph_args(p)
    p.add_argument("--part", type=int, choices=(1, 2), default=1)
    p.set_defaults(func=cmd_gprime)

    p = sub.add_parser("generate", help="write a named graph as an edge list")
    p.add_argument("name", choices=generators.NAMES)
    p.add_argument("params", nargs="*")
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"covermeans {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
