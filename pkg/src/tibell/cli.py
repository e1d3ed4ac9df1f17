"""Command-line interface: ``tibell <command> ...``.

Every command prints a JSON report (or writes it with ``--out``).  Exit codes:
0 success, 1 input error, 2 mathematical precondition violated, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from collections import defaultdict
from typing import Dict, List, Optional, Sequence

from . import __version__
from .bell import (
    Scenario,
    classical_bound,
    face_report,
    facet_classes,
    star_polytope,
    thermo_bound,
)
from .bell import build_F
from .digraph import complete_graph, simple_cycles
from .errors import BudgetExceeded, InputError, PreconditionError, TibellError
from .formats import (
    dumps_graph,
    dumps_inequality,
    dumps_report,
    input_hash,
    inequality_to_dict,
    make_report,
    read_inequality,
)
from .polyhedra import VRep, hull
from .renorm import build_parametric, c_coordinates, solve_fixed_points, to_inequality
from .trop import critical_graph, stabilization, trop_eigenvector
from .vertex_enum import (
    error_set_table,
    projected_error_counts,
    projected_p_N,
    separation_N,
)

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors (exit 1), not argparse's default 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _file_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


# ---------------------------------------------------------------- commands

def cmd_bound(args) -> Dict:
    ineq = read_inequality(args.file)
    res: Dict = {"N": args.n}
    if args.thermo:
        res["thermodynamic_limit"] = thermo_bound(ineq)
    if args.n is not None:
        methods = (1, 2, 3) if args.method == "all" else (int(args.method),)
        vals = {m: classical_bound(ineq, args.n, m) for m in methods}
        if len(set(vals.values())) != 1:  # pragma: no cover - the three methods are exact
            raise AssertionError(f"methods disagree: {vals}")
        res["method"] = args.method
        res["beta"] = next(iter(vals.values()))
    elif not args.thermo:
        raise InputError("give --n N and/or --thermo")
    return res


def cmd_spectral(args) -> Dict:
    ineq = read_inequality(args.file)
    F = build_F(ineq)
    rep = stabilization(F, args.max_n)
    crit = critical_graph(F)
    try:
        ncyc = len(simple_cycles(crit, cap=args.cycle_cap))
    except BudgetExceeded:
        ncyc = None
    return {
        "lambda": rep.lam,
        "eigenvector": list(trop_eigenvector(F)),
        "sigma": rep.sigma,
        "N0": rep.n0,
        "kleene_steps": rep.kleene_steps,
        "critical_graph": dumps_graph(crit),
        "critical_simple_cycles": ncyc,
    }


def cmd_polytope(args) -> Dict:
    sc = Scenario(args.m, args.r)
    if args.star:
        star = star_polytope(sc, extreme=not args.candidates_only, cap=args.cycle_cap)
        res: Dict = {"simple_cycles": star.cycle_count, "distinct_vectors": len(star.distinct),
                     "affine_rank": star.affine_rank}
        if star.extreme is None:
            return res
        res["vertex_count"] = len(star.extreme)
        res["vertices"] = list(star.extreme)
        res["dropped_cycles"] = list(star.dropped)
        verts = star.extreme
    else:
        if args.n is None:
            raise InputError("give --star or --n N")
        table = error_set_table(sc.graph(), cache_dir=args.cache_dir, rebuild=args.rebuild_cache,
                                max_cycles=args.cycle_cap)
        rep = projected_p_N(sc, args.n, table)
        res = {"N": args.n, "pipeline": rep.pipeline, "p_N_vertex_count": rep.count,
               "vertex_count": len(rep.projected_vertices), "vertices": list(rep.projected_vertices)}
        verts = rep.projected_vertices
    if args.facets or args.classes:
        h = hull(VRep(tuple(verts)))
        res["facet_count"] = len(h.inequalities)
        res["equations"] = [{"alpha": list(a), "beta": b} for a, b in h.equations]
        if args.facets:
            res["facets"] = [{"alpha": list(a), "beta": b} for a, b in h.inequalities]
        if args.classes:
            cls = facet_classes(sc, h.inequalities)
            res["class_count"] = len(cls)
            res["classes"] = [{"alpha": list(i.alpha), "beta": i.beta, "size": k} for i, k in cls]
    return res


def cmd_face_dim(args) -> Dict:
    ineq = read_inequality(args.file)
    rep = face_report(ineq)
    return {"dimension": rep.dimension, "span_rank": rep.span_rank,
            "facet_dimension": rep.ambient - 1, "is_facet": rep.is_facet,
            "whole_polytope": rep.whole_polytope}


def cmd_renorm(args) -> Dict:
    sc = Scenario(args.m, args.r)
    p = build_parametric(sc, args.single_body)
    try:
        sol = solve_fixed_points(p, max_rays=args.budget)
    except BudgetExceeded as exc:
        part = getattr(exc, "partial", None)
        if part is not None and args.out_dir:
            _write_renorm(args, sc, p, part.solution_rays, incomplete=True)
        raise
    files = _write_renorm(args, sc, p, sol.solution_rays) if args.out_dir else []
    gens = []
    for r in sol.solution_rays:
        entry = {"ray": list(r)}
        if sc.m == 2 and sc.R == 1 and not args.single_body:
            entry["c_coordinates"] = list(c_coordinates(r))
        entry["inequality"] = inequality_to_dict(to_inequality(sc, p, r))
        gens.append(entry)
    return {"variables": list(p.variables), "cone_rays": len(sol.rays),
            "solution_faces": [[list(r) for r in f.rays] for f in sol.faces],
            "solutions": gens, "infeasible_groups": list(sol.infeasible_groups),
            "complete": sol.complete, "files": files}


def _write_renorm(args, sc, p, rays, incomplete: bool = False) -> List[str]:
    os.makedirs(args.out_dir, exist_ok=True)
    files = []
    for k, r in enumerate(rays):
        ineq = to_inequality(sc, p, r)
        if incomplete:
            ineq.annotations["incomplete"] = "true"
        path = os.path.join(args.out_dir, f"renorm_m{sc.m}_r{sc.R}_{k:03d}.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dumps_inequality(ineq))
        files.append(path)
    return files


def _uniform(values):
    vals = sorted(set(values))
    return vals[0] if len(vals) == 1 else vals


def cmd_tables(args) -> Dict:
    g = complete_graph(4)
    table = error_set_table(g, cache_dir=args.cache_dir, rebuild=args.rebuild_cache)
    sc = Scenario(2, 1)
    res: Dict = {"min_valid_N": table.min_valid_N, "separation_N": separation_N(table)}
    if args.which == "I":
        by: Dict[int, Dict[int, List[int]]] = defaultdict(lambda: defaultdict(list))
        for (c, r), es in table.sets.items():
            by[c.length][r].append(len(es))
        res["rows"] = [{"length": L, "cycles": len(by[L][0]),
                        "sizes": [_uniform(by[L][r]) for r in range(L)]} for L in sorted(by)]
    elif args.which == "II":
        counts = projected_error_counts(sc, table)
        by = defaultdict(lambda: defaultdict(list))
        for (c, r), k in counts.items():
            by[c.length][r].append(k)
        res["rows"] = [{"length": L, "cycles": len(by[L][0]),
                        "sizes": [_uniform(by[L][r]) for r in range(L)]} for L in sorted(by)]
    else:
        base = max(18, table.min_valid_N)
        base += (-base) % 12
        rows = []
        for res_ in range(12):
            N = base + res_
            rep = projected_p_N(sc, N, table)
            rows.append({"residue": res_, "N": N, "p_N": rep.count,
                         "projected": len(rep.projected_vertices)})
        res["rows"] = rows
    return res


# ---------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="tibell", description="Exact toolkit for translation-invariant Bell inequalities.")
    ap.add_argument("--version", action="version", version=f"tibell {__version__}")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--threads", type=int, default=1, help="hint only; results do not depend on it")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="classical bound per party")
    p.add_argument("file")
    p.add_argument("--n", type=int)
    p.add_argument("--method", choices=["1", "2", "3", "all"], default="all")
    p.add_argument("--thermo", action="store_true", help="also print the N -> infinity value")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("spectral", help="eigenvalue, critical graph and stabilization data")
    p.add_argument("file")
    p.add_argument("--max-n", type=int, default=10_000)
    p.add_argument("--cycle-cap", type=int, default=200_000)
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("polytope", help="projected local polytope (star or finite N)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--n", type=int)
    grp.add_argument("--star", action="store_true")
    p.add_argument("--facets", action="store_true")
    p.add_argument("--classes", action="store_true")
    p.add_argument("--candidates-only", action="store_true",
                   help="stop after the distinct cycle vectors (star only)")
    p.add_argument("--cycle-cap", type=int, default=None)
    p.add_argument("--cache-dir")
    p.add_argument("--rebuild-cache", action="store_true")
    p.set_defaults(func=cmd_polytope)

    p = sub.add_parser("face-dim", help="dimension of the face where the bound is attained")
    p.add_argument("file")
    p.set_defaults(func=cmd_face_dim)

    p = sub.add_parser("renorm", help="renormalization fixed points")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--single-body", action="store_true")
    p.add_argument("--budget", type=int, default=None, help="max intermediate rays")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_renorm)

    p = sub.add_parser("tables", help="error-set tables for the complete graph on 4 nodes")
    p.add_argument("--which", choices=["I", "II", "III"], required=True)
    p.add_argument("--cache-dir")
    p.add_argument("--rebuild-cache", action="store_true")
    p.set_defaults(func=cmd_tables)
    return ap


def _digest(argv: Sequence[str], args) -> str:
    parts = list(argv)
    path = getattr(args, "file", None)
    if path:
        parts.append(_file_text(path))
    return input_hash(*parts)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        digest = _digest(argv, args)
        result = args.func(args)
    except InputError as exc:
        print(f"tibell: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"tibell: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except BudgetExceeded as exc:
        print(f"tibell: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except TibellError as exc:  # pragma: no cover - every subclass is handled above
        print(f"tibell: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    text = dumps_report(make_report(argv, digest, result, time.perf_counter() - t0))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
