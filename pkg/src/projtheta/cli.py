"""Command-line front end.

Graphs are given either as a DIMACS ``.col`` file or as a family spec
``family:p1,p2,...``, for example ``clique_union:4,3,2``,
``clique_plus_isolated:2,7``, ``cycle:5``, ``circulant:8,1,2`` or
``petersen``.

Exit codes: 0 success, 1 input error (bad file, bad spec, guard exceeded),
2 solver failure.  ``PROJTHETA_TOL`` overrides the default solver tolerance.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .conic import SolverConfig
from .exact import (GuardExceeded, PARTITION_GUARD, alpha_exact, chi_exact, chi_via_projection,
                    omega_exact)
from .graph import (DimacsError, Graph, clique_plus_isolated, clique_union, complement,
                    parse_family, read_dimacs)
from .search import MAX_SEARCH_VERTICES, default_candidates, search_nonmonotone
from .theta import SolverError, eval_bound

log = logging.getLogger(__name__)

EXIT_OK, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2

BOUND_NAMES = {
    "theta": "theta",
    "theta-": "theta_minus",
    "theta+": "theta_plus",
    "that": "theta_hat",
    "that'": "theta_hat_prime",
}
DEFAULT_BOUNDS = "theta,theta-,theta+,that,that'"

TABLE1_ROWS = [(3, 3, 3), (4, 3, 2), (4, 4, 1), (5, 2, 2), (5, 3, 1), (6, 2, 1), (7, 1, 1)]
TABLE2_ROWS = [(n1, 9 - n1) for n1 in range(2, 9)]


class InputError(ValueError):
    pass


def truncate(value: float, digits: int = 3) -> str:
    """Paper-style display: cut (not round) to ``digits`` decimals.

    A relative nudge of 1e-7 (ten times the default solver tolerance) keeps
    values such as 3.99999998 from displaying as 3.999 when the solver lands
    just below an integer.
    """
    if not math.isfinite(value):
        return str(value)
    scale = 10 ** digits
    nudged = value + math.copysign(1e-7 * max(1.0, abs(value)), value)
    t = math.floor(abs(nudged) * scale) / scale
    return f"{math.copysign(t, value):.{digits}f}"


def round3(value: float) -> str:
    """Conventional rounding to 3 decimals, emitted next to :func:`truncate`."""
    return f"{value:.3f}" if math.isfinite(value) else str(value)


def default_tolerance() -> float:
    raw = os.environ.get("PROJTHETA_TOL")
    if raw is None:
        return 1e-8
    try:
        tol = float(raw)
    except ValueError:
        raise InputError(f"PROJTHETA_TOL is not a number: {raw!r}") from None
    if not tol > 0:
        raise InputError("PROJTHETA_TOL must be positive")
    return tol


def solver_config(tol: float | None) -> SolverConfig:
    tol = default_tolerance() if tol is None else tol
    try:
        return SolverConfig(gap_tol=tol, feas_tol=tol)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def load_graph(path: str | None, family: str | None) -> tuple[Graph, str]:
    if (path is None) == (family is None):
        raise InputError("give exactly one of a graph file or --family")
    if family is not None:
        try:
            return parse_family(family), f"family:{family}"
        except (ValueError, TypeError) as exc:
            raise InputError(f"bad family spec {family!r}: {exc}") from None
    try:
        return read_dimacs(path), f"file:{path}"
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    except DimacsError as exc:
        raise InputError(f"{path}: {exc}") from None


def parse_bounds(text: str) -> list[str]:
    names = [b.strip() for b in text.split(",") if b.strip()]
    unknown = [b for b in names if b not in BOUND_NAMES]
    if unknown or not names:
        raise InputError(f"unknown bound(s) {unknown}; choose from {', '.join(BOUND_NAMES)}")
    return names


# ------------------------------------------------------------------ bounds

def bound_entry(name: str, g: Graph, cfg: SolverConfig) -> dict:
    kind = BOUND_NAMES[name]
    start = time.perf_counter()
    try:
        b = eval_bound(kind, g, cfg)
    except SolverError as exc:
        sol = exc.solution
        return {"name": name, "kind": kind, "value": None, "display": None,
                "display_rounded": None,
                "status": sol.status if sol is not None else "numerical_failure",
                "iterations": sol.iterations if sol is not None else 0,
                "seconds": time.perf_counter() - start, "residuals": None,
                "error": str(exc)}
    res = b.residuals
    return {"name": name, "kind": kind, "value": b.value, "display": truncate(b.value),
            "display_rounded": round3(b.value),
            "status": b.solution.status, "iterations": b.solution.iterations,
            "seconds": time.perf_counter() - start,
            "residuals": {"primal": res.primal, "dual": res.dual, "gap": res.gap,
                          "complementarity": res.complementarity,
                          "psd_min_eig": list(res.psd_min_eig),
                          "nonneg_min": res.nonneg_min if math.isfinite(res.nonneg_min) else None},
            "dropped_rows": len(b.solution.dropped_rows)}


def exact_entry(g: Graph) -> dict:
    chi, colouring = chi_exact(g)
    omega, clique = omega_exact(g)
    alpha, stable = alpha_exact(g)
    return {"chi": chi, "omega": omega, "alpha": alpha,
            "colouring": colouring.as_lists(), "clique": sorted(clique),
            "stable_set": sorted(stable)}


def bounds_report(g: Graph, source: str, names, cfg: SolverConfig, use_complement: bool,
                  exact: bool) -> dict:
    target = complement(g) if use_complement else g
    report = {
        "tool": "projtheta", "version": __version__,
        "graph": {"n": g.n, "m": g.m, "source": source, "complement": use_complement,
                  "evaluated_m": target.m},
        "solver": {"gap_tol": cfg.gap_tol, "feas_tol": cfg.feas_tol, "max_iter": cfg.max_iter},
        "bounds": [bound_entry(name, target, cfg) for name in names],
        "exact": exact_entry(g) if exact else None,
    }
    report["solver"]["total_seconds"] = sum(e["seconds"] for e in report["bounds"])
    return report


CSV_FIELDS = ["quantity", "value", "display", "display_rounded", "status", "iterations",
              "primal_residual", "dual_residual", "gap"]


def report_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for e in report["bounds"]:
        r = e["residuals"] or {}
        w.writerow([e["name"], "" if e["value"] is None else repr(e["value"]), e["display"] or "",
                    e["display_rounded"] or "", e["status"], e["iterations"], r.get("primal", ""), r.get("dual", ""),
                    r.get("gap", "")])
    if report["exact"]:
        for key in ("chi", "omega", "alpha"):
            v = report["exact"][key]
            w.writerow([key, v, v, v, "exact", "", "", "", ""])
    return buf.getvalue()


def report_text(report: dict) -> str:
    gr = report["graph"]
    at = " (evaluated at the complement)" if gr["complement"] else ""
    lines = [f"graph {gr['source']}: n={gr['n']} m={gr['m']}{at}"]
    for e in report["bounds"]:
        if e["value"] is None:
            lines.append(f"  {e['name']:<7} FAILED ({e['status']})")
            continue
        r = e["residuals"]
        lines.append(f"  {e['name']:<7} {e['display']:>9} (rounded {e['display_rounded']})  "
                     f"{e['value']:.10f}  "
                     f"[{e['status']}, {e['iterations']} it, pres {r['primal']:.1e}, "
                     f"dres {r['dual']:.1e}, gap {r['gap']:.1e}]")
    if report["exact"]:
        x = report["exact"]
        lines.append(f"  chi={x['chi']} omega={x['omega']} alpha={x['alpha']} "
                     f"colouring={x['colouring']}")
    return "\n".join(lines)


def cmd_bounds(args) -> int:
    g, source = load_graph(args.graph, args.family)
    names = parse_bounds(args.bounds)
    cfg = solver_config(args.tol)
    report = bounds_report(g, source, names, cfg, args.complement, args.exact)
    if args.json:
        print(json.dumps(report, indent=2))
    elif args.csv:
        sys.stdout.write(report_csv(report))
    else:
        print(report_text(report))
    failed = [e for e in report["bounds"] if e["value"] is None]
    for e in failed:
        print(f"error: {e['error']}", file=sys.stderr)
    return EXIT_SOLVER if failed else EXIT_OK


# ------------------------------------------------------------------ tables

def _table_row(task):
    table, params, tol = task
    cfg = SolverConfig(gap_tol=tol, feas_tol=tol)
    g = clique_union(*params) if table == 1 else clique_plus_isolated(*params)
    target = complement(g)
    row, ok = {}, True
    for key, kind in (("that", "theta_hat"), ("that_prime", "theta_hat_prime"), ("theta", "theta")):
        try:
            row[key] = eval_bound(kind, target, cfg).value
        except SolverError as exc:
            log.error("table %d row %s: %s", table, params, exc)
            row[key], ok = float("nan"), False
    return params, row, ok


def table_csv(header_params, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header_params + ["that", "that_prime", "theta",
                                "that_3dp", "that_prime_3dp", "theta_3dp",
                                "that_round3", "that_prime_round3", "theta_round3", "status"])
    for params, row, ok in rows:
        vals = [row["that"], row["that_prime"], row["theta"]]
        w.writerow(list(params) + [f"{v:.10f}" for v in vals] + [truncate(v) for v in vals]
                   + [round3(v) for v in vals] + ["ok" if ok else "FAILED"])
    return buf.getvalue()


def reproduce_tables(outdir: Path, tol: float, jobs: int = 1) -> bool:
    tasks = [(1, p, tol) for p in TABLE1_ROWS] + [(2, p, tol) for p in TABLE2_ROWS]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_table_row, tasks))
    else:
        results = [_table_row(t) for t in tasks]
    outdir.mkdir(parents=True, exist_ok=True)
    t1, t2 = results[:len(TABLE1_ROWS)], results[len(TABLE1_ROWS):]
    (outdir / "table1.csv").write_text(table_csv(["n1", "n2", "n3"], t1))
    (outdir / "table2.csv").write_text(table_csv(["n1", "m"], t2))
    return all(ok for _, _, ok in results)


def cmd_reproduce_tables(args) -> int:
    cfg = solver_config(args.tol)
    ok = reproduce_tables(Path(args.outdir), cfg.feas_tol, args.jobs)
    for name in ("table1.csv", "table2.csv"):
        path = Path(args.outdir) / name
        print(f"wrote {path}")
        if args.show:
            print(path.read_text(), end="")
    if not ok:
        print("error: some rows failed; they are flagged FAILED in the CSV", file=sys.stderr)
    return EXIT_OK if ok else EXIT_SOLVER


# ------------------------------------------------------------------ search

def cmd_search(args) -> int:
    if not 1 <= args.max_vertices <= MAX_SEARCH_VERTICES:
        raise InputError(f"--max-vertices must lie in 1..{MAX_SEARCH_VERTICES}")
    cfg = solver_config(args.tol)
    if args.family:
        candidates = []
        for spec in args.family:
            g, _ = load_graph(None, spec)
            g = complement(g) if args.complement else g
            if g.n > args.max_vertices:
                raise InputError(f"{spec} has {g.n} vertices, above --max-vertices")
            candidates.append(Graph(g.n, g.edges, name=("co " if args.complement else "") + spec))
    else:
        candidates = default_candidates(args.max_vertices, args.random, args.seed)
    try:
        found = search_nonmonotone(candidates, args.max_vertices, cfg=cfg,
                                   first_only=not args.all)
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    if args.json:
        print(json.dumps([{"graph": w.graph.fingerprint(), "graph_name": w.graph.name,
                           "subset": list(w.subset), "subgraph": w.subgraph.fingerprint(),
                           "that_graph": w.value_graph, "that_subgraph": w.value_subgraph}
                          for w in found], indent=2))
    elif not found:
        print(f"none found ({len(candidates)} candidates)")
    for w in ([] if args.json else found):
        print(f"witness: H = G[{set(w.subset)}] (n={w.subgraph.n}, m={w.subgraph.m}) inside "
              f"G = {w.graph.name or w.graph.fingerprint()} (n={w.graph.n}, m={w.graph.m})")
        print(f"  that(H) = {w.value_subgraph:.10f} > that(G) = {w.value_graph:.10f}")
    return EXIT_OK


# ------------------------------------------------------------------ exact

def cmd_exact(args) -> int:
    g, source = load_graph(args.graph, args.family)
    out = {"source": source, "n": g.n, "m": g.m, **exact_entry(g)}
    if g.n <= PARTITION_GUARD:
        k, part = chi_via_projection(g)
        out["chi_via_projection"] = k
        out["projection_partition"] = part.as_lists()
    else:
        out["chi_via_projection"] = None
    if args.json:
        print(json.dumps(out, indent=2))
    else:
        print(f"graph {source}: n={g.n} m={g.m}")
        print(f"  chi={out['chi']} omega={out['omega']} alpha={out['alpha']}")
        print(f"  colouring {out['colouring']}")
        if out["chi_via_projection"] is None:
            print(f"  projection cross-check skipped (n > {PARTITION_GUARD})")
        else:
            agree = "agrees" if out["chi_via_projection"] == out["chi"] else "DISAGREES"
            print(f"  projection cross-check {out['chi_via_projection']} ({agree})")
    return EXIT_OK


# ------------------------------------------------------------------ main

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="projtheta", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"projtheta {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log solver progress")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="evaluate theta-type bounds for one graph")
    b.add_argument("graph", nargs="?", help="DIMACS .col file")
    b.add_argument("--family", help="family spec, e.g. clique_union:4,3,2")
    b.add_argument("--bounds", default=DEFAULT_BOUNDS,
                   help=f"comma list from {', '.join(BOUND_NAMES)} (default: all)")
    b.add_argument("--complement", action="store_true", help="evaluate at the complement graph")
    b.add_argument("--exact", action="store_true", help="add chi, omega and alpha of the input graph")
    b.add_argument("--tol", type=float, help="solver gap and feasibility tolerance")
    fmt = b.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    b.set_defaults(func=cmd_bounds)

    t = sub.add_parser("reproduce-tables", help="write table1.csv and table2.csv")
    t.add_argument("outdir", nargs="?", default=".")
    t.add_argument("--tol", type=float)
    t.add_argument("--jobs", type=int, default=1, help="rows evaluated in parallel")
    t.add_argument("--show", action="store_true", help="also print the CSV files")
    t.set_defaults(func=cmd_reproduce_tables)

    s = sub.add_parser("search-nonmonotone",
                       help="look for induced subgraphs H of G with that(H) > that(G)")
    s.add_argument("--max-vertices", type=int, default=MAX_SEARCH_VERTICES)
    s.add_argument("--family", action="append",
                   help="candidate graph spec (repeatable); default: clique-union complements "
                        "plus random graphs")
    s.add_argument("--complement", action="store_true", help="use complements of --family graphs")
    s.add_argument("--random", type=int, default=20, help="number of random candidates")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--all", action="store_true", help="report every witness, not just the first")
    s.add_argument("--tol", type=float)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_search)

    e = sub.add_parser("exact", help="exact chi, omega, alpha with the projection cross-check")
    e.add_argument("graph", nargs="?", help="DIMACS .col file")
    e.add_argument("--family")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_exact)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, GuardExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
