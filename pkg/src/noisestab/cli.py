"""Command-line interface: ``noisestab <command> ...``.

Every command prints one JSON record (or CSV rows with ``--format csv``)
holding the command, its parameters, the results, package versions and the
wall time. Exit status: 0 success, 1 operation error or failed verification,
2 usage error, 3 search budget refused.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import platform
import sys
import time

import numpy as np

from . import __version__
from .canonical import is_monotone, named
from .cube import BooleanFunction, degree_weight, wht
from .influence import edge_boundary, influence
from .information import mutual_information
from .noise import PhiSpec, agreement_probability, alpha_stability, phi_stability
from .search import BudgetExceeded, Objective, SearchSpec, compare_named, maximize
from .shifting import monotonize
from .torus import (
    TorusFunction,
    torus_alpha_stability,
    torus_edge_boundary,
    torus_influence,
    torus_monotonize,
    torus_phi_stability,
)
from .tree import load_tree_json, tree_agreement, tree_correlation, tree_mc_estimate

EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class UsageError(Exception):
    pass


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` (inclusive) or a comma list; points are ``start + i*step``."""
    if ":" in text:
        try:
            start, stop, step = (float(x) for x in text.split(":"))
        except ValueError:
            raise UsageError(f"bad grid {text!r}; expected start:stop:step") from None
        if step <= 0 or stop < start:
            raise UsageError(f"bad grid {text!r}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(count)]
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad value list {text!r}") from None


def _round(obj):
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if not math.isfinite(x) else float(f"{x:.15g}")
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _function(args) -> BooleanFunction:
    if args.table is not None and args.f is not None:
        raise UsageError("give either --table or --f, not both")
    try:
        if args.table is not None:
            return BooleanFunction.from_hex(args.n, args.table)
        if args.f is not None:
            return named(args.n, args.f)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    raise UsageError("a function is required: --table HEX or --f NAME (maj:r, lex:s, ball:s, dict:i, ...)")


def _eps_values(args) -> list[float]:
    if args.eps_grid is not None:
        return parse_grid(args.eps_grid)
    if args.eps is None:
        raise UsageError("need --eps or --eps-grid")
    return [args.eps]


def _phi(name: str, alpha) -> PhiSpec:
    if name == "power":
        return PhiSpec.power(alpha if alpha is not None else 2.0)
    if name == "entropy-pair":
        return PhiSpec.entropy_pair()
    if name == "hellinger":
        return PhiSpec.hellinger()
    raise UsageError(f"unknown phi {name!r}")


def _objective(args) -> Objective:
    name = {"stability": "alpha_stability", "mi": "mutual_info", "degree1": "degree1_weight", "influence": "total_influence_min"}.get(
        args.objective, args.objective
    )
    phi = _phi(args.phi, args.alpha) if name == "phi" else None
    return Objective(name, alpha=args.alpha if name == "alpha_stability" else None, eps=args.eps, k=args.k, phi=phi)


# commands ----------------------------------------------------------------------


def cmd_stability(args):
    f = _function(args)
    rows = [{"eps": e, "value": alpha_stability(f, args.alpha, e)} for e in _eps_values(args)]
    return {"table": f.to_hex(), "mean": f.mean, "alpha": args.alpha, "values": rows}


def cmd_agreement(args):
    f = _function(args)
    rows = [{"eps": e, "value": agreement_probability(f, args.k, e)} for e in _eps_values(args)]
    return {"table": f.to_hex(), "k": args.k, "values": rows}


def cmd_phi(args):
    f = _function(args)
    phi = _phi(args.phi, args.alpha)
    rows = [{"eps": e, "value": phi_stability(f, phi, e)} for e in _eps_values(args)]
    return {"table": f.to_hex(), "phi": phi.label, "values": rows}


def cmd_influence(args):
    f = _function(args)
    methods = ("flip", "fourier", "boundary") if args.method == "all" else (args.method,)
    out = {"table": f.to_hex()}
    for m in methods:
        rep = influence(f, m)
        out[m] = {"per_coordinate": list(rep.per_coordinate), "total": rep.total}
    per, total = edge_boundary(f)
    out["edge_boundary"] = {"per_direction": list(per), "total": total}
    out["degree1_weight"] = degree_weight(wht(f), 1)
    return out


def cmd_monotonize(args):
    f = _function(args)
    g, trace = monotonize(f)
    return {
        "input": f.to_hex(),
        "output": g.to_hex(),
        "monotone": is_monotone(g),
        "steps": [list(s) for s in trace.steps],
        "passes": trace.passes,
        "final_potential": trace.final_potential,
    }


def cmd_mi(args):
    f = _function(args)
    rows = [{"eps": e, "value": mutual_information(f, e)} for e in _eps_values(args)]
    return {"table": f.to_hex(), "values": rows}


def _search_spec(args) -> SearchSpec:
    if args.balanced == (args.size is not None):
        raise UsageError("give exactly one of --balanced or --size")
    try:
        return SearchSpec(
            args.n,
            _objective(args),
            support_size=args.size,
            balanced=args.balanced,
            restrict="monotone_only" if args.monotone_only else "all",
            tie_tolerance=args.tie_tolerance,
            budget=args.budget,
            keep_all=args.all,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_search(args):
    return maximize(_search_spec(args), jobs=args.jobs).to_dict()


def cmd_compare(args):
    try:
        objective = _objective(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        candidates = {c: named(args.n, c) for c in args.candidates}
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = compare_named(args.n, candidates, objective)
    return {"objective": objective.describe(), "ranking": [{"candidate": c, "value": v} for c, v in rows]}


def _torus_function(args) -> TorusFunction:
    try:
        if args.table is not None:
            return TorusFunction.from_string(args.p, args.n, args.table)
        if args.support is not None:
            points = [tuple(int(d) for d in item) for item in args.support.split(",") if item]
            if any(len(x) != args.n or max(x) >= args.p for x in points):
                raise ValueError("support points must be n base-p digits x_1..x_n")
            return TorusFunction.from_points(args.p, args.n, points)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    raise UsageError("need --table (0/1 string of length p**n) or --support (comma list of digit strings)")


def cmd_torus(args):
    f = _torus_function(args)
    out = {"p": f.p, "n": f.n, "table": f.to_string()}
    cmd = args.torus_command
    if cmd in ("stability", "agreement", "mi", "phi"):
        out["model"] = args.model
        if cmd == "stability":
            value = lambda e: torus_alpha_stability(f, args.alpha, e, args.model)
        elif cmd == "agreement":
            g = TorusFunction(f.p, f.n, 1.0 - f.values)
            value = lambda e: torus_alpha_stability(f, args.k, e, args.model) + torus_alpha_stability(g, args.k, e, args.model)
        elif cmd == "mi":
            # E Phi(T f) - Phi(E f) with Phi = 1 - h is h(E f) - E h(T f)
            phi = PhiSpec.entropy_pair()
            value = lambda e: torus_phi_stability(f, phi, e, args.model) - float(phi(np.array([f.mean]))[0])
        else:
            phi = _phi(args.phi, args.alpha)
            value = lambda e: torus_phi_stability(f, phi, e, args.model)
        out["values"] = [{"eps": e, "value": value(e)} for e in _eps_values(args)]
    elif cmd == "influence":
        for flavor in ("random_flip", "nearest"):
            for method in ("direct", "fourier"):
                rep = torus_influence(f, flavor, method)
                out[f"{flavor}/{method}"] = {"per_coordinate": list(rep.per_coordinate), "total": rep.total}
        per, total = torus_edge_boundary(f)
        out["edge_boundary"] = {"per_direction": list(per), "total": total}
    elif cmd == "monotonize":
        g, trace = torus_monotonize(f)
        out.update(output=g.to_string(), steps=[list(s) for s in trace.steps], passes=trace.passes, final_potential=trace.final_potential)
    return out


def cmd_tree(args):
    try:
        with open(args.file) as fh:
            tree, players = load_tree_json(fh.read())
    except (OSError, KeyError, ValueError) as exc:
        raise UsageError(f"cannot read tree file: {exc}") from None
    out = {"vertices": tree.num_vertices, "n": tree.n, "players": sorted(players)}
    out["correlation"] = tree_correlation(tree, players, root=args.root)
    out["agreement"] = tree_agreement(tree, players, root=args.root)
    if args.samples:
        if args.seed is None:
            raise UsageError("Monte Carlo needs an explicit --seed")
        est, se = tree_mc_estimate(tree, players, args.samples, args.seed)
        out["monte_carlo"] = {"estimate": est, "standard_error": se, "samples": args.samples, "seed": args.seed}
    return out


def cmd_verify(args):
    from .verify import SCENARIOS

    names = list(SCENARIOS) if args.name == "all" else [args.name]
    if any(n not in SCENARIOS for n in names):
        raise UsageError(f"unknown scenario {args.name!r}; choose from {['all', *SCENARIOS]}")
    checks = [SCENARIOS[n]() for n in names]
    return {
        "passed": all(c.passed for c in checks),
        "checks": [{"name": c.name, "passed": c.passed, "runtime": c.runtime, "details": c.details} for c in checks],
    }


# parser -------------------------------------------------------------------------


def _add_function(p, n_required=True):
    p.add_argument("--n", type=int, required=n_required, help="dimension")
    p.add_argument("--table", help="truth table in hex (bit idx(x) from the least-significant end)")
    p.add_argument("--f", help="named function: maj:r, lex:s, rlex:s, ball:s, dict:i, parity, const:b, hex:T")


def _add_eps(p):
    p.add_argument("--eps", type=float)
    p.add_argument("--eps-grid", help="start:stop:step (inclusive) or comma list")


def _add_objective(p):
    p.add_argument(
        "--objective",
        default="stability",
        choices=["stability", "alpha_stability", "agreement", "mi", "mutual_info", "degree1", "degree1_weight",
                 "influence", "total_influence_min", "phi"],
    )
    p.add_argument("--alpha", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--phi", default="power", choices=["power", "entropy-pair", "hellinger"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="noisestab", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--version", action="version", version=f"noisestab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stability", help="E (T_eps f)^alpha")
    _add_function(p)
    p.add_argument("--alpha", type=float, default=2.0)
    _add_eps(p)
    p.set_defaults(run=cmd_stability)

    p = sub.add_parser("agreement", help="P(f(Y^1) = ... = f(Y^k))")
    _add_function(p)
    p.add_argument("--k", type=int, default=2)
    _add_eps(p)
    p.set_defaults(run=cmd_agreement)

    p = sub.add_parser("phi", help="E Phi(T_eps f) for a built-in convex Phi")
    _add_function(p)
    p.add_argument("--phi", default="power", choices=["power", "entropy-pair", "hellinger"])
    p.add_argument("--alpha", type=float)
    _add_eps(p)
    p.set_defaults(run=cmd_phi)

    p = sub.add_parser("influence", help="influences, edge boundary, degree-1 weight")
    _add_function(p)
    p.add_argument("--method", default="all", choices=["all", "flip", "fourier", "boundary"])
    p.set_defaults(run=cmd_influence)

    p = sub.add_parser("monotonize", help="shift a function up to a monotone one")
    _add_function(p)
    p.set_defaults(run=cmd_monotonize)

    p = sub.add_parser("mi", help="I(X; f(Y)) in bits")
    _add_function(p)
    _add_eps(p)
    p.set_defaults(run=cmd_mi)

    p = sub.add_parser("search", help="exhaustive argmax at fixed support size")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--balanced", action="store_true")
    p.add_argument("--size", type=int)
    p.add_argument("--monotone-only", action="store_true")
    _add_objective(p)
    p.add_argument("--tie-tolerance", type=float, default=1e-12)
    p.add_argument("--budget", type=int, default=10**8)
    p.add_argument("--all", action="store_true", help="list every argmax table, not just the first 64")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(run=cmd_search)

    p = sub.add_parser("compare", help="objective values of named candidates")
    p.add_argument("--n", type=int, required=True)
    _add_objective(p)
    p.add_argument("candidates", nargs="+")
    p.set_defaults(run=cmd_compare)

    p = sub.add_parser("torus", help="functions on (Z/pZ)^n")
    tsub = p.add_subparsers(dest="torus_command", required=True)
    for name in ("stability", "agreement", "mi", "phi", "influence", "monotonize"):
        tp = tsub.add_parser(name)
        tp.add_argument("--p", type=int, required=True)
        tp.add_argument("--n", type=int, required=True)
        tp.add_argument("--table", help="0/1 string, character k is f at the point of index k")
        tp.add_argument("--support", help="comma list of points written x_1..x_n in base p")
        if name in ("stability", "agreement", "mi", "phi"):
            tp.add_argument("--model", choices=["uniform", "nearest"], default="uniform")
            _add_eps(tp)
        if name == "stability":
            tp.add_argument("--alpha", type=float, default=2.0)
        elif name == "agreement":
            tp.add_argument("--k", type=int, default=2)
        elif name == "phi":
            tp.add_argument("--phi", default="power", choices=["power", "entropy-pair", "hellinger"])
            tp.add_argument("--alpha", type=float)
        tp.set_defaults(run=cmd_torus)

    p = sub.add_parser("tree", help="players on a BSC broadcast tree (JSON input)")
    p.add_argument("file")
    p.add_argument("--root", type=int, default=0)
    p.add_argument("--samples", type=int, default=0, help="also run a Monte Carlo estimate")
    p.add_argument("--seed", type=int)
    p.set_defaults(run=cmd_tree)

    p = sub.add_parser("verify", help="run a named verification scenario")
    p.add_argument("name", help="scenario name or 'all'")
    p.set_defaults(run=cmd_verify)
    return parser


def _emit(record: dict, fmt: str, stream) -> None:
    if fmt == "json":
        json.dump(record, stream, default=_default)
        stream.write("\n")
        return
    results = record["results"]
    rows = None
    for key in ("values", "ranking", "checks"):
        if isinstance(results.get(key), list):
            rows = results[key]
            break
    writer = csv.writer(stream)
    if rows:
        fields = [k for k in rows[0] if not isinstance(rows[0][k], (dict, list))]
        writer.writerow(fields)
        for row in rows:
            writer.writerow([row[k] for k in fields])
    else:
        writer.writerow(["key", "value"])
        for k, v in results.items():
            writer.writerow([k, json.dumps(v, default=_default) if isinstance(v, (dict, list)) else v])


def _default(obj):
    if isinstance(obj, set):
        return sorted(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    raise TypeError(f"not serializable: {type(obj).__name__}")


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    params = {k: v for k, v in vars(args).items() if k not in ("run", "format")}
    start = time.perf_counter()
    try:
        results = args.run(args)
    except UsageError as exc:
        print(f"noisestab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"noisestab: refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"noisestab: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    record = {
        "command": args.command,
        "parameters": params,
        "results": _round(json.loads(json.dumps(results, default=_default))),
        "versions": {"noisestab": __version__, "numpy": np.__version__, "python": platform.python_version()},
        "wall_time": time.perf_counter() - start,
    }
    _emit(record, args.format, stdout)
    if args.command == "verify" and not results["passed"]:
        return EXIT_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
