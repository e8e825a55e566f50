"""Command-line front end.

Examples
--------
    hardyops run reference-suite --report out.json --figures figs/
    hardyops represent '{"theta": {"blaschke": 0.5}, "phi": {"blaschke": 0.3}}' --order 64
    hardyops perturb t2_reducing rep.json
    hardyops probe-halfspace '{"theta": {"monomial": 40}}' 32,48,64 --allow-wide
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import fileio
from . import invariance as inv
from . import kernels as K
from . import operators as ops
from . import perturbation as pt
from . import representations as R
from . import scenario as scn
from . import subspaces as sp
from .errors import HardyOpsError, ScenarioError, WindowRefused

EXIT_FAIL = 1
EXIT_ERROR = 2


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _read_json_arg(arg: str) -> dict:
    """A JSON literal or the path of a JSON file."""
    p = Path(arg)
    text = p.read_text() if p.exists() else arg
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"{arg[:40]!r}: {e.msg} at line {e.lineno} column {e.colno}") from None


def rep_from_arg(arg: str, N: int) -> R.RepSpec:
    """Rep spec JSON: ``theta``, optional ``phi``, ``flavor`` and a ``symbols`` table."""
    obj = _read_json_arg(arg)
    table = scn.SymbolTable(obj.get("symbols", {}))
    ctx_rep = {k: obj[k] for k in ("theta", "phi", "flavor", "require_pure", "label") if k in obj}
    if "theta" not in ctx_rep:
        raise ScenarioError("rep spec needs 'theta'")
    phi = table.parse(ctx_rep["phi"], "phi") if ctx_rep.get("phi") is not None else None
    return R.RepSpec(table.parse(ctx_rep["theta"], "theta"), N, phi,
                     ctx_rep.get("flavor", "phi_model"), bool(ctx_rep.get("require_pure", True)),
                     label=ctx_rep.get("label", ""))


def _flat(d: dict, prefix: str = "") -> list:
    rows = []
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            rows += _flat(v, key + ".")
        else:
            rows.append((key, json.dumps(v) if isinstance(v, (list, tuple)) else v))
    return rows


def emit(result: dict, args) -> None:
    """Print (or write to ``--report``) a result dict as JSON or key,value CSV."""
    result = scn._clean(result)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(_flat(result))
        text = buf.getvalue()
    else:
        text = json.dumps(result, indent=2) + "\n"
    if getattr(args, "report", None):
        Path(args.report).write_text(text)
    else:
        sys.stdout.write(text)


def _figures_dir(args) -> Path | None:
    if not getattr(args, "figures", None):
        return None
    d = Path(args.figures)
    d.mkdir(parents=True, exist_ok=True)
    return d


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_run(args) -> int:
    src = Path(args.scenario)
    path = src if src.exists() else scn.bundled(args.scenario)
    overrides = {"order": args.order, "seed": args.seed,
                 "tolerances": {"rank": args.tol_rank, "identity": args.tol_identity}}
    sc = scn.load_scenario(path, overrides)
    report = scn.run(sc, args.allow_guard_mismatch)
    text = report.to_csv() if args.format == "csv" else report.to_json(not args.no_timings) + "\n"
    out = args.report or sc.output
    if out:
        Path(out).write_text(text)
        if args.format == "json" and args.csv_table:
            Path(out).with_suffix(".csv").write_text(report.to_csv())
    else:
        sys.stdout.write(text)
    figs = _figures_dir(args)
    if figs is not None:
        from .plotting import residual_figure
        residual_figure(report, figs / f"{sc.name}-residuals.png")
    for r in report.records:
        tag = "PASS" if r.passed else ("REFUSED" if r.failure_class == "window_refused" else "FAIL")
        print(f"{tag:7s} {r.name}" + (f"  [{r.message}]" if r.message else ""), file=sys.stderr)
    s = report.summary()
    print(f"{s['passed']}/{s['total']} checks passed", file=sys.stderr)
    return 0 if report.passed else EXIT_FAIL


def cmd_list_checks(args) -> int:
    from .suites import SUITES
    emit({"checks": scn.list_checks(), "corpus_suites": sorted(SUITES)}, args)
    return 0


def _load_operator(spec: str, N: int, dim: int) -> ops.TruncatedOp:
    if spec in ("shift", "backshift"):
        return ops.shift(N, dim) if spec == "shift" else ops.backshift(N, dim)
    obj = fileio.load(spec)
    if not isinstance(obj, ops.TruncatedOp):
        raise ScenarioError(f"{spec} does not hold an operator")
    return obj


def cmd_defect(args) -> int:
    M = fileio.load(args.subspace_file)
    if not isinstance(M, sp.Subspace):
        raise ScenarioError(f"{args.subspace_file} does not hold a subspace")
    T = _load_operator(args.op_spec, M.order, M.dim)
    if T.guard != 0 and not args.allow_guard_mismatch and 2 * T.guard >= M.order:
        raise WindowRefused(f"operator guard {T.guard} too large for order {M.order}")
    d = inv.almost_defect(T, M, args.tol_rank)
    out = {"defect": d.defect, "residual": d.residual, "guard": d.window_guard,
           "singular_values": list(d.singular_values[:8]), "subspace_rank": M.rank}
    if args.export_space:
        fileio.export(d.defect_space, args.export_space)
        out["defect_space_file"] = args.export_space
    emit(out, args)
    figs = _figures_dir(args)
    if figs is not None and d.singular_values:
        from .plotting import singular_value_figure
        singular_value_figure(d.singular_values, figs / "defect-singular-values.png",
                              args.tol_rank * max(d.singular_values[0], 1.0))
    return 0


def cmd_represent(args) -> int:
    spec = rep_from_arg(args.rep_spec, args.order)
    M, pi = R.build_rep(spec, args.tol_rank)
    a = R.defect_thm_main(spec, args.tol_rank, M)
    b = R.defect_thm_main2(spec, args.tol_rank, M)
    out = {"order": spec.N, "flavor": spec.flavor, "dim": M.rank,
           "partial_isometry": {"residual": pi.residual, "tolerance": pi.tolerance,
                                "passed": pi.passed},
           "backshift_defect": {"theorem": a.defect, "generic": a.generic_defect, "angle": a.angle},
           "shift_defect": {"theorem": b.defect, "generic": b.generic_defect, "angle": b.angle},
           "nearly": R.nearly_criterion(spec, args.tol_rank, M).__dict__}
    if args.export:
        fileio.export(M, args.export)
        out["subspace_file"] = args.export
    emit(out, args)
    return 0 if (pi.passed and a.passed and b.passed) else EXIT_FAIL


def cmd_perturb(args) -> int:
    spec = rep_from_arg(args.rep_spec, args.order)
    terms = _read_json_arg(args.terms) if args.terms else {}
    pspec = pt.PerturbationSpec(args.kind, terms.get("M", ()), terms.get("perp", ()))
    s = pt.synthesize(args.kind, spec, pspec, check=False, tol=args.tol_invariance)
    out = {"kind": args.kind, "core_rank": s.core_rank, "rank_bound": s.rank_bound,
           **s.report.to_dict()}
    if args.export:
        fileio.export(s.op, args.export)
        out["operator_file"] = args.export
    emit(out, args)
    return 0 if s.passed else EXIT_FAIL


def cmd_kernel_check(args) -> int:
    spec = rep_from_arg(args.rep_spec, args.order)
    w = complex(args.w.replace(" ", ""))
    c = np.array([complex(x) for x in args.c.split(",")]) if args.c else np.ones(spec.dim_F)
    r = K.kernel_consistency(spec, w, c, spec.N, args.tol, args.perp)
    if args.grid:
        pts = np.linspace(-0.8, 0.8, args.grid)
        f = K.kernel_Mperp if args.perp else K.kernel_M
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["z", "w", "row", "col", "re", "im"])
        grid = np.zeros((args.grid, args.grid), dtype=complex)
        for i, z in enumerate(pts):
            for j, ww in enumerate(pts):
                V = f(spec, z, ww)
                grid[i, j] = V[0, 0]
                for (p, q), v in np.ndenumerate(V):
                    wr.writerow([repr(float(z)), repr(float(ww)), p, q,
                                 repr(float(v.real)), repr(float(v.imag))])
        Path(args.grid_file).write_text(buf.getvalue())
        figs = _figures_dir(args)
        if figs is not None:
            from .plotting import kernel_grid_figure
            kernel_grid_figure(grid, figs / "kernel-grid.png")
    emit({"residual": r.residual, "tolerance": r.tol, "passed": r.passed, "tail": r.tail,
          "lifted_order": r.lifted_order, "complement_residual": K.complement_residual(spec, 0, w)},
         args)
    return 0 if r.passed else EXIT_FAIL


def cmd_probe(args) -> int:
    orders = [int(x) for x in args.orders.split(",")]
    spec = rep_from_arg(args.rep_spec, orders[0])
    g = R.halfspace_probe(spec, orders, args.tol_rank)
    emit({"orders": list(g.orders), "dims": list(g.dims), "perp_dims": list(g.perp_dims),
          "classification": g.classification, "note": g.note}, args)
    figs = _figures_dir(args)
    if figs is not None:
        from .plotting import growth_figure
        growth_figure(g, figs / "halfspace-growth.png")
    return 0


def cmd_export(args) -> int:
    spec = rep_from_arg(args.rep_spec, args.order)
    if args.object == "operator":
        obj = R.rep_operator(spec)
    else:
        obj, _ = R.build_rep(spec, args.tol_rank)
        if args.object == "complement":
            obj = sp.orth_complement(obj)
    fileio.export(obj, args.path)
    emit({"written": args.path, "kind": type(obj).__name__}, args)
    return 0


def cmd_import(args) -> int:
    obj = fileio.load(args.path)
    if isinstance(obj, sp.Subspace):
        out = {"kind": "subspace", "order": obj.order, "dim": obj.dim, "rank": obj.rank,
               "tol": obj.tol, "meta": obj.meta}
    else:
        out = {"kind": "operator", "order": obj.order, "dim_in": obj.dim_in,
               "dim_out": obj.dim_out, "guard": obj.guard, "err_bound": obj.err_bound}
    if args.to:
        fileio.export(obj, args.to)
        out["converted_to"] = args.to
    emit(out, args)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, default=None, help="truncation order N")
    common.add_argument("--tol-rank", type=float, default=None, help="relative rank tolerance")
    common.add_argument("--tol-identity", type=float, default=None, help="identity residual floor")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized corpora")
    common.add_argument("--report", help="write output to this path instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--allow-guard-mismatch", action="store_true",
                        help="record window refusals without failing the exit status")
    common.add_argument("--figures", metavar="DIR", help="render PNG figures into DIR")

    p = argparse.ArgumentParser(prog="hardyops", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("run", parents=[common], help="run a scenario file or a bundled scenario")
    s.add_argument("scenario", help="scenario path or bundled name (e.g. reference-suite)")
    s.add_argument("--no-timings", action="store_true",
                   help="omit timings and environment stamp (byte-stable reports)")
    s.add_argument("--csv-table", action="store_true", help="also write a CSV table next to the report")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("list-checks", parents=[common], help="catalogue of check types")
    s.set_defaults(func=cmd_list_checks)

    s = sub.add_parser("defect", parents=[common], help="defect of a stored subspace")
    s.add_argument("op_spec", help="shift, backshift or an operator file")
    s.add_argument("subspace_file")
    s.add_argument("--export-space", help="write the minimal orthogonal defect space here")
    s.set_defaults(func=cmd_defect)

    s = sub.add_parser("represent", parents=[common], help="build T_Phi K_Theta or R(T_Theta)")
    s.add_argument("rep_spec", help="JSON literal or file")
    s.add_argument("--export", help="write the subspace basis here")
    s.set_defaults(func=cmd_represent)

    s = sub.add_parser("perturb", parents=[common], help="synthesize a finite-rank perturbation")
    s.add_argument("kind", choices=pt.KINDS)
    s.add_argument("rep_spec")
    s.add_argument("--terms", help="JSON with 'M' and 'perp' lists of vector pairs")
    s.add_argument("--tol-invariance", type=float, default=pt.INVARIANCE_TOL)
    s.add_argument("--export", help="write the perturbation operator here")
    s.set_defaults(func=cmd_perturb)

    s = sub.add_parser("kernel-check", parents=[common], help="kernel against projected Szego vector")
    s.add_argument("rep_spec")
    s.add_argument("w", help="point, e.g. 0.3 or 0.2+0.4j")
    s.add_argument("--c", help="comma-separated vector in the output fiber")
    s.add_argument("--perp", action="store_true", help="check the complement kernel")
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--grid", type=int, default=0, help="also tabulate K on a real grid of this size")
    s.add_argument("--grid-file", default="kernel-grid.csv")
    s.set_defaults(func=cmd_kernel_check)

    s = sub.add_parser("probe-halfspace", parents=[common], help="dimension growth across orders")
    s.add_argument("rep_spec")
    s.add_argument("orders", help="comma-separated orders, e.g. 32,48,64")
    s.set_defaults(func=cmd_probe)

    s = sub.add_parser("export", parents=[common], help="write a subspace or operator file")
    s.add_argument("rep_spec")
    s.add_argument("path", help=".csv for text, anything else for the binary layout")
    s.add_argument("--object", choices=("subspace", "complement", "operator"), default="subspace")
    s.set_defaults(func=cmd_export)

    s = sub.add_parser("import", parents=[common], help="read and describe a stored file")
    s.add_argument("path")
    s.add_argument("--to", help="convert to another file (layout from suffix)")
    s.set_defaults(func=cmd_import)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command != "run":
        args.order = args.order or 64
        args.tol_rank = args.tol_rank or sp.RANK_TOL
    try:
        return args.func(args)
    except WindowRefused as e:
        print(f"window refused: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (HardyOpsError, OSError, ValueError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
