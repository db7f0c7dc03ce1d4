"""Command-line interface.

Subcommands wrap each module: ``check`` (cone report), ``transform``,
``power``, ``project``, ``range``, ``algebra``, ``interp`` and ``verify``
(the acceptance harness).  Matrices and algebras travel as JSON; see the
README for the schemas.

Exit codes: 0 success; 1 suite failures, a false required predicate, or an
unconverged solver; 2 invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import interp, suites
from .algebra import (
    a_h,
    algebra_from_json,
    algebra_from_name,
    algebra_to_json,
    amplify,
    identity_of,
    span_algebra,
    unitize,
)
from .cones import cone_report, numerical_range
from .generators import max_dim
from .matrices import Tolerances, matrix_from_json, matrix_to_json, op_norm
from .powers import power, power_balakrishnan, power_spectral, root_series
from .projections import peak_projection, support_projection
from .transforms import cayley, f_inverse, f_transform

PREDICATES = ("accretive", "f", "half-f", "c", "sector")


def _load_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _load_matrix(path: str) -> np.ndarray:
    m = matrix_from_json(_load_json(path))
    if m.shape[0] > max_dim():
        raise ValueError(
            f"matrix dimension {m.shape[0]} exceeds REALPOS_MAX_DIM={max_dim()}"
        )
    return m


def _load_algebra(spec: str):
    if spec.startswith("span:"):
        # span:FILE, the file holding a list of matrices spanning the algebra
        data = _load_json(spec[len("span:"):])
        mats = data["basis"] if isinstance(data, dict) else data
        return span_algebra([matrix_from_json(m) for m in mats])
    if ":" in spec and not spec.endswith(".json") and spec != "-":
        return algebra_from_name(spec)
    return algebra_from_json(_load_json(spec))


def _emit(data: dict, args) -> None:
    text = json.dumps(data, indent=2, sort_keys=True)
    if getattr(args, "json_out", None):
        with open(args.json_out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _tolerances(args) -> Tolerances:
    if args.tol is None:
        return Tolerances()
    t = float(args.tol)
    return Tolerances(eq_tol=t, psd_slack=max(100.0 * t, 1e-12), iter_tol=t / 10.0)


def _cmd_check(args) -> int:
    tol = _tolerances(args)
    x = _load_matrix(args.matrix)
    report = cone_report(x, tol)
    _emit(report.to_json(), args)
    if not args.require:
        return 0
    verdicts = {
        "accretive": report.accretive_margin >= -tol.psd_slack,
        "f": report.f_gap >= -tol.psd_slack,
        "half-f": report.half_f_gap >= -tol.psd_slack,
        "c": report.c_constant is not None,
        "sector": report.sector_angle is not None
        and report.sector_angle < np.pi / 2.0 - 1e-9,
    }
    failed = [p for p in args.require if not verdicts[p]]
    if failed:
        print(f"required predicates failed: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


def _cmd_transform(args) -> int:
    tol = _tolerances(args)
    x = _load_matrix(args.matrix)
    ops = {"cayley": cayley, "f": f_transform, "finv": f_inverse}
    out = ops[args.op](x, tol)
    _emit(matrix_to_json(out), args)
    return 0


def _cmd_power(args) -> int:
    tol = _tolerances(args)
    x = _load_matrix(args.matrix)
    if args.method == "spectral":
        res = power_spectral(x, args.alpha, tol)
    elif args.method == "balakrishnan":
        res = power_balakrishnan(x, args.alpha, nodes=args.nodes, tol=tol)
    elif args.method == "series":
        root = int(round(1.0 / args.alpha))
        if abs(1.0 / args.alpha - root) > 1e-12 or root < 2:
            raise ValueError("series method needs alpha = 1/m for integer m >= 2")
        res = root_series(x, root, terms=args.terms, tol=tol)
    else:
        res = power(x, args.alpha, nodes=args.nodes, tol=tol)
    _emit(
        {
            "value": matrix_to_json(res.value),
            "method": res.method,
            "est_error": res.est_error,
            "nodes_or_terms": res.nodes_or_terms,
            "certified": res.certified,
        },
        args,
    )
    return 0


def _cmd_project(args) -> int:
    tol = _tolerances(args)
    x = _load_matrix(args.matrix)
    fn = support_projection if args.kind == "support" else peak_projection
    res = fn(x, method=args.method, tol=tol)
    _emit(
        {
            "proj": matrix_to_json(res.proj),
            "method": res.method,
            "iterations": res.iterations,
            "oracle_residual": res.oracle_residual,
            "status": res.status,
            "trace": [float(t) for t in res.trace],
        },
        args,
    )
    return 0 if res.status != "diverged" else 1


def _cmd_range(args) -> int:
    x = _load_matrix(args.matrix)
    nr = numerical_range(x, args.grid)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["theta", "support", "boundary_re", "boundary_im"])
    for t, h, z in zip(nr.thetas, nr.support, nr.boundary):
        writer.writerow([f"{t:.12g}", f"{h:.12g}", f"{z.real:.12g}", f"{z.imag:.12g}"])
    if args.csv_out:
        with open(args.csv_out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


def _cmd_algebra(args) -> int:
    tol = _tolerances(args)
    if args.op == "generate":
        data = _load_json(args.spec)
        alg = algebra_from_json(data, tol)
        _emit(algebra_to_json(alg), args)
        return 0
    alg = _load_algebra(args.spec)
    if args.op == "a-h":
        corner, q = a_h(alg, seed=args.seed, tol=tol)
        _emit({"a_h": algebra_to_json(corner), "q": matrix_to_json(q)}, args)
        return 0
    if args.op == "amplify":
        _emit(algebra_to_json(amplify(alg, args.k, tol)), args)
        return 0
    if args.op == "unitize":
        _emit(algebra_to_json(unitize(alg, tol)), args)
        return 0
    if args.op == "identity":
        e = identity_of(alg, tol)
        _emit({"identity": None if e is None else matrix_to_json(e)}, args)
        return 0
    raise ValueError(f"unknown algebra op {args.op!r}")


def _interp_residuals(theorem: str, data: dict, solution: dict) -> dict:
    """Independent residual table for the solver output (nothing is trusted
    from solver state)."""
    from .cones import f_membership
    from .matrices import im_part, min_real_eig

    g = solution["solution"]
    n = g.shape[0]
    eye = np.eye(n, dtype=complex)
    table = {"half_f_excess": max(0.0, -f_membership(g).half_f_gap)}
    if theorem == "dominate":
        b = matrix_from_json(data["b"])
        table["domination_deficit"] = max(0.0, -min_real_eig(g - b))
        table["im_norm"] = op_norm(im_part(g))
    elif theorem == "decompose":
        b = matrix_from_json(data["b"])
        y = solution["complement"]
        table["difference"] = op_norm(b - (g - y))
        table["half_f_excess_complement"] = max(0.0, -f_membership(y).half_f_gap)
    elif theorem == "np":
        c = matrix_from_json(data["c"])
        block = np.block([[eye - c, (eye - g).conj().T], [eye - g, eye]])
        table["schur_deficit"] = max(0.0, -min_real_eig(block))
        table["im_norm"] = op_norm(im_part(g))
    elif theorem in ("urysohn", "strict-urysohn"):
        q = matrix_from_json(data["q"])
        table["corner"] = max(op_norm(g @ q - q), op_norm(q @ g - q))
    elif theorem in ("peak", "tietze"):
        q = matrix_from_json(data["q"])
        b = matrix_from_json(data["b"])
        table["corner"] = max(op_norm(g @ q - b @ q), op_norm(q @ g - b @ q))
        if theorem == "tietze":
            table.pop("half_f_excess")
            table["norm_excess"] = max(0.0, op_norm(g) - 1.0)
    return {k: float(v) for k, v in table.items()}


def _cmd_interp(args) -> int:
    tol = _tolerances(args)
    data = _load_json(args.problem)
    alg_spec = data["algebra"]
    alg = algebra_from_name(alg_spec) if isinstance(alg_spec, str) else algebra_from_json(alg_spec)

    def mat(key):
        return matrix_from_json(data[key])

    seed = int(data.get("seed", args.seed))
    eps = float(data.get("eps", 1e-2))
    near = float(data.get("near_eps", 1e-2))
    try:
        if args.theorem == "dominate":
            out = {"solution": interp.dominate(alg, mat("b"), eps, seed=seed, tol=tol)}
        elif args.theorem == "decompose":
            x, y = interp.decompose(alg, mat("b"), seed=seed, tol=tol)
            out = {"solution": x, "complement": y}
        elif args.theorem == "np":
            out = {"solution": interp.interp_np(alg, mat("c"), near, seed=seed, tol=tol)}
        elif args.theorem == "urysohn":
            out = {"solution": interp.urysohn_interpolate(alg, mat("q"), mat("u"), eps, near, seed=seed, tol=tol)}
        elif args.theorem == "strict-urysohn":
            out = {"solution": interp.strict_urysohn(alg, mat("q"), mat("p"), seed=seed, tol=tol)}
        elif args.theorem == "peak":
            out = {"solution": interp.peak_interpolate(alg, mat("q"), mat("b"), seed=seed, tol=tol)}
        elif args.theorem == "tietze":
            verts = np.array([complex(re, im) for re, im in data["region"]])
            region = interp.ConvexRegion(verts)
            out = {"solution": interp.tietze_lift(alg, mat("q"), mat("b"), region, seed=seed, tol=tol)}
        else:
            raise ValueError(f"unknown theorem {args.theorem!r}")
    except interp.UnconvergedError as exc:
        payload = {"verdict": "unconverged", "message": str(exc)}
        if exc.solution is not None:
            payload["residuals"] = {k: float(v) for k, v in exc.solution.residuals.items()}
            payload["solution"] = matrix_to_json(exc.solution.value)
        _emit(payload, args)
        return 1
    payload = {"verdict": "feasible", "residuals": _interp_residuals(args.theorem, data, out)}
    for key, value in out.items():
        payload[key] = matrix_to_json(value)
    _emit(payload, args)
    return 0


def _cmd_verify(args) -> int:
    tol = _tolerances(args)
    names = [args.suite] if args.suite else suites.suite_names()
    sizes = [int(s) for s in args.sizes.split(",")] if args.sizes else None
    reports = []
    failed = False
    for name in names:
        report = suites.run_suite(name, seed=args.seed, sizes=sizes, tol=tol, dump_dir=args.dump_dir)
        reports.append(report)
        status = "PASS" if report.passed else "FAIL"
        failed = failed or not report.passed
        print(
            f"{status} {name:22s} cases={report.cases:4d} "
            f"failures={len(report.failures):3d} time={report.wall_time:7.2f}s"
        )
    if args.json_out:
        with open(args.json_out, "w") as fh:
            json.dump([r.to_json() for r in reports], fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.csv_out:
        with open(args.csv_out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["suite", "cases", "failures", "passed", "wall_time"])
            for r in reports:
                writer.writerow([r.suite, r.cases, len(r.failures), r.passed, f"{r.wall_time:.3f}"])
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="realpos",
        description="Order theory for matrix operator algebras: cones, powers, "
        "projections and interpolation solvers.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="override eq_tol (scales the others)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json-out", default=None, help="write JSON output to a file")
    common.add_argument("--csv-out", default=None, help="write CSV output to a file")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=argparse.ArgumentParser)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("check", help="cone membership report for a matrix")
    p.add_argument("matrix", help="matrix JSON path or - for stdin")
    p.add_argument("--require", nargs="*", choices=PREDICATES, default=None)
    p.set_defaults(fn=_cmd_check)

    p = add_parser("transform", help="Cayley / F-transform / inverse")
    p.add_argument("matrix")
    p.add_argument("--op", choices=("cayley", "f", "finv"), required=True)
    p.set_defaults(fn=_cmd_transform)

    p = add_parser("power", help="principal fractional power")
    p.add_argument("matrix")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--method", choices=("auto", "spectral", "balakrishnan", "series"), default="auto")
    p.add_argument("--nodes", type=int, default=96)
    p.add_argument("--terms", type=int, default=200)
    p.set_defaults(fn=_cmd_power)

    p = add_parser("project", help="support or peak projection")
    p.add_argument("matrix")
    p.add_argument("--kind", choices=("support", "peak"), required=True)
    p.add_argument("--method", choices=("iterative", "oracle", "both"), default="both")
    p.set_defaults(fn=_cmd_project)

    p = add_parser("range", help="numerical range sweep as CSV")
    p.add_argument("matrix")
    p.add_argument("--grid", type=int, default=720)
    p.set_defaults(fn=_cmd_range)

    p = add_parser("algebra", help="generate / a-h / amplify / unitize / identity")
    p.add_argument("op", choices=("generate", "a-h", "amplify", "unitize", "identity"))
    p.add_argument("spec", help="algebra JSON path, canned name (full:3, upper:2, "
                                "diag:4, blockupper:2,2), or - for stdin")
    p.add_argument("--k", type=int, default=2, help="amplification factor")
    p.set_defaults(fn=_cmd_algebra)

    p = add_parser("interp", help="interpolation theorem solvers")
    p.add_argument("problem", help="problem JSON path or - for stdin")
    p.add_argument(
        "--theorem",
        choices=("dominate", "decompose", "np", "urysohn", "strict-urysohn", "peak", "tietze"),
        required=True,
    )
    p.set_defaults(fn=_cmd_interp)

    p = add_parser("verify", help="run the acceptance suites")
    p.add_argument("--suite", choices=suites.suite_names(), default=None)
    p.add_argument("--sizes", default=None, help="comma-separated ambient dimensions")
    p.add_argument("--dump-dir", default=None, help="directory for failing-instance dumps")
    p.set_defaults(fn=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (interp.VerificationFailedError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
