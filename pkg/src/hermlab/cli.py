"""Command-line front end.

Commands: analyze, check-critical, variation-check, optimize, catalog.

Exit codes: 0 success; 1 invalid input (schema, non-positive-definite metric,
failed structure validation, unknown catalog name); 2 numerical failure;
3 "not critical" / "not converged" / "deviation above tolerance" outcomes.

Input documents are JSON with exactly one of:
  * ``"catalog": "<name>"``
  * ``"n"`` plus ``"C"``/``"D"`` term lists ``{"up": j, "lo": [i, k],
    "re": x, "im": y}`` (1-based indices)
  * ``"real_algebra": {"dim": 2n, "f": [{"up": c, "lo": [a, b],
    "val": x}], "J": [[...]]}``
plus an optional ``"metric"`` given as an n x n array of [re, im] pairs
(default: identity).

The environment variable HERMLAB_TOL overrides the default tolerance 1e-9.
Seeded randomness uses numpy's default_rng (PCG64), so traces are
reproducible across platforms.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from . import classifiers as cl
from . import functionals as fn
from . import lie_hermitian as lh
from . import optimizer as op
from . import torsion_engine as te
from .errors import HermlabError, NotPositiveDefinite, NumericalFailure, UnknownCatalogEntry

DEFAULT_TOL = 1e-9

EXIT_OK = 0
EXIT_INVALID_INPUT = 1
EXIT_NUMERICAL = 2
EXIT_NOT_SATISFIED = 3


class InputError(Exception):
    """Schema-level problem with an input document."""


# ---------------------------------------------------------------------------
# input parsing


def _parse_metric(doc, n):
    if "metric" not in doc or doc["metric"] is None:
        return np.eye(n)
    m = doc["metric"]
    if len(m) != n or any(len(row) != n for row in m):
        raise InputError(f"metric must be {n}x{n}")
    H = np.array([[complex(c[0], c[1]) for c in row] for row in m])
    return H


def _parse_tensor_terms(terms, n, name):
    t = np.zeros((n, n, n), dtype=complex)
    for entry in terms:
        try:
            up = int(entry["up"])
            i, k = (int(v) for v in entry["lo"])
            val = complex(float(entry.get("re", 0.0)), float(entry.get("im", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed {name} entry: {entry!r}") from exc
        for idx in (up, i, k):
            if not 1 <= idx <= n:
                raise InputError(f"{name} index out of range 1..{n}: {entry!r}")
        t[up - 1, i - 1, k - 1] = val
    return t


def parse_input(doc):
    """Build a HermitianStructure from an input document."""
    if not isinstance(doc, dict):
        raise InputError("input document must be a JSON object")
    sources = [k for k in ("catalog", "real_algebra", "C") if k in doc]
    if "D" in doc and "C" not in doc:
        sources.append("D")
    if len(sources) != 1:
        raise InputError(
            "exactly one of 'catalog', 'real_algebra', or 'C'/'D' must be present"
        )

    if "catalog" in doc:
        try:
            hs = lh.catalog(doc["catalog"])
        except UnknownCatalogEntry as exc:
            raise InputError(f"unknown catalog entry: {exc}") from exc
        H = _parse_metric(doc, hs.n)
        return lh.HermitianStructure(hs.sc, H)

    if "real_algebra" in doc:
        ra = doc["real_algebra"]
        try:
            dim = int(ra["dim"])
            J = np.array(ra["J"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError("malformed real_algebra block") from exc
        f = np.zeros((dim, dim, dim))
        for entry in ra.get("f", []):
            try:
                c = int(entry["up"])
                a, b = (int(v) for v in entry["lo"])
                val = float(entry["val"])
            except (KeyError, TypeError, ValueError) as exc:
                raise InputError(f"malformed f entry: {entry!r}") from exc
            for idx in (c, a, b):
                if not 1 <= idx <= dim:
                    raise InputError(f"f index out of range 1..{dim}: {entry!r}")
            f[c - 1, a - 1, b - 1] = val
            f[c - 1, b - 1, a - 1] = -val
        try:
            rl = lh.RealLieData(dim, f, J)
            sc = lh.complexify(rl)
        except (HermlabError, ValueError) as exc:
            raise InputError(f"real algebra rejected: {exc}") from exc
        H = _parse_metric(doc, sc.n)
        return lh.HermitianStructure(sc, H)

    try:
        n = int(doc["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("'n' is required with explicit C/D input") from exc
    C = _parse_tensor_terms(doc.get("C", []), n, "C")
    D = _parse_tensor_terms(doc.get("D", []), n, "D")
    sc = lh.StructureConstants(n, C, D)
    H = _parse_metric(doc, n)
    return lh.HermitianStructure(sc, H)


# ---------------------------------------------------------------------------
# serialization


def _pair(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _vec(v):
    return [_pair(z) for z in np.asarray(v)]


def _mat(m):
    return [[_pair(z) for z in row] for row in np.asarray(m)]


def _validation_dict(rep):
    return {
        "ok": rep.ok,
        "checks": [
            {"name": c.name, "passed": c.passed, "residual": c.residual}
            for c in rep.checks
        ],
    }


def _classification_dict(rep):
    return {
        "tol": rep.tol,
        "kahler": {"flag": rep.kahler, "residual": rep.kahler_residual},
        "balanced": {"flag": rep.balanced, "residual": rep.balanced_residual},
        "gauduchon": {"flag": rep.gauduchon, "residual": rep.gauduchon_residual},
        "pluriclosed": {"flag": rep.pluriclosed, "residual": rep.pluriclosed_residual},
        "lck_shape": {"flag": rep.lck_shape, "residual": rep.lck_residual},
        "stp": {"flag": rep.stp, "residuals": rep.stp_residuals},
        "nilpotent_J": {
            "flag": rep.nilpotent_J,
            "witness": list(rep.nilpotent_J_witness)
            if rep.nilpotent_J_witness is not None
            else None,
        },
    }


def build_report(hs, doc, tol):
    vrep = lh.validate(hs.sc)
    pkg = te.analyze(hs)
    crep = cl.classify(pkg, hs, tol)
    rrep = fn.residual_report(hs)
    return {
        "tool": {"name": "hermlab", "version": __version__},
        "tolerances": {"tol": tol},
        "input": doc,
        "validation": _validation_dict(vrep),
        "torsion": {
            "n": pkg.n,
            "norm_T2": pkg.norm_T2,
            "norm_eta2": pkg.norm_eta2,
            "chi": pkg.chi,
            "eta": _vec(pkg.eta),
            "lee": _vec(pkg.lee),
            "A": _mat(pkg.A),
            "B": _mat(pkg.B),
            "phi": _mat(pkg.phi),
            "xi": _mat(pkg.xi),
        },
        "classification": _classification_dict(crep),
        "residuals": {
            "F_value": rrep.F_value,
            "G_value": rrep.G_value,
            "a": rrep.a,
            "b": rrep.b,
            "trace_residual": rrep.trace_residual,
            "Q_F": _mat(rrep.Q_F),
            "Q_G": _mat(rrep.Q_G),
            "norm_Q_F": rrep.norm_Q_F,
            "norm_Q_G": rrep.norm_Q_G,
        },
    }


def _fmt_mat_text(m, digits=6):
    rows = []
    for row in np.asarray(m):
        rows.append(
            "  [" + ", ".join(f"{z.real:.{digits}g}{z.imag:+.{digits}g}i" for z in row) + "]"
        )
    return "\n".join(rows)


def render_text(report):
    t = report["torsion"]
    r = report["residuals"]
    c = report["classification"]
    lines = [
        f"hermlab {report['tool']['version']}",
        f"n = {t['n']}",
        f"validation ok = {report['validation']['ok']}",
        "",
        f"|T|^2   = {t['norm_T2']:.6g}",
        f"|eta|^2 = {t['norm_eta2']:.6g}",
        f"chi     = {t['chi']:.6g}",
        f"F = {r['F_value']:.6g}   G = {r['G_value']:.6g}",
        f"|Q_F| = {r['norm_Q_F']:.6g}   |Q_G| = {r['norm_Q_G']:.6g}",
        f"trace residual 4(|eta|^2 - chi) = {r['trace_residual']:.6g}",
        "",
        "flags:",
    ]
    for key in ("kahler", "balanced", "gauduchon", "pluriclosed", "lck_shape", "nilpotent_J"):
        lines.append(f"  {key:12s} {c[key]['flag']}")
    lines.append(f"  {'stp':12s} {c['stp']['flag']}")
    for name, mkey in (("A", "A"), ("B", "B"), ("Q_F", None)):
        lines.append("")
        lines.append(f"{name}:")
        src = t[mkey] if mkey else r["Q_F"]
        mat = np.array([[complex(p[0], p[1]) for p in row] for row in src])
        lines.append(_fmt_mat_text(mat))
    if "optimization" in report:
        o = report["optimization"]
        lines += [
            "",
            f"optimizer: converged={o['converged']} reason={o['reason']} "
            f"iterations={o['iterations']}",
            f"final objective = {o['final_objective']:.6g}, "
            f"final residual norm = {o['final_residual_norm']:.6g}",
        ]
    if "variation_check" in report:
        v = report["variation_check"]
        lines += [
            "",
            f"variation check: directions={v['directions']} "
            f"max relative deviation={v['max_relative_deviation']:.3g} "
            f"passed={v['passed']}",
        ]
    return "\n".join(lines) + "\n"


def emit(report, args):
    if args.format == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        text = render_text(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def _load_structure(args):
    with open(args.input, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    hs = parse_input(doc)
    vrep = lh.validate(hs.sc)
    if not vrep.ok:
        raise InputError(
            "structure constants failed validation: "
            + ", ".join(f"{c.name}={c.residual:.3e}" for c in vrep.checks if not c.passed)
        )
    return hs, doc


def cmd_analyze(args):
    hs, doc = _load_structure(args)
    report = build_report(hs, doc, args.tol)
    emit(report, args)
    return EXIT_OK


def cmd_check_critical(args):
    hs, doc = _load_structure(args)
    report = build_report(hs, doc, args.tol)
    if args.functional == "torsion":
        norm = report["residuals"]["norm_Q_F"]
    else:
        norm = report["residuals"]["norm_Q_G"]
    report["criticality"] = {
        "functional": args.functional,
        "residual_norm": norm,
        "tol": args.tol,
        "critical": norm <= args.tol,
    }
    emit(report, args)
    return EXIT_OK if norm <= args.tol else EXIT_NOT_SATISFIED


def cmd_variation_check(args):
    hs, doc = _load_structure(args)
    rng = np.random.default_rng(args.seed)
    n = hs.n
    rel_tol, abs_tol = 1e-5, 1e-9
    worst_rel = 0.0
    passed = True
    rows = []
    for _ in range(args.directions):
        x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = (x + x.conj().T) / 2
        analytic = fn.first_variation(hs, h)
        fd = fn.fd_first_variation(hs, h, step=args.fd_step)
        dev = abs(analytic - fd)
        denom = max(abs(analytic), abs(fd))
        if denom > abs_tol:
            rel = dev / denom
            ok = rel <= rel_tol
            worst_rel = max(worst_rel, rel)
        else:
            ok = dev <= abs_tol
        passed = passed and ok
        rows.append({"analytic": analytic, "fd": fd, "deviation": dev, "ok": ok})
    report = build_report(hs, doc, args.tol)
    report["variation_check"] = {
        "directions": args.directions,
        "fd_step": args.fd_step,
        "seed": args.seed,
        "max_relative_deviation": worst_rel,
        "rows": rows,
        "passed": passed,
    }
    emit(report, args)
    return EXIT_OK if passed else EXIT_NOT_SATISFIED


def cmd_optimize(args):
    hs, doc = _load_structure(args)
    cfg = op.OptimConfig(
        objective=args.objective,
        max_iter=args.max_iter,
        grad_tol=args.grad_tol,
        det_normalized=args.det_normalized,
        objective_tol=args.objective_tol,
    )
    n = hs.n
    S0 = None
    if args.perturb > 0:
        rng = np.random.default_rng(args.seed)
        x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        S0 = (x + x.conj().T) / 2
        S0 *= args.perturb / np.linalg.norm(S0)
    trace = op.minimize(hs, cfg, S0=S0)
    hs_star = lh.HermitianStructure(hs.sc, trace.H_star)
    report = build_report(hs_star, doc, args.tol)
    last = trace.iterations[-1]
    report["optimization"] = {
        "objective": args.objective,
        "seed": args.seed,
        "converged": trace.converged,
        "reason": trace.reason,
        "iterations": len(trace.iterations) - 1,
        "final_objective": last[1],
        "final_gradient_norm": last[2],
        "final_residual_norm": last[3],
        "H_star": _mat(trace.H_star),
        "trace": [
            {"iteration": it, "objective": obj, "gradient_norm": gn, "residual_norm": qn}
            for it, obj, gn, qn in trace.iterations
        ],
    }
    emit(report, args)
    return EXIT_OK if trace.converged else EXIT_NOT_SATISFIED


def cmd_catalog(args):
    if args.action == "list":
        for name in lh.catalog_names():
            sys.stdout.write(name + "\n")
        return EXIT_OK
    try:
        hs = lh.catalog(args.name)
    except UnknownCatalogEntry:
        sys.stderr.write(f"unknown catalog entry: {args.name}\n")
        return EXIT_INVALID_INPUT
    sys.stdout.write(f"{args.name}: n = {hs.n}\n")
    for line in lh.structure_equations_text(hs.sc):
        sys.stdout.write("  " + line + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_common(p):
    p.add_argument("input", help="path to a JSON input document")
    p.add_argument("--tol", type=float, default=None, help="tolerance (default 1e-9)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output", default=None, help="write the report to a file")


def make_parser():
    parser = argparse.ArgumentParser(
        prog="hermlab",
        description="Chern torsion tensors, variational residuals, and "
        "critical-metric search for left-invariant Hermitian structures.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full torsion/classification/residual report")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("check-critical", help="evaluate an Euler-Lagrange residual")
    _add_common(p)
    p.add_argument("--functional", choices=("torsion", "gauduchon"), default="torsion")
    p.set_defaults(func=cmd_check_critical)

    p = sub.add_parser(
        "variation-check", help="analytic first variation vs finite differences"
    )
    _add_common(p)
    p.add_argument("--directions", type=int, default=10)
    p.add_argument("--fd-step", type=float, default=1e-4)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_variation_check)

    p = sub.add_parser("optimize", help="descend over the metric cone")
    _add_common(p)
    p.add_argument("--objective", choices=op.OBJECTIVES, default="torsion_functional")
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--grad-tol", type=float, default=1e-8)
    p.add_argument("--objective-tol", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--perturb", type=float, default=0.0, help="seeded random start size")
    p.add_argument("--det-normalized", action="store_true")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("catalog", help="list or show named structures")
    csub = p.add_subparsers(dest="action", required=True)
    pl = csub.add_parser("list")
    pl.set_defaults(func=cmd_catalog, action="list")
    ps = csub.add_parser("show")
    ps.add_argument("name")
    ps.set_defaults(func=cmd_catalog, action="show")

    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    if getattr(args, "tol", None) is None and hasattr(args, "tol"):
        args.tol = float(os.environ.get("HERMLAB_TOL", DEFAULT_TOL))
    try:
        return args.func(args)
    except (InputError, FileNotFoundError, json.JSONDecodeError, NotPositiveDefinite) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID_INPUT
    except (NumericalFailure, FloatingPointError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    except HermlabError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID_INPUT


if __name__ == "__main__":
    sys.exit(main())
