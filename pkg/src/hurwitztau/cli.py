"""Command-line front end.

Subcommands:

  analyze <file> [--json] [--strict]        full report for one covering
  check   <file> [--fd-step] [--tol] [--seed]   identity suite, one line each
  sweep   <file> --param PATH --to RE,IM --steps N [--json]   ratio constancy
  example <name> [--out FILE]               emit a built-in covering spec

Covering spec files are JSON; complex numbers are two-element [re, im]
arrays throughout.  Exit codes: 0 ok, 1 failed identity, 2 parse error,
3 boundary point, 4 caustic under --strict, 5 sweep left the moduli space.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings

import numpy as np

from . import cover0, cover1, isomon
from .cover0 import Covering0, Pole
from .cover1 import Covering1
from .elliptic import Modulus
from .errors import CausticWarning, CommonRootError, HurwitzError, OnBoundaryError
from .samples import builtin_example

EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_BOUNDARY = 3
EXIT_CAUSTIC = 4
EXIT_SWEEP = 5


def _c2pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _pair2c(v, where: str) -> complex:
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise ValueError(f"{where}: complex values are [re, im] pairs, got {v!r}")
    return complex(float(v[0]), float(v[1]))


def covering_to_spec(cov: Covering0 | Covering1) -> dict:
    if isinstance(cov, Covering0):
        return {
            "genus": 0,
            "profile": list(cov.profile),
            "poly_coeffs": [_c2pair(a) for a in cov.poly_coeffs],
            "poles": [
                {"b": _c2pair(p.b), "c": [_c2pair(v) for v in p.c]} for p in cov.poles
            ],
        }
    return {
        "genus": 1,
        "profile": list(cov.profile),
        "modulus": _c2pair(cov.modulus.sigma),
        "constant": _c2pair(cov.constant),
        "poles": [
            {"b": _c2pair(p.b), "c": [_c2pair(v) for v in p.c]} for p in cov.poles
        ],
    }


def spec_to_covering(doc: dict) -> Covering0 | Covering1:
    genus = doc.get("genus")
    profile = tuple(int(k) for k in doc.get("profile", ()))
    poles = tuple(
        Pole(
            _pair2c(p["b"], f"poles[{i}].b"),
            tuple(_pair2c(v, f"poles[{i}].c[{a}]") for a, v in enumerate(p["c"])),
        )
        for i, p in enumerate(doc.get("poles", ()))
    )
    if genus == 0:
        coeffs = tuple(
            _pair2c(v, f"poly_coeffs[{r}]") for r, v in enumerate(doc.get("poly_coeffs", ()))
        )
        return Covering0(profile, coeffs, poles)
    if genus == 1:
        trunc = int(os.environ.get("HURWITZ_TRUNC", 400))
        mod = Modulus(_pair2c(doc["modulus"], "modulus"), truncation=trunc)
        return Covering1(mod, _pair2c(doc["constant"], "constant"), poles)
    raise ValueError(f"genus must be 0 or 1, got {genus!r}")


def load_covering(path: str) -> Covering0 | Covering1:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return spec_to_covering(doc)


# --------------------------------------------------------------------------
# analyze


def build_report(cov: Covering0 | Covering1) -> dict:
    """Assemble the full analysis report, annotating verification status."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CausticWarning)
        an = isomon.analyze(cov)
        iso = isomon.build_isomonodromy(cov, an)
        if isinstance(cov, Covering0):
            cd = cover0.critical_data(cov)
            fc = cover0.flat_coords(cov)
            ta = cover0.tau_product(cov, cd)
            tb = cover0.tau_resultant(cov)
            gf = cover0.g_function(cov, cd)
            flat = {
                "p": [_c2pair(v) for v in fc.p_flat],
                "t": [_c2pair(v) for v in fc.t],
            }
            cross_const = -sum(
                (k + 1) * math.log(k) for k in cov.profile[1:]
            ) / 24.0
            min_pt_gap = cd.min_alpha_gap
        else:
            cd = cover1.critical_data(cov)
            fc = cover1.flat_coords(cov)
            ta = cover1.tau_product(cov, cd)
            tb = cover1.tau_resultant(cov, cd)
            gf = cover1.g_function(cov, cd)
            flat = {
                "t0": _c2pair(fc.t0),
                "t": [_c2pair(v) for v in fc.t],
            }
            cross_const = 0.0
            min_pt_gap = cd.min_z_gap

    h1 = np.array(iso.hamiltonians)
    h2 = np.array(iso.hamiltonians_bergmann)
    h_disc = float(np.max(np.abs(h1 - h2)) / np.max(np.abs(h1)))
    ratio = ta.tau_inv48 / tb.tau_inv48 if tb.tau_inv48 != 0 else complex("nan")
    g_cross_err = abs(gf.g_value - gf.g_from_jacobian - cross_const)

    order = np.argsort([(v.real, v.imag) for v in an.lam], axis=0)[:, 0]
    report = {
        "genus": cov.genus,
        "profile": list(cov.profile),
        "dim": cov.dim,
        "canonical": {
            "lambda": [_c2pair(an.lam[i]) for i in order],
            "points": [_c2pair(an.pts[i]) for i in order],
            "status": "checked" if len(an.lam) == cov.dim else "warned",
        },
        "flat": {**flat, "status": "unchecked"},
        "frame": {
            "fsq": [_c2pair(an.fsq[i]) for i in order],
            "sb": [_c2pair(an.sb[i]) for i in order],
            "sw": [_c2pair(an.sw[i]) for i in order],
            "status": "unchecked",
        },
        "hamiltonians": {
            "quadratic": [_c2pair(h1[i]) for i in order],
            "connection": [_c2pair(h2[i]) for i in order],
            "max_discrepancy": h_disc,
            "status": "checked" if h_disc < 1e-6 else "warned",
        },
        "tau": {
            "log_tau_product": _c2pair(ta.log_tau),
            "tau_inv48_product": _c2pair(ta.tau_inv48),
            "tau_inv48_resultant": _c2pair(tb.tau_inv48),
            "route_ratio": _c2pair(ratio),
            "status": "checked" if ratio == ratio else "warned",
        },
        "g_function": {
            "g": _c2pair(gf.g_value),
            "gamma": _c2pair(gf.gamma),
            "g_from_jacobian": _c2pair(gf.g_from_jacobian),
            "status": "checked" if g_cross_err < 1e-9 else "warned",
        },
        "caustic": {
            "min_lambda_gap": cd.min_lambda_gap,
            "min_point_gap": min_pt_gap,
            "warned": bool(cd.caustic),
            "status": "warned" if cd.caustic else "checked",
        },
    }
    return report


def _fmt_c(pair: list[float]) -> str:
    return f"{pair[0]:+.12g}{pair[1]:+.12g}i"


def _print_report(rep: dict) -> None:
    print(f"genus {rep['genus']}  profile {tuple(rep['profile'])}  dim M = {rep['dim']}")
    print(f"[{rep['canonical']['status']}] canonical coordinates")
    for lam, pt in zip(rep["canonical"]["lambda"], rep["canonical"]["points"]):
        print(f"   lambda = {_fmt_c(lam):<36s} at point {_fmt_c(pt)}")
    print(f"[{rep['flat']['status']}] flat coordinates")
    if "t0" in rep["flat"]:
        print(f"   t0 = {_fmt_c(rep['flat']['t0'])}")
    if rep["flat"].get("p"):
        for v in rep["flat"]["p"]:
            print(f"   p  = {_fmt_c(v)}")
    for v in rep["flat"]["t"]:
        print(f"   t  = {_fmt_c(v)}")
    print(f"[{rep['frame']['status']}] frame data (fsq, sb)")
    for f2, sb in zip(rep["frame"]["fsq"], rep["frame"]["sb"]):
        print(f"   fsq = {_fmt_c(f2):<36s} sb = {_fmt_c(sb)}")
    h = rep["hamiltonians"]
    print(f"[{h['status']}] Hamiltonians (two routes, max discrepancy {h['max_discrepancy']:.2e})")
    for a, b in zip(h["quadratic"], h["connection"]):
        print(f"   H = {_fmt_c(a):<36s} | {_fmt_c(b)}")
    t = rep["tau"]
    print(f"[{t['status']}] tau function")
    print(f"   log tau (product route)  = {_fmt_c(t['log_tau_product'])}")
    print(f"   tau^-48 (product route)  = {_fmt_c(t['tau_inv48_product'])}")
    print(f"   tau^-48 (resultant route)= {_fmt_c(t['tau_inv48_resultant'])}")
    print(f"   route ratio              = {_fmt_c(t['route_ratio'])}")
    g = rep["g_function"]
    print(f"[{g['status']}] G-function")
    print(f"   G     = {_fmt_c(g['g'])}")
    print(f"   gamma = {_fmt_c(g['gamma'])}")
    c = rep["caustic"]
    print(f"[{c['status']}] caustic diagnostics: min |lambda_i - lambda_j| = "
          f"{c['min_lambda_gap']:.6g}, min point gap = {c['min_point_gap']:.6g}"
          + ("  ** near caustic **" if c["warned"] else ""))


def cmd_analyze(args: argparse.Namespace) -> int:
    try:
        cov = load_covering(args.file)
    except json.JSONDecodeError as exc:
        print(f"parse error: {exc.msg} at line {exc.lineno}, column {exc.colno}", file=sys.stderr)
        return EXIT_PARSE
    except OnBoundaryError as exc:
        print(f"boundary point ({exc.component}): {exc}", file=sys.stderr)
        return EXIT_BOUNDARY
    except (ValueError, KeyError, OSError) as exc:
        print(f"invalid covering spec: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        if isinstance(cov, Covering0):
            cover0.validate(cov)
        rep = build_report(cov)
    except OnBoundaryError as exc:
        print(f"boundary point ({exc.component}): {exc}", file=sys.stderr)
        return EXIT_BOUNDARY
    except CommonRootError as exc:
        print(f"boundary point: {exc}", file=sys.stderr)
        return EXIT_BOUNDARY
    if args.strict and rep["caustic"]["warned"]:
        print("caustic proximity escalated by --strict", file=sys.stderr)
        return EXIT_CAUSTIC
    if args.json:
        print(json.dumps(rep, indent=2))
    else:
        _print_report(rep)
    return 0


# --------------------------------------------------------------------------
# check


def cmd_check(args: argparse.Namespace) -> int:
    try:
        cov = load_covering(args.file)
    except json.JSONDecodeError as exc:
        print(f"parse error: {exc.msg} at line {exc.lineno}, column {exc.colno}", file=sys.stderr)
        return EXIT_PARSE
    except OnBoundaryError as exc:
        print(f"boundary point ({exc.component}): {exc}", file=sys.stderr)
        return EXIT_BOUNDARY
    except (ValueError, KeyError, OSError) as exc:
        print(f"invalid covering spec: {exc}", file=sys.stderr)
        return EXIT_PARSE
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CausticWarning)
        checks = isomon.identity_report(
            cov, rel_step=args.fd_step, tol=args.tol, seed=args.seed
        )
    failed = 0
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        failed += not c.passed
        print(f"{status}  {c.name:26s} error {c.error:10.3e}  tol {c.tol:8.1e}  {c.detail}")
    print(f"{len(checks) - failed}/{len(checks)} identities passed")
    return EXIT_CHECK_FAILED if failed else 0


# --------------------------------------------------------------------------
# sweep


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        cov = load_covering(args.file)
    except json.JSONDecodeError as exc:
        print(f"parse error: {exc.msg} at line {exc.lineno}, column {exc.colno}", file=sys.stderr)
        return EXIT_PARSE
    except OnBoundaryError as exc:
        print(f"boundary point ({exc.component}): {exc}", file=sys.stderr)
        return EXIT_BOUNDARY
    except (ValueError, KeyError, OSError) as exc:
        print(f"invalid covering spec: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        target = complex(*(float(x) for x in args.to.split(",")))
    except (TypeError, ValueError):
        print("--to expects RE,IM", file=sys.stderr)
        return EXIT_PARSE
    rows = []
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", CausticWarning)
            table = isomon.sweep_ratios(cov, args.param, target, args.steps)
    except (OnBoundaryError, CommonRootError, CausticWarning, HurwitzError, ValueError) as exc:
        print(f"sweep left the moduli space: {exc}", file=sys.stderr)
        return EXIT_SWEEP
    ref = None
    max_drift = {"route_ratio": 0.0, "resultant_ratio": 0.0}
    for s, _, row in table:
        if row.get("caustic"):
            print(f"sweep crossed the caustic at step {s}", file=sys.stderr)
            return EXIT_SWEEP
        if ref is None:
            ref = row
        entry = {"step": s}
        for key in ("route_ratio", "resultant_ratio"):
            if key in row:
                drift = abs(row[key] / ref[key] - 1.0)
                max_drift[key] = max(max_drift[key], drift)
                entry[key] = _c2pair(row[key])
                entry[f"{key}_drift"] = drift
        rows.append(entry)
    result = {
        "param": args.param,
        "steps": args.steps,
        "rows": rows,
        "max_drift": {k: v for k, v in max_drift.items() if any(k in r for r in rows)},
    }
    if args.json:
        print(json.dumps(result, indent=2))
    else:
        for entry in rows:
            parts = [f"step {entry['step']:3d}"]
            if "route_ratio" in entry:
                parts.append(f"tau route ratio {_fmt_c(entry['route_ratio'])} "
                             f"(drift {entry['route_ratio_drift']:.3e})")
            if "resultant_ratio" in entry:
                parts.append(f"resultant ratio drift {entry['resultant_ratio_drift']:.3e}")
            print("  ".join(parts))
        for k, v in result["max_drift"].items():
            print(f"max {k.replace('_', ' ')} drift: {v:.3e}")
    return 0


# --------------------------------------------------------------------------
# example


def cmd_example(args: argparse.Namespace) -> int:
    try:
        cov = builtin_example(args.name, seed=args.seed)
    except KeyError:
        print(f"unknown example {args.name!r} (choose a2, h0_surf, h12)", file=sys.stderr)
        return EXIT_PARSE
    doc = json.dumps(covering_to_spec(cov), indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(doc + "\n")
    else:
        print(doc)
    return 0


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(
        prog="hurwitztau",
        description="Canonical coordinates, Hamiltonians, tau- and G-functions "
        "of genus-0/1 branched coverings, with built-in identity checks.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full report for one covering spec")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.add_argument("--strict", action="store_true",
                   help="exit 4 when the instance is near the caustic")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("check", help="run the identity suite")
    p.add_argument("file")
    p.add_argument("--fd-step", type=float, default=1e-5,
                   help="relative finite-difference step (default 1e-5)")
    p.add_argument("--tol", type=float, default=None,
                   help="replace every per-identity tolerance with this value")
    p.add_argument("--seed", type=int, default=42,
                   help="seed for the deterministic sweep directions")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("sweep", help="ratio constancy along a parameter segment")
    p.add_argument("file")
    p.add_argument("--param", required=True,
                   help="dot path of one complex parameter, e.g. poles.0.b")
    p.add_argument("--to", required=True, help="target value as RE,IM")
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("example", help="emit a built-in covering spec")
    p.add_argument("name", help="a2 | h0_surf | h12")
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(fn=cmd_example)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
