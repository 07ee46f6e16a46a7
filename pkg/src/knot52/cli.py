"""Command-line interface.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 for usage errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from typing import Any

import numpy as np

from knot52 import __version__
from knot52.cover import attach_lift, check_lift
from knot52.errors import (
    GridTooSmall,
    Knot52Error,
    NonPositiveParameter,
    SlopeOutOfRange,
)
from knot52.holonomy import (
    MIN_LIMIT_POINTS,
    Slope,
    eigen_A,
    eigen_B,
    excess,
    g,
    limit_suite,
    solve_slope,
    trace_root,
)
from knot52.rep import (
    EXTENDED_DPS,
    RepParams,
    longitude_matrix,
    nonabelian_residual,
    offdiag_relative,
    relation_residual,
)

SCHEMA_VERSION = "1"

DEFAULTS = {
    "phi": 1e-9,
    "relation": 1e-8,
    "longitude": 1e-7,
    "nonabelian_min": 1e-6,
    "g": 1e-12,
    "filling": 1e-8,
    "lift": 1e-7,
    "omega": 1e-8,
    "limit": 1e-3,
    "limit_slow": 1e-2,
}


class UsageError(Exception):
    pass


def jsonable(obj: Any) -> Any:
    if isinstance(obj, Slope):
        return str(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _check(name: str, value: float, tol: float, ok: bool) -> dict:
    return {"name": name, "value": float(value), "tolerance": float(tol), "pass": bool(ok)}


def document(command: str, inputs: dict, results: Any, tolerances: dict, passed: bool) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": jsonable(inputs),
        "results": jsonable(results),
        "tolerances": jsonable(tolerances),
        "status": "pass" if passed else "fail",
    }


def cmd_verify(s: float, tol: float | None = None, dps: int | None = EXTENDED_DPS) -> dict:
    if not s > 0 or not math.isfinite(s):
        raise UsageError(f"--s must be a positive finite number, got {s!r}")
    tols = {k: DEFAULTS[k] for k in ("phi", "relation", "longitude", "nonabelian_min")}
    if tol is not None:
        tols.update(phi=tol, relation=tol, longitude=tol)
    params = RepParams.from_s(s)
    phi_bound = tols["phi"] * max(1.0, s**3)
    lam = longitude_matrix(s, dps=dps)
    b = eigen_B(s)
    eq3 = abs(lam.a11 - b) / abs(b)
    rel = relation_residual(s, dps=dps)
    offd = offdiag_relative(lam)
    nonab = nonabelian_residual(s)
    f1 = 1 - (2 + s) * params.t + params.t**2
    checks = [
        _check("riley_phi", abs(params.phi), phi_bound, abs(params.phi) <= phi_bound),
        _check("relation_wx_eq_yw", rel, tols["relation"], rel <= tols["relation"]),
        _check("longitude_offdiag_relative", offd, tols["longitude"], offd <= tols["longitude"]),
        _check("longitude_closed_form_relative", eq3, tols["longitude"], eq3 <= tols["longitude"]),
        _check("longitude_eigenvalue_positive", b, 0.0, b > 0),
        _check("nonabelian_min", nonab, tols["nonabelian_min"], nonab > tols["nonabelian_min"]),
        _check("T_gt_4", params.T, 4.0, params.T > 4),
        _check("t_gt_3", params.t, 3.0, params.t > 3),
        _check("t_minus_s_minus_2_positive", excess(s), 0.0, excess(s) > 0),
        _check("one_minus_2ps_t_plus_t2_positive", f1, 0.0, f1 > 0),
    ]
    tols["phi_scaled"] = phi_bound
    results = {"s": s, "T": params.T, "t": params.t, "A": math.sqrt(params.t), "B": b,
               "checks": checks}
    return document("verify", {"s": s, "tol": tol, "dps": dps}, results, tols,
                    all(c["pass"] for c in checks))


def _parse_slope(text: str) -> Slope:
    try:
        slope = Slope.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not 0 < slope.value < 4:
        raise UsageError(f"slope {slope} is outside the supported interval (0, 4)")
    return slope


def cmd_solve(slope: str, tol: float = DEFAULTS["g"], tol_filling: float = DEFAULTS["filling"],
              tol_lift: float = DEFAULTS["lift"]) -> dict:
    sl = _parse_slope(slope)
    cert = attach_lift(solve_slope(sl, tol=tol))
    tols = {"g": tol, "filling": tol_filling, "relation": DEFAULTS["relation"], "lift": tol_lift}
    passed = (cert.g_residual <= tol and cert.filling_residual <= tol_filling
              and cert.relation_residual <= tols["relation"]
              and cert.lift_omega_residual <= tol_lift and cert.lift_gamma_residual <= tol_lift)
    return document("solve", {"slope": str(sl), "tol": tol}, cert, tols, passed)


def cmd_lift(slope: str, tol: float = DEFAULTS["g"], twist: int = 0,
             tol_lift: float = DEFAULTS["lift"], tol_omega: float = DEFAULTS["omega"]) -> dict:
    sl = _parse_slope(slope)
    cert = solve_slope(sl, tol=tol)
    chk = check_lift(cert.s_star, sl, twist)
    longitude = {
        "gamma": chk.longitude_gamma,
        "omega": chk.longitude_omega,
        "gamma_expected": chk.longitude_gamma_expected,
        "gamma_residual": chk.longitude_gamma_residual,
        "in_wood_window": chk.in_wood_window,
    }
    filling = {
        "gamma": chk.filling_gamma,
        "omega": chk.filling_omega,
        "raw_omega": chk.raw_filling_omega,
    }
    checks = [
        _check("longitude_omega", abs(chk.longitude_omega), tol_omega, abs(chk.longitude_omega) <= tol_omega),
        _check("longitude_gamma", chk.longitude_gamma_residual, tol_omega,
               chk.longitude_gamma_residual <= tol_omega),
        _check("wood_window", abs(chk.longitude_omega), 1.5 * math.pi, chk.in_wood_window),
        _check("filling_gamma", abs(chk.filling_gamma), tol_lift, abs(chk.filling_gamma) <= tol_lift),
        _check("filling_omega", abs(chk.filling_omega), tol_lift, abs(chk.filling_omega) <= tol_lift),
    ]
    results = {"s_star": cert.s_star, "g_residual": cert.g_residual, "twist": twist,
               "longitude": longitude, "filling": filling, "checks": checks}
    tols = {"g": tol, "lift": tol_lift, "omega": tol_omega}
    return document("lift", {"slope": str(sl), "tol": tol, "twist": twist}, results, tols,
                    all(c["pass"] for c in checks))


def gcurve_rows(s_min: float, s_max: float, points: int) -> list[list[float]]:
    if not (0 < s_min < s_max and math.isfinite(s_max)):
        raise UsageError(f"need 0 < min < max, got min={s_min!r} max={s_max!r}")
    if points < 2:
        raise UsageError(f"need at least 2 points, got {points}")
    s = np.logspace(math.log10(s_min), math.log10(s_max), points)
    s[0], s[-1] = s_min, s_max
    return [list(map(float, row)) for row in zip(s, trace_root(s), eigen_A(s), eigen_B(s), g(s))]


def cmd_limits(grid_points: int = MIN_LIMIT_POINTS, tol: float = DEFAULTS["limit"],
               tol_slow: float = DEFAULTS["limit_slow"]) -> dict:
    try:
        reports = limit_suite(grid_points, tol=tol, tol_slow=tol_slow)
    except GridTooSmall as exc:
        raise UsageError(str(exc)) from None
    return document("limits", {"grid_points": grid_points}, reports,
                    {"limit": tol, "limit_slow": tol_slow}, all(r.converged for r in reports))


# -- rendering ---------------------------------------------------------------

def _render_checks(doc: dict) -> list[str]:
    lines = []
    for c in doc["results"].get("checks", []):
        mark = "PASS" if c["pass"] else "FAIL"
        lines.append(f"  [{mark}] {c['name']}: {c['value']:.6e} (tol {c['tolerance']:.1e})")
    return lines


def render_text(doc: dict) -> str:
    cmd, res = doc["command"], doc["results"]
    lines = [f"{cmd}: {doc['status'].upper()}"]
    if cmd == "verify":
        lines.append(f"  s = {res['s']!r}  T = {res['T']!r}  t = {res['t']!r}  B = {res['B']!r}")
        lines += _render_checks(doc)
    elif cmd == "solve":
        lines += [
            f"  slope          {res['slope']}",
            f"  s*             {res['s_star']!r}",
            f"  |g(s*) - r|    {res['g_residual']:.3e}",
            f"  |A^p B^q - 1|  {res['filling_residual']:.3e}",
            f"  relation       {res['relation_residual']:.3e}",
            f"  lifted filling |gamma| {res['lift_gamma_residual']:.3e}  |omega| {res['lift_omega_residual']:.3e}",
            f"  bracket        [{res['bracket'][0]!r}, {res['bracket'][1]!r}] after {res['iterations']} bisections",
            f"  brackets found {len(res['brackets'])}",
        ]
    elif cmd == "lift":
        lon, fil = res["longitude"], res["filling"]
        lines += [
            f"  s* = {res['s_star']!r}  twist = {res['twist']}",
            f"  lifted longitude  gamma = {lon['gamma'][0]!r}{lon['gamma'][1]:+.3e}i  omega = {lon['omega']:.3e}",
            f"  lifted filling    gamma = {fil['gamma'][0]:.3e}{fil['gamma'][1]:+.3e}i  omega = {fil['omega']:.3e}"
            f"  (before normalization {fil['raw_omega']:.6f})",
        ]
        lines += _render_checks(doc)
    elif cmd == "limits":
        for r in res:
            mark = "PASS" if r["converged"] else "FAIL"
            lines.append(f"  [{mark}] {r['name']:<34} s->{r['direction']:<4} last {r['values'][-1]:.9g}"
                         f"  target {r['target']:g}  tol {r['tolerance']:.0e}")
    return "\n".join(lines)


def render_csv(rows: list[list[float]]) -> str:
    out = ["s,t,A,B,g"]
    out += [",".join(f"{v:.17g}" for v in row) for row in rows]
    return "\n".join(out)


# -- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="knot52",
        description="Numerical certificates for SL(2,R) representations of the 5_2 knot group "
                    "and their lifts to the universal cover.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p, default="text"):
        p.add_argument("--format", choices=("text", "json", "csv"), default=default,
                       help=f"output format (default {default}; csv is only valid for g-curve)")

    p = sub.add_parser("verify", help="check the representation rho_s at one s")
    p.add_argument("--s", type=float, required=True, help="representation parameter, s > 0")
    p.add_argument("--tol", type=float, default=None,
                   help="override residual tolerances (defaults: phi 1e-9*max(1,s^3), "
                        "relation 1e-8, longitude 1e-7)")
    p.add_argument("--dps", type=int, default=EXTENDED_DPS,
                   help=f"decimal digits for the word products (default {EXTENDED_DPS}; "
                        "0 selects binary64, which loses the longitude checks near s=1e-6 and s=1e6)")
    fmt(p)

    for name, helptext in (("solve", "solve g(s) = p/q and certify the filling"),
                           ("lift", "solve, lift to the universal cover, and certify")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--slope", required=True, help="p/q or p, with 0 < p/q < 4")
        p.add_argument("--tol", type=float, default=DEFAULTS["g"],
                       help=f"tolerance on |g(s*) - p/q| (default {DEFAULTS['g']:g})")
        p.add_argument("--tol-lift", type=float, default=DEFAULTS["lift"],
                       help=f"tolerance on the lifted filling (default {DEFAULTS['lift']:g})")
        if name == "solve":
            p.add_argument("--tol-filling", type=float, default=DEFAULTS["filling"],
                           help=f"tolerance on |A^p B^q - 1| (default {DEFAULTS['filling']:g})")
        else:
            p.add_argument("--twist", type=int, default=0,
                           help="meridian twist applied to the lift before normalization (default 0)")
            p.add_argument("--tol-omega", type=float, default=DEFAULTS["omega"],
                           help=f"tolerance on the lifted longitude (default {DEFAULTS['omega']:g})")
        fmt(p)

    p = sub.add_parser("g-curve", help="tabulate s, t, A, B, g on a log grid")
    p.add_argument("--min", dest="s_min", type=float, required=True)
    p.add_argument("--max", dest="s_max", type=float, required=True)
    p.add_argument("--points", type=int, default=101)
    fmt(p, default="csv")

    p = sub.add_parser("limits", help="check the boundary limits of the family")
    p.add_argument("--grid-points", type=int, default=MIN_LIMIT_POINTS,
                   help=f"grid points per direction (minimum {MIN_LIMIT_POINTS})")
    p.add_argument("--tol", type=float, default=DEFAULTS["limit"],
                   help=f"per-report tolerance (default {DEFAULTS['limit']:g})")
    p.add_argument("--tol-slow", type=float, default=DEFAULTS["limit_slow"],
                   help=f"tolerance for N t^-5 (default {DEFAULTS['limit_slow']:g})")
    fmt(p)
    return parser


def run(args: argparse.Namespace) -> tuple[str, int]:
    if args.format == "csv" and args.command != "g-curve":
        raise UsageError("--format csv is only valid for g-curve")
    if args.command == "g-curve":
        rows = gcurve_rows(args.s_min, args.s_max, args.points)
        if args.format == "json":
            doc = document("g-curve", {"min": args.s_min, "max": args.s_max, "points": args.points},
                           {"columns": ["s", "t", "A", "B", "g"], "rows": rows}, {}, True)
            return json.dumps(doc, indent=2), 0
        return render_csv(rows), 0

    if args.command == "verify":
        doc = cmd_verify(args.s, args.tol, args.dps or None)
    elif args.command == "solve":
        doc = cmd_solve(args.slope, args.tol, args.tol_filling, args.tol_lift)
    elif args.command == "lift":
        doc = cmd_lift(args.slope, args.tol, args.twist, args.tol_lift, args.tol_omega)
    else:
        doc = cmd_limits(args.grid_points, args.tol, args.tol_slow)
    text = json.dumps(doc, indent=2) if args.format == "json" else render_text(doc)
    return text, 0 if doc["status"] == "pass" else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = run(args)
    except (UsageError, NonPositiveParameter, SlopeOutOfRange, GridTooSmall) as exc:
        parser.error(str(exc))
    except Knot52Error as exc:
        print(f"{args.command}: FAIL: {exc}", file=sys.stderr)
        return 1
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
