"""Command-line front door.

Subcommands: validate | classify | asym | uniform | series | genfun |
integrate | backlund | lattice | poles | roots | identify | verify.

Monodromy data comes in as JSON (complex numbers as [re, im], G as a
2x2 row-major list); grids and results go out as CSV with fixed column
order, so re-runs on identical inputs are bit-identical.  DP3_LOG
controls verbosity.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from dp3 import asymptotics as asy
from dp3 import dynamics as dyn
from dp3 import genfun as gf
from dp3 import monodromy as mon
from dp3 import series as ser
from dp3 import verification as ver
from dp3.monodromy import ProblemParams, RegimeTag

log = logging.getLogger("dp3")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def _parse_complex(text: str) -> complex:
    if "," in text:
        re_s, im_s = text.split(",")
        return complex(float(re_s), float(im_s))
    return complex(float(text), 0.0)


def _load_data(path: str) -> mon.MonodromyData:
    return mon.data_from_json(Path(path).read_text())


def _parse_grid(spec: str):
    """start,stop,n[,log] -> list of real tau values."""
    parts = spec.split(",")
    if len(parts) not in (3, 4):
        raise ValueError("grid spec is start,stop,n[,log]")
    start, stop, n = float(parts[0]), float(parts[1]), int(parts[2])
    if len(parts) == 4 and parts[3] == "log":
        return list(np.geomspace(start, stop, n))
    return list(np.linspace(start, stop, n))


def _fmt(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# subcommand implementations


def cmd_validate(args) -> int:
    data = _load_data(args.data)
    res = mon.residuals(data)
    names = ["stokes-product", "mixed-G", "stokes-0", "stokes-1", "detG"]
    ok = True
    for name, r in zip(names, res):
        mag = abs(r)
        print(f"{name}: {mag:.3e}")
        ok = ok and mag <= args.tol
    print("on-manifold" if ok else f"off-manifold (tol {args.tol:g})")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_classify(args) -> int:
    data = _load_data(args.data)
    reg = mon.classify(data, tol=args.tol)
    br = mon.branching(data, reg, tol=args.tol)
    print(f"regime: {reg}")
    print(f"rho: {br.rho}")
    print(f"varrho: {br.varrho}")
    print(f"sigma: {br.sigma}")
    if br.varkappa is not None:
        print(f"varkappa: {br.varkappa}")
    return EXIT_OK


def _grid_eval(prof, grid, chart=None):
    rows = []
    for tau in grid:
        try:
            u, orders = asy.eval_u(prof, tau, chart=chart)
            ph, _ = asy.eval_phi(prof, tau)
        except asy.DomainError as exc:
            log.warning("skipping tau=%s: %s", tau, exc)
            continue
        rows.append(
            [
                tau.real if isinstance(tau, complex) else tau,
                tau.imag if isinstance(tau, complex) else 0.0,
                u.real,
                u.imag,
                ph.real,
                ph.imag,
                str(prof.regime),
                ";".join(f"{o:g}" for o in orders),
            ]
        )
    return rows


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) if isinstance(v, float) else v for v in row])


def cmd_asym(args) -> int:
    data = _load_data(args.data)
    prof = asy.build_profile(data)
    grid = _parse_grid(args.tau_grid)
    chart = None
    if prof.regime.tag is RegimeTag.POLE_ACCUMULATION or prof.regime.subcase.get("poles"):
        chart = asy.pole_chart(prof, range(1, 12), args.delta_d)
    rows = _grid_eval(prof, grid, chart)
    header = ["tau_re", "tau_im", "u_re", "u_im", "phi_re", "phi_im", "regime", "correction_exponents"]
    _write_csv(args.out, header, rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def cmd_uniform(args) -> int:
    data = _load_data(args.data)
    prof = asy.build_profile(data)
    grid = _parse_grid(args.tau_grid)
    rows = []
    for tau in grid:
        u = asy.eval_uniform(prof, tau, with_correction=args.correction)
        rows.append([tau, 0.0, u.real, u.imag])
    _write_csv(args.out, ["tau_re", "tau_im", "u_re", "u_im"], rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def cmd_series(args) -> int:
    params = ProblemParams(_parse_complex(args.a), args.b, args.epsilon)
    if args.kind == "power":
        exp = ser.power_coeffs(
            params, _parse_complex(args.sigma), b11=_parse_complex(args.seed), K=args.K
        )
    elif args.kind == "reglog":
        exp = ser.reglog_coeffs(params, _parse_complex(args.seed), K=args.K)
    else:
        exp = ser.irreglog_coeffs(params, _parse_complex(args.seed), K=args.K, M=args.M)
    ser.export_csv(exp, args.out)
    print(f"wrote {len(exp.coeffs)} coefficients to {args.out}")
    return EXIT_OK


def cmd_genfun(args) -> int:
    params = ProblemParams(_parse_complex(args.a), args.b, args.epsilon)
    kw = {}
    if args.family == "power":
        kw = dict(sigma=_parse_complex(args.sigma), b11=_parse_complex(args.seed))
    elif args.family == "reglog":
        kw = dict(c=_parse_complex(args.seed))
    else:
        kw = dict(ctilde=_parse_complex(args.seed))
    fn = gf.genfun(args.family, args.n, params, **kw)
    taylor = fn.taylor(args.levels)
    rows = [[k, v.real, v.imag] for k, v in sorted(taylor.items())]
    if args.out:
        _write_csv(args.out, ["order", "re", "im"], rows)
        print(f"wrote {len(rows)} coefficients to {args.out}")
    else:
        for k, re, im in rows:
            print(f"{k}: {re!r} {im!r}")
    return EXIT_OK


def _seed_state(prof, exp, tau0):
    r = ser.eval_expansion(exp, tau0)
    phi0 = -1j * cmath.log(asy.eval_phi(prof, tau0)[0])
    return dyn.SolutionState(tau0, r.value, r.derivative, phi0)


def cmd_integrate(args) -> int:
    data = _load_data(args.data)
    prof = asy.build_profile(data)
    exp = asy.series_for_regime(prof, K=args.seed_level)
    tau0 = _parse_complex(args.tau_from)
    tau1 = _parse_complex(args.tau_to)
    st = _seed_state(prof, exp, tau0)
    end, detections, traces = dyn.continue_through(
        st, data.params, [tau1], dyn.IntegrateOptions(rtol=args.rtol)
    )
    rows = []
    for tr in traces:
        for i in range(tr.tau.size):
            rows.append(
                [
                    tr.tau[i].real,
                    tr.tau[i].imag,
                    tr.u[i].real,
                    tr.u[i].imag,
                    tr.du[i].real,
                    tr.du[i].imag,
                    tr.phi[i].real,
                    tr.phi[i].imag,
                ]
            )
    header = ["tau_re", "tau_im", "u_re", "u_im", "du_re", "du_im", "phi_re", "phi_im"]
    _write_csv(args.out, header, rows)
    print(f"wrote {len(rows)} trace rows to {args.out}")
    if args.singularities:
        recs = [
            {
                "kind": det.kind.value,
                "center": [det.center.real, det.center.imag],
                "free_param": [det.free_param.real, det.free_param.imag],
                "fit_residual": det.fit_residual,
            }
            for det in detections
        ]
        Path(args.singularities).write_text(json.dumps(recs, indent=2))
        print(f"wrote {len(recs)} singularity records to {args.singularities}")
    return EXIT_OK


def cmd_backlund(args) -> int:
    data = _load_data(args.data)
    img = mon.backlund_data(data, args.shift)
    print(mon.data_to_json(img))
    if args.out:
        Path(args.out).write_text(mon.data_to_json(img))
    return EXIT_OK


def cmd_lattice(args) -> int:
    data = _load_data(args.data)
    prof = asy.build_profile(data)
    exp = asy.series_for_regime(prof, K=6)
    st = _seed_state(prof, exp, 1e-3)
    grid = _parse_grid(args.grid)
    tr = dyn.integrate(st, data.params, grid, dyn.IntegrateOptions(rtol=args.rtol))
    if tr.status != "done":
        print(f"integration hit {tr.status}; aborting", file=sys.stderr)
        return EXIT_CHECK_FAILED
    idx = [int(np.argmin(np.abs(tr.tau - g))) for g in grid]
    states = [dyn.SolutionState(tr.tau[i], tr.u[i], tr.du[i], tr.phi[i]) for i in idx]
    orb = dyn.lattice_orbit(states, data.params, range(args.n_min, args.n_max + 1))
    ok = True
    for name, v in orb.residuals.items():
        print(f"{name}: {v:.3e}")
        ok = ok and v <= args.tol
    if args.out:
        rows = []
        for n in range(args.n_min, args.n_max + 1):
            for gi, tau in enumerate(orb.taus):
                rows.append([n, tau.real, tau.imag, orb.u[n][gi].real, orb.u[n][gi].imag])
        _write_csv(args.out, ["n", "tau_re", "tau_im", "u_re", "u_im"], rows)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_poles(args) -> int:
    data = _load_data(args.data)
    prof = asy.build_profile(data)
    chart = asy.pole_chart(prof, range(args.p_min, args.p_max + 1), args.delta_d)
    rows = [
        [p, t.real, t.imag, r]
        for p, t, r in zip(chart.p_range, chart.tau_p, chart.radii)
    ]
    if args.out:
        _write_csv(args.out, ["p", "tau_p_re", "tau_p_im", "R_p"], rows)
        print(f"wrote {len(rows)} predicted poles to {args.out}")
    else:
        for p, re, im, r in rows:
            print(f"p={p}: tau_p = {re!r} {im:+.17g}j  R_p = {r!r}")
    return EXIT_OK


def cmd_roots(args) -> int:
    box = tuple(float(x) for x in args.box.split(","))
    out = []
    which = ["plus", "minus"] if args.which == "both" else [args.which]
    for w in which:
        roots = asy.find_G_pm_roots(args.eb, box, w, grid=args.grid)
        for r in roots:
            print(f"G_{w}: a = {r.real:.12g} {r.imag:+.12g}j")
            out.append((w, r))
    # plain formatting fallback
    if not out:
        print("no roots found in the box")
    return EXIT_OK


def cmd_identify(args) -> int:
    params = ProblemParams(_parse_complex(args.a), args.b, args.epsilon)
    tag, info = asy.identify_from_asymptotics(
        _parse_complex(args.p),
        _parse_complex(args.q1),
        _parse_complex(args.q2),
        _parse_complex(args.alpha),
        params,
    )
    print(f"theorem family: {tag}")
    for k, v in info.items():
        print(f"{k}: {v}")
    return EXIT_OK


def cmd_verify(args) -> int:
    rep = ver.run_suite(args.suite, seed=args.seed, verbose=True)
    text = ver.report_to_json(rep)
    if args.report:
        Path(args.report).write_text(text)
        print(f"report written to {args.report}")
    print(f"suite runtime {rep.runtime_s:.1f}s; all passed: {rep.all_passed}")
    return EXIT_OK if rep.all_passed else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dp3",
        description="Degenerate-third-Painleve small-tau toolkit",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the five manifold residuals")
    p.add_argument("--data", required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("classify", help="regime tag and branching parameters")
    p.add_argument("--data", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("asym", help="regime asymptotics of u and exp(i*phi) on a grid")
    p.add_argument("--data", required=True)
    p.add_argument("--tau-grid", required=True, help="start,stop,n[,log]")
    p.add_argument("--delta-d", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_asym)

    p = sub.add_parser("uniform", help="branching-uniform power asymptotics")
    p.add_argument("--data", required=True)
    p.add_argument("--tau-grid", required=True)
    p.add_argument("--correction", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_uniform)

    p = sub.add_parser("series", help="expansion coefficient tables as CSV")
    p.add_argument("--kind", choices=["power", "reglog", "irreglog"], required=True)
    p.add_argument("--a", required=True, help="complex as re,im")
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--epsilon", type=int, default=1)
    p.add_argument("--sigma", default=None)
    p.add_argument("--seed", required=True, help="family seed (b11 | c | ctilde)")
    p.add_argument("--K", type=int, default=6)
    p.add_argument("--M", type=int, default=12)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("genfun", help="generating-function Taylor data")
    p.add_argument("--family", choices=["power", "reglog", "irreglog"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--epsilon", type=int, default=1)
    p.add_argument("--sigma", default=None)
    p.add_argument("--seed", required=True)
    p.add_argument("--levels", type=int, default=8)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_genfun)

    p = sub.add_parser("integrate", help="integrate the system from a series seed")
    p.add_argument("--data", required=True)
    p.add_argument("--tau-from", dest="tau_from", required=True)
    p.add_argument("--tau-to", dest="tau_to", required=True)
    p.add_argument("--seed-level", type=int, default=6)
    p.add_argument("--rtol", type=float, default=1e-10)
    p.add_argument("--out", required=True)
    p.add_argument("--singularities", default=None)
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("backlund", help="Backlund action on monodromy data")
    p.add_argument("--data", required=True)
    p.add_argument("--shift", type=int, choices=[1, -1], required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_backlund)

    p = sub.add_parser("lattice", help="Backlund tower and lattice identity residuals")
    p.add_argument("--data", required=True)
    p.add_argument("--grid", default="0.05,0.5,50")
    p.add_argument("--n-min", type=int, default=-2)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--rtol", type=float, default=1e-11)
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("poles", help="predicted pole sites and excluded discs")
    p.add_argument("--data", required=True)
    p.add_argument("--p-min", type=int, default=1)
    p.add_argument("--p-max", type=int, default=8)
    p.add_argument("--delta-d", type=float, default=0.5)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_poles)

    p = sub.add_parser("roots", help="roots of the log-family truncation indicators")
    p.add_argument("--eb", type=float, required=True)
    p.add_argument("--box", required=True, help="re_min,re_max,im_min,im_max")
    p.add_argument("--which", choices=["plus", "minus", "both"], default="plus")
    p.add_argument("--grid", type=int, default=12)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("identify", help="which theorem family fits an observed power form")
    p.add_argument("--p", required=True)
    p.add_argument("--q1", required=True)
    p.add_argument("--q2", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--epsilon", type=int, default=1)
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--suite", default="all", help="all | fast | <check-name>")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_verify)

    return ap


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get("DP3_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (ValueError, mon.OutOfScopeError, mon.UnderdeterminedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
