"""Command-line front end: batch evaluation, verification verdicts, Gram exports.

Exit codes: 0 verified / computed, 1 property failed, 2 usage or domain error.
All output is JSON on stdout (Gram matrices optionally CSV via --format csv);
every command is deterministic given its files and flags.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

from . import appell, axseries, halfspace, herglotz, jsonio, realize, schur
from .errors import AppellSchurError, DivergentPoint, NonDecayingState, SingularCayley
from .quatlin import Quaternion, QuatMatrix, min_eigenvalue, operator_norm

DEFAULT_TRUNC = 64
DEFAULT_TOL = 1e-9


def _digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()[:16]


def _fmt(x):
    return float("%.17g" % float(x))


def _print(obj):
    print(json.dumps(obj, indent=2))


def _verdict(passed, residuals, **metadata):
    return {
        "passed": bool(passed),
        "residuals": {k: _fmt(v) for k, v in residuals.items()},
        "metadata": metadata,
    }


def _common_flags(p):
    p.add_argument("--trunc", type=int, default=DEFAULT_TRUNC,
                   help="truncation / section depth (default %d)" % DEFAULT_TRUNC)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL,
                   help="verification tolerance (default %g)" % DEFAULT_TOL)
    p.add_argument("--seed", type=int, default=0, help="seed for any sampling")


def _load_points(path):
    data = jsonio.load(path)
    return [jsonio.quaternion_from_json(p) for p in data]


# -- subcommand handlers ---------------------------------------------------

def cmd_appell(args):
    point = jsonio.quaternion_from_json(json.loads(args.point))
    Q = appell.eval_Q(args.m, point)
    P = appell.eval_P(args.m, point)
    c = appell.c_coeff(args.m)
    _print({
        "m": args.m,
        "Q": jsonio.quaternion_to_json(Q),
        "P": jsonio.quaternion_to_json(P),
        "c": {"num": c.numerator, "den": c.denominator},
    })
    return 0


def cmd_fueter_check(args):
    import numpy as np

    from .fueter import apply_D_fd

    f = jsonio.series_from_json(jsonio.load(args.file))
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.points):
        v = rng.uniform(-0.07, 0.07, size=4)
        x = Quaternion(*v)
        resid = apply_D_fd(lambda q: axseries.evaluate(f, q)[0], x)
        worst = max(worst, operator_norm(resid))
    passed = worst < args.tol
    _print(_verdict(passed, {"max_D_residual": worst},
                    input=_digest(args.file), points=args.points,
                    tol=args.tol, seed=args.seed))
    return 0 if passed else 1


def cmd_schur_test(args):
    f = jsonio.series_from_json(jsonio.load(args.file))
    verdict = schur.verify_schur(f, n_blocks=args.trunc, tol=args.tol)
    out = _verdict(verdict.accepted, {"section_norm": verdict.section_norm},
                   input=_digest(args.file), trunc=args.trunc, tol=args.tol)
    if verdict.violated_at is not None:
        out["metadata"]["violated_at"] = verdict.violated_at
    _print(out)
    return 0 if verdict.accepted else 1


def cmd_schur_algo(args):
    f = jsonio.series_from_json(jsonio.load(args.file))
    if f.shape == (1, 1):
        res = schur.schur_algorithm_scalar(f, steps=args.steps, tol=args.tol)
        params = [jsonio.quaternion_to_json(p) for p in res.parameters]
    else:
        res = schur.schur_algorithm_matrix(schur.RealPowerSeries(list(f.coeffs)),
                                           steps=args.steps, tol=args.tol)
        params = [jsonio.matrix_to_json(p) for p in res.parameters]
    _print({"parameters": params, "stop": res.stop, "input": _digest(args.file)})
    return 0


def _gram_kernel(args):
    name = args.kernel.lower()
    trunc = args.trunc
    if name == "hardy":
        return lambda x, y: schur.hardy_kernel(x, y, n_terms=trunc)
    if name == "k_s":
        if not args.file:
            raise SystemExit2("kernel k_s needs --file with the multiplier series")
        f = jsonio.series_from_json(jsonio.load(args.file))
        return lambda x, y: schur.kernel_K_S(f, x, y, n_terms=trunc)
    if name == "l_phi":
        if not args.file:
            raise SystemExit2("kernel l_phi needs --file with the coefficient series")
        f = jsonio.series_from_json(jsonio.load(args.file))
        return lambda x, y: herglotz.kernel_L_Phi(f, x, y, n_terms=trunc)
    if name == "k_p":
        def kp(x, y):
            val, bound = halfspace.kernel_K_P(x, y, n_terms=trunc)
            return QuatMatrix.from_entries([[val]]), bound
        return kp
    raise SystemExit2("unknown kernel %r" % args.kernel)


class SystemExit2(Exception):
    pass


def cmd_gram(args):
    kernel = _gram_kernel(args)
    points = _load_points(args.points)
    G, bound = schur.gram_matrix(kernel, points)
    min_eig = min_eigenvalue(G)
    passed = min_eig >= -(args.tol + bound)
    payload = {
        "kernel": args.kernel,
        "min_eigenvalue": _fmt(min_eig),
        "tail_bound": _fmt(bound),
        "passed": passed,
        "gram": jsonio.matrix_to_json(G),
    }
    if args.out:
        if args.format == "csv":
            _write_gram_csv(G, args.out)
        else:
            jsonio.dump(payload, args.out)
    _print({k: payload[k] for k in ("kernel", "min_eigenvalue", "tail_bound", "passed")})
    return 0 if passed else 1


def _write_gram_csv(G, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("i,j,x0,x1,x2,x3\n")
        for i in range(G.rows):
            for j in range(G.cols):
                q = G.entry(i, j)
                fh.write("%d,%d,%.17g,%.17g,%.17g,%.17g\n"
                         % (i, j, q.x0, q.x1, q.x2, q.x3))


def cmd_blaschke(args):
    V = jsonio.colligation_from_json(jsonio.load(args.file))
    uverd = realize.verify_colligation(V, "unitary", tol=args.tol)
    residuals = dict(uverd.residuals)
    warning = None
    try:
        rep = realize.blaschke_isometry_check(V, n_terms=args.terms)
        residuals["isometry"] = rep.iso_residual
        residuals["max_lag"] = rep.max_lag_residual
        tail = rep.tail_bound
        iso_ok = (rep.iso_residual <= tail + args.tol
                  and rep.max_lag_residual <= tail + args.tol)
    except NonDecayingState as exc:
        warning = str(exc)
        tail = None
        iso_ok = False
    passed = uverd.ok and iso_ok
    out = _verdict(passed, residuals, input=_digest(args.file),
                   terms=args.terms, tol=args.tol)
    if tail is not None:
        out["metadata"]["tail_bound"] = _fmt(tail)
    if warning:
        out["metadata"]["warning"] = warning
    _print(out)
    return 0 if passed else 1


def cmd_herglotz_test(args):
    data = jsonio.load(args.file)
    if "V" in data:
        G = jsonio.generator_from_json(data)
        series = herglotz.herglotz_coefficients(G, args.trunc)
    else:
        series = jsonio.series_from_json(data)
    verdict = herglotz.verify_herglotz(series, n_blocks=min(args.trunc, 32), tol=args.tol)
    _print(_verdict(verdict.is_psd, {"min_eigenvalue": verdict.min_eigenvalue},
                    input=_digest(args.file), blocks=verdict.n_blocks, tol=args.tol))
    return 0 if verdict.is_psd else 1


def cmd_halfspace_eval(args):
    val, bound = halfspace.eval_W(args.n, Quaternion(args.x0), n_coeffs=args.trunc)
    _print({"n": args.n, "x0": args.x0, "W": jsonio.quaternion_to_json(val),
            "bound": _fmt(bound)})
    return 0


def cmd_halfspace_lyapunov(args):
    resid = halfspace.lyapunov_residual(args.x0, args.y0, n_terms=args.trunc)
    passed = resid < args.tol
    _print(_verdict(passed, {"lyapunov": resid}, x0=args.x0, y0=args.y0,
                    trunc=args.trunc, tol=args.tol))
    return 0 if passed else 1


def cmd_halfspace_cayley(args):
    V = jsonio.colligation_from_json(jsonio.load(args.file))
    points = [float(p) for p in json.loads(args.points)]
    values, G = halfspace.caratheodory_kernel_gram(V, points)
    min_eig = min_eigenvalue(G)
    passed = min_eig >= -args.tol
    _print({
        "values": [jsonio.matrix_to_json(v) for v in values],
        "kernel_min_eigenvalue": _fmt(min_eig),
        "passed": passed,
    })
    return 0 if passed else 1


def cmd_realize_eval(args):
    Rf = jsonio.rational_from_json(jsonio.load(args.file))
    val = realize.rational_value(Rf, args.t)
    _print({"t": args.t, "value": jsonio.matrix_to_json(val)})
    return 0


def cmd_realize_invert(args):
    Rf = jsonio.rational_from_json(jsonio.load(args.file))
    inv = realize.rational_inverse(Rf)
    _print(jsonio.rational_to_json(inv))
    return 0


def cmd_realize_multiply(args):
    M1 = jsonio.rational_from_json(jsonio.load(args.file))
    M2 = jsonio.rational_from_json(jsonio.load(args.file2))
    _print(jsonio.rational_to_json(realize.rational_product(M1, M2)))
    return 0


# -- parser ------------------------------------------------------------

def build_parser():
    top = argparse.ArgumentParser(
        prog="appellschur",
        description="Schur analysis in the Appell basis: evaluation and verification")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("appell", help="evaluate Q_m, P_m, c_m at a point")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--point", required=True, help="quaternion as JSON 4-array")
    _common_flags(p)
    p.set_defaults(func=cmd_appell)

    p = sub.add_parser("fueter-check", help="finite-difference hyperholomorphy check")
    p.add_argument("--file", required=True, help="series JSON")
    p.add_argument("--points", type=int, default=10)
    _common_flags(p)
    p.set_defaults(func=cmd_fueter_check, tol=1e-7)

    p = sub.add_parser("schur-test", help="Toeplitz-section contraction test")
    p.add_argument("--file", required=True)
    _common_flags(p)
    p.set_defaults(func=cmd_schur_test)

    p = sub.add_parser("schur-algo", help="Schur algorithm parameters")
    p.add_argument("--file", required=True)
    p.add_argument("--steps", type=int, default=8)
    _common_flags(p)
    p.set_defaults(func=cmd_schur_algo)

    p = sub.add_parser("gram", help="Gram matrix of a kernel at sample points")
    p.add_argument("--kernel", required=True, choices=["hardy", "k_s", "l_phi", "k_p"])
    p.add_argument("--points", required=True, help="JSON file with quaternion 4-arrays")
    p.add_argument("--file", help="series file for k_s / l_phi kernels")
    p.add_argument("--out", help="write the Gram matrix to this file")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    _common_flags(p)
    p.set_defaults(func=cmd_gram)

    p = sub.add_parser("blaschke", help="unitarity and isometry certificate")
    p.add_argument("--file", required=True, help="colligation JSON")
    p.add_argument("--terms", type=int, default=200)
    _common_flags(p)
    p.set_defaults(func=cmd_blaschke)

    p = sub.add_parser("herglotz-test", help="Hermitian-Toeplitz positivity test")
    p.add_argument("--file", required=True, help="generator or coefficient JSON")
    _common_flags(p)
    p.set_defaults(func=cmd_herglotz_test)

    p = sub.add_parser("halfspace", help="half-space operations")
    hs = p.add_subparsers(dest="subcommand", required=True)
    pe = hs.add_parser("eval", help="evaluate W_n at a real point")
    pe.add_argument("--n", type=int, required=True)
    pe.add_argument("--x0", type=float, required=True)
    _common_flags(pe)
    pe.set_defaults(func=cmd_halfspace_eval)
    pl = hs.add_parser("lyapunov", help="Lyapunov identity residual")
    pl.add_argument("--x0", type=float, required=True)
    pl.add_argument("--y0", type=float, required=True)
    _common_flags(pl)
    pl.set_defaults(func=cmd_halfspace_lyapunov, tol=1e-8)
    pc = hs.add_parser("cayley", help="Cayley transform values and kernel check")
    pc.add_argument("--file", required=True, help="colligation JSON")
    pc.add_argument("--points", required=True, help="JSON list of positive reals")
    _common_flags(pc)
    pc.set_defaults(func=cmd_halfspace_cayley)

    p = sub.add_parser("realize", help="rational realization calculus")
    rs = p.add_subparsers(dest="subcommand", required=True)
    pe = rs.add_parser("eval", help="evaluate a realization at t")
    pe.add_argument("--file", required=True)
    pe.add_argument("--t", type=float, required=True)
    _common_flags(pe)
    pe.set_defaults(func=cmd_realize_eval)
    pi = rs.add_parser("invert", help="realization of the pointwise inverse")
    pi.add_argument("--file", required=True)
    _common_flags(pi)
    pi.set_defaults(func=cmd_realize_invert)
    pm = rs.add_parser("multiply", help="cascade realization of a product")
    pm.add_argument("--file", required=True)
    pm.add_argument("--file2", required=True)
    _common_flags(pm)
    pm.set_defaults(func=cmd_realize_multiply)

    return top


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage errors; propagate it
        return int(exc.code) if exc.code is not None else 2
    try:
        return args.func(args)
    except (DivergentPoint, SingularCayley) as exc:
        print("domain error: %s" % exc, file=sys.stderr)
        return 2
    except SystemExit2 as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return 2
    except (json.JSONDecodeError, ValueError, KeyError, OSError) as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return 2
    except AppellSchurError as exc:
        print("failed: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
