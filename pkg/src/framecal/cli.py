"""Command-line front end.

Every command prints one JSON report on stdout::

    {"command": ..., "inputs": {name: sha256}, "tolerances": {...},
     "verdicts": {...}, "version": ...}

Exit codes: 0 the property holds, 1 it fails or a hypothesis is violated,
2 invalid input, 3 an internal consistency check tripped (a bug).
Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict

import numpy as np

from framecal import __version__, approx, cwt, duality, io, linalg
from framecal.config import Tolerances
from framecal.errors import (
    DegenerateAtom,
    HypothesisError,
    InputError,
    InternalConsistencyError,
    NotDegenerate,
)
from framecal.frame import (
    frame_bounds,
    frame_operator,
    is_l2_independent,
    is_mu_complete,
    is_orthonormal_basis,
    is_riesz_basis,
    standard_dual,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


def _plain(value):
    """Recursively convert numpy and complex values into JSON-ready objects."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        if value.ndim == 2 and value.shape[0] == value.shape[1]:
            return io.operator_to_dict(value)
        return [_plain(v) for v in value]
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return value


class _Run:
    """Collects inputs and verdicts for one command."""

    def __init__(self, command: str, tol: Tolerances):
        self.command = command
        self.tol = tol
        self.inputs: dict[str, str] = {}
        self.verdicts: dict = {}

    def frame(self, name: str, path):
        self.inputs[name] = io.file_digest(path) if _exists(path) else "missing"
        return io.load_frame(path)

    def operator(self, name: str, path):
        self.inputs[name] = io.file_digest(path) if _exists(path) else "missing"
        return io.load_operator(path)

    def report(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "tolerances": self.tol.as_dict(),
            "verdicts": _plain(self.verdicts),
            "version": __version__,
        }


def _exists(path) -> bool:
    try:
        with open(path, "rb"):
            return True
    except OSError:
        return False


def _defect_verdict(report: approx.DefectReport, tol: Tolerances) -> dict:
    out = asdict(report)
    out["strict_threshold"] = 1.0
    out["bound_slack"] = tol.bound
    return out


# commands -----------------------------------------------------------------


def cmd_inspect(args, run: _Run) -> int:
    f = run.frame("frame", args.frame)
    bounds = frame_bounds(f, run.tol.classify)
    run.verdicts = {
        "atoms": len(f),
        "dim": f.dim,
        "lower_bound": bounds.lower,
        "upper_bound": bounds.upper,
        "classification": bounds.classification.value,
        "classify_tol": bounds.tol,
        "mu_complete": is_mu_complete(f, run.tol.rank),
        "l2_independent": is_l2_independent(f, run.tol.rank),
        "riesz_basis": is_riesz_basis(f, run.tol.rank),
        "orthonormal_basis": is_orthonormal_basis(f, run.tol.rank),
        "rank_tol": run.tol.rank,
        "total_mass": f.space.total_mass,
    }
    return EXIT_OK if bounds.is_frame else EXIT_FAIL


def cmd_check_dual(args, run: _Run) -> int:
    f = run.frame("F", args.F)
    g = run.frame("G", args.G)
    tol = args.tol if args.tol is not None else run.tol.dual
    pair = duality.is_dual_pair(f, g, tol)
    rep = approx.defect(f, g)
    run.verdicts = {
        "is_dual": pair.is_dual,
        "residual": pair.residual,
        "dual_tol": tol,
        "defect": _defect_verdict(rep, run.tol),
    }
    return EXIT_OK if pair.is_dual else EXIT_FAIL


def cmd_defect(args, run: _Run) -> int:
    f = run.frame("F", args.F)
    g = run.frame("G", args.G)
    rep = approx.defect(f, g)
    run.verdicts = _defect_verdict(rep, run.tol)
    if rep.is_approx_dual:
        check = approx.guaranteed_bound_check(f, g)
        run.verdicts["bound_check"] = check._asdict()
    return EXIT_OK if rep.is_approx_dual else EXIT_FAIL


def cmd_construct(args, run: _Run) -> int:
    f = run.frame("F", args.frame)
    kind = args.kind
    if kind == "standard-dual":
        g = standard_dual(f, run.tol.classify)
        predicted = 0.0
    elif kind in ("douglas-kernel", "douglas-dualpair"):
        if args.operator is None or args.kernel is None:
            raise InputError(f"{kind} needs --operator D and --kernel K")
        d = run.operator("D", args.operator)
        k = run.frame("K", args.kernel)
        if kind == "douglas-kernel":
            g = approx.build_approx_dual_kernel(f, d, k)
        else:
            g = approx.build_approx_dual_dualpair(f, d, k)
        root = linalg.psd_sqrt(frame_operator(f))
        predicted = linalg.operator_norm(linalg.identity(f.dim) - root @ linalg.as_operator(d, f.dim))
    elif kind == "exactify":
        if args.partner is None:
            raise InputError("exactify needs --partner G")
        partner = run.frame("G", args.partner)
        g = approx.exactify(f, partner)
        predicted = 0.0
    else:  # argparse restricts choices
        raise InputError(f"unknown kind {kind!r}")

    # the output must pass the dual/defect check against its partner
    check = approx.defect(g, partner) if kind == "exactify" else approx.defect(f, g)
    if abs(check.defect - predicted) > 1e-9 * (1.0 + predicted):
        raise InternalConsistencyError(
            f"constructed pair has defect {check.defect:.6g}, expected {predicted:.6g}"
        )
    if args.out:
        io.save_frame(g, args.out)
    run.verdicts = {
        "kind": kind,
        "predicted_defect": predicted,
        "defect": check.defect,
        "defect_tol": 1e-9,
        "written": args.out,
        "frame": None if args.out else io.frame_to_dict(g),
    }
    return EXIT_OK


def cmd_remove_atom(args, run: _Run) -> int:
    f = run.frame("F", args.F)
    g = run.frame("G", args.G)
    try:
        rep = duality.remove_atom_check(f, g, args.index, run.tol.dual)
    except DegenerateAtom as exc:
        verdict = {"removable": False, "reason": str(exc), "dual_tol": run.tol.dual}
        try:
            deg = duality.degenerate_removal(f, args.index, run.tol.rank)
            verdict.update(
                omega0=deg.omega0, incomplete=deg.incomplete, product=deg.product, rank_tol=run.tol.rank
            )
        except NotDegenerate as inner:
            verdict["degenerate_analysis"] = str(inner)
        run.verdicts = verdict
        return EXIT_FAIL
    run.verdicts = asdict(rep)
    return EXIT_OK


def cmd_affine_dual(args, run: _Run) -> int:
    f = run.frame("F", args.F)
    g = run.frame("G", args.G)
    k = run.frame("K", args.K)
    alpha = complex(args.alpha_re, args.alpha_im)
    out = duality.affine_dual(f, g, k, alpha, run.tol.dual)
    if args.out:
        io.save_frame(out, args.out)
    pair = duality.is_dual_pair(f, out, run.tol.dual)
    run.verdicts = {
        "alpha": alpha,
        "is_dual": pair.is_dual,
        "residual": pair.residual,
        "dual_tol": run.tol.dual,
        "written": args.out,
        "frame": None if args.out else io.frame_to_dict(out),
    }
    return EXIT_OK if pair.is_dual else EXIT_FAIL


def cmd_transport(args, run: _Run) -> int:
    f = run.frame("F", args.F)
    g = run.frame("G", args.G)
    u = run.operator("U", args.U)
    v = run.operator("V", args.V)
    u = linalg.as_operator(u, f.dim)
    v = linalg.as_operator(v, f.dim)
    gap = linalg.operator_norm(v @ linalg.adjoint(u) - linalg.identity(f.dim))
    if gap <= duality.TRANSPORT_TOL:
        uf, vg = duality.transport_dual(f, g, u, v, run.tol.dual)
        pair = duality.is_dual_pair(uf, vg, run.tol.dual)
        run.verdicts = {
            "mode": "exact",
            "transport_gap": gap,
            "transport_tol": duality.TRANSPORT_TOL,
            "is_dual": pair.is_dual,
            "residual": pair.residual,
            "dual_tol": run.tol.dual,
        }
        return EXIT_OK
    rep = approx.transport_approx(f, g, u, v, run.tol.dual)
    run.verdicts = {
        "mode": "approximate",
        "transport_gap": gap,
        "transport_tol": duality.TRANSPORT_TOL,
        "defect": _defect_verdict(rep, run.tol),
    }
    return EXIT_OK if rep.is_approx_dual else EXIT_FAIL


def cmd_douglas(args, run: _Run) -> int:
    f = run.frame("F", args.F)
    g = run.frame("G", args.G)
    fac = approx.douglas_factor(f, g)
    run.verdicts = {
        "D": fac.D,
        "dd_star_ok": fac.dd_star_ok,
        "dd_star_max": fac.dd_star_max,
        "bessel_G": fac.bessel_G,
        "dd_star_tol": 1e-9,
        "defect_via_D": fac.defect_via_D,
        "factor_residual": fac.factor_residual,
        "approx_dual": fac.defect_via_D < 1.0,
    }
    return EXIT_OK if fac.dd_star_ok and fac.defect_via_D < 1.0 else EXIT_FAIL


def cmd_perturb(args, run: _Run) -> int:
    f = run.frame("F", args.F)
    g = run.frame("G", args.G)
    if args.kind == "parseval":
        cert = approx.perturb_parseval(f, g, args.lam, args.gamma, args.trials, args.seed)
    else:
        if args.K is None:
            raise InputError(f"{args.kind} needs --K")
        k = run.frame("K", args.K)
        if args.kind == "analysis":
            cert = approx.perturb_analysis(f, g, k, args.lam)
        else:
            cert = approx.perturb_dualpair(f, g, k, args.lam, args.gamma, args.trials, args.seed)
    run.verdicts = cert.to_dict()
    run.verdicts["bound_slack"] = run.tol.bound
    run.verdicts["seed"] = args.seed
    return EXIT_OK if cert.applicable and cert.bound_holds else EXIT_FAIL


def cmd_cwt(args, run: _Run) -> int:
    cfg = cwt.CwtConfig(
        wavelet=args.wavelet,
        amin=args.amin,
        amax=args.amax,
        na=args.na,
        nb=args.nb,
        dim=args.dim,
        probes=args.probes,
        seed=args.seed,
    )
    result = cwt.run_cwt_experiment(cfg)
    result["ratio_band"] = [cfg.ratio_low, cfg.ratio_high]
    result["band_threshold"] = cfg.band_threshold
    result["config"] = asdict(cfg)
    run.verdicts = result
    return EXIT_OK if result["within_band"] else EXIT_FAIL


# parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="framecal", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"framecal {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("inspect", help="frame bounds, classification and basis flags")
    s.add_argument("frame")
    s.set_defaults(func=cmd_inspect)

    s = sub.add_parser("check-dual", help="is (F, G) a dual pair")
    s.add_argument("F")
    s.add_argument("G")
    s.add_argument("--tol", type=float, default=None)
    s.set_defaults(func=cmd_check_dual)

    s = sub.add_parser("defect", help="||I - T_G T_F*|| and approximate-dual bounds")
    s.add_argument("F")
    s.add_argument("G")
    s.set_defaults(func=cmd_defect)

    s = sub.add_parser("construct", help="build a dual or approximate dual frame")
    s.add_argument(
        "--kind",
        required=True,
        choices=["standard-dual", "douglas-kernel", "douglas-dualpair", "exactify"],
    )
    s.add_argument("--frame", required=True, help="frame F")
    s.add_argument("--operator", help="operator D (douglas-* kinds)")
    s.add_argument("--kernel", help="K: kernel frame or dual partner (douglas-* kinds)")
    s.add_argument("--partner", help="G for exactify")
    s.add_argument("--out", help="write the constructed frame here instead of embedding it")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("remove-atom", help="lower bound after deleting one atom")
    s.add_argument("F")
    s.add_argument("G")
    s.add_argument("--index", type=int, required=True)
    s.set_defaults(func=cmd_remove_atom)

    s = sub.add_parser("affine-dual", help="alpha G + (1 - alpha) K for two duals of F")
    s.add_argument("F")
    s.add_argument("G")
    s.add_argument("K")
    s.add_argument("--alpha-re", type=float, required=True)
    s.add_argument("--alpha-im", type=float, default=0.0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_affine_dual)

    s = sub.add_parser("transport", help="carry a dual pair by operators U, V")
    s.add_argument("F")
    s.add_argument("G")
    s.add_argument("--U", required=True)
    s.add_argument("--V", required=True)
    s.set_defaults(func=cmd_transport)

    s = sub.add_parser("douglas", help="D with T_F T_G* = S_F^(1/2) D")
    s.add_argument("F")
    s.add_argument("G")
    s.set_defaults(func=cmd_douglas)

    s = sub.add_parser("perturb", help="perturbation certificate")
    s.add_argument("--kind", required=True, choices=["parseval", "analysis", "dualpair"])
    s.add_argument("F")
    s.add_argument("G")
    s.add_argument("--K")
    s.add_argument("--lam", type=float, required=True)
    s.add_argument("--gamma", type=float, default=0.0)
    s.add_argument("--trials", type=int, default=10000)
    s.add_argument("--seed", type=int, default=42)
    s.set_defaults(func=cmd_perturb)

    d = cwt.CwtConfig()
    s = sub.add_parser("cwt", help="tightness of a discretized wavelet frame")
    s.add_argument("--wavelet", default=d.wavelet, choices=sorted(cwt.WAVELETS))
    s.add_argument("--amin", type=float, default=d.amin)
    s.add_argument("--amax", type=float, default=d.amax)
    s.add_argument("--na", type=int, default=d.na)
    s.add_argument("--nb", type=int, default=d.nb)
    s.add_argument("--dim", type=int, default=d.dim)
    s.add_argument("--probes", type=int, default=d.probes)
    s.add_argument("--seed", type=int, default=d.seed)
    s.set_defaults(func=cmd_cwt)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = Tolerances.from_env()
        run = _Run(args.command, tol)
        code = args.func(args, run)
    except InputError as exc:
        print(f"framecal: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except HypothesisError as exc:
        print(f"framecal: {type(exc).__name__}: {exc}", file=sys.stderr)
        run.verdicts = {"error": type(exc).__name__, "message": str(exc)}
        print(io.dumps(run.report()))
        return EXIT_FAIL
    except InternalConsistencyError as exc:
        print(f"framecal: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    print(io.dumps(run.report()))
    return code


if __name__ == "__main__":
    sys.exit(main())
