"""Command line front end.

Three subcommands over one scene-file format:

  spin-g verify <scene> [--tol T] [--filter SUBSTR] [--json|--text]
  spin-g nomizu <scene> [--torsion-free] [--json|--text]
  spin-g lift <scene> {verify,conjugacy,reducibility,parity,orient} [--tol T]

Exit status: 0 when every reported check passes, 1 when at least one check
fails, 2 for unreadable, malformed, or inconsistent input.  Reports are
byte-stable for a fixed invocation.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from typing import List, Optional

from .chartcalc import full_suite
from .homogeneous import (
    check_reducibility,
    check_time_orientable,
    conjugacy_check,
    curvature_at_base,
    solve_nomizu,
    split_curvature,
    verify_connection,
    verify_lift,
)
from .report import Report, frac_str
from .reps import classify_parity, parity_decompose
from .scenefile import SceneFileError, SceneModel, load_scene

DEFAULT_TOL = 1e-8
MIN_TOL = 1e-12
TOL_ENV = "SPIN_G_TOL"
LIFT_ACTIONS = ("verify", "conjugacy", "reducibility", "parity", "orient")


class UsageError(Exception):
    """Input is well formed JSON but unusable for the requested command."""


def _resolve_tol(cli_tol: Optional[float], model: SceneModel) -> float:
    if cli_tol is not None:
        t = cli_tol
    else:
        env = os.environ.get(TOL_ENV)
        if env is not None:
            try:
                t = float(env)
            except ValueError:
                raise UsageError(f"bad {TOL_ENV} value {env!r}") from None
        elif model.tol is not None:
            t = model.tol
        else:
            t = DEFAULT_TOL
    if t <= 0:
        raise UsageError(f"tolerance must be positive, got {t!r}")
    return max(float(t), MIN_TOL)


def _need_klein(model: SceneModel, command: str) -> None:
    if model.kind != "klein":
        raise UsageError(f"{command} requires a klein_pair scene")


def _need_lifts(model: SceneModel, command: str, count: int = 1) -> None:
    if len(model.lifts) < count:
        have = len(model.lifts)
        raise UsageError(
            f"{command} needs at least {count} lift(s) in the scene, found {have}"
        )


def _basis_vector(dim: int, idx: int) -> List[Fraction]:
    return [Fraction(1) if t == idx else Fraction(0) for t in range(dim)]


def _lie_payload(el) -> dict:
    return {
        "so": [[frac_str(v) for v in row] for row in el.so],
        "aux": [frac_str(a) for a in el.aux],
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_verify(model: SceneModel, args, command: str) -> Report:
    rep = Report(command, model.name)
    if model.kind == "chart":
        scene = model.chart
        scene.tol = _resolve_tol(args.tol, model)
        rep.extend_residuals(full_suite(scene))
    else:
        _need_lifts(model, "verify")
        dims = {}
        for lift in model.lifts:
            prefix = f"[{lift.name}] "
            rep.extend_exact(verify_lift(lift), prefix=prefix)
            sol = solve_nomizu(lift)
            if sol.exists:
                rep.extend_exact(verify_connection(sol.particular), prefix=prefix)
                dims[lift.name] = sol.dimension
            else:
                rep.add_exact(
                    f"{prefix}solution set computed",
                    True,
                    note="no invariant connection; nothing to re-check",
                )
                dims[lift.name] = "empty"
        rep.payload["connection_space_dimension"] = dims
    if args.filter is not None:
        kept = [c for c in rep.checks if args.filter in c.name]
        if not kept:
            raise UsageError(f"filter {args.filter!r} matches no checks")
        rep.checks = kept
    return rep


def cmd_nomizu(model: SceneModel, args, command: str) -> Report:
    _need_klein(model, "nomizu")
    _need_lifts(model, "nomizu")
    rep = Report(command, model.name)
    pair = model.pair
    solutions = {}
    for lift in model.lifts:
        prefix = f"[{lift.name}] "
        sol = solve_nomizu(lift, torsion_free=args.torsion_free)
        entry: dict = {"torsion_free": bool(args.torsion_free)}
        if not sol.exists:
            entry["verdict"] = "no invariant connection"
            rep.add_exact(
                f"{prefix}solution set computed",
                True,
                note="no invariant connection",
            )
            solutions[lift.name] = entry
            continue
        entry["verdict"] = "solutions exist"
        entry["dimension"] = sol.dimension
        nm = sol.particular
        rep.extend_exact(
            verify_connection(nm, torsion_free=args.torsion_free), prefix=prefix
        )
        entry["map_on_m"] = [_lie_payload(v) for v in nm.values_m]
        curv = {}
        for a in range(pair.dim_m):
            for b in range(a + 1, pair.dim_m):
                kappa = curvature_at_base(
                    nm, _basis_vector(pair.dim_g, a), _basis_vector(pair.dim_g, b)
                )
                so_part, aux_part = split_curvature(kappa)
                curv[f"{a},{b}"] = {
                    "so": [[frac_str(v) for v in row] for row in so_part],
                    "aux": [frac_str(v) for v in aux_part],
                }
        entry["curvature"] = curv
        solutions[lift.name] = entry
    rep.payload["nomizu"] = solutions
    return rep


def cmd_lift(model: SceneModel, args, command: str) -> Report:
    _need_klein(model, "lift")
    rep = Report(command, model.name)
    action = args.action

    if action == "verify":
        _need_lifts(model, "lift verify")
        for lift in model.lifts:
            rep.extend_exact(verify_lift(lift), prefix=f"[{lift.name}] ")
        return rep

    if action == "conjugacy":
        _need_lifts(model, "lift conjugacy", count=2)
        tol = args.tol if args.tol is not None else 1e-9
        tol = max(float(tol), MIN_TOL)
        a, b = model.lifts[0], model.lifts[1]
        res = conjugacy_check(a, b, tol=tol)
        rep.add_exact(
            f"conjugacy decision for lifts {a.name!r} and {b.name!r}",
            res.verdict != "Inconclusive",
            note=f"{res.verdict}: {res.detail}",
        )
        payload = {"verdict": res.verdict, "detail": res.detail}
        if res.residual is not None:
            payload["residual"] = float(res.residual)
        if res.witness is not None:
            payload["witness"] = [str(w) for w in res.witness]
        rep.payload["conjugacy"] = payload
        return rep

    if action == "reducibility":
        _need_lifts(model, "lift reducibility")
        out = {}
        for lift in model.lifts:
            rr = check_reducibility(lift)
            verdict = "reducible" if rr.reducible_to_spin else "irreducible"
            rep.add_exact(
                f"[{lift.name}] reducibility classified",
                True,
                note=f"{verdict}: {rr.detail}",
            )
            out[lift.name] = {
                "conjugation_invariant": rr.conjugation_invariant,
                "center_is_z2": rr.center_is_z2,
                "reducible_to_spin": rr.reducible_to_spin,
                "detail": rr.detail,
            }
        rep.payload["reducibility"] = out
        return rep

    if action == "parity":
        r = model.representation
        p = classify_parity(r)
        even, odd, resid = parity_decompose(r)
        d_even, d_odd = even.shape[1], odd.shape[1]
        rep.add_residual(
            "parity subspaces invariant under all generators",
            float(resid),
            _resolve_tol(args.tol, model),
        )
        rep.add_exact(
            "even and odd dimensions fill the fiber",
            d_even + d_odd == r.dim_W,
            note=f"{d_even} + {d_odd} = {r.dim_W}",
        )
        rep.payload["parity"] = {
            "representation": r.name,
            "classification": p.value,
            "even_dim": d_even,
            "odd_dim": d_odd,
        }
        return rep

    if action == "orient":
        orr = check_time_orientable(model.pair)
        rep.add_exact(
            "every discrete isotropy component preserves the time side",
            orr.time_orientable,
            note=orr.detail,
        )
        rep.payload["orient"] = {
            "time_orientable": orr.time_orientable,
            "detail": orr.detail,
        }
        return rep

    raise UsageError(f"unknown lift action {action!r}")


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spin-g",
        description="verify chart identities and homogeneous structures from scene files",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("scene", help="scene file (JSON)")
        p.add_argument("--tol", type=float, default=None, help="residual tolerance")
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", action="store_true", help="machine-readable report")
        fmt.add_argument("--text", action="store_true", help="plain text report (default)")

    pv = sub.add_parser("verify", help="run every check the scene supports")
    common(pv)
    pv.add_argument("--filter", default=None, help="keep only checks whose name contains this")

    pn = sub.add_parser("nomizu", help="solve for invariant connections and report them")
    common(pn)
    pn.add_argument(
        "--torsion-free", action="store_true", help="impose the torsion condition"
    )

    pl = sub.add_parser("lift", help="structure-level queries on a klein scene")
    common(pl)
    pl.add_argument("action", choices=LIFT_ACTIONS)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    raw = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(raw)
    command = " ".join(["spin-g"] + raw)
    try:
        model = load_scene(args.scene)
        if args.command == "verify":
            report = cmd_verify(model, args, command)
        elif args.command == "nomizu":
            report = cmd_nomizu(model, args, command)
        else:
            report = cmd_lift(model, args, command)
    except (SceneFileError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    sys.stdout.write(report.to_json() if args.json else report.to_text())
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
