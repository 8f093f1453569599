"""Command line: analyze, hermite, decouple, simulate and verify.

Exit codes:
    0  success (for verify: the law decouples the plant)
    2  decoupling is not solvable, or verification found coupling
    3  the plant (or its stabilized version) is not stable
    4  the plant is not output reachable
    5  candidate search budget exhausted before a verdict
    1  any other error (bad file, bad shapes, failed construction)
"""

from __future__ import annotations

import argparse
import json
import sys as _sys
from pathlib import Path
from typing import Optional, Sequence

from . import report
from .cyclic import CyclicForm, cyclic_hermite
from .errors import (
    DimensionMismatch,
    Inconclusive,
    NotOutputReachable,
    NotSolvable,
    NotStable,
    PerdecError,
)
from .nonsquare import analyze_invariants, compose_laws, decouple_nonsquare
from .periodic import FeedbackLaw, PeriodicSystem, apply_feedback, verify_decoupled
from .square import decouple_square, square_solvable
from .sysfile import SystemDocument, load_document, load_gains, save_gains
from . import linalg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="perdec",
        description=(
            "Row-by-row decoupling of discrete-time linear periodic systems "
            "by periodic state feedback, in exact arithmetic."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser):
        p.add_argument("system", help="system file (JSON)")
        p.add_argument(
            "--tau", type=int, default=0,
            help="time origin of the lifted representation (default 0)",
        )
        p.add_argument(
            "--format", choices=("text", "machine"), default="text",
            help="report style: aligned text or exact JSON",
        )
        p.add_argument(
            "--output",
            help=(
                "write the report to this file instead of stdout "
                "(decouple: write the synthesized gains file here)"
            ),
        )

    cmd = sub.add_parser(
        "analyze", help="stability, reachability and decoupling invariants"
    )
    common(cmd)
    cmd = sub.add_parser(
        "hermite", help="lifted transfer function and its triangular normal form"
    )
    common(cmd)
    cmd = sub.add_parser("decouple", help="synthesize decoupling feedback gains")
    common(cmd)
    cmd.add_argument(
        "--step10-bound", dest="step10_bound", type=int, default=None,
        help="candidate search budget for systems with spare inputs",
    )
    cmd = sub.add_parser("simulate", help="exact impulse or step response table")
    common(cmd)
    cmd.add_argument("--horizon", type=int, default=None)
    cmd.add_argument("--signal", choices=("impulse", "step"), default="impulse")
    cmd = sub.add_parser("verify", help="check that a gains file decouples the plant")
    common(cmd)
    cmd.add_argument("--gains", required=True, help="gains file with F and G arrays")
    cmd.add_argument("--horizon", type=int, default=None)
    return parser


def _effective(doc: SystemDocument) -> tuple[PeriodicSystem, bool]:
    """The system the commands operate on: stabilized when a law is shipped."""
    if doc.stabilizing is not None:
        return apply_feedback(doc.system, doc.stabilizing), True
    return doc.system, False


def _require_stable(sys: PeriodicSystem, prestabilized: bool):
    if sys.is_stable():
        return
    if prestabilized:
        raise NotStable("the shipped stabilizing feedback does not stabilize the plant")
    raise NotStable(
        "the plant is not stable; decoupling preserves stability but cannot "
        "create it, so stabilize first: add a stabilizing_feedback section "
        "and rerun on the stabilized plant"
    )


def _gains_data(law: FeedbackLaw) -> dict:
    return {
        "period": law.T,
        "F": [report.machine_frac_mat(f) for f in law.F],
        "G": [report.machine_frac_mat(g) for g in law.G],
    }


def _gains_lines(law: FeedbackLaw, lines: list[str]):
    for t in range(law.T):
        lines.append(f"  F({t}):")
        lines.extend("    " + s for s in report.frac_lines(law.F[t]))
        lines.append(f"  G({t}):")
        lines.extend("    " + s for s in report.frac_lines(law.G[t]))


def _header(doc: SystemDocument, eff: PeriodicSystem) -> list[str]:
    dims = ", ".join(str(eff.dim(t)) for t in range(eff.T))
    return [
        f"period {eff.T}, state dims [{dims}], "
        f"{eff.m} input(s), {eff.p} output(s)"
    ]


def _cmd_analyze(doc: SystemDocument, args) -> tuple[dict, list[str], int]:
    eff, pre = _effective(doc)
    stable = eff.is_stable()
    reachable, window = eff.is_output_reachable()
    cp = linalg.char_poly(eff.monodromy(0))
    data = {
        "command": "analyze",
        "tau": args.tau,
        "period": eff.T,
        "dims": [eff.dim(t) for t in range(eff.T)],
        "inputs": eff.m,
        "outputs": eff.p,
        "stabilizing_feedback_applied": pre,
        "stable": stable,
        "output_reachable": reachable,
        "monodromy_char_poly": report.machine_poly(cp),
    }
    if pre:
        data["raw_stable"] = doc.system.is_stable()
    lines = _header(doc, eff)
    if pre:
        lines.append("stabilizing feedback from the file is applied")
        lines.append(f"raw plant stable: {'yes' if data['raw_stable'] else 'no'}")
    lines.append(f"stable: {'yes' if stable else 'no'}")
    lines.append(f"output reachable: {'yes' if reachable else 'no'}")
    lines.append(f"monodromy characteristic polynomial: {cp.to_str()}")
    if window is not None:
        data["reachability_window"] = window
    if not stable:
        note = (
            "invariants skipped: the plant must be stabilized before the "
            "lifted transfer lives over the stable ring"
        )
        data["note"] = note
        lines.append(note)
        return data, lines, 0
    if eff.m > eff.p:
        try:
            inv = analyze_invariants(eff, args.tau)
        except PerdecError as exc:
            data["invariants_error"] = {"type": type(exc).__name__, "message": str(exc)}
            lines.append(f"invariants unavailable: {exc}")
            return data, lines, 0
        data["invariants"] = {
            "d": report.machine_poly_rows(inv.d),
            "delta": report.machine_int_rows(inv.delta),
            "f": report.machine_poly_rows(inv.f),
            "phi": report.machine_int_rows(inv.phi),
            "sigma": report.machine_int_rows(inv.sigma),
            "sigma_free": report.machine_int_rows(inv.sigma_free),
        }
        lines.append("decoupling invariants per time block:")
        lines.append(f"  delay list delta:     {report.int_rows_str(inv.delta)}")
        lines.append(f"  unstable content d:   {report.poly_rows_str(inv.d)}")
        lines.append(f"  column delays phi:    {report.int_rows_str(inv.phi)}")
        lines.append(f"  column content f:     {report.poly_rows_str(inv.f)}")
        lines.append(f"  chain lengths sigma:  {report.int_rows_str(inv.sigma)}")
        lines.append(f"  free prefixes:        {report.int_rows_str(inv.sigma_free)}")
    elif eff.m == eff.p:
        her = cyclic_hermite(CyclicForm(eff, args.tau).transfer(), eff.T, eff.p, eff.m)
        solvable = not her.unreduced and square_solvable(her.h, eff.p, eff.T)
        data["square_solvable"] = solvable
        lines.append(
            "decouplable by regular feedback: " + ("yes" if solvable else "no")
        )
        if solvable:
            orders = tuple(
                tuple(her.h[i * eff.p + j, i * eff.p + j].order() for j in range(eff.p))
                for i in range(eff.T)
            )
            data["diagonal_orders"] = report.machine_int_rows(orders)
            lines.append(f"  diagonal orders: {report.int_rows_str(orders)}")
    else:
        note = "more outputs than inputs: row-by-row decoupling does not apply"
        data["note"] = note
        lines.append(note)
    return data, lines, 0


def _cmd_hermite(doc: SystemDocument, args) -> tuple[dict, list[str], int]:
    eff, pre = _effective(doc)
    _require_stable(eff, pre)
    wbar = CyclicForm(eff, args.tau).transfer()
    her = cyclic_hermite(wbar, eff.T, eff.p, eff.m)
    data = {
        "command": "hermite",
        "tau": args.tau,
        "transfer": report.machine_ratmat(wbar),
        "normal_form": report.machine_ratmat(her.h),
        "multiplier": report.machine_ratmat(her.u),
        "unreduced": sorted(list(pos) for pos in her.unreduced),
    }
    lines = _header(doc, eff)
    lines.append(f"lifted transfer function (tau = {args.tau}):")
    lines.extend("  " + s for s in report.ratmat_lines(wbar, eff.p, eff.m))
    lines.append("triangular normal form:")
    lines.extend("  " + s for s in report.ratmat_lines(her.h, eff.p, eff.m))
    lines.append("unimodular column multiplier:")
    lines.extend("  " + s for s in report.ratmat_lines(her.u, eff.m, eff.m))
    if her.unreduced:
        lines.append(f"warning: positions left unreduced: {sorted(her.unreduced)}")
    return data, lines, 0


def _cmd_decouple(doc: SystemDocument, args) -> tuple[dict, list[str], int]:
    eff, pre = _effective(doc)
    if eff.m < eff.p:
        raise DimensionMismatch(
            f"{eff.m} inputs cannot decouple {eff.p} outputs"
        )
    _require_stable(eff, pre)
    if eff.m == eff.p:
        res = decouple_square(eff, args.tau)
        mode = "square"
    else:
        bound = args.step10_bound
        if bound is None:
            bound = doc.options.get("step10_bound", 64)
        res = decouple_nonsquare(eff, args.tau, bound)
        mode = "wide"
    total = compose_laws(doc.stabilizing, res.law) if pre else res.law
    replay = apply_feedback(doc.system, total)
    verdict = verify_decoupled(replay)
    rep = res.report
    data = {
        "command": "decouple",
        "tau": args.tau,
        "mode": mode,
        "stabilizing_feedback_applied": pre,
        "normal_form": report.machine_ratmat(rep["delta"]),
        "multiplier": report.machine_ratmat(rep["ubar"]),
        "gains": _gains_data(res.law),
        "closed_transfer": report.machine_ratmat(rep["closed_transfer"]),
        "replay_decoupled": bool(verdict),
    }
    if pre:
        data["overall_gains"] = _gains_data(total)
    lines = _header(doc, eff)
    if pre:
        lines.append("stabilizing feedback from the file is applied first")
    lines.append("triangular normal form of the lifted transfer:")
    lines.extend("  " + s for s in report.ratmat_lines(rep["delta"], eff.p, eff.m))
    if mode == "wide":
        inv = rep["invariants"]
        cand = rep["candidate"]
        parts = rep["parts"]
        data["invariants"] = {
            "d": report.machine_poly_rows(inv.d),
            "delta": report.machine_int_rows(inv.delta),
            "f": report.machine_poly_rows(inv.f),
            "phi": report.machine_int_rows(inv.phi),
            "sigma": report.machine_int_rows(inv.sigma),
            "sigma_free": report.machine_int_rows(inv.sigma_free),
        }
        data["candidate"] = {
            "epsilon": report.machine_int_rows(cand.epsilon),
            "eta": report.machine_int_rows(cand.eta),
            "eta_star": report.machine_int_rows(cand.eta_star),
            "omega": report.machine_int_rows(cand.omega),
            "released": sorted(list(x) for x in cand.released),
        }
        data["candidates_tried"] = rep["candidates_tried"]
        data["compensator"] = {
            "z1": report.machine_ratmat(parts.z1),
            "v22": report.machine_ratmat(parts.v22),
            "v21": report.machine_ratmat(parts.v21),
            "z2": report.machine_ratmat(parts.z2),
            "kbar": report.machine_frac_mat(parts.kbar),
            "fbar": report.machine_frac_mat(parts.fbar),
            "gbar": report.machine_frac_mat(parts.gbar),
        }
        lines.append("candidate lists:")
        lines.append(f"  epsilon:  {report.int_rows_str(cand.epsilon)}")
        lines.append(f"  eta:      {report.int_rows_str(cand.eta)}")
        lines.append(f"  eta star: {report.int_rows_str(cand.eta_star)}")
        lines.append(f"  omega:    {report.int_rows_str(cand.omega)}")
        lines.append("delayed interactor:")
        lines.extend("  " + s for s in report.ratmat_lines(parts.z1, eff.p, eff.p))
        lines.append("spare-input compensator block:")
        q = eff.m - eff.p
        lines.extend("  " + s for s in report.ratmat_lines(parts.v22, q, q))
    else:
        data["compensator"] = {
            "kbar": report.machine_frac_mat(rep["kbar"]),
            "fbar": report.machine_frac_mat(rep["fbar"]),
            "gbar": report.machine_frac_mat(rep["gbar"]),
        }
    label = "synthesized feedback"
    if pre:
        label += " (on the stabilized plant)"
    lines.append(label + ":")
    _gains_lines(res.law, lines)
    if pre:
        lines.append("overall feedback (on the raw plant):")
        _gains_lines(total, lines)
    lines.append("closed-loop lifted transfer:")
    lines.extend(
        "  " + s for s in report.ratmat_lines(rep["closed_transfer"], eff.p, eff.p)
    )
    lines.append(f"replay on the plant: {'decoupled' if verdict else repr(verdict)}")
    if args.output:
        save_gains(total.F, total.G, args.output)
        data["gains_file"] = args.output
        lines.append(f"gains written to {args.output}")
    return data, lines, 0


def _cmd_simulate(doc: SystemDocument, args) -> tuple[dict, list[str], int]:
    eff, pre = _effective(doc)
    horizon = args.horizon
    if horizon is None:
        horizon = doc.options.get("horizon", eff.default_horizon())
    responses = []
    for t in range(eff.T):
        terms = [eff.markov(i, t) for i in range(horizon + 1)]
        if args.signal == "step":
            acc = []
            run = linalg.zeros(eff.p, eff.m)
            for mk in terms:
                run = linalg.madd(run, mk)
                acc.append(run)
            terms = acc
        responses.append(terms)
    data = {
        "command": "simulate",
        "signal": args.signal,
        "horizon": horizon,
        "responses": [
            {"time": t, "terms": [report.machine_frac_mat(mk) for mk in responses[t]]}
            for t in range(eff.T)
        ],
    }
    lines = _header(doc, eff)
    lines.append(f"{args.signal} response, lags 0..{horizon}:")
    for t in range(eff.T):
        lines.append(f"  injection at time {t}:")
        for i, mk in enumerate(responses[t]):
            lines.append(f"    lag {i}:")
            lines.extend("      " + s for s in report.frac_lines(mk))
    return data, lines, 0


def _cmd_verify(doc: SystemDocument, args) -> tuple[dict, list[str], int]:
    eff, pre = _effective(doc)
    F, G = load_gains(args.gains)
    law = FeedbackLaw(F, G)
    closed = apply_feedback(eff, law)
    horizon = args.horizon
    if horizon is None:
        horizon = doc.options.get("horizon")
    verdict = verify_decoupled(closed, horizon)
    reachable, _ = closed.is_output_reachable()
    diagonal = verdict.reason not in ("cross-coupling", "shape")
    data = {
        "command": "verify",
        "decoupled": bool(verdict),
        "diagonal": diagonal,
        "stable": closed.is_stable(),
        "output_reachable": reachable,
    }
    if not verdict:
        data["reason"] = verdict.reason
        data["detail"] = verdict.detail
    lines = _header(doc, eff)
    lines.append(f"diagonal: {'true' if diagonal else 'false'}")
    lines.append(f"stable: {'true' if data['stable'] else 'false'}")
    lines.append(f"output reachable: {'true' if reachable else 'false'}")
    if verdict:
        lines.append("verdict: decoupled")
        return data, lines, 0
    lines.append(f"verdict: not decoupled ({verdict.reason}: {verdict.detail})")
    return data, lines, 2


_HANDLERS = {
    "analyze": _cmd_analyze,
    "hermite": _cmd_hermite,
    "decouple": _cmd_decouple,
    "simulate": _cmd_simulate,
    "verify": _cmd_verify,
}


def _exit_code(exc: PerdecError) -> int:
    if isinstance(exc, NotStable):
        return 3
    if isinstance(exc, NotOutputReachable):
        return 4
    if isinstance(exc, Inconclusive):
        return 5
    if isinstance(exc, NotSolvable):
        return 2
    return 1


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one command, print its report, return the exit code."""
    args = build_parser().parse_args(argv)
    try:
        doc = load_document(args.system)
        data, lines, code = _HANDLERS[args.command](doc, args)
    except PerdecError as exc:
        code = _exit_code(exc)
        name = type(exc).__name__
        if args.format == "machine":
            body = json.dumps(
                {
                    "command": args.command,
                    "error": {"type": name, "code": code, "message": str(exc)},
                },
                indent=2,
            )
            _sys.stdout.write(body + "\n")
        else:
            _sys.stderr.write(f"{name}: {exc}\n")
        return code
    except OSError as exc:
        _sys.stderr.write(f"error: {exc}\n")
        return 1
    if args.format == "machine":
        body = json.dumps(data, indent=2) + "\n"
    else:
        body = "\n".join(lines) + "\n"
    if args.output and args.command != "decouple":
        Path(args.output).write_text(body)
    else:
        _sys.stdout.write(body)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run_command(argv)


if __name__ == "__main__":
    raise SystemExit(main())
