"""
Command-line front door: solve, vanish, verify, simulate, catalog, report, serve
"""
import argparse
import sys
from pathlib import Path
from typing import List, Optional

from catalog.examples import CATALOG, build_model
from core.config import MDP_API_HOST, MDP_API_PORT, MDP_DEFAULT_SCHEDULE, MDP_SOLVER_TOL, MDP_THREADS
from core.errors import ExtractionError, MdpError, ModelError, VerificationError
from core.io import dumps, load_model, load_policy, model_to_dict, read_document, save_model, save_policy, write_document
from core.logger import logger
from core.model import MdpModel
from core.validation import validate_model
from sim.simulate import dump_trajectory, simulate_average_cost, simulate_trajectory, tauberian_check
from solvers.discounted import relative_value
from vanish.diagnostics import VanishDiagnostics, load_diagnostics, save_diagnostics
from vanish.pipeline import vanish_pipeline
from vanish.schedule import DiscountSchedule
from verify.report import VerificationReport
from verify.suite import CHECKS, run_suite


def load_validated_model(path: str) -> MdpModel:
    model = load_model(path)
    report = validate_model(model)
    for note in report.notes:
        logger.info(f"ℹ️  {note}")
    if not report.ok:
        raise ModelError(f"{path}: invalid model: {'; '.join(report.violations)}")
    return model


def emit(document, out: Optional[str]):
    """Write a document to --out, or print it"""
    if out:
        write_document(document, out)
        logger.info(f"💾 Written {out}")
    else:
        sys.stdout.write(dumps(document))


def diagnostics_table(diag: VanishDiagnostics) -> str:
    lines = [f"model {diag.model_name!r}, schedule {diag.schedule.spec()}, tail window {diag.tail_window}",
             f"{'n':>4}  {'alpha':<22}  {'(1-a)m':<22}  {'iterations':>10}"]
    for r in diag.trace:
        marker = "*" if r.index >= diag.tail_start else " "
        lines.append(f"{r.index:>4}{marker} {r.alpha!r:<22}  {r.gain!r:<22}  {r.iterations:>10}")
    lines.append(f"w_lower_seq = {diag.w_lower_seq!r}   w_upper_seq = {diag.w_upper_seq!r}   (tail estimates, not limits)")
    if diag.w_lower is not None:
        lines.append(f"w_lower ~ {diag.w_lower!r}   w_upper ~ {diag.w_upper!r}   (multi-schedule estimates)")
    if diag.w_star_estimate is not None:
        lines.append(f"w* ~ {diag.w_star_estimate!r} ({diag.w_star_method})")
    if diag.a_star is not None:
        lines.append(f"A*(x) tol {diag.astar_tol!r}; empty at {diag.empty_states or 'no state'}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------------
def cmd_solve(args) -> int:
    model = load_validated_model(args.model)
    rv = relative_value(model, args.alpha, args.tol)
    emit({
        "model": model.name,
        "alpha": rv.alpha,
        "tol": args.tol,
        "m": rv.m,
        "gain": rv.gain,
        "v": rv.v.values,
        "u": rv.u.values,
        "iterations": rv.iterations,
        "residual": rv.residual,
    }, args.out)
    return 0


def cmd_vanish(args) -> int:
    model = load_validated_model(args.model)
    schedule = DiscountSchedule.parse(args.schedule, window=args.window)
    diag, policy = vanish_pipeline(
        model,
        schedule,
        construction=args.construction,
        tol=args.tol,
        astar_tol=args.astar_tol,
        use_lower=args.use_lower,
        refine=args.refine,
        radius_floor=args.radius_floor,
        workers=args.workers,
        seed=args.seed,
    )
    save_diagnostics(diag, args.out)
    if policy is None:
        raise ExtractionError(f"A*(x) is empty at states {diag.empty_states}", state=diag.empty_states[0])
    policy_out = args.policy_out or str(Path(args.out).with_suffix(".policy.json"))
    save_policy(policy, policy_out)
    logger.info(f"💾 Policy written to {policy_out}")
    return 0


def cmd_verify(args) -> int:
    model = load_validated_model(args.model)
    diag = load_diagnostics(args.diagnostics)
    policy = load_policy(args.policy) if args.policy else None
    checks = args.checks.split(",") if args.checks else None
    K_list = [float(k) for k in args.k_list.split(",")] if args.k_list else None
    report = run_suite(model, diag, checks=checks, tol=args.tol, policy=policy, K_list=K_list, seed=args.seed)
    if args.format == "json" or args.out:
        emit(report.to_dict(), args.out)
    if args.format == "table":
        sys.stdout.write(report.to_table())
    if not report.passed:
        names = ", ".join(c.name for c in report.failures())
        raise VerificationError(f"failing checks: {names}")
    return 0


def cmd_simulate(args) -> int:
    model = load_validated_model(args.model)
    policy = load_policy(args.policy)
    estimate = simulate_average_cost(model, policy, args.x0, args.horizon, args.reps, args.seed, args.workers)
    document = {"model": model.name, "estimate": estimate.to_dict()}
    if args.tauberian:
        result = tauberian_check(model, policy, args.x0, DiscountSchedule.parse(args.schedule),
                                 args.horizon, args.reps, args.seed, args.workers)
        document["tauberian"] = {
            "alphas": result.alphas,
            "abel_values": result.abel_values,
            "tolerance": result.tolerance,
            "residual": result.residual,
            "holds": result.holds,
        }
    if args.trajectory:
        dump_trajectory(simulate_trajectory(model, policy, args.x0, args.horizon, args.seed), args.trajectory)
        logger.info(f"💾 Trajectory written to {args.trajectory}")
    emit(document, args.out)
    return 0


def cmd_catalog(args) -> int:
    if args.list or not args.name:
        sys.stdout.write("\n".join(CATALOG) + "\n")
        return 0
    params = {}
    for item in args.param:
        key, sep, value = item.partition("=")
        if not sep:
            raise ModelError(f"--param expects key=value, got {item!r}")
        params[key] = value
    model = build_model(args.name, params)
    if args.out:
        save_model(model, args.out)
    else:
        sys.stdout.write(dumps(model_to_dict(model)))
    return 0


def cmd_report(args) -> int:
    doc = read_document(args.input)
    if args.format == "json":
        sys.stdout.write(dumps(doc))
    elif "checks" in doc:
        sys.stdout.write(VerificationReport.from_dict(doc).to_table())
    elif "trace" in doc:
        sys.stdout.write(diagnostics_table(VanishDiagnostics.from_dict(doc)))
    else:
        sys.stdout.write(dumps(doc))
    return 0


def cmd_serve(args) -> int:
    from api.server import serve

    serve(args.host, args.port)
    return 0


# ----------------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mdp", description="Vanishing-discount toolkit for average-cost MDPs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="discounted solve: v_alpha, m_alpha, u_alpha")
    p.add_argument("--model", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--tol", type=float, default=MDP_SOLVER_TOL)
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("vanish", help="run the vanishing-discount pipeline")
    p.add_argument("--model", required=True)
    p.add_argument("--schedule", default=MDP_DEFAULT_SCHEDULE)
    p.add_argument("--construction", choices=("pointwise", "weak"), default="pointwise")
    p.add_argument("--tol", type=float, default=MDP_SOLVER_TOL)
    p.add_argument("--astar-tol", type=float)
    p.add_argument("--use-lower", action="store_true", help="use w_lower_seq as the A*(x) reference")
    p.add_argument("--window", type=int, help="tail window length")
    p.add_argument("--radius-floor", type=float)
    p.add_argument("--refine", action="store_true", help="estimate w_lower/w_upper over several schedules")
    p.add_argument("--out", required=True)
    p.add_argument("--policy-out")
    p.add_argument("--workers", type=int, default=MDP_THREADS)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_vanish)

    p = sub.add_parser("verify", help="run verification checks")
    p.add_argument("--model", required=True)
    p.add_argument("--diagnostics", required=True)
    p.add_argument("--checks", help=f"comma-separated subset of: {', '.join(CHECKS)}")
    p.add_argument("--tol", type=float)
    p.add_argument("--policy")
    p.add_argument("--k-list", help="comma-separated increasing levels for the integrability check")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo average cost of a policy")
    p.add_argument("--model", required=True)
    p.add_argument("--policy", required=True)
    p.add_argument("--x0", type=int, default=0)
    p.add_argument("--horizon", type=int, default=10000)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tauberian", action="store_true")
    p.add_argument("--schedule", default=MDP_DEFAULT_SCHEDULE)
    p.add_argument("--trajectory", help="dump the first replication as a step log")
    p.add_argument("--workers", type=int, default=MDP_THREADS)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("catalog", help="build a catalog model")
    p.add_argument("name", nargs="?")
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--list", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("report", help="render a saved report or diagnostics file")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="start the report API")
    p.add_argument("--host", default=MDP_API_HOST)
    p.add_argument("--port", type=int, default=MDP_API_PORT)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MdpError as e:
        logger.error(f"❌ {e}")
        logger.debug(f"{type(e).__name__} converted to exit code {e.exit_code}", exc_info=True)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
