"""Command-line entry point: ``eafrelay <command> ...``.

Exit codes: 0 success, 1 validation failure, 2 dominance violation,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import rates
from .errors import ArgumentError, CapExceeded, DominanceViolation
from .io import (
    fmt,
    file_digest,
    load_spec,
    report_document,
    save_spec,
    sweep_csv,
    write_report,
)
from .rates import DOMINANCE_TOL, FEAS_TOL, DominanceReport, RateResult
from .relay import assemble_joint, direct_link_distribution
from .search import (
    InstanceSpec,
    SearchConfig,
    evaluate_instances,
    hunt_region,
    optimize_inputs,
    parse_size_choices,
    sample_instance,
    summarize_dominance,
    sweep_q,
)
from .typicality import DEFAULT_CAP, SimConfig, simulate_step1

EXIT_OK, EXIT_INVALID, EXIT_VIOLATION, EXIT_CAP = 0, 1, 2, 3

TOLERANCES = {"feasibility": FEAS_TOL, "dominance": DOMINANCE_TOL}


def _result(r: RateResult) -> dict:
    return {"scheme": r.scheme.value, "rate": r.rate, "feasible": r.feasible, "binding": r.binding}


def _report_body(rep: DominanceReport) -> dict:
    return {
        "terms": rep.terms.as_dict(),
        "eaf": _result(rep.eaf),
        "joint": _result(rep.joint),
        "ts_eaf": _result(rep.ts_eaf),
        "region": rep.region.value,
        "q_opt": rep.q_opt,
        "matching_q": rep.matching_q,
        "tolerances": TOLERANCES,
    }


def _input_meta(path) -> dict:
    return {"input": {"path": str(path), "sha256": file_digest(path)}, "seed": None}


def _print_rates(rep: DominanceReport) -> None:
    t = rep.terms
    print("rate terms (bits)")
    for label, v in [
        ("I(X2;Y)", t.i_x2_y),
        ("I(X1;Y|X2)", t.i_x1_y_g_x2),
        ("I(Yh;Y1|X2,Y)", t.i_yh_y1_g_x2y),
        ("I(Yh;Y1|X1,X2,Y)", t.i_yh_y1_g_x1x2y),
        ("I(X1;Yh|X2,Y)", t.i_x1_yh_g_x2y),
        ("I(X1;Y,Yh|X2)", t.i_x1_yyh_g_x2),
    ]:
        print(f"  {label:<18} {fmt(v)}")
    print(f"region: {rep.region.value}")
    print(f"q_opt: {fmt(rep.q_opt)}")
    if rep.matching_q is not None:
        print(f"matching q: {fmt(rep.matching_q)}")
    print("scheme   reported  rate            feasible  binding")
    for name, r in [("EAF", rep.eaf), ("JOINT", rep.joint), ("TS_EAF", rep.ts_eaf)]:
        print(f"{name:<8} {r.scheme.value:<9} {fmt(r.rate):<15} {str(r.feasible):<9} {r.binding}")


def cmd_rates(args) -> int:
    spec = load_spec(args.input)
    rep = rates.dominance_report(assemble_joint(spec.channel, spec.inputs, spec.quantizer))
    _print_rates(rep)
    if args.out:
        write_report(args.out, report_document("rates", _report_body(rep), **_input_meta(args.input)))
    return EXIT_OK


def cmd_sweep_q(args) -> int:
    spec = load_spec(args.input)
    sw = sweep_q(assemble_joint(spec.channel, spec.inputs, spec.quantizer), args.steps)
    text = sweep_csv(sw)
    if args.out:
        Path(args.out).write_text(text)
        print(f"{len(sw.rows)} rows, q_opt = {fmt(sw.q_opt)}"
              + (f", matching q = {fmt(sw.matching_q)}" if sw.matching_q is not None else "")
              + f", max |closed form - recomputed| = {sw.max_cross_check_gap():.3e}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_dominance(args) -> int:
    if args.trials < 1:
        raise ArgumentError("--trials must be at least 1")
    choices = parse_size_choices(args.sizes)
    outcomes = evaluate_instances(args.seed, args.trials, choices, workers=args.workers)
    s = summarize_dominance(outcomes, args.seed)
    c = s.counts
    print(f"trials={s.trials} violations={s.violations} EAF_FEASIBLE={c['EAF_FEASIBLE']} "
          f"JOINT_ONLY={c['JOINT_ONLY']} INFEASIBLE={c['INFEASIBLE']} "
          f"max_joint_minus_ts={s.max_joint_gap:.3e} worst_seed={s.worst_seed}")
    if args.out:
        body = {
            "sizes": args.sizes, "trials": s.trials, "counts": s.counts, "violations": s.violations,
            "max_joint_minus_ts_eaf": s.max_joint_gap, "max_eaf_minus_ts_eaf": s.max_eaf_gap,
            "worst_seed": s.worst_seed, "worst_sizes": list(s.worst_sizes), "tolerances": TOLERANCES,
        }
        write_report(args.out, report_document("dominance", body, seed=args.seed))
    return EXIT_VIOLATION if s.violations else EXIT_OK


def cmd_hunt(args) -> int:
    choices = parse_size_choices(args.sizes)
    if any(len(c) != 1 for c in choices):
        raise ArgumentError("hunt needs fixed sizes, not ranges")
    sizes = tuple(c[0] for c in choices)
    res = hunt_region(sizes, args.max_seeds)
    spec_dir = args.spec_dir or (Path(args.out).with_suffix("").as_posix() + "_specs" if args.out else None)
    files = []
    if spec_dir and res.found:
        Path(spec_dir).mkdir(parents=True, exist_ok=True)
        for spec in res.found:
            p = Path(spec_dir) / f"seed{spec.seed}.json"
            save_spec(p, *sample_instance(spec))
            files.append(p.name)
    c = res.counts
    print(f"scanned={res.scanned} found={len(res.found)} EAF_FEASIBLE={c['EAF_FEASIBLE']} "
          f"JOINT_ONLY={c['JOINT_ONLY']} INFEASIBLE={c['INFEASIBLE']}")
    if args.out:
        body = {
            "sizes": list(sizes), "scanned": res.scanned, "counts": res.counts,
            "found": [{"seed": s.seed, "sizes": list(s.sizes)} for s in res.found], "spec_files": files,
        }
        write_report(args.out, report_document("hunt", body, seed=None))
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec = load_spec(args.input)
    cfg = SimConfig(n=args.n, r0=args.r0, epsilon=args.epsilon, trials=args.trials, seed=args.seed,
                    codebook_cap=args.codebook_cap, mode=args.mode)
    link = direct_link_distribution(spec.channel, spec.inputs)
    i_x2_y = rates.compute_rate_terms(assemble_joint(spec.channel, spec.inputs, spec.quantizer)).i_x2_y
    res = simulate_step1(link, spec.inputs.px2, cfg)
    lo, hi = res.wilson_interval
    print(f"I(X2;Y) = {fmt(i_x2_y)} bits, r0 = {fmt(args.r0)} ({'below' if args.r0 <= i_x2_y else 'above'} the bound)")
    print(f"codebook size {res.codebook_size}, n = {args.n}, epsilon = {fmt(args.epsilon)}, mode = {res.mode}")
    print(f"error {fmt(res.error_estimate)} (95% Wilson [{fmt(lo)}, {fmt(hi)}]), "
          f"{res.errors}/{res.trials} trials, ambiguous {res.ambiguity_count}")
    if args.out:
        body = {
            "i_x2_y": i_x2_y, "n": args.n, "r0": args.r0, "epsilon": args.epsilon, "mode": res.mode,
            "codebook_size": res.codebook_size, "trials": res.trials, "errors": res.errors,
            "error_estimate": res.error_estimate, "wilson_interval": list(res.wilson_interval),
            "ambiguity_count": res.ambiguity_count,
        }
        meta = _input_meta(args.input)
        meta["seed"] = args.seed
        write_report(args.out, report_document("simulate", body, **meta))
    return EXIT_OK


def cmd_optimize(args) -> int:
    spec = load_spec(args.input)
    cfg = SearchConfig(args.restarts, args.iterations, args.scale, args.tol, args.seed)
    yhat = args.yhat_size or spec.quantizer.yhat.size
    opt = optimize_inputs(spec.channel, yhat, cfg, args.objective)
    rep = rates.dominance_report(assemble_joint(spec.channel, opt.inputs, opt.quantizer))
    print(f"objective {args.objective}: best rate {fmt(opt.result.rate)} ({opt.result.scheme.value})")
    _print_rates(rep)
    if args.spec_out:
        save_spec(args.spec_out, spec.channel, opt.inputs, opt.quantizer, spec.tolerance)
    if args.out:
        body = {
            "objective": args.objective, "best": _result(opt.result), "restart_best": opt.restart_best,
            "search": {"restarts": cfg.restarts, "iterations": cfg.iterations,
                       "perturbation_scale": cfg.perturbation_scale, "improvement_tol": cfg.improvement_tol},
            "p_x1": opt.inputs.px1.mass.tolist(), "p_x2": opt.inputs.px2.mass.tolist(),
            "quantizer": opt.quantizer.law.mass.ravel().tolist(),
            "report": _report_body(rep),
        }
        meta = _input_meta(args.input)
        meta["seed"] = args.seed
        write_report(args.out, report_document("optimize", body, **meta))
    return EXIT_OK


def cmd_generate(args) -> int:
    choices = parse_size_choices(args.sizes)
    if any(len(c) != 1 for c in choices):
        raise ArgumentError("generate needs fixed sizes, not ranges")
    spec = InstanceSpec(tuple(c[0] for c in choices), args.seed)
    save_spec(args.out, *sample_instance(spec))
    print(f"wrote {args.out} (sizes {','.join(map(str, spec.sizes))}, seed {spec.seed})")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="eafrelay", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, input_=False):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        if input_:
            sp.add_argument("--input", required=True, help="channel-spec JSON file")
        sp.add_argument("--out", help="machine-readable output path")
        return sp

    add("rates", cmd_rates, "evaluate EAF, joint decoding and time-shared EAF", True)

    sp = add("sweep-q", cmd_sweep_q, "sweep the time-sharing fraction q (CSV)", True)
    sp.add_argument("--steps", type=int, default=100)

    sp = add("dominance", cmd_dominance, "seeded dominance sweep over random instances")
    sp.add_argument("--sizes", default="2", help="'2', '2,3,2,2,2' or ranges like '2-3'")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)

    sp = add("hunt", cmd_hunt, "scan seeds for joint-decoding-only instances")
    sp.add_argument("--sizes", default="2")
    sp.add_argument("--max-seeds", type=int, default=1000)
    sp.add_argument("--spec-dir", help="directory for found instances (default: <out>_specs)")

    sp = add("simulate", cmd_simulate, "Monte Carlo decoding of the relay index over X2 -> Y", True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r0", type=float, required=True)
    sp.add_argument("--epsilon", type=float, default=0.05)
    sp.add_argument("--trials", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--codebook-cap", type=int, default=DEFAULT_CAP)
    sp.add_argument("--mode", choices=["codebook", "ensemble"], default="codebook")

    sp = add("optimize", cmd_optimize, "hill-climb input and quantizer laws for a channel", True)
    sp.add_argument("--objective", choices=["EAF", "JOINT", "TS_EAF"], default="TS_EAF")
    sp.add_argument("--restarts", type=int, default=8)
    sp.add_argument("--iterations", type=int, default=300)
    sp.add_argument("--scale", type=float, default=0.3)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--yhat-size", type=int, default=0, help="quantizer alphabet size (default: as in input)")
    sp.add_argument("--spec-out", help="write the optimized laws as a channel-spec file")

    sp = sub.add_parser("generate", help="write a seeded random channel-spec file")
    sp.set_defaults(func=cmd_generate)
    sp.add_argument("--sizes", default="2")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except DominanceViolation as e:
        print(f"dominance violation: {e}", file=sys.stderr)
        return EXIT_VIOLATION
    except ArgumentError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
