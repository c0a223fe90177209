"""Command-line interface.

Exit codes: 0 on success, 1 when a checked property fails or a run goes
wrong, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import io
import sys
import time
from typing import List, Optional

from . import bench as bench_mod
from . import cycles, dttc, lfmm, sim, solvers, verify
from .market import (
    ALLOCATION,
    MARKET,
    InstanceError,
    InvalidMatchingError,
    generate_instance,
    parse_instance,
    parse_matching,
    serialize_instance,
    serialize_matching,
)
from .oracles import BudgetExceeded, find_coalition, find_dominating

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _int_list(text: str) -> List[int]:
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the main output here instead of standard output")
    p.add_argument("--stats", help="write a JSON stats record here")
    p.add_argument("--trace", help="write the message trace here")
    p.add_argument("--verbose", "-v", action="store_true")
    p.add_argument("--round-cap", type=_positive, default=None)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="housemarket", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a random instance")
    g.add_argument("--kind", choices=(MARKET, ALLOCATION), required=True)
    g.add_argument("--agents", type=_positive, required=True)
    g.add_argument("--houses", type=_positive)
    g.add_argument("--list-len", type=_positive)

    s = sub.add_parser("solve", parents=[common], help="compute a matching")
    s.add_argument("--algo", choices=("sd", "ttc", "irpo", "maxpom"), required=True)
    s.add_argument("--order", type=_int_list, help="agent order for serial dictatorship")
    s.add_argument("instance")

    v = sub.add_parser("verify", parents=[common], help="check a property of a matching")
    v.add_argument("--property", choices=("ir", "pareto", "core"), required=True)
    v.add_argument("--matching", required=True)
    v.add_argument("--brute-force", action="store_true", help="use exhaustive search (small inputs only)")
    v.add_argument("instance")

    lf = sub.add_parser("lfmm", parents=[common], help="lex-first maximal matching of an ordered graph")
    lf.add_argument("graph")

    r = sub.add_parser("reduce", parents=[common], help="translate between problems")
    r.add_argument("--from", dest="source", choices=(ALLOCATION, "lfmm"), required=True)
    r.add_argument("--to", dest="target", choices=("lfmm", MARKET), required=True)
    r.add_argument("input")

    m = sub.add_parser("simulate", parents=[common], help="run a distributed protocol")
    m.add_argument("--algo", choices=("lv-cycles", "det-cycles", "dttc"), required=True)
    m.add_argument("--graph")
    m.add_argument("--instance")
    m.add_argument("--variant", choices=cycles.VARIANTS, default=cycles.LAS_VEGAS)

    b = sub.add_parser("bench", parents=[common], help="benchmark the distributed protocols")
    b.add_argument("--algo", action="append", choices=bench_mod.ALGORITHMS, required=True)
    b.add_argument("--sizes", type=_int_list, required=True)
    b.add_argument("--trials", type=_positive, default=1)
    b.add_argument("--jobs", type=_positive, default=1)
    return parser


def cmd_gen(args) -> int:
    houses = args.houses if args.houses is not None else args.agents
    if args.kind == MARKET and houses != args.agents:
        raise UsageError("a market needs as many houses as agents")
    bound = args.list_len if args.list_len is not None else houses
    _emit(args, serialize_instance(generate_instance(args.kind, args.agents, houses, bound, args.seed)))
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.instance))
    notes = []
    if args.algo == "sd":
        mu = solvers.serial_dictatorship(inst, args.order)
    elif args.algo == "ttc":
        mu, trace = solvers.solve_core_ttc(inst)
        notes = solvers.format_stage_trace(trace).splitlines()
    elif args.algo == "irpo":
        mu = solvers.solve_irpo_market(inst)
    else:
        if inst.kind != ALLOCATION:
            raise UsageError("maxpom needs an allocation instance")
        mu = solvers.solve_max_pareto(inst)
    if args.verbose:
        for line in notes:
            print(f"# {line}")
    _emit(args, serialize_matching(mu))
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = parse_instance(_read(args.instance))
    mu = parse_matching(_read(args.matching))
    prop = args.property
    if prop in ("ir", "core") and inst.kind != MARKET:
        raise UsageError(f"property {prop} needs a market instance")
    if prop == "ir":
        ok, lines = verify.verify_ir(inst, mu), []
        if not ok:
            lines = [f"agent {a} prefers its endowed house {inst.endowment[a]} to {mu[a]}"
                     for a in sorted(mu) if inst.prefers(a, inst.endowment[a], mu[a])]
    elif prop == "pareto":
        if args.brute_force:
            better = find_dominating(inst, mu)
            ok = better is None
            lines = [] if ok else ["dominated by:"] + serialize_matching(better).splitlines()
        else:
            verdict = verify.verify_pareto(inst, mu)
            ok = verdict.holds
            lines = [] if ok else [_improvement_line(verdict.witness)]
    else:
        if args.brute_force:
            verify.validate_matching(inst, mu, perfect=True)
            found = find_coalition(inst, mu)
            ok = found is None
            lines = [] if ok else ["coalition " + " ".join(map(str, found[0]))]
        else:
            verdict = verify.verify_core(inst, mu)
            ok, lines = verdict.holds, []
            if not ok:
                cert = verdict.witness
                arcs = " ".join(f"{a}->{cert.cycle[(i + 1) % len(cert.cycle)]}:{k}" for i, (a, k) in enumerate(zip(cert.cycle, cert.arc_kinds)))
                lines = ["coalition " + " ".join(map(str, cert.cycle)), "arcs " + arcs]
    print(f"{prop} {'holds' if ok else 'fails'}")
    for line in lines:
        print(line)
    return EXIT_OK if ok else EXIT_FAIL


def _improvement_line(imp: verify.Improvement) -> str:
    moves = " ".join(f"{a}->{h}" for a, h in zip(imp.agents, imp.houses))
    return f"improvement {imp.kind} {moves}"


def cmd_lfmm(args) -> int:
    g = lfmm.parse_graph(_read(args.graph))
    m = lfmm.greedy_lfmm(g)
    if args.verbose:
        for s, stage in enumerate(m.stages):
            print(f"# stage {s}: " + " ".join(f"({g.edges[e][0]},{g.edges[e][1]})" for e in stage))
    _emit(args, "".join(f"edge {u} {v}\n" for u, v in m.pairs(g)))
    return EXIT_OK


def cmd_reduce(args) -> int:
    text = _read(args.input)
    if args.source == ALLOCATION and args.target == "lfmm":
        inst = parse_instance(text)
        if inst.kind != ALLOCATION:
            raise UsageError("expected an allocation instance")
        _emit(args, lfmm.serialize_graph(lfmm.reduce_allocation_to_lfmm(inst).graph))
    elif args.source == "lfmm" and args.target == MARKET:
        inst, _ = lfmm.reduce_lfmm_to_market(lfmm.parse_graph(text))
        _emit(args, serialize_instance(inst))
    else:
        raise UsageError(f"no reduction from {args.source} to {args.target}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    trace = io.StringIO() if args.trace else None
    t = time.perf_counter()
    if args.algo == "dttc":
        if not args.instance:
            raise UsageError("dttc needs --instance")
        inst = parse_instance(_read(args.instance))
        res = dttc.run_distributed_ttc(inst, args.variant, args.seed, args.round_cap, trace, digest=True)
        wall = (time.perf_counter() - t) * 1000
        record = bench_mod.StatsRecord.from_sim(f"dttc-{args.variant}", inst.n_agents, args.seed, res.stats, wall, res.trace_digest)
        if args.verbose:
            for line in solvers.format_stage_trace(res.trace).splitlines():
                print(f"# {line}")
        text = serialize_matching(res.matching)
    else:
        if not args.graph:
            raise UsageError(f"{args.algo} needs --graph")
        g = cycles.parse_fgraph(_read(args.graph))
        variant = cycles.LAS_VEGAS if args.algo == "lv-cycles" else cycles.DETERMINISTIC
        seed = args.seed if variant == cycles.LAS_VEGAS else 0
        report, stats, digest = cycles.run_cycles(g, variant, seed, args.round_cap, trace, digest=True)
        wall = (time.perf_counter() - t) * 1000
        record = bench_mod.StatsRecord.from_sim(args.algo, g.n, seed, stats, wall, digest, treeHeight=report.tree_height)
        text = "".join(f"cycle {' '.join(map(str, c))} root {r}\n" for c, r in zip(report.cycles, report.roots))
    _emit(args, text)
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(trace.getvalue())
    if args.stats:
        with open(args.stats, "w") as fh:
            fh.write(record.to_json() + "\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    if any(s < 1 for s in args.sizes):
        raise UsageError("sizes must be positive")
    records = []
    sink = open(args.stats or args.out, "w") if (args.stats or args.out) else sys.stdout
    try:
        for rec in bench_mod.bench(args.algo, args.sizes, args.trials, args.seed, args.jobs):
            records.append(rec)
            sink.write(rec.to_json() + "\n")
            sink.flush()
    finally:
        if sink is not sys.stdout:
            sink.close()
    for line in bench_mod.summarize(records):
        print(line, file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "lfmm": cmd_lfmm,
    "reduce": cmd_reduce,
    "simulate": cmd_simulate,
    "bench": cmd_bench,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, InstanceError, InvalidMatchingError, ValueError, BudgetExceeded, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except sim.SimulationError as exc:
        print(f"simulation failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
