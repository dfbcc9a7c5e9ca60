"""Command-line entry point wiring traces, policies, engines, oracle, metrics.

Subcommands:

* ``gen``      write a synthetic trace file
* ``analyze``  run one engine over a trace; exit 0 = no race, 1 = races, 2 = error
* ``diff``     run all engines plus the oracle on identical marks and report
               the first divergence, or EQUIVALENT
* ``bench``    one CSV row of counters per (engine, trace, rate, seed)
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional

from . import metrics as metrics_mod
from . import oracle
from .engines import ENGINE_TOKENS, create_engine
from .history import EXTENDED, SAMPLED_ONLY, render_reports
from .trace import (
    GenConfig,
    SamplingPolicy,
    Trace,
    TraceError,
    apply_sampling,
    dump_trace,
    generate_trace,
    load_trace,
    serialize_trace,
)

DEFAULT_RATES = (0.003, 0.03, 0.1, 1.0)


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _policy(args) -> SamplingPolicy:
    if args.rate is None:
        return SamplingPolicy.premarked()
    return SamplingPolicy.bernoulli(args.rate, args.seed)


def cmd_gen(args) -> int:
    cfg = GenConfig(
        threads=args.threads,
        locks=args.locks,
        vars=args.vars,
        events=args.events,
        p_sync=args.p_sync,
        contention=args.contention,
        accesses_per_cs=args.accesses_per_cs,
    )
    tr = generate_trace(cfg, args.seed)
    if args.out is None or args.out == "-":
        sys.stdout.write(serialize_trace(tr))
    else:
        dump_trace(tr, args.out)
    accesses = sum(1 for e in tr.events if e.is_access)
    print(
        f"generated {len(tr)} events: {tr.num_threads} threads, "
        f"{tr.num_locks} locks, {tr.num_vars} vars, {accesses} accesses",
        file=sys.stderr,
    )
    return 0


def cmd_analyze(args) -> int:
    tr = apply_sampling(load_trace(args.trace), _policy(args))
    engine = create_engine(
        args.engine, tr, mode=args.mode, local_epoch_opt=args.local_epoch_opt == "on"
    )
    reports = engine.run(tr)
    _write(args.out_races, render_reports(reports, tr.var_names))
    labels = {
        "engine": args.engine,
        "trace": args.trace,
        "rate": "" if args.rate is None else args.rate,
        "seed": args.seed,
    }
    _write(args.out_metrics, metrics_mod.emit(engine.metrics, args.format, labels))
    return 1 if reports else 0


def _run_all(tr: Trace, mode: str):
    """Run the engine family on identical marks, collecting per-event snapshots."""
    runs: Dict[str, dict] = {}
    specs = [
        ("djitp", {}),
        ("sampling", {}),
        ("uclock", {}),
        ("orderedlist", {"local_epoch_opt": True}),
        ("orderedlist-noopt", {"local_epoch_opt": False}),
    ]
    for label, extra in specs:
        token = "orderedlist" if label.startswith("orderedlist") else label
        snaps: List[List[int]] = []
        engine = create_engine(
            token, tr, mode=mode, on_event=lambda ev, eff, s=snaps: s.append(eff), **extra
        )
        engine.run(tr)
        runs[label] = {
            "engine": engine,
            "racy": engine.racy_set(),
            "snapshots": snaps,
        }
    return runs


def diff_report(tr: Trace, mode: str) -> dict:
    """Compare all engines against each other and the oracle; machine-readable."""
    runs = _run_all(tr, mode)
    tables = oracle.declarative_timestamps(tr)
    oracle_racy = oracle.racy_events(tr, mode)
    oracle_full = oracle.racy_events_full(tr)

    sampling_family = ["sampling", "uclock", "orderedlist", "orderedlist-noopt"]
    for label in sampling_family:
        got = runs[label]["racy"]
        if got != oracle_racy:
            return {
                "verdict": "DIVERGENT",
                "field": "racy-set",
                "engine": label,
                "only_engine": sorted(got - oracle_racy),
                "only_oracle": sorted(oracle_racy - got),
            }
    if runs["djitp"]["racy"] != oracle_full:
        got = runs["djitp"]["racy"]
        return {
            "verdict": "DIVERGENT",
            "field": "racy-set",
            "engine": "djitp",
            "only_engine": sorted(got - oracle_full),
            "only_oracle": sorted(oracle_full - got),
        }
    for pos, ev in enumerate(tr.events):
        expect = tables.ct_smp_effective(ev.index, ev.thread)
        for label in sampling_family:
            got = runs[label]["snapshots"][pos]
            if got != expect:
                return {
                    "verdict": "DIVERGENT",
                    "field": "snapshot",
                    "engine": label,
                    "event_index": ev.index,
                    "engine_value": got,
                    "oracle_value": expect,
                }
        got = runs["djitp"]["snapshots"][pos]
        if got != tables.ct_ft[pos]:
            return {
                "verdict": "DIVERGENT",
                "field": "snapshot",
                "engine": "djitp",
                "event_index": ev.index,
                "engine_value": got,
                "oracle_value": tables.ct_ft[pos],
            }
    return {"verdict": "EQUIVALENT", "races": sorted(oracle_racy)}


def cmd_diff(args) -> int:
    tr = apply_sampling(load_trace(args.trace), _policy(args))
    report = diff_report(tr, args.mode)
    _write(args.out, json.dumps(report, sort_keys=False) + "\n")
    return 0 if report["verdict"] == "EQUIVALENT" else 1


def cmd_bench(args) -> int:
    traces: List[tuple] = []
    if args.trace:
        for path in args.trace:
            traces.append((path, load_trace(path)))
    else:
        cfg = GenConfig(
            threads=args.threads,
            locks=args.locks,
            vars=args.vars,
            events=args.events,
            p_sync=args.p_sync,
            contention=args.contention,
            accesses_per_cs=args.accesses_per_cs,
        )
        for i in range(args.gen_count):
            traces.append((f"gen-{i}", generate_trace(cfg, args.seed + i)))
    rates = [float(r) for r in args.rates.split(",")] if args.rates else list(DEFAULT_RATES)
    rows = []
    for name, tr in traces:
        for rate in rates:
            marked = apply_sampling(tr, SamplingPolicy.bernoulli(rate, args.seed))
            for token in ENGINE_TOKENS:
                engine = create_engine(
                    token,
                    marked,
                    mode=args.mode,
                    local_epoch_opt=args.local_epoch_opt == "on",
                )
                engine.run(marked)
                labels = {"engine": token, "trace": name, "rate": rate, "seed": args.seed}
                rows.append(engine.metrics.as_dict(labels))
    _write(args.out, metrics_mod.emit_csv_rows(rows))
    return 0


def _add_common_analysis_flags(p) -> None:
    p.add_argument("--trace", required=True, help="trace file path")
    p.add_argument("--rate", type=float, default=None,
                   help="Bernoulli sampling rate; omit to keep the file's marks")
    p.add_argument("--seed", type=int, default=0, help="sampling seed")
    p.add_argument("--mode", choices=[SAMPLED_ONLY, EXTENDED], default=SAMPLED_ONLY)
    p.add_argument("--local-epoch-opt", choices=["on", "off"], default="on")


def _add_gen_flags(p, required: bool) -> None:
    p.add_argument("--threads", type=int, required=required, default=None if required else 4)
    p.add_argument("--locks", type=int, required=required, default=None if required else 4)
    p.add_argument("--vars", type=int, required=required, default=None if required else 4)
    p.add_argument("--events", type=int, required=required, default=None if required else 400)
    p.add_argument("--p-sync", dest="p_sync", type=float, default=0.3)
    p.add_argument("--contention", type=float, default=0.0)
    p.add_argument("--accesses-per-cs", dest="accesses_per_cs", type=float, default=2.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="racelab")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a synthetic trace")
    _add_gen_flags(p_gen, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default="-")
    p_gen.set_defaults(func=cmd_gen)

    p_an = sub.add_parser("analyze", help="run one engine over a trace")
    _add_common_analysis_flags(p_an)
    p_an.add_argument("--engine", choices=list(ENGINE_TOKENS), required=True)
    p_an.add_argument("--out-races", default="-")
    p_an.add_argument("--out-metrics", default="-")
    p_an.add_argument("--format", choices=["json", "csv"], default="json")
    p_an.set_defaults(func=cmd_analyze)

    p_diff = sub.add_parser("diff", help="differential run of all engines vs oracle")
    _add_common_analysis_flags(p_diff)
    p_diff.add_argument("--out", default="-")
    p_diff.set_defaults(func=cmd_diff)

    p_bench = sub.add_parser("bench", help="counter sweep over engines and rates")
    p_bench.add_argument("--trace", action="append", default=None,
                         help="trace file; repeatable (omit to generate traces)")
    p_bench.add_argument("--rates", default=None,
                         help="comma-separated rates (default 0.003,0.03,0.1,1.0)")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--mode", choices=[SAMPLED_ONLY, EXTENDED], default=SAMPLED_ONLY)
    p_bench.add_argument("--local-epoch-opt", choices=["on", "off"], default="on")
    p_bench.add_argument("--gen-count", type=int, default=1)
    _add_gen_flags(p_bench, required=False)
    p_bench.add_argument("--out", default="-")
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (TraceError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
