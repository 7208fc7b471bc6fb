"""Command line entry points.

Subcommands: passive-bench, active-bench, plan, replay, loglik, serve.
An optional INI config file supplies per-subcommand defaults; explicit
command line flags win.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys

import numpy as np

from . import __version__
from .bayes import BayesNet
from .bench import run_cell, run_matrix, sample_scenario, stable_seed, summarize
from .cardata import bundled_car_csv, ingest_car_eval
from .engine import PressureConfig, TrajectoryLog, replay as replay_log
from .metrics import compute_metrics
from .passive import run_passive_bench, train_net
from .strategies import MODELS, STRATEGY_NAMES, action_loglik


def _apply_config(parser: argparse.ArgumentParser, section: str,
                  argv: list[str]) -> list[str]:
    """Use [section] of --config as parser defaults; returns remaining argv."""
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv)
    if known.config:
        cp = configparser.ConfigParser()
        with open(known.config) as fh:
            cp.read_file(fh)
        if cp.has_section(section):
            parser.set_defaults(**{k.replace("-", "_"): v
                                   for k, v in cp.items(section)})
    return argv


def _load_split(args):
    if args.data:
        with open(args.data) as fh:
            text = fh.read()
    else:
        text = bundled_car_csv()
    return ingest_car_eval(text, seed=int(args.split_seed))


def cmd_passive_bench(argv: list[str]) -> int:
    parser = argparse.ArgumentParser(prog="treasurehunt passive-bench")
    parser.add_argument("--config")
    parser.add_argument("--data", help="car-evaluation CSV; bundled if omitted")
    parser.add_argument("--split-seed", default=0)
    parser.add_argument("--out", help="write report rows as JSON")
    _apply_config(parser, "passive-bench", argv)
    args = parser.parse_args(argv)
    split = _load_split(args)
    net = train_net(split.train)
    report = run_passive_bench(split.test, net)
    header = f"{'heuristic':<10} {'pressure':<9} {'acc':>6} {'feats':>6} {'eff':>6}"
    print(header)
    for row in report.rows:
        print(f"{row.heuristic:<10} {row.tp_level:<9} {row.accuracy:>6.3f} "
              f"{row.mean_features:>6.2f} {row.efficiency:>6.3f}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report.to_records(), fh, indent=2, sort_keys=True)
    return 0


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in str(text).split(",") if t.strip()]


def cmd_active_bench(argv: list[str]) -> int:
    parser = argparse.ArgumentParser(prog="treasurehunt active-bench")
    parser.add_argument("--config")
    parser.add_argument("--layouts", default="workspaceA,workspaceB")
    parser.add_argument("--targets", default="7")
    parser.add_argument("--strategies",
                        default="adaptive_switch,forward_explore")
    parser.add_argument("--seeds", default="10",
                        help="count, or comma list of explicit seeds")
    parser.add_argument("--horizon", default="8000")
    parser.add_argument("--budget", default="60")
    parser.add_argument("--fog-radius", default="")
    parser.add_argument("--master-seed", default="0")
    parser.add_argument("--out", help="write run records as JSON")
    _apply_config(parser, "active-bench", argv)
    args = parser.parse_args(argv)
    for s in _csv_list(args.strategies):
        if s not in STRATEGY_NAMES + ("planner",):
            parser.error(f"unknown strategy {s!r}")
    seeds_spec = _csv_list(args.seeds)
    seeds = ([int(s) for s in seeds_spec] if len(seeds_spec) > 1
             else list(range(int(seeds_spec[0]))))
    net = train_net(ingest_car_eval(bundled_car_csv()).train)
    pressure = PressureConfig(
        horizon=int(args.horizon), budget=int(args.budget),
        fog_radius=float(args.fog_radius) if args.fog_radius else None)
    records = run_matrix(_csv_list(args.layouts),
                         [int(t) for t in _csv_list(args.targets)],
                         _csv_list(args.strategies), seeds, net, pressure,
                         master_seed=int(args.master_seed))
    for name, row in summarize(records).items():
        print(f"{name:<16} runs={row['runs']:<4.0f} D={row['distance']:8.2f} "
              f"B={row['info']:7.3f} J={row['cost']:6.2f} "
              f"visited={row['visited']:5.2f} V={row['objective']:8.3f}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump([r.to_json_obj() for r in records], fh,
                      indent=2, sort_keys=True)
    return 0


def cmd_plan(argv: list[str]) -> int:
    parser = argparse.ArgumentParser(prog="treasurehunt plan")
    parser.add_argument("--config")
    parser.add_argument("--layout", default="workspaceA")
    parser.add_argument("--targets", default="5")
    parser.add_argument("--budget", default="30")
    parser.add_argument("--seed", default="0")
    parser.add_argument("--roadmap", default="prm", choices=["prm", "cells"])
    parser.add_argument("--out")
    _apply_config(parser, "plan", argv)
    args = parser.parse_args(argv)
    from .planners import build_cell_graph, build_prm, plan_route
    net = train_net(ingest_car_eval(bundled_car_csv()).train)
    scen_seed = stable_seed(int(args.seed), "scenario", args.layout,
                            int(args.targets), 0)
    workspace = sample_scenario(args.layout, int(args.targets), net, scen_seed)
    roadmap = (build_prm(workspace, seed=int(args.seed))
               if args.roadmap == "prm" else build_cell_graph(workspace))
    plan = plan_route(workspace.start.position,
                      {t.id: t.position for t in workspace.targets},
                      net, int(args.budget), roadmap)
    doc = {"order": list(plan.order), "allocation": list(plan.allocation),
           "distance": plan.distance, "value": plan.value}
    print(json.dumps(doc, indent=2, sort_keys=True))
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
    return 0


def cmd_replay(argv: list[str]) -> int:
    parser = argparse.ArgumentParser(prog="treasurehunt replay")
    parser.add_argument("log", help="trajectory JSONL file")
    parser.add_argument("--out", help="write the replayed log here")
    args = parser.parse_args(argv)
    with open(args.log) as fh:
        original = TrajectoryLog.from_jsonl(fh.read())
    try:
        replayed = replay_log(original)
    except RuntimeError as exc:
        # A tampered or truncated log can request impossible decisions.
        print(f"replay identical: False (replay aborted: {exc})")
        return 1
    identical = replayed.to_jsonl() == original.to_jsonl()
    metrics = compute_metrics(replayed)
    print(f"replay identical: {identical}")
    print(json.dumps(metrics.to_json_obj(), indent=2, sort_keys=True))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(replayed.to_jsonl())
    return 0 if identical else 1


def cmd_loglik(argv: list[str]) -> int:
    parser = argparse.ArgumentParser(prog="treasurehunt loglik")
    parser.add_argument("log", help="trajectory JSONL file")
    parser.add_argument("--model", default="all",
                        choices=list(MODELS) + ["all"])
    args = parser.parse_args(argv)
    with open(args.log) as fh:
        log = TrajectoryLog.from_jsonl(fh.read())
    models = MODELS if args.model == "all" else (args.model,)
    scores = {m: action_loglik(log, m) for m in models}
    for m, s in scores.items():
        print(f"{m:<18} {s:.4f}")
    if len(scores) > 1:
        print(f"best: {max(scores, key=scores.get)}")
    return 0


def cmd_serve(argv: list[str]) -> int:
    parser = argparse.ArgumentParser(prog="treasurehunt serve")
    parser.add_argument("--config")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", default="8717")
    parser.add_argument("--stream-port", default="8718",
                        help="raw TCP port; empty to disable")
    _apply_config(parser, "serve", argv)
    args = parser.parse_args(argv)
    from .service import serve
    serve(args.host, int(args.port),
          int(args.stream_port) if str(args.stream_port) else None)
    return 0


COMMANDS = {
    "passive-bench": cmd_passive_bench,
    "active-bench": cmd_active_bench,
    "plan": cmd_plan,
    "replay": cmd_replay,
    "loglik": cmd_loglik,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] in ("-V", "--version"):
        print(__version__)
        return 0
    if not argv or argv[0] in ("-h", "--help") or argv[0] not in COMMANDS:
        names = ", ".join(COMMANDS)
        print(f"usage: treasurehunt <command> [options]\ncommands: {names}")
        return 0 if argv and argv[0] in ("-h", "--help") else 2
    return COMMANDS[argv[0]](argv[1:])


if __name__ == "__main__":
    sys.exit(main())
