"""Active benchmark harness: scenario sampling and strategy comparison grids."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .bayes import BayesNet
from .engine import AgentConfig, PressureConfig, TrajectoryLog, run
from .geometry import Pose, Target, WorkspaceSpec, in_free_space
from .layouts import load_layout
from .metrics import DEFAULT_WEIGHTS, Metrics, ObjectiveWeights, compute_metrics
from .strategies import make_strategy

MIN_TARGET_SEPARATION = 0.5
MIN_START_CLEARANCE = 1.0


def stable_seed(master: int, *parts) -> int:
    """Deterministic 63-bit seed from a master seed and cell labels."""
    text = ":".join([str(master)] + [str(p) for p in parts])
    digest = hashlib.sha256(text.encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def sample_targets(net: BayesNet, n: int,
                   rng: np.random.Generator) -> list[tuple[int, tuple[int, ...]]]:
    """Draw (class, feature vector) pairs from the net's joint."""
    out = []
    for _ in range(n):
        y = int(rng.choice(net.n_classes, p=net.prior))
        features = tuple(int(rng.choice(cpt.shape[0], p=cpt[:, y]))
                         for cpt in net.cpts)
        out.append((y, features))
    return out


def sample_scenario(layout: str | WorkspaceSpec, n_targets: int,
                    net: BayesNet, seed: int,
                    min_separation: float = MIN_TARGET_SEPARATION,
                    footprint: float = 0.2) -> WorkspaceSpec:
    """Place targets uniformly in free space, separated from start and peers."""
    base = load_layout(layout) if isinstance(layout, str) else layout
    rng = np.random.default_rng(seed)
    xmin, ymin, xmax, ymax = base.bounds
    draws = sample_targets(net, n_targets, rng)
    positions: list[tuple[float, float]] = []
    attempts = 0
    while len(positions) < n_targets:
        attempts += 1
        if attempts > 20000:
            raise RuntimeError(
                f"could not place {n_targets} targets in {base.name}")
        p = (float(rng.uniform(xmin, xmax)), float(rng.uniform(ymin, ymax)))
        if not in_free_space(Pose(p[0], p[1], 0.0), footprint, base):
            continue
        if math.dist(p, base.start.position) < MIN_START_CLEARANCE:
            continue
        if any(math.dist(p, q) < min_separation for q in positions):
            continue
        positions.append(p)
    targets = tuple(
        Target(id=i, position=pos, true_class=y, features=feats)
        for i, (pos, (y, feats)) in enumerate(zip(positions, draws)))
    return base.with_targets(targets)


@dataclass(frozen=True)
class RunRecord:
    layout: str
    n_targets: int
    strategy: str
    seed: int
    metrics: Metrics

    def to_json_obj(self) -> dict:
        return {"layout": self.layout, "n_targets": self.n_targets,
                "strategy": self.strategy, "seed": self.seed,
                "metrics": self.metrics.to_json_obj()}


def run_cell(layout: str, n_targets: int, strategy_name: str, seed: int,
             net: BayesNet, pressure: PressureConfig,
             agent: AgentConfig = AgentConfig(),
             weights: ObjectiveWeights = DEFAULT_WEIGHTS,
             master_seed: int = 0) -> tuple[RunRecord, TrajectoryLog]:
    """One benchmark run; all randomness derives from the cell coordinates."""
    scen_seed = stable_seed(master_seed, "scenario", layout, n_targets, seed)
    strat_seed = stable_seed(master_seed, "strategy", strategy_name,
                             layout, n_targets, seed)
    workspace = sample_scenario(layout, n_targets, net, scen_seed,
                                footprint=agent.footprint)
    if strategy_name == "planner":
        from .planners import PlannerStrategy
        strategy = PlannerStrategy(workspace, net, pressure.budget, weights)
    else:
        strategy = make_strategy(strategy_name,
                                 np.random.default_rng(strat_seed))
    log = run(workspace, net, pressure, strategy, seed=strat_seed, agent=agent)
    record = RunRecord(layout, n_targets, strategy_name, seed,
                       compute_metrics(log, weights))
    return record, log


def run_matrix(layouts: list[str], target_counts: list[int],
               strategies: list[str], seeds: list[int], net: BayesNet,
               pressure: PressureConfig, agent: AgentConfig = AgentConfig(),
               weights: ObjectiveWeights = DEFAULT_WEIGHTS,
               master_seed: int = 0) -> list[RunRecord]:
    records = []
    for layout in layouts:
        for n_targets in target_counts:
            for strategy in strategies:
                for seed in seeds:
                    record, _ = run_cell(layout, n_targets, strategy, seed,
                                         net, pressure, agent, weights,
                                         master_seed)
                    records.append(record)
    return records


def summarize(records: list[RunRecord]) -> dict[str, dict[str, float]]:
    """Per-strategy means of the headline metrics (None ratios skipped)."""
    by_strategy: dict[str, list[RunRecord]] = {}
    for r in records:
        by_strategy.setdefault(r.strategy, []).append(r)
    out = {}
    for name, rs in sorted(by_strategy.items()):
        fields = ("distance", "info", "cost", "visited", "correct",
                  "objective", "eta_info", "eta_cost", "eta_visit")
        row = {}
        for f in fields:
            vals = [getattr(r.metrics, f) for r in rs]
            vals = [v for v in vals if v is not None]
            row[f] = sum(vals) / len(vals) if vals else float("nan")
        row["runs"] = len(rs)
        out[name] = row
    return out
