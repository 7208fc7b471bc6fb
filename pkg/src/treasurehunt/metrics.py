"""Run metrics derived from a trajectory log.

All quantities are recomputed from the log rows, never trusted from live
engine state, so a replayed log yields identical numbers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .bayes import BayesNet, mutual_information
from .engine import TrajectoryLog


@dataclass(frozen=True)
class ObjectiveWeights:
    info: float = 1.0
    distance: float = 0.1
    cost: float = 0.2


DEFAULT_WEIGHTS = ObjectiveWeights()


@dataclass(frozen=True)
class Metrics:
    distance: float
    info: float            # cumulative expected-information increments, bits
    info_indicator: float  # full per-target information, counted once sensed
    cost: int              # measurements spent
    visited: int           # classify events
    correct: int
    steps: int
    objective: float
    eta_path: float | None      # 1 / distance
    eta_info: float | None      # info / distance
    eta_cost: float | None      # info / cost
    eta_visit: float | None     # visited / distance

    def to_json_obj(self) -> dict:
        return dict(vars(self))


def _ratio(num: float, den: float) -> float | None:
    return num / den if den > 0 else None


def compute_metrics(log: TrajectoryLog,
                    weights: ObjectiveWeights = DEFAULT_WEIGHTS) -> Metrics:
    net = BayesNet.from_json(json.dumps(log.header["net"]))
    full_info = mutual_information(net)
    workspace = log.header["workspace"]
    true_class = {t["id"]: t["true_class"] for t in workspace["targets"]}

    distance = 0.0
    info = 0.0
    cost = 0
    visited = 0
    correct = 0
    ever_sensed: set[int] = set()
    for row in log.rows:
        distance += row["d_inc"]
        info += row["b_inc"]
        cost = row["J"]
        ever_sensed.update(row["si"])
        if row["classify"] is not None:
            tid, y_hat = row["classify"]
            visited += 1
            correct += int(y_hat == true_class[tid])
    info_indicator = full_info * len(ever_sensed)
    objective = (weights.info * info - weights.distance * distance
                 - weights.cost * cost)
    return Metrics(
        distance=distance,
        info=info,
        info_indicator=info_indicator,
        cost=cost,
        visited=visited,
        correct=correct,
        steps=len(log.rows),
        objective=objective,
        eta_path=_ratio(1.0, distance),
        eta_info=_ratio(info, distance),
        eta_cost=_ratio(info, cost) if cost > 0 else None,
        eta_visit=_ratio(visited, distance),
    )
