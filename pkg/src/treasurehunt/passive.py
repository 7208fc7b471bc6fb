"""Passive classification benchmark: heuristics vs all-feature naive Bayes
under graded time pressure, with accuracy/efficiency/processing-time reports.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .bayes import BayesNet, LabeledDataset, learn_cpts
from .heuristics import HeuristicId, TimePressureConfig, classify_under_pressure

# Decision deadlines (ms) used by the feature-selection heuristics.
TP_LEVELS: dict[str, float] = {"no_tp": 2000.0, "moderate": 750.0, "intense": 500.0}
# Wall-clock envelope scaling relative to the measured all-feature baseline.
ENVELOPE_SCALE: dict[str, float] = {"no_tp": 1.0, "moderate": 0.75, "intense": 0.5}
BASELINE_SAFETY = 4.0


@dataclass(frozen=True)
class BenchRow:
    heuristic: str
    tp_level: str
    accuracy: float
    mean_features: float
    efficiency: float
    mean_time_s: float
    envelope_s: float
    within_envelope: bool


@dataclass(frozen=True)
class BenchReport:
    rows: tuple[BenchRow, ...]

    def row(self, heuristic: str, tp_level: str) -> BenchRow:
        for r in self.rows:
            if r.heuristic == heuristic and r.tp_level == tp_level:
                return r
        raise KeyError((heuristic, tp_level))

    def to_records(self) -> list[dict]:
        return [vars(r) | {} for r in self.rows]


def _measure_baseline(net: BayesNet, observations: np.ndarray) -> float:
    """Mean per-decision wall time of the all-feature classifier, seconds."""
    cfg = TimePressureConfig(t_T=TP_LEVELS["no_tp"])
    start = time.perf_counter()
    for obs in observations:
        classify_under_pressure(net, list(obs), cfg, HeuristicId.BAYES_ALL)
    return (time.perf_counter() - start) / len(observations)


def run_passive_bench(
    test: LabeledDataset,
    net: BayesNet,
    tp_levels: dict[str, float] | None = None,
    heuristics: list[HeuristicId] | None = None,
    lam: float = 400.0,
) -> BenchReport:
    """Accuracy, mean used features, efficiency and timing per condition.

    The processing-time envelope is the measured all-feature baseline times a
    safety factor (hardware-independent), scaled down per pressure level.
    """
    tp_levels = dict(tp_levels or TP_LEVELS)
    heuristics = list(heuristics or list(HeuristicId))
    observations = test.rows
    labels = test.labels
    baseline = _measure_baseline(net, observations)
    rows = []
    for heuristic in heuristics:
        for level, t_T in tp_levels.items():
            cfg = TimePressureConfig(t_T=t_T, lam=lam)
            correct = 0
            used_total = 0
            start = time.perf_counter()
            for obs, label in zip(observations, labels):
                decided, used = classify_under_pressure(
                    net, list(obs), cfg, heuristic)
                correct += int(decided == label)
                used_total += used
            elapsed = time.perf_counter() - start
            accuracy = correct / len(test)
            mean_features = used_total / len(test)
            mean_time = elapsed / len(test)
            envelope = baseline * BASELINE_SAFETY * ENVELOPE_SCALE[level]
            rows.append(BenchRow(
                heuristic=heuristic.value,
                tp_level=level,
                accuracy=accuracy,
                mean_features=mean_features,
                efficiency=accuracy / mean_features,
                mean_time_s=mean_time,
                envelope_s=envelope,
                within_envelope=mean_time <= envelope,
            ))
    return BenchReport(tuple(rows))


def train_net(train: LabeledDataset, smoothing: float = 1.0) -> BayesNet:
    """Laplace-smoothed CPTs with the equal-priors override."""
    return learn_cpts(train, smoothing=smoothing)
