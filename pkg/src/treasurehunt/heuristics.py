"""Time-adaptive feature-selection heuristics for passive classification.

Each heuristic maps a time allowance to the number of top-ranked features to
feed into the measurement model.  Selection is one sort plus one linear scan;
no subset enumeration ever happens.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .bayes import BayesNet, log_odds, map_class, prior_log_odds, prob_gain


class HeuristicId(str, enum.Enum):
    PROBGAIN = "probgain"
    LOGODDS = "logodds"
    INFOFREE = "infofree"
    BAYES_ALL = "bayes_all"


@dataclass(frozen=True)
class TimePressureConfig:
    """Decision deadline and integration-time parameters, in milliseconds."""

    t_T: float
    t_c: float = 100.0
    lam: float = 400.0

    def __post_init__(self) -> None:
        if self.t_T <= 0 or self.t_c <= 0 or self.lam <= 0:
            raise ValueError("t_T, t_c and lambda must all be positive")


@dataclass
class OpCounter:
    """Counts sort-key evaluations and comparisons for work-bound checks."""

    key_evals: int = 0
    comparisons: int = 0

    @property
    def total(self) -> int:
        return self.key_evals + self.comparisons


class _CountedKey:
    """Sort key that reports every comparison to an OpCounter."""

    __slots__ = ("key", "ops")

    def __init__(self, key, ops: OpCounter):
        self.key = key
        self.ops = ops

    def __lt__(self, other: "_CountedKey") -> bool:
        self.ops.comparisons += 1
        return self.key < other.key


@dataclass(frozen=True)
class RankedFeatures:
    """Feature indices sorted by a nonincreasing information-value key.

    ``values`` holds the sort payload in rank order: probability gains sort
    by signed value, log-odds sort by magnitude but keep their sign, so no
    single monotonicity invariant applies here beyond the permutation check.
    """

    order: tuple[int, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError("order must be a permutation")

    def __len__(self) -> int:
        return len(self.order)


def gamma(t_T: float, lam: float) -> float:
    """Time-pressure discount exp(-lambda / t_T); increasing in t_T."""
    if t_T <= 0 or lam <= 0:
        raise ValueError("t_T and lambda must be positive")
    return math.exp(-lam / t_T)


def _rank(keys: list[float], ops: OpCounter | None) -> RankedFeatures:
    # Stable descending sort; ties keep the original (lower) feature index.
    if ops is None:
        order = sorted(range(len(keys)), key=lambda j: -keys[j])
    else:
        counter = ops
        order = sorted(range(len(keys)),
                       key=lambda j: _CountedKey(-keys[j], counter))
    return RankedFeatures(tuple(order), tuple(keys[j] for j in order))


def rank_by_prob_gain(net: BayesNet, observation: list[int],
                      ops: OpCounter | None = None) -> RankedFeatures:
    """Rank features of a full observation by probability gain, descending."""
    keys = []
    for l, x in enumerate(observation):
        keys.append(prob_gain(net, l, x))
        if ops is not None:
            ops.key_evals += 1
    return _rank(keys, ops)


def rank_by_abs_log_odds(net: BayesNet, observation: list[int],
                         ops: OpCounter | None = None) -> RankedFeatures:
    """Rank features by |log-odds|, keeping the signed values as sort payload.

    The returned ``values`` are the signed log-odds in |value|-descending
    order, since the LogOdds objective sums signed contributions.
    """
    signed = []
    for l, x in enumerate(observation):
        signed.append(log_odds(net, l, x))
        if ops is not None:
            ops.key_evals += 1
    if ops is None:
        order = sorted(range(len(signed)), key=lambda j: -abs(signed[j]))
    else:
        counter = ops
        order = sorted(range(len(signed)),
                       key=lambda j: _CountedKey(-abs(signed[j]), counter))
    values = tuple(signed[j] for j in order)
    return RankedFeatures(tuple(order), values)


def h_probgain(cfg: TimePressureConfig, ranked: RankedFeatures,
               ops: OpCounter | None = None) -> int:
    """Prefix length maximizing gamma^i * sum of the i best gains.

    Ties break toward fewer features.  An all-zero ranking (uninformative
    stimulus) returns one feature.
    """
    if len(ranked) == 0:
        raise ValueError("ranking must be nonempty")
    if any(v < 0 for v in ranked.values):
        raise ValueError("probability-gain ranking requires nonnegative values")
    g = gamma(cfg.t_T, cfg.lam)
    best_i, best_score = 1, -math.inf
    running = 0.0
    discount = 1.0
    for i, v in enumerate(ranked.values, start=1):
        running += v
        discount *= g
        score = discount * running
        if ops is not None:
            ops.comparisons += 1
        if score > best_score:
            best_i, best_score = i, score
    return best_i


def h_logodds(cfg: TimePressureConfig, v0: float, ranked: RankedFeatures,
              ops: OpCounter | None = None) -> int:
    """Prefix length maximizing gamma^i * |v0 + signed log-odds prefix sum|."""
    if len(ranked) == 0:
        raise ValueError("ranking must be nonempty")
    g = gamma(cfg.t_T, cfg.lam)
    best_i, best_score = 1, -math.inf
    running = v0
    discount = 1.0
    for i, v in enumerate(ranked.values, start=1):
        running += v
        discount *= g
        score = discount * abs(running)
        if ops is not None:
            ops.comparisons += 1
        if score > best_score:
            best_i, best_score = i, score
    return best_i


def h_infofree(cfg: TimePressureConfig, p: int) -> int:
    """ceil(p * exp(-lambda / t_T)): comparison-free feature count."""
    if p <= 0:
        raise ValueError("p must be >= 1")
    return math.ceil(p * gamma(cfg.t_T, cfg.lam))


def classify_under_pressure(net: BayesNet, observation: list[int],
                            cfg: TimePressureConfig,
                            heuristic: HeuristicId | str,
                            ops: OpCounter | None = None) -> tuple[int, int]:
    """Select a feature subset under time pressure and classify with it.

    Returns (MAP class over the selected features, number of features used).
    """
    heuristic = HeuristicId(heuristic)
    p = len(observation)
    if p != net.n_features:
        raise ValueError("observation must cover every feature")

    if heuristic is HeuristicId.BAYES_ALL:
        ev = dict(enumerate(observation))
        return map_class(net, ev), p

    if heuristic is HeuristicId.PROBGAIN:
        ranked = rank_by_prob_gain(net, observation, ops)
        if any(v < 0 for v in ranked.values):
            # Negative gains can occur with skewed priors; they never belong
            # in a frugal prefix, so clamp them out of the objective.
            ranked = RankedFeatures(ranked.order,
                                    tuple(max(v, 0.0) for v in ranked.values))
        count = h_probgain(cfg, ranked, ops)
    elif heuristic is HeuristicId.LOGODDS:
        ranked = rank_by_abs_log_odds(net, observation, ops)
        count = h_logodds(cfg, prior_log_odds(net), ranked, ops)
    elif heuristic is HeuristicId.INFOFREE:
        ranked = rank_by_prob_gain(net, observation, ops)
        count = min(h_infofree(cfg, p), p)
    else:  # pragma: no cover
        raise ValueError(f"unknown heuristic {heuristic}")

    chosen = ranked.order[:count]
    ev = {l: observation[l] for l in chosen}
    return map_class(net, ev), count
