"""Naive-structure Bayesian measurement model with a fixed feature-reveal order.

The hypothesis variable is class-conditionally independent of each feature,
and features are revealed to the agent strictly in the order they appear in
``BayesNet.features``.  All information quantities are in bits; log-odds use
natural logarithms.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

PROB_TOL = 1e-12
LOG_ODDS_FLOOR = 1e-9  # applied inside log-odds only; CPTs stay un-floored

Evidence = Mapping[int, int]


class NonBinaryHypothesis(ValueError):
    """Log-odds quantities require a two-class hypothesis."""


@dataclass(frozen=True)
class FeatureVar:
    """A discrete variable with a named, ordered range."""

    name: str
    values: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.values) < 2:
            raise ValueError(f"{self.name}: arity must be >= 2")
        if len(set(self.values)) != len(self.values):
            raise ValueError(f"{self.name}: values must be distinct")

    @property
    def arity(self) -> int:
        return len(self.values)


def _check_distribution(p: np.ndarray, what: str) -> None:
    if np.any(p < 0):
        raise ValueError(f"{what}: negative entry")
    if abs(float(p.sum()) - 1.0) > PROB_TOL:
        raise ValueError(f"{what}: does not sum to 1 (sum={p.sum()!r})")


@dataclass(frozen=True)
class BayesNet:
    """Measurement model P(Y, X_1..X_n) with naive structure.

    ``cpts[l]`` has shape (arity_l, n_classes): rows index feature values,
    columns index classes, so ``cpts[l][x, y] = P(X_l = x | Y = y)``.
    Immutable after construction; safe to share across workers.
    """

    hypothesis: FeatureVar
    features: tuple[FeatureVar, ...]
    prior: np.ndarray
    cpts: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        prior = np.asarray(self.prior, dtype=float)
        prior.setflags(write=False)
        object.__setattr__(self, "prior", prior)
        if prior.shape != (self.hypothesis.arity,):
            raise ValueError("prior shape does not match hypothesis arity")
        _check_distribution(prior, "prior")
        cpts = tuple(np.asarray(t, dtype=float) for t in self.cpts)
        for t in cpts:
            t.setflags(write=False)
        object.__setattr__(self, "cpts", cpts)
        if len(cpts) != len(self.features):
            raise ValueError("one CPT required per feature")
        for var, table in zip(self.features, cpts):
            if table.shape != (var.arity, self.hypothesis.arity):
                raise ValueError(f"{var.name}: CPT shape {table.shape} invalid")
            if np.any(table < 0):
                raise ValueError(f"{var.name}: negative CPT entry")
            col_sums = table.sum(axis=0)
            if np.any(np.abs(col_sums - 1.0) > PROB_TOL):
                raise ValueError(f"{var.name}: CPT columns must sum to 1")

    @property
    def n_features(self) -> int:
        return len(self.features)

    @property
    def n_classes(self) -> int:
        return self.hypothesis.arity

    def to_json(self) -> str:
        doc = {
            "hypothesis": {"name": self.hypothesis.name,
                           "values": list(self.hypothesis.values)},
            "features": [{"name": f.name, "values": list(f.values)}
                         for f in self.features],
            "prior": self.prior.tolist(),
            "cpts": [t.tolist() for t in self.cpts],
        }
        return json.dumps(doc, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "BayesNet":
        doc = json.loads(text)
        return BayesNet(
            hypothesis=FeatureVar(doc["hypothesis"]["name"],
                                  tuple(doc["hypothesis"]["values"])),
            features=tuple(FeatureVar(f["name"], tuple(f["values"]))
                           for f in doc["features"]),
            prior=np.array(doc["prior"], dtype=float),
            cpts=tuple(np.array(t, dtype=float) for t in doc["cpts"]),
        )


@dataclass(frozen=True)
class LabeledDataset:
    """Rectangular categorical records with one class label per row.

    ``rows[r, l]`` is the value index of feature ``l`` in record ``r``;
    ``labels[r]`` is the class index.
    """

    class_var: FeatureVar
    feature_vars: tuple[FeatureVar, ...]
    rows: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        rows = np.asarray(self.rows, dtype=int)
        labels = np.asarray(self.labels, dtype=int)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", labels)
        if rows.ndim != 2 or rows.shape[1] != len(self.feature_vars):
            raise ValueError("rows must be (n_records, n_features)")
        if labels.shape != (rows.shape[0],):
            raise ValueError("one label per record required")
        for l, var in enumerate(self.feature_vars):
            if rows.shape[0] and (rows[:, l].min() < 0 or rows[:, l].max() >= var.arity):
                raise ValueError(f"{var.name}: value index out of range")
        if labels.size and (labels.min() < 0 or labels.max() >= self.class_var.arity):
            raise ValueError("label index out of range")

    def __len__(self) -> int:
        return int(self.rows.shape[0])


def learn_cpts(dataset: LabeledDataset, smoothing: float = 0.0) -> BayesNet:
    """Count-based CPT estimation with Laplace smoothing and a uniform prior.

    The prior is forced uniform over the classes regardless of the label
    frequencies, matching the equal-priors training condition.
    """
    if len(dataset) == 0:
        raise ValueError("empty dataset")
    if smoothing < 0:
        raise ValueError("smoothing must be >= 0")
    k = dataset.class_var.arity
    cpts = []
    for l, var in enumerate(dataset.feature_vars):
        counts = np.zeros((var.arity, k))
        np.add.at(counts, (dataset.rows[:, l], dataset.labels), 1.0)
        totals = counts.sum(axis=0)
        if smoothing == 0 and np.any(totals == 0):
            raise ValueError(f"{var.name}: class with no records needs smoothing > 0")
        table = (counts + smoothing) / (totals + smoothing * var.arity)
        cpts.append(table)
    prior = np.full(k, 1.0 / k)
    return BayesNet(dataset.class_var, dataset.feature_vars, prior, tuple(cpts))


def posterior(net: BayesNet, ev: Evidence) -> np.ndarray:
    """P(Y | evidence), proportional to prior times observed likelihoods."""
    p = net.prior.copy()
    for l, x in ev.items():
        var = net.features[l]
        if not 0 <= x < var.arity:
            raise ValueError(f"{var.name}: observed value {x} out of range")
        p *= net.cpts[l][x, :]
    total = p.sum()
    if total <= 0.0:
        # All-zero likelihood: fall back to the prior rather than dividing by 0.
        return net.prior.copy()
    return p / total


def map_class(net: BayesNet, ev: Evidence) -> int:
    """Maximum a-posteriori class; ties break to the lowest class index."""
    return int(np.argmax(posterior(net, ev)))


def entropy(p: Iterable[float]) -> float:
    """Shannon entropy in bits, with 0*log(0) = 0."""
    arr = np.asarray(list(p) if not isinstance(p, np.ndarray) else p, dtype=float)
    nz = arr[arr > 0]
    return float(-(nz * np.log2(nz)).sum())


def _assignments(net: BayesNet, subset: Sequence[int]):
    return itertools.product(*(range(net.features[l].arity) for l in subset))


def conditional_entropy(net: BayesNet, subset: Sequence[int]) -> float:
    """H(Y | X_subset) in bits, by enumeration over the subset's joint range."""
    subset = list(subset)
    if not subset:
        return entropy(net.prior)
    h = 0.0
    for values in _assignments(net, subset):
        ev = dict(zip(subset, values))
        p_joint = net.prior.copy()
        for l, x in ev.items():
            p_joint *= net.cpts[l][x, :]
        p_x = float(p_joint.sum())
        if p_x > 0:
            h += p_x * entropy(p_joint / p_x)
    return h


def mutual_information(net: BayesNet, subset: Sequence[int] | None = None) -> float:
    """I(Y; X_subset) = H(Y) - H(Y | X_subset), in bits; all features if omitted."""
    if subset is None:
        subset = range(net.n_features)
    return entropy(net.prior) - conditional_entropy(net, subset)


def expected_info_first_m(net: BayesNet, m: int) -> float:
    """Expected information value of revealing the first m features in order."""
    if not 0 <= m <= net.n_features:
        raise ValueError(f"m must be in [0, {net.n_features}]")
    return mutual_information(net, range(m))


def prob_gain(net: BayesNet, feature: int, value: int) -> float:
    """Increase of the MAP probability after observing one feature value."""
    post = posterior(net, {feature: value})
    return float(post.max() - net.prior.max())


def log_odds(net: BayesNet, feature: int, value: int) -> float:
    """ln P(x | y1) - ln P(x | y2) for a binary hypothesis."""
    if net.n_classes != 2:
        raise NonBinaryHypothesis("log odds require exactly two classes")
    table = net.cpts[feature]
    p1 = max(float(table[value, 0]), LOG_ODDS_FLOOR)
    p2 = max(float(table[value, 1]), LOG_ODDS_FLOOR)
    return float(np.log(p1) - np.log(p2))


def prior_log_odds(net: BayesNet) -> float:
    """ln P(y1) - ln P(y2) for a binary hypothesis."""
    if net.n_classes != 2:
        raise NonBinaryHypothesis("log odds require exactly two classes")
    p1 = max(float(net.prior[0]), LOG_ODDS_FLOOR)
    p2 = max(float(net.prior[1]), LOG_ODDS_FLOOR)
    return float(np.log(p1) - np.log(p2))


def random_net(rng: np.random.Generator, n_features: int,
               n_classes: int = 2, arity: int = 2,
               concentration: float = 1.0) -> BayesNet:
    """Random net with Dirichlet CPT columns; useful for fuzz tests and demos."""
    hypothesis = FeatureVar("Y", tuple(f"y{j + 1}" for j in range(n_classes)))
    features = tuple(
        FeatureVar(f"X{l + 1}", tuple(f"x{v + 1}" for v in range(arity)))
        for l in range(n_features))
    prior = rng.dirichlet(np.full(n_classes, concentration))
    # Guard the normalization tolerance after float round-trip.
    prior = prior / prior.sum()
    cpts = []
    for _ in range(n_features):
        cols = rng.dirichlet(np.full(arity, concentration), size=n_classes).T
        cpts.append(cols / cols.sum(axis=0, keepdims=True))
    return BayesNet(hypothesis, features, prior, tuple(cpts))
