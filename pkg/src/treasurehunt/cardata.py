"""Car-evaluation style dataset: schema, ingestion, and a bundled generator.

``ingest_car_eval`` consumes any CSV in the standard car-evaluation layout
(six categorical features plus one of four class labels).  Because this
environment cannot download the original UCI file, ``generate_car_dataset``
reconstructs a stand-in: the identical 1728-row full factorial over the same
six feature ranges, labeled by a hierarchical monotone rule tuned to the
published class profile (bundled profile: 1205/383/70/70 for
unacc/acc/good/vgood).  Pass a real ``car.data``-style file to run on the
original data instead.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass

import numpy as np

from .bayes import FeatureVar, LabeledDataset

CAR_FEATURES: tuple[FeatureVar, ...] = (
    FeatureVar("buying", ("vhigh", "high", "med", "low")),
    FeatureVar("maint", ("vhigh", "high", "med", "low")),
    FeatureVar("doors", ("2", "3", "4", "5more")),
    FeatureVar("persons", ("2", "4", "more")),
    FeatureVar("lug_boot", ("small", "med", "big")),
    FeatureVar("safety", ("low", "med", "high")),
)
CAR_CLASSES = ("unacc", "acc", "good", "vgood")
# Acceptability binarization: unacc -> y2, everything else -> y1.
BINARY_CLASS_VAR = FeatureVar("acceptability", ("acc", "unacc"))
TRAIN_SIZE = 1228
TEST_SIZE = 500


def _label(row: tuple[int, ...]) -> str:
    """Hierarchical monotone labeling rule for the bundled stand-in."""
    buying, maint, doors, persons, lug, safety = row
    if persons == 0 or safety == 0:
        return "unacc"
    price = buying + maint                 # 0..6, larger = cheaper
    comfort = min(doors, 2) + persons + lug
    if price >= 3:
        if safety == 2 and lug == 2 and comfort >= 4:
            return "vgood"
        if comfort >= 4 and lug == 2:
            return "good"
        if comfort >= 2:
            return "acc"
        return "unacc"
    if price >= 2 and comfort + (1 if safety == 2 else 0) >= 5:
        return "acc"
    return "unacc"


def generate_car_dataset() -> list[tuple[str, ...]]:
    """All 1728 factorial rows as (6 feature strings + class label)."""
    rows = []
    for combo in itertools.product(*(range(v.arity) for v in CAR_FEATURES)):
        values = tuple(var.values[i] for var, i in zip(CAR_FEATURES, combo))
        rows.append(values + (_label(combo),))
    return rows


def write_car_csv(path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([v.name for v in CAR_FEATURES] + ["class"])
        writer.writerows(generate_car_dataset())


@dataclass(frozen=True)
class CarSplit:
    train: LabeledDataset
    test: LabeledDataset


def _parse_rows(text: str) -> list[tuple[str, ...]]:
    reader = csv.reader(io.StringIO(text))
    rows = [tuple(cell.strip() for cell in row) for row in reader if row]
    if rows and rows[0][-1].lower() in {"class", "label"}:
        rows = rows[1:]  # optional header
    return rows


def ingest_car_eval(csv_text: str, seed: int = 0) -> CarSplit:
    """Parse car-evaluation CSV text, binarize labels, and split 1228/500.

    The split is a seeded uniform permutation; the first ``TRAIN_SIZE`` rows
    of the shuffle train, the next ``TEST_SIZE`` test.
    """
    raw = _parse_rows(csv_text)
    n_features = len(CAR_FEATURES)
    value_index = [
        {value: i for i, value in enumerate(var.values)} for var in CAR_FEATURES
    ]
    rows = np.empty((len(raw), n_features), dtype=int)
    labels = np.empty(len(raw), dtype=int)
    for r, record in enumerate(raw):
        if len(record) != n_features + 1:
            raise ValueError(f"row {r}: expected {n_features + 1} fields, "
                             f"got {len(record)}")
        for l, cell in enumerate(record[:-1]):
            try:
                rows[r, l] = value_index[l][cell]
            except KeyError:
                raise ValueError(
                    f"row {r}: unknown {CAR_FEATURES[l].name} value {cell!r}"
                ) from None
        if record[-1] not in CAR_CLASSES:
            raise ValueError(f"row {r}: unknown label {record[-1]!r}")
        labels[r] = 1 if record[-1] == "unacc" else 0
    if len(raw) < TRAIN_SIZE + TEST_SIZE:
        raise ValueError(
            f"need at least {TRAIN_SIZE + TEST_SIZE} rows, got {len(raw)}")
    perm = np.random.default_rng(seed).permutation(len(raw))
    train_idx = perm[:TRAIN_SIZE]
    test_idx = perm[TRAIN_SIZE:TRAIN_SIZE + TEST_SIZE]
    make = lambda idx: LabeledDataset(BINARY_CLASS_VAR, CAR_FEATURES,
                                      rows[idx], labels[idx])
    return CarSplit(train=make(train_idx), test=make(test_idx))


def bundled_car_csv() -> str:
    """The bundled stand-in dataset as CSV text (with header)."""
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow([v.name for v in CAR_FEATURES] + ["class"])
    writer.writerows(generate_car_dataset())
    return out.getvalue()
