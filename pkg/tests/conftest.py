from __future__ import annotations

import numpy as np
import pytest

import treasurehunt as th

CRITERION_RESULTS: dict[int, tuple[bool, str]] = {}


def record_criterion(number: int, passed: bool, detail: str) -> None:
    """Register an acceptance-criterion outcome for the summary block."""
    CRITERION_RESULTS[number] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not CRITERION_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERION_RESULTS):
        passed, detail = CRITERION_RESULTS[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"CRITERION {number:2d}: {status} — {detail}")


@pytest.fixture(scope="session")
def car_split():
    return th.ingest_car_eval(th.bundled_car_csv())


@pytest.fixture(scope="session")
def car_net(car_split):
    return th.train_net(car_split.train)


@pytest.fixture(scope="session")
def small_net():
    """A fixed 3-feature binary net with hand-checkable numbers."""
    hyp = th.FeatureVar("Y", ("a", "b"))
    feats = (th.FeatureVar("X1", ("0", "1")),
             th.FeatureVar("X2", ("0", "1")),
             th.FeatureVar("X3", ("0", "1", "2")))
    prior = np.array([0.6, 0.4])
    cpts = (np.array([[0.8, 0.3], [0.2, 0.7]]),
            np.array([[0.5, 0.5], [0.5, 0.5]]),
            np.array([[0.6, 0.1], [0.3, 0.3], [0.1, 0.6]]))
    return th.BayesNet(hyp, feats, prior, cpts)
