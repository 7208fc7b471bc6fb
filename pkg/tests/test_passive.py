import json

import pytest

import treasurehunt as th
from treasurehunt.passive import TP_LEVELS


@pytest.fixture(scope="module")
def report(car_net, car_split):
    return th.run_passive_bench(car_split.test, car_net)


def test_train_net_matches_split(car_net):
    assert car_net.n_features == 6
    assert car_net.n_classes == 2
    # Uniform prior regardless of label frequencies.
    assert abs(car_net.prior[0] - 0.5) < 1e-12


def test_bench_report_shape(report, car_net):
    heuristics = {r.heuristic for r in report.rows}
    assert heuristics == {"probgain", "logodds", "infofree", "bayes_all"}
    levels = {r.tp_level for r in report.rows}
    assert levels == set(TP_LEVELS)
    for row in report.rows:
        assert 0.0 <= row.accuracy <= 1.0
        assert 1.0 <= row.mean_features <= car_net.n_features + 1e-9
        assert row.efficiency == row.accuracy / row.mean_features


def test_bench_pressure_reduces_feature_use(report):
    for heuristic in ("probgain", "logodds", "infofree"):
        used = [report.row(heuristic, lvl).mean_features
                for lvl in ("no_tp", "moderate", "intense")]
        assert used[0] > used[1] > used[2], (heuristic, used)


def test_bench_heuristics_competitive_under_moderate_pressure(report):
    baseline = report.row("bayes_all", "moderate").accuracy
    best = max(report.row(h, "moderate").accuracy
               for h in ("probgain", "logodds", "infofree"))
    assert best >= baseline - 0.01


def test_report_records_serializable(report):
    json.dumps(report.to_records())
