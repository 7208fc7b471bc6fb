import numpy as np
import pytest

import treasurehunt as th


@pytest.fixture(scope="module")
def run_log(small_net):
    ws = th.sample_scenario("human10x10", 4, small_net, seed=11)
    pr = th.PressureConfig(horizon=1500, budget=12)
    strategy = th.make_strategy("adaptive_switch", np.random.default_rng(11))
    return th.run(ws, small_net, pr, strategy, seed=11)


def test_metrics_recomputed_from_rows(run_log, small_net):
    m = th.compute_metrics(run_log)
    assert m.steps == len(run_log.rows)
    assert m.distance == pytest.approx(sum(r["d_inc"] for r in run_log.rows))
    assert m.info == pytest.approx(sum(r["b_inc"] for r in run_log.rows))
    assert m.cost == run_log.rows[-1]["J"]
    classifies = [r for r in run_log.rows if r["classify"] is not None]
    assert m.visited == len(classifies)
    assert 0 <= m.correct <= m.visited
    ever = set()
    for r in run_log.rows:
        ever.update(r["si"])
    assert m.info_indicator == pytest.approx(
        th.mutual_information(small_net) * len(ever))


def test_objective_weighting(run_log):
    m = th.compute_metrics(run_log)
    assert m.objective == pytest.approx(
        1.0 * m.info - 0.1 * m.distance - 0.2 * m.cost)
    doubled = th.compute_metrics(run_log, th.ObjectiveWeights(2.0, 0.1, 0.2))
    assert doubled.objective == pytest.approx(m.objective + m.info)


def test_ratios_guard_zero_denominators(small_net):
    ws = th.sample_scenario("human10x10", 2, small_net, seed=5)
    pr = th.PressureConfig(horizon=3, budget=5)

    class Idle:
        name = "idle"

        def decide(self, view):
            return th.StepDecision(th.ActionDecision("stop"))

    log = th.run(ws, small_net, pr, Idle(), seed=5)
    m = th.compute_metrics(log)
    assert m.distance == 0.0
    assert m.eta_path is None and m.eta_info is None
    assert m.eta_cost is None and m.eta_visit is None


def test_replay_yields_identical_metrics(run_log):
    assert th.compute_metrics(th.replay(run_log)) == \
        th.compute_metrics(run_log)


def test_to_json_obj_round_trips(run_log):
    import json
    json.dumps(th.compute_metrics(run_log).to_json_obj())
