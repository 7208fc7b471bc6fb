"""Whose trajectory is this?  Model comparison by action log-likelihood.

Generates one run each from the switching policy and the forward-biased
policy, then scores both logs under both behavioral models.  The generator
should win on its own log.

    python3 demos/05_whose_trajectory.py
"""

import numpy as np

import treasurehunt as th


def main() -> None:
    split = th.ingest_car_eval(th.bundled_car_csv())
    net = th.train_net(split.train)
    pressure = th.PressureConfig(horizon=3000, budget=21, fog_radius=2.0)
    for generator in ("adaptive_switch", "forward_explore"):
        ws = th.sample_scenario("workspaceA", 7, net, seed=11)
        strategy = th.make_strategy(generator, np.random.default_rng(11))
        log = th.run(ws, net, pressure, strategy, seed=11)
        best, scores = th.best_model(log)
        print(f"generated by {generator}:")
        for model, score in scores.items():
            marker = " <-- best" if model == best else ""
            print(f"  loglik under {model:<16} {score:>10.1f}{marker}")
    print("\n(the same scorer runs on human play logs downloaded from the UI)")


if __name__ == "__main__":
    main()
