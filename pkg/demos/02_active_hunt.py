"""Active treasure hunt: exploration strategies head to head.

Runs the benchmark matrix on one workspace and prints per-strategy means of
the information objective and the efficiency etas.

    python3 demos/02_active_hunt.py
"""

import treasurehunt as th


def main() -> None:
    split = th.ingest_car_eval(th.bundled_car_csv())
    net = th.train_net(split.train)
    pressure = th.PressureConfig(horizon=8000, budget=21, fog_radius=1.5)
    strategies = ["adaptive_switch", "forward_explore", "wall_follow",
                  "coverage", "random_walk"]
    records = th.run_matrix(["workspaceA"], [7], strategies,
                            list(range(5)), net, pressure)
    print(f"workspaceA, 7 targets, fog 1.5 m, budget 21, 5 seeds\n")
    print(f"{'strategy':<16} {'V':>8} {'eta_visit':>10} {'eta_info':>9} "
          f"{'visited':>8} {'D':>8}")
    for name, rows in th.summarize(records).items():
        print(f"{name:<16} {rows['objective']:>8.3f} "
              f"{rows['eta_visit']:>10.4f} {rows['eta_info']:>9.4f} "
              f"{rows['visited']:>8.2f} {rows['distance']:>8.1f}")


if __name__ == "__main__":
    main()
