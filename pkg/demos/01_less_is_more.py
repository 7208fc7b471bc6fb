"""Passive classification under time pressure: fewer features, same accuracy.

Trains a naive Bayes net on the bundled car-evaluation split, then runs the
three frugal selection heuristics against the all-feature baseline at three
pressure levels.  Watch the mean feature count fall while accuracy holds.

    python3 demos/01_less_is_more.py
"""

import treasurehunt as th


def main() -> None:
    split = th.ingest_car_eval(th.bundled_car_csv())
    net = th.train_net(split.train)
    print(f"train {len(split.train)} rows / test {len(split.test)} rows, "
          f"{net.n_features} features\n")
    report = th.run_passive_bench(split.test, net)
    print(f"{'heuristic':<12} {'pressure':<10} {'accuracy':>9} {'features':>9}")
    for row in report.rows:
        print(f"{row.heuristic:<12} {row.tp_level:<10} "
              f"{row.accuracy:>9.3f} {row.mean_features:>9.2f}")
    moderate = {h: report.row(h, "moderate").accuracy
                for h in ("probgain", "logodds", "infofree", "bayes_all")}
    best = max((h for h in moderate if h != "bayes_all"), key=moderate.get)
    print(f"\nunder moderate pressure, {best} reaches {moderate[best]:.3f} "
          f"vs {moderate['bayes_all']:.3f} using every feature")


if __name__ == "__main__":
    main()
