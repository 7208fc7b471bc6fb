"""Independent brute-force oracles used to validate the fast implementations.

Everything here trades efficiency for obviousness: full-joint enumeration,
O(VE) shortest paths, permutation search, and dense geometric sampling.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from treasurehunt.bayes import BayesNet
from treasurehunt.geometry import WorkspaceSpec


def joint_table(net: BayesNet) -> dict[tuple[int, ...], np.ndarray]:
    """P(Y, X_1..X_n) as a dense map from feature assignment to class vector."""
    table = {}
    ranges = [range(f.arity) for f in net.features]
    for assignment in itertools.product(*ranges):
        p = net.prior.copy()
        for l, x in enumerate(assignment):
            p = p * net.cpts[l][x, :]
        table[assignment] = p
    return table


def posterior_oracle(net: BayesNet, ev: dict[int, int]) -> np.ndarray:
    """Posterior by summing the full joint over unobserved features."""
    total = np.zeros(net.n_classes)
    for assignment, p in joint_table(net).items():
        if all(assignment[l] == x for l, x in ev.items()):
            total += p
    s = total.sum()
    return total / s if s > 0 else net.prior.copy()


def entropy_bits(p: np.ndarray) -> float:
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


def mutual_information_oracle(net: BayesNet, subset: list[int]) -> float:
    """I(Y; X_subset) from the full joint, in bits."""
    marginal: dict[tuple[int, ...], np.ndarray] = {}
    for assignment, p in joint_table(net).items():
        key = tuple(assignment[l] for l in subset)
        marginal[key] = marginal.get(key, 0.0) + p
    h_prior = entropy_bits(net.prior)
    h_cond = 0.0
    for p in marginal.values():
        px = float(p.sum())
        if px > 0:
            h_cond += px * entropy_bits(p / px)
    return h_prior - h_cond


def bellman_ford(n: int, edges: list[tuple[int, int, float]],
                 source: int) -> list[float]:
    """All distances from source; edges are undirected (i, j, weight)."""
    dist = [math.inf] * n
    dist[source] = 0.0
    directed = edges + [(j, i, w) for i, j, w in edges]
    for _ in range(n - 1):
        changed = False
        for i, j, w in directed:
            if dist[i] + w < dist[j] - 1e-15:
                dist[j] = dist[i] + w
                changed = True
        if not changed:
            break
    return dist


def best_allocation_oracle(curve: list[float], n_targets: int,
                           budget: int) -> tuple[float, list[int]]:
    """Brute-force the best per-target measurement counts under the budget."""
    best_value = -math.inf
    best_counts = [0] * n_targets
    n_max = len(curve) - 1
    for counts in itertools.product(range(n_max + 1), repeat=n_targets):
        if sum(counts) > budget:
            continue
        value = sum(curve[m] for m in counts)
        if value > best_value + 1e-12:
            best_value = value
            best_counts = list(counts)
    return best_value, best_counts


def dense_line_of_sight(s, x, obstacles, samples: int = 400) -> bool:
    """Sampled interior-point LOS check (ignores pure-boundary grazing)."""
    from treasurehunt.geometry import point_in_polygon
    for i in range(1, samples):
        t = i / samples
        p = (s[0] + t * (x[0] - s[0]), s[1] + t * (x[1] - s[1]))
        for poly in obstacles:
            if point_in_polygon(p, poly):
                return False
    return True


def ray_cast_oracle(origin, heading, max_range, workspace: WorkspaceSpec,
                    step: float = 1e-3) -> float:
    """March along the ray until leaving bounds or entering an obstacle."""
    from treasurehunt.geometry import point_in_polygon
    xmin, ymin, xmax, ymax = workspace.bounds
    dx, dy = math.cos(heading), math.sin(heading)
    d = 0.0
    while d < max_range:
        d += step
        p = (origin[0] + d * dx, origin[1] + d * dy)
        if not (xmin <= p[0] <= xmax and ymin <= p[1] <= ymax):
            return d
        for poly in workspace.obstacles:
            if point_in_polygon(p, poly):
                return d
    return max_range
