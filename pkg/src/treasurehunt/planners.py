"""Route planning with full or partial target knowledge.

Two roadmap constructions (probabilistic roadmap and a vertical cell
decomposition), Dijkstra shortest paths over either, an exact route/budget
optimizer over small target sets, and a receding-horizon strategy that
replans whenever its set of known targets changes.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .bayes import BayesNet, expected_info_first_m
from .engine import (STOP, ActionDecision, SimView, StepDecision,
                     TestDecision, TEST_CONTINUE)
from .geometry import (Point, Pose, WorkspaceSpec, in_free_space,
                       line_of_sight)
from .metrics import DEFAULT_WEIGHTS, ObjectiveWeights
from .strategies import _turn, _forward  # shared steering primitives
from .geometry import wrap_angle

EDGE_SAMPLE = 0.05


def _edge_clear(a: Point, b: Point, workspace: WorkspaceSpec,
                footprint: float) -> bool:
    length = math.dist(a, b)
    steps = max(2, int(length / EDGE_SAMPLE) + 1)
    for i in range(steps + 1):
        t = i / steps
        p = Pose(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), 0.0)
        if not in_free_space(p, footprint, workspace):
            return False
    return True


@dataclass
class Roadmap:
    workspace: WorkspaceSpec
    footprint: float
    nodes: list[Point] = field(default_factory=list)
    adj: list[list[tuple[int, float]]] = field(default_factory=list)

    def add_node(self, p: Point) -> int:
        self.nodes.append(p)
        self.adj.append([])
        return len(self.nodes) - 1

    def add_edge(self, i: int, j: int) -> None:
        d = math.dist(self.nodes[i], self.nodes[j])
        self.adj[i].append((j, d))
        self.adj[j].append((i, d))

    def connect_point(self, p: Point, k: int = 8) -> int:
        """Add a query point, linked to its nearest reachable nodes."""
        idx = self.add_node(p)
        order = sorted(range(idx), key=lambda i: math.dist(p, self.nodes[i]))
        linked = 0
        for i in order:
            if _edge_clear(p, self.nodes[i], self.workspace, self.footprint):
                self.add_edge(idx, i)
                linked += 1
                if linked >= k:
                    break
        return idx

    def dijkstra(self, source: int) -> tuple[list[float], list[int]]:
        n = len(self.nodes)
        dist = [math.inf] * n
        prev = [-1] * n
        dist[source] = 0.0
        heap = [(0.0, source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for v, w in self.adj[u]:
                nd = d + w
                if nd < dist[v] - 1e-15:
                    dist[v] = nd
                    prev[v] = u
                    heapq.heappush(heap, (nd, v))
        return dist, prev

    def shortest_path(self, a: Point, b: Point) -> tuple[float, list[Point]]:
        """Distance and waypoint list; (inf, []) when disconnected."""
        if _edge_clear(a, b, self.workspace, self.footprint):
            return math.dist(a, b), [a, b]
        ia = self.connect_point(a)
        ib = self.connect_point(b)
        dist, prev = self.dijkstra(ia)
        try:
            if math.isinf(dist[ib]):
                return math.inf, []
            path = [ib]
            while path[-1] != ia:
                path.append(prev[path[-1]])
            points = [self.nodes[i] for i in reversed(path)]
            return dist[ib], points
        finally:
            # Drop the two query nodes and their edges.
            for idx in (ib, ia):
                for j, _ in self.adj[idx]:
                    self.adj[j] = [(v, w) for v, w in self.adj[j] if v != idx]
                self.nodes.pop(idx)
                self.adj.pop(idx)


def build_prm(workspace: WorkspaceSpec, n_samples: int = 300, k: int = 8,
              seed: int = 0, footprint: float = 0.2) -> Roadmap:
    """Probabilistic roadmap: uniform free-space samples, k-nearest edges."""
    rng = np.random.default_rng(seed)
    rm = Roadmap(workspace, footprint)
    xmin, ymin, xmax, ymax = workspace.bounds
    attempts = 0
    while len(rm.nodes) < n_samples and attempts < 50 * n_samples:
        attempts += 1
        p = (float(rng.uniform(xmin, xmax)), float(rng.uniform(ymin, ymax)))
        if in_free_space(Pose(p[0], p[1], 0.0), footprint, workspace):
            rm.add_node(p)
    for i, p in enumerate(rm.nodes):
        order = sorted((j for j in range(len(rm.nodes)) if j != i),
                       key=lambda j: math.dist(p, rm.nodes[j]))
        linked = 0
        for j in order:
            if any(v == j for v, _ in rm.adj[i]):
                linked += 1
                continue
            if _edge_clear(p, rm.nodes[j], workspace, footprint):
                rm.add_edge(i, j)
                linked += 1
            if linked >= k:
                break
    return rm


@dataclass(frozen=True)
class Cell:
    """One free vertical trapezoid: a y-interval over an x slab."""

    x0: float
    x1: float
    y0: float
    y1: float

    @property
    def center(self) -> Point:
        return ((self.x0 + self.x1) / 2, (self.y0 + self.y1) / 2)

    def contains(self, p: Point) -> bool:
        return self.x0 <= p[0] <= self.x1 and self.y0 <= p[1] <= self.y1


def _free_intervals(workspace: WorkspaceSpec, x: float) -> list[tuple[float, float]]:
    """Free y-intervals along the vertical line at x."""
    _, ymin, _, ymax = workspace.bounds
    blocked: list[tuple[float, float]] = []
    for poly in workspace.obstacles:
        ys = []
        n = len(poly)
        for i in range(n):
            (x0, y0), (x1, y1) = poly[i], poly[(i + 1) % n]
            if (x0 <= x <= x1) or (x1 <= x <= x0):
                if abs(x1 - x0) < 1e-12:
                    ys.extend([y0, y1])
                else:
                    t = (x - x0) / (x1 - x0)
                    ys.append(y0 + t * (y1 - y0))
        if ys:
            blocked.append((min(ys), max(ys)))
    blocked.sort()
    free = []
    cursor = ymin
    for lo, hi in blocked:
        if lo > cursor + 1e-9:
            free.append((cursor, min(lo, ymax)))
        cursor = max(cursor, hi)
    if cursor < ymax - 1e-9:
        free.append((cursor, ymax))
    return [(lo, hi) for lo, hi in free if hi - lo > 1e-9]


def decompose_cells(workspace: WorkspaceSpec) -> list[Cell]:
    """Vertical slab decomposition at every obstacle vertex abscissa."""
    xmin, _, xmax, _ = workspace.bounds
    xs = {xmin, xmax}
    for poly in workspace.obstacles:
        xs.update(x for x, _ in poly)
    cuts = sorted(x for x in xs if xmin <= x <= xmax)
    cells = []
    for x0, x1 in zip(cuts, cuts[1:]):
        if x1 - x0 < 1e-9:
            continue
        for y0, y1 in _free_intervals(workspace, (x0 + x1) / 2):
            cells.append(Cell(x0, x1, y0, y1))
    return cells


def locate_cell(cells: list[Cell], p: Point) -> int:
    """Index of the cell containing p, or -1 if p is inside an obstacle."""
    for i, cell in enumerate(cells):
        if cell.contains(p):
            return i
    return -1


def build_cell_graph(workspace: WorkspaceSpec,
                     footprint: float = 0.2) -> Roadmap:
    """Roadmap from the cell decomposition: centers plus shared-border nodes."""
    cells = decompose_cells(workspace)
    rm = Roadmap(workspace, footprint)
    centers = [rm.add_node(c.center) for c in cells]
    for i, a in enumerate(cells):
        for j in range(i + 1, len(cells)):
            b = cells[j]
            if abs(a.x1 - b.x0) > 1e-9 and abs(b.x1 - a.x0) > 1e-9:
                continue
            lo = max(a.y0, b.y0)
            hi = min(a.y1, b.y1)
            if hi - lo <= 2 * footprint:
                continue
            x = a.x1 if abs(a.x1 - b.x0) <= 1e-9 else a.x0
            door = rm.add_node((x, (lo + hi) / 2))
            for c in (centers[i], centers[j]):
                if _edge_clear(rm.nodes[door], rm.nodes[c],
                               workspace, footprint):
                    rm.add_edge(door, c)
    return rm


# -- route and budget optimization ---------------------------------------


def target_value_curve(net: BayesNet, weights: ObjectiveWeights
                       ) -> list[float]:
    """Planning value of spending m measurements at one target."""
    n = net.n_features
    return [weights.info * expected_info_first_m(net, m) - weights.cost * m
            for m in range(n + 1)]


def best_allocation(curve: list[float], n_targets: int, budget: int
                    ) -> tuple[float, list[int]]:
    """Max total value of splitting the budget across identical targets."""
    n = len(curve) - 1
    best = [[-math.inf] * (budget + 1) for _ in range(n_targets + 1)]
    choice = [[0] * (budget + 1) for _ in range(n_targets + 1)]
    for b in range(budget + 1):
        best[0][b] = 0.0
    for j in range(1, n_targets + 1):
        for b in range(budget + 1):
            for m in range(min(n, b) + 1):
                v = best[j - 1][b - m] + curve[m]
                if v > best[j][b]:
                    best[j][b] = v
                    choice[j][b] = m
    alloc = []
    b = budget
    for j in range(n_targets, 0, -1):
        m = choice[j][b]
        alloc.append(m)
        b -= m
    alloc.reverse()
    return best[n_targets][budget], alloc


@dataclass(frozen=True)
class Plan:
    order: tuple[int, ...]          # target ids in visiting order
    allocation: tuple[int, ...]     # measurements per visited target
    distance: float
    value: float                    # predicted objective


def _route_distances(start: Point, points: dict[int, Point],
                     roadmap: Roadmap) -> dict[tuple[int, int], float]:
    ids = sorted(points)
    nodes = {-1: start, **points}
    dist = {}
    keys = [-1] + ids
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            d, _ = roadmap.shortest_path(nodes[a], nodes[b])
            dist[(a, b)] = dist[(b, a)] = d
    return dist


def _held_karp(ids: list[int], dist: dict[tuple[int, int], float]
               ) -> dict[frozenset, tuple[float, tuple[int, ...]]]:
    """Best open tour from the start through every subset of targets."""
    best: dict[tuple[frozenset, int], tuple[float, tuple[int, ...]]] = {}
    for t in ids:
        best[(frozenset([t]), t)] = (dist[(-1, t)], (t,))
    for size in range(2, len(ids) + 1):
        for subset in itertools.combinations(ids, size):
            fs = frozenset(subset)
            for t in subset:
                rest = fs - {t}
                options = []
                for u in rest:
                    d, order = best[(rest, u)]
                    options.append((d + dist[(u, t)], order + (t,)))
                best[(fs, t)] = min(options)
    out: dict[frozenset, tuple[float, tuple[int, ...]]] = {frozenset(): (0.0, ())}
    for size in range(1, len(ids) + 1):
        for subset in itertools.combinations(ids, size):
            fs = frozenset(subset)
            out[fs] = min(best[(fs, t)] for t in subset)
    return out


def plan_route(start: Point, targets: dict[int, Point], net: BayesNet,
               budget: int, roadmap: Roadmap,
               weights: ObjectiveWeights = DEFAULT_WEIGHTS,
               max_exact: int = 10) -> Plan:
    """Maximize predicted objective over target subset, order, and budget.

    Exact (dynamic programming over subsets) up to ``max_exact`` targets;
    beyond that only the nearest ``max_exact`` targets are considered.
    """
    ids = sorted(targets)
    if len(ids) > max_exact:
        ids = sorted(ids, key=lambda t: math.dist(start, targets[t]))
        ids = sorted(ids[:max_exact])
    curve = target_value_curve(net, weights)
    dist = _route_distances(start, {t: targets[t] for t in ids}, roadmap)
    tours = _held_karp(ids, dist)
    best_plan = Plan((), (), 0.0, 0.0)
    for subset, (d, order) in tours.items():
        if math.isinf(d):
            continue
        gain, alloc = best_allocation(curve, len(subset), budget)
        value = gain - weights.distance * d
        if value > best_plan.value + 1e-12:
            best_plan = Plan(order, tuple(alloc), d, value)
    return best_plan


def plan_route_exhaustive(start: Point, targets: dict[int, Point],
                          net: BayesNet, budget: int, roadmap: Roadmap,
                          weights: ObjectiveWeights = DEFAULT_WEIGHTS) -> Plan:
    """Brute force over subsets, permutations, and allocations (oracle)."""
    ids = sorted(targets)
    curve = target_value_curve(net, weights)
    n = len(curve) - 1
    dist = _route_distances(start, targets, roadmap)
    best = Plan((), (), 0.0, 0.0)
    for size in range(len(ids) + 1):
        for subset in itertools.combinations(ids, size):
            for order in itertools.permutations(subset):
                d = 0.0
                prev = -1
                for t in order:
                    d += dist[(prev, t)]
                    prev = t
                if math.isinf(d):
                    continue
                for alloc in itertools.product(range(n + 1), repeat=size):
                    if sum(alloc) > budget:
                        continue
                    value = sum(curve[m] for m in alloc) - weights.distance * d
                    if value > best.value + 1e-12:
                        best = Plan(order, alloc, d, value)
    return best


# -- receding-horizon planner strategy ------------------------------------


class PlannerStrategy:
    """Replan an exact route over currently known targets; follow waypoints.

    Knows only what it has seen: targets enter the plan once detected.  With
    nothing known it holds position.
    """

    name = "planner"

    def __init__(self, workspace: WorkspaceSpec, net: BayesNet, budget: int,
                 weights: ObjectiveWeights = DEFAULT_WEIGHTS,
                 roadmap: Roadmap | None = None, confidence: float = 0.85):
        self.net = net
        self.budget = budget
        self.weights = weights
        self.roadmap = roadmap or build_prm(workspace)
        self.confidence = confidence
        self.known: dict[int, Point] = {}
        self.alloc: dict[int, int] = {}
        self.queue: list[int] = []
        self.waypoints: list[Point] = []
        self._stall = 0

    def _replan(self, view: SimView) -> None:
        pending = {t: p for t, p in self.known.items()}
        if not pending:
            self.queue, self.waypoints = [], []
            return
        plan = plan_route((view.pose.x, view.pose.y), pending, self.net,
                          view.budget_left, self.roadmap, self.weights)
        self.queue = list(plan.order)
        self.alloc = dict(zip(plan.order, plan.allocation))
        self.waypoints = []

    def _absorb(self, view: SimView) -> bool:
        changed = False
        for t in view.visible():
            if t.classified:
                if self.known.pop(t.id, None) is not None:
                    changed = True
                continue
            if t.id not in self.known:
                r, b = t.range, t.bearing
                theta = view.pose.theta + b
                self.known[t.id] = (view.pose.x + r * math.cos(theta),
                                    view.pose.y + r * math.sin(theta))
                changed = True
        return changed

    def _interact(self, view: SimView, target) -> StepDecision:
        """Spend exactly the planned measurement allocation, then classify."""
        from .strategies import interact_decision
        planned = self.alloc.get(target.id)
        if planned is None:
            return interact_decision(view, target, self.confidence)
        revealed = view.revealed_count(target.id)
        if (revealed < planned and revealed < view.n_features
                and view.budget_left > 0):
            return StepDecision(ActionDecision("stop"),
                                TestDecision(TEST_CONTINUE, target.id))
        post = view.posterior_for(target.id)
        return StepDecision(ActionDecision("stop"),
                            classify=(target.id, int(post.argmax())))

    def decide(self, view: SimView) -> StepDecision | None:
        from .strategies import interact_decision, pursue_action, _split_targets
        if self._absorb(view):
            self._replan(view)
        active, _ = _split_targets(view)
        if active is not None:
            dec = self._interact(view, active)
            if dec.classify is not None:
                self.known.pop(active.id, None)
                if active.id in self.queue:
                    self.queue.remove(active.id)
                self.waypoints = []
            return dec
        while self.queue and self.queue[0] not in self.known:
            self.queue.pop(0)
            self.waypoints = []
        if not self.queue:
            return StepDecision(ActionDecision(STOP))
        goal_id = self.queue[0]
        goal = self.known[goal_id]
        pos = (view.pose.x, view.pose.y)
        if not self.waypoints:
            _, path = self.roadmap.shortest_path(pos, goal)
            self.waypoints = path[1:] if path else [goal]
        while self.waypoints and math.dist(pos, self.waypoints[0]) < 0.15:
            self.waypoints.pop(0)
        wp = self.waypoints[0] if self.waypoints else goal
        bearing = wrap_angle(math.atan2(wp[1] - pos[1], wp[0] - pos[0])
                             - view.pose.theta)
        if abs(bearing) > 0.2:
            return StepDecision(_turn(bearing))
        if view.last_blocked or view.ray(0.0, 0.4) < 0.3:
            self._stall += 1
            if self._stall > 8:
                self._stall = 0
                self.waypoints = []
            left, right = view.ray(math.pi / 4, 1.0), view.ray(-math.pi / 4, 1.0)
            return StepDecision(_turn(math.pi / 4 if left >= right
                                      else -math.pi / 4))
        self._stall = 0
        return StepDecision(_forward())
