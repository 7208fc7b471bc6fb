"""Deterministic discrete-time simulation of the treasure hunt.

One engine instance per run; stepping is strictly single-threaded.  The
environment itself is deterministic: all randomness lives in the strategies,
so replaying a logged decision stream reproduces the run exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional

import numpy as np

from .bayes import BayesNet, expected_info_first_m, posterior
from .geometry import (Pose, SectorFov, Target, WorkspaceSpec, in_free_space,
                       distance_to_polygon, line_of_sight, ray_cast,
                       visible_targets, wrap_angle)

FORWARD = "forward"
TURN_LEFT = "turn_left"
TURN_RIGHT = "turn_right"
STOP = "stop"

TEST_CONTINUE = "continue"
TEST_STOP = "stop"
TEST_NONE = "none"

LOG_VERSION = 1


class BudgetExhausted(RuntimeError):
    pass


class TargetNotSensible(RuntimeError):
    pass


class HorizonExceeded(RuntimeError):
    pass


class AlreadyClassified(RuntimeError):
    pass


@dataclass(frozen=True)
class ActionDecision:
    kind: str  # forward | turn_left | turn_right | stop
    magnitude: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in (FORWARD, TURN_LEFT, TURN_RIGHT, STOP):
            raise ValueError(f"unknown action {self.kind!r}")
        if self.magnitude < 0:
            raise ValueError("magnitude must be nonnegative")


@dataclass(frozen=True)
class TestDecision:
    kind: str = TEST_NONE  # continue | stop | none
    target_id: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in (TEST_CONTINUE, TEST_STOP, TEST_NONE):
            raise ValueError(f"unknown test decision {self.kind!r}")
        if self.kind == TEST_CONTINUE and self.target_id is None:
            raise ValueError("continue requires a target id")


@dataclass(frozen=True)
class StepDecision:
    """One strategy output: motion, measurement, optional classification."""

    action: ActionDecision = ActionDecision(STOP)
    test: TestDecision = TestDecision(TEST_NONE)
    classify: tuple[int, int] | None = None  # (target id, class index)


@dataclass(frozen=True)
class AgentConfig:
    """Kinematics and sensing geometry of the information-gathering agent."""

    fov_passive: SectorFov = SectorFov(angle_of_view=2 * math.pi / 3, radius=5.0)
    fov_active: SectorFov = SectorFov(angle_of_view=math.pi / 3, radius=1.2)
    footprint: float = 0.2
    dt: float = 0.1
    v_max: float = 1.0
    # Max heading change per step; a quarter turn, so turn-in-place commands
    # (one keypress, one step) stay meaningful in the turn-based protocol.
    turn_max: float = math.pi / 2

    def to_json_obj(self) -> dict:
        return {
            "fov_passive": [self.fov_passive.angle_of_view,
                            self.fov_passive.radius,
                            self.fov_passive.bisector_offset],
            "fov_active": [self.fov_active.angle_of_view,
                           self.fov_active.radius,
                           self.fov_active.bisector_offset],
            "footprint": self.footprint,
            "dt": self.dt,
            "v_max": self.v_max,
            "turn_max": self.turn_max,
        }

    @staticmethod
    def from_json_obj(doc: dict) -> "AgentConfig":
        return AgentConfig(
            fov_passive=SectorFov(*doc["fov_passive"]),
            fov_active=SectorFov(*doc["fov_active"]),
            footprint=doc["footprint"], dt=doc["dt"],
            v_max=doc["v_max"], turn_max=doc["turn_max"],
        )


@dataclass(frozen=True)
class PressureConfig:
    """Step horizon, measurement budget, and optional fog / aspiration."""

    horizon: int
    budget: int
    fog_radius: float | None = None
    aspiration: float | None = None  # bits; satisficing stop level

    def __post_init__(self) -> None:
        if self.horizon <= 0:
            raise ValueError("horizon must be positive")
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")
        if self.fog_radius is not None and self.fog_radius <= 0:
            raise ValueError("fog radius must be positive when set")

    def to_json_obj(self) -> dict:
        return {"horizon": self.horizon, "budget": self.budget,
                "fog_radius": self.fog_radius, "aspiration": self.aspiration}

    @staticmethod
    def from_json_obj(doc: dict) -> "PressureConfig":
        return PressureConfig(doc["horizon"], doc["budget"],
                              doc.get("fog_radius"), doc.get("aspiration"))


@dataclass
class TrajectoryLog:
    """Header plus one row per engine step, serializable as JSON lines."""

    header: dict
    rows: list[dict] = field(default_factory=list)

    def to_jsonl(self) -> str:
        lines = [json.dumps({"kind": "header", **self.header}, sort_keys=True)]
        lines.extend(json.dumps({"kind": "row", **row}, sort_keys=True)
                     for row in self.rows)
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_jsonl(text: str) -> "TrajectoryLog":
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise ValueError("empty log file")
        header = json.loads(lines[0])
        if header.pop("kind", None) != "header":
            raise ValueError("first line must be the header")
        rows = []
        for line in lines[1:]:
            row = json.loads(line)
            if row.pop("kind", None) != "row":
                raise ValueError("non-row line after header")
            rows.append(row)
        return TrajectoryLog(header, rows)


@dataclass
class TargetView:
    """Egocentric information about one currently-sensible target."""

    id: int
    range: float
    bearing: float  # relative to agent heading
    in_passive: bool
    in_active: bool
    revealed_values: tuple[int, ...]
    classified: bool


class Simulator:
    """Engine for a single run over a fixed workspace, net, and pressures."""

    def __init__(self, workspace: WorkspaceSpec, net: BayesNet,
                 pressure: PressureConfig, seed: int = 0,
                 agent: AgentConfig = AgentConfig()):
        self.net = net
        self.pressure = pressure
        self.agent = agent
        self.seed = seed
        fov_p = agent.fov_passive
        if pressure.fog_radius is not None:
            fov_p = fov_p.with_radius(pressure.fog_radius)
        self.fov_passive = fov_p
        self.fov_active = agent.fov_active
        self.targets = {t.id: replace(t) for t in workspace.targets}
        self.workspace = workspace.with_targets(
            tuple(self.targets[i] for i in sorted(self.targets)))
        if not in_free_space(workspace.start, agent.footprint, self.workspace):
            raise ValueError("start pose collides")
        self.pose = workspace.start
        self.k = 0
        self.J = 0
        self.total_b = 0.0
        self.total_d = 0.0
        # MI increments depend only on the reveal-order prefix length.
        n = net.n_features
        prefix_mi = [expected_info_first_m(net, m) for m in range(n + 1)]
        self._mi_inc = [prefix_mi[m + 1] - prefix_mi[m] for m in range(n)]
        self.log = TrajectoryLog(header={
            "v": LOG_VERSION,
            "workspace": self.workspace.to_json_obj(),
            "net": json.loads(net.to_json()),
            "pressure": pressure.to_json_obj(),
            "agent": agent.to_json_obj(),
            "seed": seed,
        })

    # -- queries ---------------------------------------------------------

    @property
    def done(self) -> bool:
        return self.k >= self.pressure.horizon

    def observation(self) -> list[int]:
        return visible_targets(self.pose, self.fov_passive, self.workspace)

    def sensible_targets(self) -> list[int]:
        """Ids in the active FOV with line of sight (feature-measurable)."""
        out = []
        for t in self.workspace.targets:
            from .geometry import in_fov
            if in_fov(self.pose, self.fov_active, t.position) and \
                    line_of_sight(self.pose.position, t.position,
                                  self.workspace.obstacles):
                out.append(t.id)
        return sorted(out)

    def wall_distance(self) -> float:
        xmin, ymin, xmax, ymax = self.workspace.bounds
        x, y = self.pose.x, self.pose.y
        d = min(x - xmin, xmax - x, y - ymin, ymax - y)
        for poly in self.workspace.obstacles:
            d = min(d, distance_to_polygon((x, y), poly))
        return d

    def ray(self, relative_heading: float, max_range: float = 1e9) -> float:
        return ray_cast(self.pose.position, self.pose.theta + relative_heading,
                        max_range, self.workspace)

    def view(self) -> "SimView":
        return SimView(self)

    # -- stepping --------------------------------------------------------

    def _apply_action(self, action: ActionDecision) -> tuple[Pose, bool, float]:
        pose = self.pose
        if action.kind == STOP:
            return pose, False, 0.0
        if action.kind in (TURN_LEFT, TURN_RIGHT):
            mag = min(action.magnitude, self.agent.turn_max)
            sign = 1.0 if action.kind == TURN_LEFT else -1.0
            return Pose(pose.x, pose.y, pose.theta + sign * mag), False, 0.0
        step = min(action.magnitude, self.agent.v_max * self.agent.dt)
        new = Pose(pose.x + step * math.cos(pose.theta),
                   pose.y + step * math.sin(pose.theta), pose.theta)
        if not in_free_space(new, self.agent.footprint, self.workspace):
            return pose, True, 0.0
        return new, False, step

    def _apply_test(self, test: TestDecision) -> tuple[int | None, float]:
        if test.kind != TEST_CONTINUE:
            return None, 0.0
        target = self.targets.get(test.target_id)
        if target is None:
            raise TargetNotSensible(f"unknown target {test.target_id}")
        if test.target_id not in self.sensible_targets():
            raise TargetNotSensible(
                f"target {test.target_id} not in active FOV with line of sight")
        if self.J >= self.pressure.budget:
            raise BudgetExhausted(f"budget {self.pressure.budget} spent")
        if target.revealed >= len(target.features):
            raise TargetNotSensible(
                f"target {test.target_id} has no unrevealed features")
        z = target.features[target.revealed]
        b_inc = self._mi_inc[target.revealed]
        target.revealed += 1
        self.J += 1
        assert self.J <= self.pressure.budget
        self.total_b += b_inc
        return z, b_inc

    def _apply_classify(self, classify: tuple[int, int]) -> None:
        target_id, y_hat = classify
        target = self.targets.get(target_id)
        if target is None:
            raise TargetNotSensible(f"unknown target {target_id}")
        if target.classified_as is not None:
            raise AlreadyClassified(f"target {target_id} already classified")
        if not 0 <= y_hat < self.net.n_classes:
            raise ValueError("class index out of range")
        target.classified_as = y_hat

    def step(self, action: ActionDecision, test: TestDecision = TestDecision(),
             classify: tuple[int, int] | None = None) -> list[int]:
        """Advance one tick; returns the passive-FOV observation o(t_k)."""
        if self.done:
            raise HorizonExceeded(f"horizon {self.pressure.horizon} reached")
        new_pose, blocked, d_inc = self._apply_action(action)
        self.pose = new_pose
        self.total_d += d_inc
        z, b_inc = self._apply_test(test)
        if classify is not None:
            self._apply_classify(classify)
        obs = self.observation()
        self.log.rows.append({
            "k": self.k,
            "pose": [self.pose.x, self.pose.y, self.pose.theta],
            "action": [action.kind, action.magnitude],
            "blocked": blocked,
            "test": ([test.kind, test.target_id]
                     if test.kind != TEST_NONE else None),
            "z": z,
            "o": obs,
            "si": self.sensible_targets(),
            "J": self.J,
            "b_inc": b_inc,
            "d_inc": d_inc,
            "classify": list(classify) if classify is not None else None,
        })
        self.k += 1
        return obs

    def classify_target(self, target_id: int, y_hat: int) -> None:
        """Standalone classification: recorded as a stop-action step."""
        self.step(ActionDecision(STOP), TestDecision(TEST_NONE),
                  classify=(target_id, y_hat))

    def state_hash(self) -> str:
        import hashlib
        doc = json.dumps({
            "pose": [self.pose.x, self.pose.y, self.pose.theta],
            "k": self.k, "J": self.J,
            "targets": [[t.id, t.revealed, t.classified_as]
                        for t in self.workspace.targets],
        }, sort_keys=True)
        return hashlib.sha256(doc.encode()).hexdigest()

    # -- derived ---------------------------------------------------------

    def evidence_for(self, target_id: int) -> dict[int, int]:
        t = self.targets[target_id]
        return {l: t.features[l] for l in range(t.revealed)}

    def posterior_for(self, target_id: int) -> np.ndarray:
        return posterior(self.net, self.evidence_for(target_id))

    def all_classified(self) -> bool:
        return all(t.classified_as is not None
                   for t in self.workspace.targets)


class SimView:
    """Strategy-facing window: egocentric information only."""

    def __init__(self, sim: Simulator):
        self._sim = sim

    @property
    def pose(self) -> Pose:
        return self._sim.pose

    @property
    def k(self) -> int:
        return self._sim.k

    @property
    def J(self) -> int:
        return self._sim.J

    @property
    def budget(self) -> int:
        return self._sim.pressure.budget

    @property
    def budget_left(self) -> int:
        return self._sim.pressure.budget - self._sim.J

    @property
    def net(self) -> BayesNet:
        return self._sim.net

    @property
    def n_features(self) -> int:
        return self._sim.net.n_features

    @property
    def sensing_radius(self) -> float:
        return self._sim.fov_passive.radius

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        """Outer workspace rectangle; the map is known, targets are not."""
        return self._sim.workspace.bounds

    @property
    def step_length(self) -> float:
        return self._sim.agent.v_max * self._sim.agent.dt

    @property
    def turn_max(self) -> float:
        return self._sim.agent.turn_max

    @property
    def last_blocked(self) -> bool:
        """True when the previous step's forward motion was rejected."""
        rows = self._sim.log.rows
        return bool(rows and rows[-1]["blocked"])

    def ray(self, relative_heading: float, max_range: float = 1e9) -> float:
        return self._sim.ray(relative_heading, max_range)

    def wall_distance(self) -> float:
        return self._sim.wall_distance()

    def corridor_free(self, relative_heading: float, length: float,
                      clearance: float | None = None) -> bool:
        """Whether the agent disc can advance ``length`` along a heading."""
        sim = self._sim
        if clearance is None:
            clearance = sim.agent.footprint
        theta = sim.pose.theta + relative_heading
        dx, dy = math.cos(theta), math.sin(theta)
        steps = max(1, int(length / 0.05))
        for i in range(1, steps + 1):
            d = i * length / steps
            probe = Pose(sim.pose.x + d * dx, sim.pose.y + d * dy, 0.0)
            if not in_free_space(probe, clearance, sim.workspace):
                return False
        return True

    def visible(self) -> list[TargetView]:
        sim = self._sim
        passive = set(sim.observation())
        active = set(sim.sensible_targets())
        out = []
        for tid in sorted(passive | active):
            t = sim.targets[tid]
            dx = t.position[0] - sim.pose.x
            dy = t.position[1] - sim.pose.y
            out.append(TargetView(
                id=tid,
                range=math.hypot(dx, dy),
                bearing=wrap_angle(math.atan2(dy, dx) - sim.pose.theta),
                in_passive=tid in passive,
                in_active=tid in active,
                revealed_values=tuple(t.features[:t.revealed]),
                classified=t.classified_as is not None,
            ))
        return out

    def posterior_for(self, target_id: int) -> np.ndarray:
        return self._sim.posterior_for(target_id)

    def revealed_count(self, target_id: int) -> int:
        return self._sim.targets[target_id].revealed


def run(workspace: WorkspaceSpec, net: BayesNet, pressure: PressureConfig,
        strategy, seed: int = 0, agent: AgentConfig = AgentConfig(),
        stop_when_all_classified: bool = True) -> TrajectoryLog:
    """Run a strategy to the horizon, early completion, or aspiration level.

    ``strategy.decide(view)`` returns a StepDecision, or None to end the run.
    """
    sim = Simulator(workspace, net, pressure, seed=seed, agent=agent)
    strategy_name = getattr(strategy, "name", type(strategy).__name__)
    sim.log.header["strategy"] = strategy_name
    while not sim.done:
        decision = strategy.decide(sim.view())
        if decision is None:
            break
        sim.step(decision.action, decision.test, decision.classify)
        if stop_when_all_classified and sim.workspace.targets \
                and sim.all_classified():
            break
        if pressure.aspiration is not None and sim.total_b >= pressure.aspiration:
            break
    return sim.log


def replay(log: TrajectoryLog) -> TrajectoryLog:
    """Re-execute a logged decision stream; the result must be identical."""
    header = log.header
    workspace = WorkspaceSpec.from_json_obj(header["workspace"])
    net = BayesNet.from_json(json.dumps(header["net"]))
    pressure = PressureConfig.from_json_obj(header["pressure"])
    agent = AgentConfig.from_json_obj(header["agent"])
    sim = Simulator(workspace, net, pressure, seed=header["seed"], agent=agent)
    if "strategy" in header:
        sim.log.header["strategy"] = header["strategy"]
    for row in log.rows:
        action = ActionDecision(row["action"][0], row["action"][1])
        test = (TestDecision(row["test"][0], row["test"][1])
                if row["test"] else TestDecision())
        classify = tuple(row["classify"]) if row["classify"] else None
        sim.step(action, test, classify)
    return sim.log
