"""Closed-loop search strategies and action log-likelihood scoring.

Every strategy exposes ``decide(view) -> StepDecision | None`` plus a ``name``.
The shared outer loop is: interact with a target in the active FOV, else
pursue the nearest detection, else explore.  Strategies differ only in how
they explore.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .engine import (FORWARD, STOP, TEST_CONTINUE, TEST_NONE, TURN_LEFT,
                     TURN_RIGHT, ActionDecision, SimView, Simulator,
                     StepDecision, TargetView, TestDecision, TrajectoryLog)
from .geometry import wrap_angle

DEFAULT_CONFIDENCE = 0.85
QUARTER = math.pi / 2


def _forward(mag: float = 1.0) -> ActionDecision:
    return ActionDecision(FORWARD, mag)


def _turn(delta: float) -> ActionDecision:
    kind = TURN_LEFT if delta >= 0 else TURN_RIGHT
    return ActionDecision(kind, min(abs(delta), QUARTER))


def interact_decision(view: SimView, target: TargetView,
                      confidence: float = DEFAULT_CONFIDENCE) -> StepDecision:
    """Reveal the next feature, or classify once confident or out of options."""
    post = view.posterior_for(target.id)
    revealed = view.revealed_count(target.id)
    exhausted = revealed >= view.n_features or view.budget_left <= 0
    if post.max() >= confidence or exhausted:
        return StepDecision(ActionDecision(STOP),
                            classify=(target.id, int(post.argmax())))
    return StepDecision(ActionDecision(STOP),
                        TestDecision(TEST_CONTINUE, target.id))


def pursue_action(view: SimView, target: TargetView) -> ActionDecision:
    """Steer toward a detected target, skirting close obstructions."""
    if abs(target.bearing) > 0.3:
        return _turn(target.bearing)
    if view.last_blocked or view.ray(0.0, 0.4) < 0.35:
        left, right = view.ray(QUARTER / 2, 1.0), view.ray(-QUARTER / 2, 1.0)
        return _turn(QUARTER / 2 if left >= right else -QUARTER / 2)
    return _forward()


def _split_targets(view: SimView) -> tuple[TargetView | None, TargetView | None]:
    """Nearest unclassified target in the active FOV and in the passive FOV."""
    unclassified = [t for t in view.visible() if not t.classified]
    key = lambda t: (t.range, t.id)
    active = [t for t in unclassified if t.in_active]
    passive = [t for t in unclassified if t.in_passive]
    return (min(active, key=key) if active else None,
            min(passive, key=key) if passive else None)


class _Pursuit:
    """Pursuit bookkeeping: sidestep commitment and give-up blacklisting.

    A target that resists approach for ``patience`` steps is ignored for
    ``cooloff`` steps so the strategy goes back to exploring instead of
    grinding against a corner forever.
    """

    def __init__(self, patience: int = 300, cooloff: int = 800):
        self.patience = patience
        self.cooloff = cooloff
        self.target: int | None = None
        self.count = 0
        self.commit = 0
        self.best_range = float("inf")
        self.blacklist: dict[int, int] = {}

    def reset(self) -> None:
        self.target = None
        self.count = 0
        self.commit = 0
        self.best_range = float("inf")

    def select(self, view: SimView) -> tuple[TargetView | None, TargetView | None]:
        self.blacklist = {t: k for t, k in self.blacklist.items() if k > view.k}
        active, _ = _split_targets(view)
        candidates = [t for t in view.visible()
                      if not t.classified and t.in_passive
                      and t.id not in self.blacklist]
        passive = None
        if candidates:
            # Stick with the current pursuit while it stays in view.
            current = [t for t in candidates if t.id == self.target]
            passive = (current[0] if current
                       else min(candidates, key=lambda t: (t.range, t.id)))
        return active, passive

    def pursue(self, view: SimView, target: TargetView) -> ActionDecision | None:
        """Next pursuit action, or None after giving up on this target."""
        if target.id != self.target:
            # Keep the fruitless-step count across switches so oscillating
            # between mutually occluded targets still times out.
            self.target, self.commit = target.id, 0
            self.best_range = float("inf")
        self.count += 1
        if target.range < self.best_range - 0.25:
            self.best_range = target.range
            self.count = 0
        if self.count > self.patience:
            self.blacklist[target.id] = view.k + self.cooloff
            self.reset()
            return None
        if view.last_blocked or view.ray(0.0, 0.4) < 0.35:
            left, right = view.ray(QUARTER / 2, 1.0), view.ray(-QUARTER / 2, 1.0)
            self.commit = 5
            return _turn(QUARTER / 2 if left >= right else -QUARTER / 2)
        if self.commit > 0:
            self.commit -= 1
            return _forward()
        if abs(target.bearing) > 0.3:
            return _turn(target.bearing)
        return _forward()


# -- base exploration policies -----------------------------------------


class WallFollowPolicy:
    """Right-hand wall following with a short commitment after reacquiring."""

    name = "wall_follow"

    def __init__(self):
        self._commit = 0

    def propose(self, view: SimView) -> ActionDecision:
        ahead = view.ray(0.0, 2.0)
        right_front = view.ray(-QUARTER / 2, 2.0)
        right = view.ray(-QUARTER, 2.0)
        if ahead < 0.35 or view.last_blocked:
            self._commit = 0
            return _turn(QUARTER)
        if self._commit > 0:
            self._commit -= 1
            return _forward()
        if right > 1.0 and right_front > 1.2:
            # Wall fell away around a corner: turn into it, then close in.
            self._commit = 6
            return _turn(-QUARTER)
        if right < 0.25:
            return _turn(QUARTER / 4)
        if right > 0.7:
            return _turn(-QUARTER / 4)
        return _forward()


class CoveragePolicy:
    """Boustrophedon sweep: straight lanes across the workspace.

    Runs along x, steps one lane in y at a lane end, and reverses the sweep
    at the top and bottom.  An obstacle mid-lane triggers a lane step without
    reversing the run direction, so interior walls are passed rather than
    bounced between.  Deliberately memoryless beyond the current lane state:
    the pattern is deterministic and can keep missing the same fog gaps.
    """

    name = "coverage"

    def __init__(self, lane_scale: float = 2.2):
        self.lane_scale = lane_scale
        self._dir = 1          # +x or -x lane heading
        self._shift_dir = 1    # +y or -y between lanes
        self._shift_left = 0
        self._want_shift = False  # shift owed but blocked; retry along the lane
        self._stuck = 0
        self._idle = 0
        self._last_pos: tuple[float, float] | None = None

    def _blocked(self, view: SimView) -> bool:
        return view.last_blocked or view.ray(0.0, 0.5) < 0.35

    def propose(self, view: SimView) -> ActionDecision:
        lane = max(0.8, self.lane_scale * view.sensing_radius)
        steps = max(1, round(lane / view.step_length))
        xmin, ymin, xmax, ymax = view.bounds
        pose = view.pose
        # Livelock guard: alternating turn-away/turn-back near a corner never
        # trips the blocked streak, so watch actual translation instead.
        if self._last_pos is not None and \
                math.dist(pose.position, self._last_pos) < 1e-9:
            self._idle += 1
        else:
            self._idle = 0
        self._last_pos = pose.position
        if self._idle > 40:
            self._idle = 0
            self._want_shift = False
            self._shift_left = 0
            self._dir = -self._dir
            self._shift_dir = -self._shift_dir
            return _turn(QUARTER)
        margin = 0.6
        shift_heading = QUARTER * self._shift_dir
        near_y_end = (ymax - pose.y < margin if self._shift_dir > 0
                      else pose.y - ymin < margin)
        if self._blocked(view):
            self._stuck += 1
        else:
            self._stuck = 0
        if self._stuck > 12:
            # Wedged in a corner the state machine cannot name: back out.
            self._stuck = 0
            self._shift_left = 0
            self._dir = -self._dir
            return _turn(QUARTER * self._shift_dir)
        if self._shift_left > 0:
            err = wrap_angle(shift_heading - pose.theta)
            if abs(err) > 0.05:
                return _turn(err)
            if self._blocked(view):
                self._shift_left = 0
                if near_y_end:
                    self._shift_dir = -self._shift_dir
                else:
                    self._want_shift = True  # wall above: retry along the lane
                return _turn(QUARTER)
            self._shift_left -= 1
            return _forward()
        desired = 0.0 if self._dir > 0 else math.pi
        err = wrap_angle(desired - pose.theta)
        if abs(err) > 0.05:
            return _turn(err)
        if self._want_shift and not self._blocked(view):
            rel = wrap_angle(shift_heading - pose.theta)
            avail = (ymax - pose.y if self._shift_dir > 0
                     else pose.y - ymin) - 0.35
            probe = min(0.95 * lane, avail)
            if probe > 0.3 and view.corridor_free(rel, probe):
                self._want_shift = False
                self._shift_left = steps
                return _turn(rel)
        if self._blocked(view):
            near_x_end = (xmax - pose.x < margin if self._dir > 0
                          else pose.x - xmin < margin)
            if near_y_end:
                self._shift_dir = -self._shift_dir
            self._shift_left = steps
            if near_x_end:
                self._dir = -self._dir
            return _turn(QUARTER * self._shift_dir)
        return _forward()


class RandomWalkPolicy:
    """Run-and-tumble: straight runs of geometric length, then a fresh
    uniformly random heading."""

    name = "random_walk"

    def __init__(self, rng: np.random.Generator, mean_run: float = 8.0):
        self.rng = rng
        self.mean_run = mean_run
        self._run_left = 0
        self._goal_heading: float | None = None

    def _tumble(self) -> None:
        self._run_left = 1 + int(self.rng.geometric(1.0 / self.mean_run))
        self._goal_heading = float(self.rng.uniform(-math.pi, math.pi))

    def propose(self, view: SimView) -> ActionDecision:
        if view.ray(0.0, 0.5) < 0.35 or view.last_blocked or self._run_left <= 0:
            self._tumble()
        if self._goal_heading is not None:
            err = wrap_angle(self._goal_heading - view.pose.theta)
            if abs(err) > 0.05:
                return _turn(err)
            self._goal_heading = None
        self._run_left -= 1
        return _forward()


# -- full strategies ----------------------------------------------------


class PolicyStrategy:
    """Wrap a base exploration policy with the interact/pursue outer loop."""

    def __init__(self, policy, confidence: float = DEFAULT_CONFIDENCE):
        self.policy = policy
        self.name = policy.name
        self.confidence = confidence
        self.pursuit = _Pursuit()

    def decide(self, view: SimView) -> StepDecision | None:
        active, passive = self.pursuit.select(view)
        if active is not None:
            self.pursuit.reset()
            return interact_decision(view, active, self.confidence)
        if passive is not None:
            act = self.pursuit.pursue(view, passive)
            if act is not None:
                return StepDecision(act)
        else:
            self.pursuit.reset()
        return StepDecision(self.policy.propose(view))


class ForwardExplore:
    """Mostly-forward random exploration: quarter turns with low probability."""

    name = "forward_explore"

    def __init__(self, rng: np.random.Generator, p_forward: float = 0.9,
                 confidence: float = DEFAULT_CONFIDENCE):
        if not 0 < p_forward <= 1:
            raise ValueError("p_forward must be in (0, 1]")
        self.rng = rng
        self.p_forward = p_forward
        self.confidence = confidence
        self.pursuit = _Pursuit()

    def decide(self, view: SimView) -> StepDecision | None:
        active, passive = self.pursuit.select(view)
        if active is not None:
            self.pursuit.reset()
            return interact_decision(view, active, self.confidence)
        if passive is not None:
            act = self.pursuit.pursue(view, passive)
            if act is not None:
                return StepDecision(act)
        else:
            self.pursuit.reset()
        if view.ray(0.0, 0.5) < 0.35 or view.last_blocked:
            sign = 1.0 if self.rng.random() < 0.5 else -1.0
            return StepDecision(_turn(sign * QUARTER))
        u = self.rng.random()
        if u < self.p_forward:
            return StepDecision(_forward())
        half = (1.0 - self.p_forward) / 2.0
        return StepDecision(_turn(QUARTER if u < self.p_forward + half
                                  else -QUARTER))


@dataclass(frozen=True)
class SwitchConfig:
    weights0: tuple[float, float, float] = (0.6, 2.5, 0.9)
    patience: int = 150        # fruitless steps before abandoning a policy
    decay: float = 0.5         # weight multiplier on abandonment
    wall_boost: float = 0.25   # wall-follow weight scale when a wall is near
    wall_threshold: float = 1.0

    def __post_init__(self) -> None:
        if len(self.weights0) != 3 or any(w < 0 for w in self.weights0):
            raise ValueError("need three nonnegative initial weights")
        if self.patience <= 0 or not 0 < self.decay <= 1:
            raise ValueError("bad patience or decay")


class AdaptiveSwitch:
    """Weighted stochastic switching among wall-follow, coverage, random walk.

    A policy that runs too long without a detection has its weight decayed;
    wall following only competes when a wall is actually nearby.
    """

    name = "adaptive_switch"

    def __init__(self, rng: np.random.Generator,
                 config: SwitchConfig = SwitchConfig(),
                 confidence: float = DEFAULT_CONFIDENCE):
        self.rng = rng
        self.config = config
        self.confidence = confidence
        self.weights = np.asarray(config.weights0, dtype=float)
        self.policies = [WallFollowPolicy(), CoveragePolicy(),
                         RandomWalkPolicy(rng)]
        self.pursuit = _Pursuit()
        self._g: int | None = None
        self._k = 0

    def _gated(self, view: SimView) -> np.ndarray:
        w = self.weights.copy()
        if view.wall_distance() <= self.config.wall_threshold:
            w[0] = self.config.wall_boost * max(w.sum(), 1e-12)
        else:
            w[0] = 0.0
        if w.sum() <= 0:
            w = np.array([0.0, 1.0, 1.0])
        return w / w.sum()

    def _resample(self, view: SimView) -> None:
        if self._g is not None and self._k > self.config.patience:
            self.weights[self._g] *= self.config.decay
        self._g = int(self.rng.choice(3, p=self._gated(view)))
        self._k = 0

    def decide(self, view: SimView) -> StepDecision | None:
        active, passive = self.pursuit.select(view)
        if active is not None:
            self.pursuit.reset()
            self._g, self._k = None, 0
            return interact_decision(view, active, self.confidence)
        if passive is not None:
            act = self.pursuit.pursue(view, passive)
            if act is not None:
                self._g, self._k = None, 0
                return StepDecision(act)
        else:
            self.pursuit.reset()
        self._k += 1
        if self._g is None or self._k > self.config.patience:
            self._resample(view)
        return StepDecision(self.policies[self._g].propose(view))


def make_strategy(name: str, rng: np.random.Generator,
                  confidence: float = DEFAULT_CONFIDENCE, **kwargs):
    if name == "forward_explore":
        return ForwardExplore(rng, confidence=confidence, **kwargs)
    if name == "adaptive_switch":
        return AdaptiveSwitch(rng, confidence=confidence, **kwargs)
    if name == "wall_follow":
        return PolicyStrategy(WallFollowPolicy(), confidence)
    if name == "coverage":
        return PolicyStrategy(CoveragePolicy(), confidence)
    if name == "random_walk":
        return PolicyStrategy(RandomWalkPolicy(rng), confidence)
    raise KeyError(f"unknown strategy {name!r}")


STRATEGY_NAMES = ("forward_explore", "adaptive_switch", "wall_follow",
                  "coverage", "random_walk")


# -- action log-likelihood ----------------------------------------------

MODELS = ("forward_explore", "adaptive_switch")
_SYMBOLS = ("forward", "stop", "turn_left_small", "turn_left_large",
            "turn_right_small", "turn_right_large")
_LARGE_TURN = QUARTER / 2


def _symbol(kind: str, magnitude: float) -> str:
    if kind in (FORWARD, STOP):
        return kind
    size = "large" if magnitude >= _LARGE_TURN else "small"
    return f"{kind}_{size}"


def _onehot(action: ActionDecision) -> dict[str, float]:
    return {_symbol(action.kind, action.magnitude): 1.0}


class _ForwardExploreModel:
    def __init__(self, p_forward: float = 0.9):
        self.p_forward = p_forward

    def predict(self, view: SimView) -> dict[str, float]:
        active, passive = _split_targets(view)
        if active is not None:
            return {"stop": 1.0}
        if passive is not None:
            return _onehot(pursue_action(view, passive))
        if view.last_blocked or view.ray(0.0, 0.5) < 0.35:
            return {"turn_left_large": 0.5, "turn_right_large": 0.5}
        half = (1.0 - self.p_forward) / 2.0
        return {"forward": self.p_forward,
                "turn_left_large": half, "turn_right_large": half}


class _AdaptiveSwitchModel:
    """Stationary symbol mixture of the three exploration policies.

    Tracking the exact policy state through a log is not possible (the
    switching indices are private randomness), so explore steps are scored
    under the marginal action distribution of the weighted policy mix:
    a right-leaning large-turn bias from the lane sweep, plus the small
    corrective turns of wall following.  Blocked steps lean strongly on
    left turns because the right-hand wall rule resolves most collisions.
    """

    EXPLORE = {"forward": 0.89, "turn_left_large": 0.024,
               "turn_right_large": 0.063, "turn_left_small": 0.0115,
               "turn_right_small": 0.0115}
    BLOCKED = {"forward": 0.01, "turn_left_large": 0.73,
               "turn_right_large": 0.18, "turn_left_small": 0.05,
               "turn_right_small": 0.03}

    def predict(self, view: SimView) -> dict[str, float]:
        active, passive = _split_targets(view)
        if active is not None:
            return {"stop": 1.0}
        if passive is not None:
            return _onehot(pursue_action(view, passive))
        if view.last_blocked or view.ray(0.0, 0.5) < 0.35:
            return dict(self.BLOCKED)
        return dict(self.EXPLORE)


def action_loglik(log: TrajectoryLog, model: str, eps: float = 0.02) -> float:
    """Log-likelihood of the logged action stream under a strategy model.

    Actions are discretized into move/stop/turn symbols (turns split by
    magnitude); each step's symbol is scored under the model's predictive
    distribution given the replayed context, smoothed by ``eps`` so no
    observed action has zero probability.
    """
    if model == "forward_explore":
        scorer = _ForwardExploreModel()
    elif model == "adaptive_switch":
        scorer = _AdaptiveSwitchModel()
    else:
        raise KeyError(f"unknown model {model!r}; choose from {MODELS}")
    from .geometry import WorkspaceSpec
    from .bayes import BayesNet
    from .engine import AgentConfig, PressureConfig
    header = log.header
    sim = Simulator(WorkspaceSpec.from_json_obj(header["workspace"]),
                    BayesNet.from_json(json.dumps(header["net"])),
                    PressureConfig.from_json_obj(header["pressure"]),
                    seed=header["seed"],
                    agent=AgentConfig.from_json_obj(header["agent"]))
    total = 0.0
    uniform = 1.0 / len(_SYMBOLS)
    for row in log.rows:
        dist = scorer.predict(sim.view())
        sym = _symbol(row["action"][0], row["action"][1])
        p = (1.0 - eps) * dist.get(sym, 0.0) + eps * uniform
        total += math.log(p)
        action = ActionDecision(row["action"][0], row["action"][1])
        test = (TestDecision(row["test"][0], row["test"][1])
                if row["test"] else TestDecision())
        classify = tuple(row["classify"]) if row["classify"] else None
        sim.step(action, test, classify)
    return total


def best_model(log: TrajectoryLog, eps: float = 0.02) -> tuple[str, dict[str, float]]:
    scores = {m: action_loglik(log, m, eps) for m in MODELS}
    return max(scores, key=scores.get), scores
