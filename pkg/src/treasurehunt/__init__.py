"""Deterministic active-perception simulator and strategy toolbox for the
satisficing treasure hunt: find targets in a 2D workspace, reveal their
categorical features at a cost, and classify them under time pressure.
"""

__version__ = "0.1.0"

from .bayes import (BayesNet, Evidence, FeatureVar, LabeledDataset,
                    NonBinaryHypothesis, conditional_entropy, entropy,
                    expected_info_first_m, learn_cpts, log_odds, map_class,
                    mutual_information, posterior, prior_log_odds, prob_gain,
                    random_net)
from .heuristics import (HeuristicId, OpCounter, TimePressureConfig,
                         classify_under_pressure, gamma, h_infofree,
                         h_logodds, h_probgain, rank_by_abs_log_odds,
                         rank_by_prob_gain)
from .geometry import (Point, Polygon, Pose, SectorFov, Target, WorkspaceSpec,
                       in_fov, in_free_space, line_of_sight, point_in_polygon,
                       ray_cast, set_visibility_nonempty, visible_targets,
                       wrap_angle)
from .layouts import DEFAULT_TARGET_COUNTS, layout_names, load_layout
from .engine import (ActionDecision, AgentConfig, AlreadyClassified,
                     BudgetExhausted, HorizonExceeded, PressureConfig,
                     SimView, Simulator, StepDecision, TargetNotSensible,
                     TestDecision, TrajectoryLog, replay, run)
from .metrics import DEFAULT_WEIGHTS, Metrics, ObjectiveWeights, compute_metrics
from .strategies import (MODELS, STRATEGY_NAMES, AdaptiveSwitch,
                         ForwardExplore, PolicyStrategy, SwitchConfig,
                         action_loglik, best_model, make_strategy)
from .planners import (Plan, PlannerStrategy, Roadmap, best_allocation,
                       build_cell_graph, build_prm, decompose_cells,
                       locate_cell, plan_route, plan_route_exhaustive,
                       target_value_curve)
from .bench import (RunRecord, run_cell, run_matrix, sample_scenario,
                    stable_seed, summarize)
from .cardata import (CAR_CLASSES, CAR_FEATURES, CarSplit, bundled_car_csv,
                      generate_car_dataset, ingest_car_eval)
from .passive import BenchReport, BenchRow, run_passive_bench, train_net
