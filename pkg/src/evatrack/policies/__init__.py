from .adversary import MODE_EVADE, MODE_TRAVEL, AdversaryMind, adversary_act
from .blue import (
    MODE_CONVERGE,
    MODE_INTERCEPT,
    MODE_PATROL,
    MODE_SPIRAL,
    BlueMind,
    blue_act,
    intercept_point,
    make_blue_minds,
    select_mode,
)
from .planning import (
    NoPathError,
    astar_plan,
    nearest_by_cost,
    octile,
    path_cost,
    spiral_waypoints,
    step_cost,
)

__all__ = [
    "AdversaryMind", "BlueMind", "MODE_CONVERGE", "MODE_EVADE",
    "MODE_INTERCEPT", "MODE_PATROL", "MODE_SPIRAL", "MODE_TRAVEL",
    "NoPathError", "adversary_act", "astar_plan", "blue_act",
    "intercept_point", "make_blue_minds", "nearest_by_cost", "octile",
    "path_cost", "select_mode", "spiral_waypoints", "step_cost",
]
