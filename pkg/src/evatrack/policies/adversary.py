"""Evasive adversary controller: a two-mode machine over planned paths.

travel: follow a cover-weighted path toward the current objective (next
rendezvous, then the goal hideout). evade: on sighting any tracker inside
the sensing radius, dive for the cheapest-to-reach dark cell; if contact
persists past the evade timer, give up on stealth and run for a known
hideout; after a contact-free timer, resume travel.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from ..sim.env import EnvState
from .planning import astar_plan, nearest_by_cost

log = logging.getLogger(__name__)

MODE_TRAVEL = "travel"
MODE_EVADE = "evade"


@dataclass
class AdversaryMind:
    sense_radius: float
    evade_timer: int
    forest_weight: float
    mode: str = MODE_TRAVEL
    plan: list[tuple[int, int]] = field(default_factory=list)
    plan_idx: int = 0
    target: tuple[int, int] | None = None
    evade_entered: int | None = None
    last_sighting: int | None = None
    escalated: bool = False


def _objective(state: EnvState) -> tuple[int, int]:
    if state.rendezvous_visited < len(state.rendezvous_order):
        return state.rendezvous_order[state.rendezvous_visited]
    return state.goal_hideout


def _known_hideout_target(mind: AdversaryMind, state: EnvState,
                          start: tuple[int, int]) -> tuple[int, int]:
    if state.known_hideouts:
        found = nearest_by_cost(start, state.known_hideouts, state.terrain,
                                mind.forest_weight)
        if found is not None:
            return found[0]
    log.info("no reachable known hideout; falling back to goal hideout")
    return _objective(state)


def _replan(mind: AdversaryMind, state: EnvState, target: tuple[int, int]) -> None:
    start = state.terrain.cell(state.adversary.x, state.adversary.y)
    mind.target = target
    mind.plan = astar_plan(start, target, state.terrain, mind.forest_weight)
    mind.plan_idx = 0


def _enter_evade(mind: AdversaryMind, state: EnvState, t: int) -> None:
    mind.mode = MODE_EVADE
    mind.evade_entered = t
    mind.escalated = False
    start = state.terrain.cell(state.adversary.x, state.adversary.y)
    found = nearest_by_cost(start, state.terrain.dark_cells, state.terrain,
                            mind.forest_weight)
    if found is None:
        log.info("no dark cover reachable; evading straight to a hideout")
        mind.escalated = True
        _replan(mind, state, _known_hideout_target(mind, state, start))
        return
    cell, path = found
    mind.target = cell
    mind.plan = path
    mind.plan_idx = 0


def _follow_plan(mind: AdversaryMind, state: EnvState) -> tuple[float, float]:
    adv = state.adversary
    while mind.plan_idx < len(mind.plan):
        wx, wy = mind.plan[mind.plan_idx]
        dist = math.hypot(wx + 0.5 - adv.x, wy + 0.5 - adv.y)
        if dist <= max(adv.speed, 0.75):
            mind.plan_idx += 1
            continue
        heading = math.atan2(wy + 0.5 - adv.y, wx + 0.5 - adv.x)
        return heading, min(adv.speed, dist)
    return 0.0, 0.0  # at target; hold position


def adversary_act(mind: AdversaryMind, state: EnvState) -> tuple[float, float]:
    """Pick the adversary action for the current step."""
    if state.done:
        raise RuntimeError("episode is not running")
    adv = state.adversary
    t = state.t
    sighted = any(math.hypot(b.x - adv.x, b.y - adv.y) <= mind.sense_radius
                  for b in state.blue)
    if sighted:
        mind.last_sighting = t

    if mind.mode == MODE_TRAVEL:
        if sighted:
            _enter_evade(mind, state, t)
        elif mind.target != _objective(state):
            _replan(mind, state, _objective(state))
    else:
        lost_for = t - mind.last_sighting if mind.last_sighting is not None else 0
        if lost_for >= mind.evade_timer:
            mind.mode = MODE_TRAVEL
            mind.escalated = False
            _replan(mind, state, _objective(state))
        elif (sighted and not mind.escalated
              and t - mind.evade_entered >= mind.evade_timer):
            mind.escalated = True
            start = state.terrain.cell(adv.x, adv.y)
            _replan(mind, state, _known_hideout_target(mind, state, start))

    if not mind.plan:
        _replan(mind, state, mind.target or _objective(state))
    return _follow_plan(mind, state)
