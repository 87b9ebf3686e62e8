"""Tracker-team controller with four modes driven by the shared history:
converge on a lone detection, intercept along the last-two-detections
vector while fresh, spiral-search a stale one, and seeded waypoint patrol
when nothing was ever seen. Cameras never move.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..config import DomainSpec
from ..sim.agents import AgentState
from ..sim.env import EnvState
from ..sim.terrain import TerrainGrid
from .planning import NoPathError, astar_plan, spiral_waypoints

MODE_CONVERGE = "converge"
MODE_INTERCEPT = "intercept"
MODE_SPIRAL = "spiral"
MODE_PATROL = "random_walk"

FLYING_TYPES = {"helicopter", "airplane"}


@dataclass
class BlueMind:
    index: int
    n_agents: int
    rng: np.random.Generator
    staleness: int
    intercept_horizon: int
    spiral_spacing: float
    spiral_turns: int
    replan_threshold: float
    mode: str = MODE_PATROL
    waypoint: tuple[float, float] | None = None
    plan: list[tuple[int, int]] = field(default_factory=list)
    plan_idx: int = 0
    spiral: list[tuple[float, float]] = field(default_factory=list)
    spiral_idx: int = 0
    spiral_anchor: int | None = None  # detection timestep the spiral centers on


def make_blue_minds(spec: DomainSpec, episode_seed: int, n_agents: int
                    ) -> list[BlueMind]:
    pol = spec.cfg["policy"]
    return [BlueMind(index=i, n_agents=n_agents,
                     rng=np.random.default_rng([episode_seed, i]),
                     staleness=int(pol["staleness"]),
                     intercept_horizon=int(pol["intercept_horizon"]),
                     spiral_spacing=spec.spiral_spacing,
                     spiral_turns=int(pol["spiral_turns"]),
                     replan_threshold=float(pol["replan_threshold"]))
            for i in range(n_agents)]


def select_mode(n_detections: int, last_t: int | None, t: int,
                staleness: int) -> str:
    """Pure mode rule over (history size, last detection age)."""
    if n_detections == 0:
        return MODE_PATROL
    if t - last_t > staleness:
        return MODE_SPIRAL
    if n_detections == 1:
        return MODE_CONVERGE
    return MODE_INTERCEPT


def intercept_point(d_prev, d_last, horizon: int) -> tuple[float, float]:
    """Linear extrapolation of the last-two-detections velocity, in
    normalized coordinates."""
    dt = max(d_last.t - d_prev.t, 1)
    vx = (d_last.x - d_prev.x) / dt
    vy = (d_last.y - d_prev.y) / dt
    return (min(max(d_last.x + vx * horizon, 0.0), 1.0),
            min(max(d_last.y + vy * horizon, 0.0), 1.0))


def _denorm(p: tuple[float, float], terrain: TerrainGrid) -> tuple[float, float]:
    return (p[0] * terrain.width, p[1] * terrain.height)


def _spiral_for(mind: BlueMind, center: tuple[float, float],
                terrain: TerrainGrid) -> list[tuple[float, float]]:
    angle = 2.0 * math.pi * mind.index / max(mind.n_agents, 1)
    return spiral_waypoints(center, mind.spiral_spacing, mind.spiral_turns,
                            (terrain.width, terrain.height), start_angle=angle)


def _patrol_waypoint(mind: BlueMind, terrain: TerrainGrid) -> tuple[float, float]:
    ys, xs = np.nonzero(terrain.traversable)
    i = int(mind.rng.integers(len(xs)))
    return (float(xs[i]) + 0.5, float(ys[i]) + 0.5)


def _steer(mind: BlueMind, agent: AgentState, terrain: TerrainGrid
           ) -> tuple[float, float]:
    """Head for the current waypoint: straight line when flying, planned
    path on the ground."""
    if mind.waypoint is None:
        return 0.0, 0.0
    wx, wy = mind.waypoint
    dist = math.hypot(wx - agent.x, wy - agent.y)
    if dist < 1e-9:
        return 0.0, 0.0
    if agent.agent_type in FLYING_TYPES:
        heading = math.atan2(wy - agent.y, wx - agent.x)
        return heading, min(agent.speed, dist)

    # ground agents follow an A*-planned path, replanned when the waypoint moves
    goal = terrain.cell(wx, wy)
    replan = not mind.plan or mind.plan[-1] != goal
    if replan and mind.plan:
        old = mind.plan[-1]
        if math.dist(old, goal) < mind.replan_threshold:
            replan = False
    if replan:
        start = terrain.cell(agent.x, agent.y)
        try:
            mind.plan = astar_plan(start, goal, terrain, forest_weight=0.0)
        except (NoPathError, ValueError):
            mind.plan = []
        mind.plan_idx = 0
    while mind.plan_idx < len(mind.plan):
        px, py = mind.plan[mind.plan_idx]
        d = math.hypot(px + 0.5 - agent.x, py + 0.5 - agent.y)
        if d <= max(agent.speed, 0.75):
            mind.plan_idx += 1
            continue
        return math.atan2(py + 0.5 - agent.y, px + 0.5 - agent.x), min(agent.speed, d)
    heading = math.atan2(wy - agent.y, wx - agent.x)
    return heading, min(agent.speed, dist)


def blue_act(minds: list[BlueMind], state: EnvState
             ) -> list[tuple[float, float]]:
    """One action per blue agent for the current step."""
    if state.done:
        raise RuntimeError("episode is not running")
    detections = state.detections
    terrain = state.terrain
    t = state.t
    last_t = detections[-1].t if detections else None
    mode = select_mode(len(detections), last_t, t,
                       minds[0].staleness if minds else 0)

    actions: list[tuple[float, float]] = []
    for mind, agent in zip(minds, state.blue):
        if agent.agent_type == "camera":
            actions.append((0.0, 0.0))
            continue
        mind.mode = mode
        if mode == MODE_PATROL:
            if mind.waypoint is None or \
                    math.hypot(mind.waypoint[0] - agent.x,
                               mind.waypoint[1] - agent.y) <= max(agent.speed, 1.0):
                mind.waypoint = _patrol_waypoint(mind, terrain)
        elif mode == MODE_CONVERGE:
            mind.waypoint = _denorm((detections[-1].x, detections[-1].y), terrain)
        elif mode == MODE_INTERCEPT:
            point = intercept_point(detections[-2], detections[-1],
                                    mind.intercept_horizon)
            mind.waypoint = _denorm(point, terrain)
        else:  # spiral around the last (stale) detection
            if mind.spiral_anchor != last_t or not mind.spiral:
                center = _denorm((detections[-1].x, detections[-1].y), terrain)
                mind.spiral = _spiral_for(mind, center, terrain)
                mind.spiral_idx = 0
                mind.spiral_anchor = last_t
            sx, sy = mind.spiral[mind.spiral_idx]
            if math.hypot(sx - agent.x, sy - agent.y) <= max(agent.speed, 1.0):
                mind.spiral_idx = (mind.spiral_idx + 1) % len(mind.spiral)
                sx, sy = mind.spiral[mind.spiral_idx]
            mind.waypoint = (sx, sy)
        actions.append(_steer(mind, agent, terrain))
    return actions
