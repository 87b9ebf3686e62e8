"""Episode state machine: motion integration, terrain-dependent sensing,
shared detection history, and per-domain termination rules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..config import DomainSpec
from .agents import FLYING_TYPES, AgentState, Detection
from .terrain import TerrainGrid

STATUS_RUNNING = "running"
STATUS_REACHED = "reached_hideout"
STATUS_CAPTURED = "captured"
STATUS_TIMEOUT = "timeout"


def effective_radius(agent: AgentState, terrain: TerrainGrid,
                     target_cell: tuple[int, int]) -> float:
    """Detection range degraded by visibility at the target's cell."""
    ix, iy = target_cell
    if not (0 <= ix < terrain.width and 0 <= iy < terrain.height):
        raise ValueError(f"target cell {target_cell} outside grid")
    return agent.detect_radius_base * float(terrain.visibility[iy, ix])


def sense(blue: AgentState, adversary_pos: tuple[float, float],
          terrain: TerrainGrid) -> tuple[int, float, float]:
    """(flag, normalized position) observation; (0, 0, 0) when undetected."""
    ax, ay = adversary_pos
    dist = math.hypot(blue.x - ax, blue.y - ay)
    radius = effective_radius(blue, terrain, terrain.cell(ax, ay))
    if dist <= radius:
        return 1, ax / terrain.width, ay / terrain.height
    return 0, 0.0, 0.0


@dataclass
class EnvState:
    spec: DomainSpec
    terrain: TerrainGrid
    blue: list[AgentState]
    adversary: AgentState
    detections: list[Detection] = field(default_factory=list)
    t: int = 0
    status: str = STATUS_RUNNING
    # per-episode landmark draw
    known_hideouts: list[tuple[int, int]] = field(default_factory=list)
    unknown_hideouts: list[tuple[int, int]] = field(default_factory=list)
    goal_hideout: tuple[int, int] | None = None
    rendezvous_order: list[tuple[int, int]] = field(default_factory=list)
    rendezvous_visited: int = 0
    last_observations: list[tuple[int, float, float]] = field(default_factory=list)

    @property
    def done(self) -> bool:
        return self.status != STATUS_RUNNING

    def normalized_adversary(self) -> tuple[float, float]:
        return (self.adversary.x / self.terrain.width,
                self.adversary.y / self.terrain.height)


def _random_traversable_cell(rng: np.random.Generator, terrain: TerrainGrid,
                             avoid: list[tuple[int, int]] = (),
                             min_dist: float = 0.0) -> tuple[int, int]:
    ys, xs = np.nonzero(terrain.traversable)
    for _ in range(4000):
        i = int(rng.integers(len(xs)))
        cand = (int(xs[i]), int(ys[i]))
        if all(math.dist(cand, a) >= min_dist for a in avoid):
            return cand
    # fall back to the best candidate seen rather than spin forever
    return (int(xs[int(rng.integers(len(xs)))]), int(ys[int(rng.integers(len(ys)))]))


def init_env(spec: DomainSpec, terrain: TerrainGrid, episode_seed: int) -> EnvState:
    """Sample the per-episode draw: hideout knownness, goal, spawn cells."""
    rng = np.random.default_rng(episode_seed)
    cells = [(h.x, h.y) for h in terrain.hideouts]

    if spec.domain == "prison":
        n_known = sum(1 for h in terrain.hideouts if h.known)
        n_known = min(n_known, len(cells) - 1)  # keep >=1 unknown goal
        order = rng.permutation(len(cells))
        known = [cells[i] for i in order[:n_known]]
        unknown = [cells[i] for i in order[n_known:]]
    else:
        known = []
        unknown = list(cells)
    goal = unknown[int(rng.integers(len(unknown)))]

    hide_min_dist = 0.35 * min(terrain.width, terrain.height)
    start = _random_traversable_cell(rng, terrain, avoid=[goal] + cells,
                                     min_dist=hide_min_dist)
    adversary = AgentState(start[0] + 0.5, start[1] + 0.5, "adversary",
                           spec.adversary_speed, 0.0)
    adversary.detect_radius_base = spec.adversary_sense_radius

    blue = []
    for rec in spec.roster:
        cell = _random_traversable_cell(rng, terrain)
        blue.append(AgentState(cell[0] + 0.5, cell[1] + 0.5, rec["type"],
                               rec["speed"], rec["detect_radius"]))

    # rendezvous visited nearest-first from the start (narco only)
    remaining = list(terrain.rendezvous)
    ordered = []
    cur = start
    while remaining:
        nxt = min(remaining, key=lambda c: (math.dist(cur, c), c[1], c[0]))
        ordered.append(nxt)
        remaining.remove(nxt)
        cur = nxt

    state = EnvState(spec=spec, terrain=terrain, blue=blue, adversary=adversary,
                     known_hideouts=known, unknown_hideouts=unknown,
                     goal_hideout=goal, rendezvous_order=ordered)

    _run_sensing(state)
    if spec.cfg["episode"]["initial_detection"] and not state.detections:
        nx, ny = state.normalized_adversary()
        state.detections.append(Detection(0, nx, ny, detected_by=-1))
    return state


def _move(agent: AgentState, heading: float, speed: float,
          terrain: TerrainGrid) -> None:
    if speed == 0.0:
        return
    nx = agent.x + speed * math.cos(heading)
    ny = agent.y + speed * math.sin(heading)
    nx = min(max(nx, 0.0), terrain.width - 1e-9)
    ny = min(max(ny, 0.0), terrain.height - 1e-9)
    if terrain.traversable_at(nx, ny):
        agent.x, agent.y = nx, ny
    # blocked moves are cancelled; planners keep agents on traversable cells


def _run_sensing(state: EnvState) -> None:
    """All blue agents sense; simultaneous hits collapse to one entry."""
    adv_pos = (state.adversary.x, state.adversary.y)
    obs = [sense(b, adv_pos, state.terrain) for b in state.blue]
    state.last_observations = obs
    for i, (flag, ox, oy) in enumerate(obs):
        if flag:
            state.detections.append(Detection(state.t, ox, oy, detected_by=i))
            break


def _check_termination(state: EnvState) -> None:
    spec = state.spec
    adv = state.adversary
    if spec.domain == "narco":
        for b in state.blue:
            if b.agent_type == "marine_vessel" and \
                    math.hypot(b.x - adv.x, b.y - adv.y) <= spec.capture_radius:
                state.status = STATUS_CAPTURED
                return
        if state.rendezvous_visited < len(state.rendezvous_order):
            target = state.rendezvous_order[state.rendezvous_visited]
            if math.hypot(adv.x - (target[0] + 0.5),
                          adv.y - (target[1] + 0.5)) <= spec.goal_radius:
                state.rendezvous_visited += 1
        if state.rendezvous_visited >= len(state.rendezvous_order):
            for hx, hy in state.known_hideouts + state.unknown_hideouts:
                if math.hypot(adv.x - (hx + 0.5), adv.y - (hy + 0.5)) <= spec.goal_radius:
                    state.status = STATUS_REACHED
                    return
    else:
        # trackers never capture in the prison domain
        for hx, hy in state.known_hideouts + state.unknown_hideouts:
            if math.hypot(adv.x - (hx + 0.5), adv.y - (hy + 0.5)) <= spec.goal_radius:
                state.status = STATUS_REACHED
                return
    if state.t >= spec.max_steps:
        state.status = STATUS_TIMEOUT


def step_env(state: EnvState, blue_actions: list[tuple[float, float]],
             adversary_action: tuple[float, float]) -> EnvState:
    """Advance one step: move everyone, sense, update termination, t += 1."""
    if state.done:
        raise RuntimeError(f"cannot step a terminated episode ({state.status})")
    if len(blue_actions) != len(state.blue):
        raise ValueError("one action per blue agent required")
    for agent, (heading, speed) in zip(state.blue, blue_actions):
        if abs(speed) > agent.speed + 1e-9:
            raise ValueError(f"{agent.agent_type} speed {speed} exceeds max "
                             f"{agent.speed}")
        _move(agent, heading, speed, state.terrain)
    heading, speed = adversary_action
    if abs(speed) > state.adversary.speed + 1e-9:
        raise ValueError("adversary speed exceeds max")
    _move(state.adversary, heading, speed, state.terrain)

    state.t += 1
    state.adversary.t = state.t
    for b in state.blue:
        b.t = state.t
    _run_sensing(state)
    _check_termination(state)
    return state
