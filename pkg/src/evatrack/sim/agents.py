"""Agent records, the fixed state-vector layout, and detection entries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

AGENT_TYPES = ("camera", "search_party", "helicopter", "airplane",
               "marine_vessel", "adversary")
TYPE_INDEX = {name: i for i, name in enumerate(AGENT_TYPES)}
STATE_DIM = 2 + len(AGENT_TYPES) + 1  # x, y, one-hot type, time
FLYING_TYPES = {"helicopter", "airplane"}


@dataclass
class AgentState:
    x: float
    y: float
    agent_type: str
    speed: float
    detect_radius_base: float
    t: int = 0

    def __post_init__(self):
        if self.agent_type not in TYPE_INDEX:
            raise ValueError(f"unknown agent type {self.agent_type!r}")
        if self.agent_type == "camera" and self.speed != 0.0:
            raise ValueError("cameras are fixed: speed must be 0")
        if self.agent_type != "camera" and self.speed <= 0.0:
            raise ValueError(f"{self.agent_type} needs speed > 0")

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


def state_vector(agent: AgentState, width: int, height: int,
                 max_steps: int) -> np.ndarray:
    """Normalized [x/w, y/h, one_hot(type), t/T_max] in fixed field order."""
    vec = np.zeros(STATE_DIM)
    vec[0] = agent.x / width
    vec[1] = agent.y / height
    vec[2 + TYPE_INDEX[agent.agent_type]] = 1.0
    vec[-1] = agent.t / max_steps
    return vec


@dataclass(frozen=True)
class Detection:
    """One shared-history entry: exact normalized adversary position at t."""

    t: int
    x: float
    y: float
    detected_by: int  # blue index; -1 marks start-of-episode intelligence
