from .agents import AGENT_TYPES, STATE_DIM, TYPE_INDEX, AgentState, Detection, state_vector
from .env import (
    STATUS_CAPTURED,
    STATUS_REACHED,
    STATUS_RUNNING,
    STATUS_TIMEOUT,
    EnvState,
    effective_radius,
    init_env,
    sense,
    step_env,
)
from .terrain import Hideout, TerrainError, TerrainGrid, build_terrain

__all__ = [
    "AGENT_TYPES", "STATE_DIM", "TYPE_INDEX", "AgentState", "Detection",
    "EnvState", "Hideout", "STATUS_CAPTURED", "STATUS_REACHED",
    "STATUS_RUNNING", "STATUS_TIMEOUT", "TerrainError", "TerrainGrid",
    "build_terrain", "effective_radius", "init_env", "sense", "state_vector",
    "step_env",
]
