"""Run configuration: one YAML file drives the whole pipeline.

A config is a nested dict validated against the DEFAULTS tree; command-line
overrides use dotted paths (``episode.max_steps=600``). The resolved config
is hashed for content-addressed output directories and echoed into every
output directory for provenance.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import yaml

REFERENCE_DIMS = {"prison": (2428, 2428), "narco": (7884, 3538)}
MIN_SCALE = 1.0 / 64.0

DEFAULT_AGENTS = {
    "prison": {
        "camera": {"count": 2, "speed": 0.0, "detect_radius": 80.0},
        "search_party": {"count": 4, "speed": 7.0, "detect_radius": 60.0},
        "helicopter": {"count": 1, "speed": 21.0, "detect_radius": 120.0},
    },
    "narco": {
        "airplane": {"count": 2, "speed": 32.0, "detect_radius": 180.0},
        "marine_vessel": {"count": 3, "speed": 8.8, "detect_radius": 90.0},
    },
}

DEFAULTS = {
    "name": "run",
    "domain": "prison",
    "scale": 1.0,
    "seed": 0,
    "terrain": {
        "dark_forest_threshold": 0.35,
        "smoothing_frac": 0.04,
        "coast_frac": 0.15,
    },
    "landmarks": {
        "hideouts": 5,
        "known_hideouts": 2,
        "rendezvous": 2,
        "min_separation_frac": 0.18,
    },
    "agents": None,  # per-domain roster, see DEFAULT_AGENTS
    "adversary": {
        "speed": 7.0,
        "sense_radius": 90.0,
        "forest_weight": 2.0,
        "evade_timer": 60,
    },
    "policy": {
        "staleness": 30,
        "intercept_horizon": 10,
        "spiral_spacing_frac": 0.02,
        "spiral_turns": 4,
        "replan_threshold": 4.0,
    },
    "episode": {
        "max_steps": 4320,
        "initial_detection": True,
        "goal_radius": 16.0,
        "capture_radius": 16.0,
    },
    "dataset": {
        "history": 8,
        "stride": 5,
        "max_detections": 16,
        "horizons": [0, 30, 60],
    },
    "model": {
        "components": 4,
        "hidden": 64,
        "detection_embed": 32,
        "agent_embed": 32,
        "mi_weight": 0.1,
        "learning_rate": 1e-3,
        "batch_size": 64,
        "epochs": 30,
        "use_gnn": True,
        "use_mi": True,
        "use_omega_mm": True,
        "mi_sweep": False,
    },
    "eval": {
        "delta": 0.05,
        "p_threshold": 0.5,
        "mc_samples": 10000,
        "ade_mode": "mean",
    },
}


class ConfigError(ValueError):
    pass


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        dotted = f"{path}{key}"
        if key not in base:
            raise ConfigError(f"unknown config key: {dotted}")
        if isinstance(base[key], dict) and base[key] is not None:
            if not isinstance(value, dict):
                raise ConfigError(f"config key {dotted} expects a mapping")
            out[key] = _merge(base[key], value, f"{dotted}.")
        else:
            out[key] = copy.deepcopy(value)
    return out


def _validate_agents(agents: dict, domain: str) -> dict:
    known = set(DEFAULT_AGENTS[domain])
    resolved = {}
    for name, rec in agents.items():
        if name not in known:
            raise ConfigError(f"unknown config key: agents.{name}")
        base = dict(DEFAULT_AGENTS[domain][name])
        for k, v in rec.items():
            if k not in base:
                raise ConfigError(f"unknown config key: agents.{name}.{k}")
            base[k] = v
        resolved[name] = base
    for name in known - set(resolved):
        resolved[name] = dict(DEFAULT_AGENTS[domain][name])
    if "camera" in resolved and resolved["camera"]["speed"] != 0.0:
        raise ConfigError("agents.camera.speed must be 0")
    return resolved


def resolve_config(raw: dict) -> dict:
    """Merge a raw mapping over DEFAULTS and validate every key."""
    raw = dict(raw or {})
    agents_override = raw.pop("agents", None)
    cfg = _merge({k: v for k, v in DEFAULTS.items() if k != "agents"}, raw)
    domain = cfg["domain"]
    if domain not in REFERENCE_DIMS:
        raise ConfigError(f"domain must be one of {sorted(REFERENCE_DIMS)}")
    if not (MIN_SCALE - 1e-12 <= cfg["scale"] <= 1.0):
        raise ConfigError(f"scale must lie in [{MIN_SCALE:.6f}, 1.0]")
    cfg["agents"] = _validate_agents(agents_override or {}, domain)
    if domain == "prison":
        cfg["landmarks"]["rendezvous"] = 0
    elif cfg["landmarks"]["rendezvous"] < 1:
        raise ConfigError("narco domain needs at least one rendezvous point")
    if cfg["landmarks"]["hideouts"] < 1:
        raise ConfigError("need at least one hideout")
    if not (0 <= cfg["landmarks"]["known_hideouts"] <= cfg["landmarks"]["hideouts"]):
        raise ConfigError("known_hideouts must lie in [0, hideouts]")
    return cfg


def apply_overrides(cfg_raw: dict, overrides: list[str]) -> dict:
    out = copy.deepcopy(cfg_raw)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        dotted, text = item.split("=", 1)
        node = out
        parts = dotted.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"cannot override through scalar key {dotted}")
        node[parts[-1]] = yaml.safe_load(text)
    return out


def builtin_config_path(name: str) -> Path | None:
    ref = resources.files("evatrack") / "configs" / f"{name}.yaml"
    with resources.as_file(ref) as path:
        return path if path.exists() else None


def load_config(path_or_name: str, overrides: list[str] | None = None) -> dict:
    """Load YAML from a path or a shipped config name, then resolve."""
    path = Path(path_or_name)
    if not path.exists():
        builtin = builtin_config_path(str(path_or_name))
        if builtin is None:
            raise ConfigError(f"config not found: {path_or_name}")
        path = builtin
    raw = yaml.safe_load(path.read_text()) or {}
    if overrides:
        raw = apply_overrides(raw, overrides)
    return resolve_config(raw)


def config_hash(cfg: dict) -> str:
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def echo_config(cfg: dict, out_dir) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.resolved.yaml").write_text(
        yaml.safe_dump(cfg, sort_keys=True))


@dataclass
class DomainSpec:
    """Resolved, scale-adjusted quantities every module works from."""

    domain: str
    name: str
    width: int
    height: int
    scale: float
    seed: int
    cfg: dict = field(repr=False)

    @staticmethod
    def from_config(cfg: dict) -> "DomainSpec":
        ref_w, ref_h = REFERENCE_DIMS[cfg["domain"]]
        scale = float(cfg["scale"])
        return DomainSpec(
            domain=cfg["domain"],
            name=cfg["name"],
            width=int(round(ref_w * scale)),
            height=int(round(ref_h * scale)),
            scale=scale,
            seed=int(cfg["seed"]),
            cfg=cfg,
        )

    # scaled geometry -----------------------------------------------------
    def s(self, value: float) -> float:
        return float(value) * self.scale

    @property
    def roster(self) -> list[dict]:
        """Blue roster expanded to one record per agent, deterministic order."""
        out = []
        for name in sorted(self.cfg["agents"]):
            rec = self.cfg["agents"][name]
            for _ in range(int(rec["count"])):
                out.append({
                    "type": name,
                    "speed": self.s(rec["speed"]),
                    "detect_radius": self.s(rec["detect_radius"]),
                })
        return out

    @property
    def adversary_speed(self) -> float:
        return self.s(self.cfg["adversary"]["speed"])

    @property
    def adversary_sense_radius(self) -> float:
        return self.s(self.cfg["adversary"]["sense_radius"])

    @property
    def goal_radius(self) -> float:
        return self.s(self.cfg["episode"]["goal_radius"])

    @property
    def capture_radius(self) -> float:
        return self.s(self.cfg["episode"]["capture_radius"])

    @property
    def max_steps(self) -> int:
        return int(self.cfg["episode"]["max_steps"])

    @property
    def spiral_spacing(self) -> float:
        return self.cfg["policy"]["spiral_spacing_frac"] * min(self.width, self.height)
