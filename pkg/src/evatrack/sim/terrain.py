"""Procedural terrain: smoothed-noise cover fields, coastline carving for
the maritime domain, and seeded landmark placement.

Cover drives two coupled per-cell fields: forest/sea-state density (high
cover = good concealment, preferred by the adversary's planner) and
visibility (high cover = short detection range). Normalizing cover to [0,1]
guarantees a minimum-visibility pocket, so a dark region always exists for
any threshold above 0.1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import gaussian_filter, gaussian_filter1d

from ..config import MIN_SCALE, DomainSpec

VISIBILITY_FLOOR = 0.1


class TerrainError(ValueError):
    pass


@dataclass
class Hideout:
    x: int
    y: int
    known: bool


@dataclass
class TerrainGrid:
    width: int
    height: int
    visibility: np.ndarray        # (height, width), values in (0, 1]
    forest_density: np.ndarray    # (height, width), values in [0, 1]
    water: np.ndarray             # (height, width) bool
    traversable: np.ndarray       # (height, width) bool
    hideouts: list[Hideout]
    rendezvous: list[tuple[int, int]]
    dark_threshold: float
    dark_cells: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.dark_cells:
            ys, xs = np.nonzero(
                (self.visibility < self.dark_threshold) & self.traversable)
            self.dark_cells = [(int(x), int(y)) for x, y in zip(xs, ys)]

    def in_bounds(self, x: float, y: float) -> bool:
        return 0.0 <= x < self.width and 0.0 <= y < self.height

    def cell(self, x: float, y: float) -> tuple[int, int]:
        ix = min(max(int(x), 0), self.width - 1)
        iy = min(max(int(y), 0), self.height - 1)
        return ix, iy

    def visibility_at(self, x: float, y: float) -> float:
        ix, iy = self.cell(x, y)
        return float(self.visibility[iy, ix])

    def traversable_at(self, x: float, y: float) -> bool:
        ix, iy = self.cell(x, y)
        return bool(self.traversable[iy, ix])

    def fingerprint(self) -> bytes:
        parts = [self.visibility.tobytes(), self.forest_density.tobytes(),
                 self.water.tobytes(),
                 repr([(h.x, h.y, h.known) for h in self.hideouts]).encode(),
                 repr(self.rendezvous).encode()]
        return b"|".join(parts)


def _cover_field(rng: np.random.Generator, width: int, height: int,
                 smoothing_frac: float) -> np.ndarray:
    noise = rng.random((height, width))
    sigma = max(1.0, smoothing_frac * min(width, height))
    cover = gaussian_filter(noise, sigma=sigma, mode="reflect")
    lo, hi = cover.min(), cover.max()
    return (cover - lo) / (hi - lo)


def _coast_mask(rng: np.random.Generator, width: int, height: int,
                coast_frac: float) -> np.ndarray:
    """Land band along the western edge; everything else is open sea."""
    base = coast_frac * width
    wiggle = gaussian_filter1d(rng.standard_normal(height),
                               sigma=max(1.0, 0.05 * height), mode="reflect")
    span = np.abs(wiggle).max()
    if span > 0:
        wiggle = wiggle / span * 0.5 * base
    coast_x = np.clip(base + wiggle, 1.0, width - 2.0)
    xs = np.arange(width)[None, :]
    return xs < coast_x[:, None]


def _place_landmarks(rng: np.random.Generator, traversable: np.ndarray,
                     count: int, min_sep: float,
                     taken: list[tuple[int, int]]) -> list[tuple[int, int]]:
    height, width = traversable.shape
    ys, xs = np.nonzero(traversable)
    if len(xs) < count + len(taken):
        raise TerrainError(
            f"grid too small: {len(xs)} traversable cells for "
            f"{count + len(taken)} disjoint landmarks")
    placed: list[tuple[int, int]] = []
    sep = min_sep
    while len(placed) < count:
        attempts = 0
        while attempts < 2000:
            i = int(rng.integers(len(xs)))
            cand = (int(xs[i]), int(ys[i]))
            others = placed + taken
            if all((cand[0] - ox) ** 2 + (cand[1] - oy) ** 2 >= sep ** 2
                   for ox, oy in others):
                placed.append(cand)
                break
            attempts += 1
        else:
            # relax separation rather than fail on crowded small grids,
            # but never allow two landmarks on the same cell
            sep *= 0.5
            if sep < 1.0:
                raise TerrainError(
                    "grid too small to place required landmarks on disjoint cells")
    return placed


def build_terrain(spec: DomainSpec, seed: int) -> TerrainGrid:
    """Deterministic terrain for a fixed (spec, seed)."""
    cfg = spec.cfg
    if spec.scale < MIN_SCALE - 1e-12:
        raise TerrainError(f"scale below minimum {MIN_SCALE:.6f}")
    width, height = spec.width, spec.height
    if min(width, height) < 16:
        raise TerrainError("grid smaller than 16 cells per side")

    rng = np.random.default_rng(seed)
    cover = _cover_field(rng, width, height, cfg["terrain"]["smoothing_frac"])
    visibility = 1.0 - (1.0 - VISIBILITY_FLOOR) * cover
    forest_density = cover

    if spec.domain == "narco":
        land = _coast_mask(rng, width, height, cfg["terrain"]["coast_frac"])
        water = ~land
        traversable = water.copy()
    else:
        water = np.zeros((height, width), dtype=bool)
        traversable = np.ones((height, width), dtype=bool)

    min_sep = cfg["landmarks"]["min_separation_frac"] * min(width, height)
    n_hideouts = int(cfg["landmarks"]["hideouts"])
    n_rendezvous = int(cfg["landmarks"]["rendezvous"])
    hideout_cells = _place_landmarks(rng, traversable, n_hideouts, min_sep, [])
    rendezvous = _place_landmarks(rng, traversable, n_rendezvous, min_sep,
                                  hideout_cells)
    n_known = int(cfg["landmarks"]["known_hideouts"])
    hideouts = [Hideout(x, y, known=i < n_known)
                for i, (x, y) in enumerate(hideout_cells)]

    return TerrainGrid(
        width=width, height=height,
        visibility=visibility, forest_density=forest_density,
        water=water, traversable=traversable,
        hideouts=hideouts, rendezvous=rendezvous,
        dark_threshold=float(cfg["terrain"]["dark_forest_threshold"]),
    )
