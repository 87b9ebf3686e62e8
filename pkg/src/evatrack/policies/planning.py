"""Grid planning: weighted A*, multi-target Dijkstra, spiral search pattern.

Edge cost for a move into a cell is move_length * (1 + w * (1 - density)),
so dense cover is cheap and a cover-seeking planner is just a large w.
The octile heuristic stays admissible because the multiplier is >= 1.
"""

from __future__ import annotations

import heapq
import math

from ..sim.terrain import TerrainGrid

SQRT2 = math.sqrt(2.0)
_MOVES = [(1, 0, 1.0), (-1, 0, 1.0), (0, 1, 1.0), (0, -1, 1.0),
          (1, 1, SQRT2), (1, -1, SQRT2), (-1, 1, SQRT2), (-1, -1, SQRT2)]


class NoPathError(RuntimeError):
    pass


def step_cost(move_len: float, density: float, forest_weight: float) -> float:
    return move_len * (1.0 + forest_weight * (1.0 - density))


def octile(a: tuple[int, int], b: tuple[int, int]) -> float:
    dx = abs(a[0] - b[0])
    dy = abs(a[1] - b[1])
    return max(dx, dy) + (SQRT2 - 1.0) * min(dx, dy)


def _check_cell(terrain: TerrainGrid, cell: tuple[int, int], label: str) -> None:
    x, y = cell
    if not (0 <= x < terrain.width and 0 <= y < terrain.height):
        raise ValueError(f"{label} cell {cell} outside grid")
    if not terrain.traversable[y, x]:
        raise ValueError(f"{label} cell {cell} is not traversable")


def _walk_back(parents, cell):
    path = [cell]
    while cell in parents:
        cell = parents[cell]
        path.append(cell)
    path.reverse()
    return path


def astar_plan(start: tuple[int, int], goal: tuple[int, int],
               terrain: TerrainGrid, forest_weight: float = 0.0
               ) -> list[tuple[int, int]]:
    """Minimum-cost 8-connected path; ties broken by (y, x) for replay."""
    if forest_weight < 0:
        raise ValueError("forest_weight must be >= 0")
    _check_cell(terrain, start, "start")
    _check_cell(terrain, goal, "goal")
    if start == goal:
        return [start]

    density = terrain.forest_density
    trav = terrain.traversable
    w, h = terrain.width, terrain.height
    best = {start: 0.0}
    parents: dict[tuple[int, int], tuple[int, int]] = {}
    open_heap = [(octile(start, goal), start[1], start[0], 0.0, start)]
    closed = set()
    while open_heap:
        _, _, _, g, cell = heapq.heappop(open_heap)
        if cell in closed:
            continue
        if cell == goal:
            return _walk_back(parents, cell)
        closed.add(cell)
        cx, cy = cell
        for dx, dy, length in _MOVES:
            nx, ny = cx + dx, cy + dy
            if not (0 <= nx < w and 0 <= ny < h) or not trav[ny, nx]:
                continue
            nxt = (nx, ny)
            ng = g + step_cost(length, float(density[ny, nx]), forest_weight)
            if ng < best.get(nxt, math.inf) - 1e-12:
                best[nxt] = ng
                parents[nxt] = cell
                f = ng + octile(nxt, goal)
                heapq.heappush(open_heap, (f, ny, nx, ng, nxt))
    raise NoPathError(f"no traversable path from {start} to {goal}")


def path_cost(path: list[tuple[int, int]], terrain: TerrainGrid,
              forest_weight: float) -> float:
    total = 0.0
    for (ax, ay), (bx, by) in zip(path, path[1:]):
        length = SQRT2 if (ax != bx and ay != by) else 1.0
        total += step_cost(length, float(terrain.forest_density[by, bx]),
                           forest_weight)
    return total


def nearest_by_cost(start: tuple[int, int], targets, terrain: TerrainGrid,
                    forest_weight: float = 0.0
                    ) -> tuple[tuple[int, int], list[tuple[int, int]]] | None:
    """Cheapest-to-reach target cell via one Dijkstra sweep.

    Settling order is (cost, y, x), so equal-cost targets resolve to the
    lowest (y, x) — the global tie-break rule.
    """
    _check_cell(terrain, start, "start")
    target_set = set(targets)
    if not target_set:
        return None
    density = terrain.forest_density
    trav = terrain.traversable
    w, h = terrain.width, terrain.height
    best = {start: 0.0}
    parents: dict[tuple[int, int], tuple[int, int]] = {}
    open_heap = [(0.0, start[1], start[0], start)]
    closed = set()
    while open_heap:
        g, _, _, cell = heapq.heappop(open_heap)
        if cell in closed:
            continue
        if cell in target_set:
            return cell, _walk_back(parents, cell)
        closed.add(cell)
        cx, cy = cell
        for dx, dy, length in _MOVES:
            nx, ny = cx + dx, cy + dy
            if not (0 <= nx < w and 0 <= ny < h) or not trav[ny, nx]:
                continue
            nxt = (nx, ny)
            ng = g + step_cost(length, float(density[ny, nx]), forest_weight)
            if ng < best.get(nxt, math.inf) - 1e-12:
                best[nxt] = ng
                parents[nxt] = cell
                heapq.heappush(open_heap, (ng, ny, nx, nxt))
    return None


def spiral_waypoints(center: tuple[float, float], spacing: float, turns: int,
                     bounds: tuple[int, int], start_angle: float = 0.0
                     ) -> list[tuple[float, float]]:
    """Archimedean spiral r = spacing * theta / 2pi, clipped to the grid.

    The angular step keeps consecutive samples within 2 * spacing; clipping
    to the (convex) grid never increases distances.
    """
    if spacing <= 0:
        raise ValueError("spacing must be > 0")
    if turns < 0:
        raise ValueError("turns must be >= 0")
    w, h = bounds
    cx, cy = center
    points = [(min(max(cx, 0.0), w - 1.0), min(max(cy, 0.0), h - 1.0))]
    if turns == 0:
        return points
    dtheta = min(math.pi / 4.0, 1.5 / turns)
    theta = dtheta
    while theta <= 2.0 * math.pi * turns + 1e-9:
        r = spacing * theta / (2.0 * math.pi)
        x = cx + r * math.cos(theta + start_angle)
        y = cy + r * math.sin(theta + start_angle)
        points.append((min(max(x, 0.0), w - 1.0), min(max(y, 0.0), h - 1.0)))
        theta += dtheta
    return points
