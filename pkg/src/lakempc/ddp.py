"""Deterministic dynamic programming benchmark.

Backward induction over a discretized storage grid with the disturbance
(inflow) perfectly known over the whole run, giving the offline-optimal
release policy the online controller is measured against. Cost-to-go is
interpolated linearly between grid nodes; the forward pass looks the policy
up at the nearest node and still goes through the physical saturation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .hydrology import HOUR_SECONDS, LakeParams, level_of_storage, release_bounds, saturate_release
from .trace import ClosedLoopTrace

HOURLY = "hourly"
DAILY = "daily"
DAY_SECONDS = 24.0 * HOUR_SECONDS


@dataclass
class DdpConfig:
    """Weights, grid and action sampling for the backward optimization.

    demand_ref (m^3/s) normalizes the deficit term so the published weights
    act on commensurate quantities; the flood and dry terms are already in
    meters. The default grid spans storages from empty to three times the
    flood-threshold storage.
    """

    w_flood: float = 0.4
    w_demand: float = 0.6
    w_dry: float = 0.0
    grid_points: int = 201
    storage_range: tuple[float, float] = (0.0, 656_550_000.0)
    action_samples: int = 101
    time_step: str = HOURLY
    demand_ref: float = 100.0

    def __post_init__(self) -> None:
        if min(self.w_flood, self.w_demand, self.w_dry) < 0.0:
            raise ValueError("objective weights must be nonnegative")
        if self.w_flood + self.w_demand + self.w_dry <= 0.0:
            raise ValueError("objective weights must sum to a positive number")
        if self.grid_points < 3:
            raise ValueError("grid_points must be at least 3")
        if self.action_samples < 2:
            raise ValueError("action_samples must be at least 2")
        lo, hi = self.storage_range
        if not 0.0 <= lo < hi:
            raise ValueError(f"storage_range must satisfy 0 <= lo < hi, got {self.storage_range}")
        if self.time_step not in (HOURLY, DAILY):
            raise ValueError(f"time_step must be '{HOURLY}' or '{DAILY}'")
        if self.demand_ref <= 0.0:
            raise ValueError("demand_ref must be positive")

    @property
    def seconds_per_step(self) -> float:
        return HOUR_SECONDS if self.time_step == HOURLY else DAY_SECONDS


@dataclass
class ValueTable:
    """Cost-to-go and optimal release per (time, storage node).

    values[t][i] is the optimal cost from node i with t..T-1 still to play;
    the terminal layer values[T] is identically zero. out_of_grid counts
    transitions that left the grid and were clamped to its boundary.
    """

    values: np.ndarray
    policy: np.ndarray
    grid: np.ndarray
    seconds_per_step: float
    out_of_grid: int = 0

    @property
    def n_steps(self) -> int:
        return self.policy.shape[0]


def stage_cost(
    params: LakeParams, config: DdpConfig, level: float, release: float, demand: float
) -> float:
    """Weighted quadratic-hinge cost of one step.

    The level is the one reached at the end of the step, matching how the
    closed-loop trace records levels.
    """
    flood = max(level - params.flood_threshold, 0.0)
    dry = max(params.dry_threshold - level, 0.0)
    deficit = max((demand - release) / config.demand_ref, 0.0)
    return (
        config.w_flood * flood**2
        + config.w_demand * deficit**2
        + config.w_dry * dry**2
    )


def trace_cost(params: LakeParams, config: DdpConfig, trace: ClosedLoopTrace) -> float:
    """Total stage cost of a recorded trace under the DDP objective."""
    flood = np.maximum(trace.levels - params.flood_threshold, 0.0)
    dry = np.maximum(params.dry_threshold - trace.levels, 0.0)
    deficit = np.maximum((trace.demands - trace.releases) / config.demand_ref, 0.0)
    return float(
        config.w_flood * np.sum(flood**2)
        + config.w_demand * np.sum(deficit**2)
        + config.w_dry * np.sum(dry**2)
    )


def backward_induction(params: LakeParams, config: DdpConfig, inflow, demand) -> ValueTable:
    """Solve the finite-horizon problem backwards over the storage grid.

    For every node, action_samples candidate releases uniform in the node's
    physical bounds are tried; the next storage follows the mass balance,
    the cost-to-go is interpolated linearly, and ties go to the smaller
    release. Transitions leaving the grid are clamped to its boundary
    without extra penalty (counted in out_of_grid).
    """
    inflow = np.asarray(inflow, dtype=float)
    demand = np.asarray(demand, dtype=float)
    if inflow.shape != demand.shape or inflow.ndim != 1 or inflow.size == 0:
        raise ValueError("inflow and demand must be equal-length nonempty 1-d arrays")
    t_end = inflow.size
    grid = np.linspace(config.storage_range[0], config.storage_range[1], config.grid_points)
    dt = config.seconds_per_step
    area = params.surface_area
    offset = params.level_offset

    n_nodes, n_act = config.grid_points, config.action_samples
    actions = np.zeros((n_nodes, n_act))
    for i in range(n_nodes):
        r_min, r_max = release_bounds(params, level_of_storage(params, grid[i]))
        actions[i] = np.linspace(r_min, r_max, n_act)
    next_base = grid[:, None] - dt * actions

    values = np.zeros((t_end + 1, n_nodes))
    policy = np.zeros((t_end, n_nodes))
    node_range = np.arange(n_nodes)
    out_of_grid = 0
    for t in range(t_end - 1, -1, -1):
        next_raw = next_base + dt * inflow[t]
        out_of_grid += int(np.sum((next_raw < grid[0]) | (next_raw > grid[-1])))
        next_s = np.clip(next_raw, grid[0], grid[-1])
        level_next = next_s / area + offset
        stage = config.w_flood * np.maximum(level_next - params.flood_threshold, 0.0) ** 2
        stage += config.w_dry * np.maximum(params.dry_threshold - level_next, 0.0) ** 2
        stage += config.w_demand * np.maximum((demand[t] - actions) / config.demand_ref, 0.0) ** 2
        total = stage + np.interp(next_s.ravel(), grid, values[t + 1]).reshape(n_nodes, n_act)
        best = np.argmin(total, axis=1)  # first minimum: ties go to the smaller release
        values[t] = total[node_range, best]
        policy[t] = actions[node_range, best]
    if out_of_grid:
        warnings.warn(
            f"{out_of_grid} grid transitions were clamped to the storage-grid boundary",
            stacklevel=2,
        )
    return ValueTable(
        values=values, policy=policy, grid=grid, seconds_per_step=dt, out_of_grid=out_of_grid
    )


def simulate_policy(
    params: LakeParams, table: ValueTable, inflow, demand, s0: float
) -> ClosedLoopTrace:
    """Forward pass: apply the tabulated policy from the nearest storage node.

    The commanded release still passes through the physical saturation at
    the true (off-grid) level, and storage is floored at zero, so the trace
    obeys the same plant model as every other run.
    """
    inflow = np.asarray(inflow, dtype=float)
    demand = np.asarray(demand, dtype=float)
    t_end = table.n_steps
    if inflow.shape != (t_end,) or demand.shape != (t_end,):
        raise ValueError(f"inflow/demand must have length {t_end} to match the value table")
    grid = table.grid
    dt = table.seconds_per_step

    levels = np.zeros(t_end)
    storages = np.zeros(t_end + 1)
    releases = np.zeros(t_end)
    commands = np.zeros(t_end)
    storage = float(s0)
    storages[0] = storage
    for t in range(t_end):
        pos = int(np.searchsorted(grid, storage))
        if pos <= 0:
            node = 0
        elif pos >= grid.size:
            node = grid.size - 1
        else:
            node = pos if grid[pos] - storage < storage - grid[pos - 1] else pos - 1
        command = float(table.policy[t, node])
        level = level_of_storage(params, storage)
        release = saturate_release(release_bounds(params, level), command)
        storage = max(storage + dt * (inflow[t] - release), 0.0)
        storages[t + 1] = storage
        levels[t] = level_of_storage(params, storage)
        commands[t] = command
        releases[t] = release
    return ClosedLoopTrace(
        levels=levels,
        storages=storages,
        releases=releases,
        commands=commands,
        inflows=inflow.copy(),
        demands=demand.copy(),
        label="ddp",
    )
