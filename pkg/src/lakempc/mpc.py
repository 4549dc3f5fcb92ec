"""Receding-horizon control of the lake.

Each decision step assembles a convex QP over the release plan u and two
soft-constraint slacks: flood exceedance (in level units) and demand deficit
(in flow units). Storage variables are eliminated by forward substitution of
the mass balance, and the storage constraints are carried in level units so
absolute feasibility tolerances are meaningful.

Cost per step of the horizon, after nondimensionalization:

    (slack_flood / flood_slack_ref)^2
    + lam * (slack_demand / demand_ref)^2
    + tie_break_weight * (u - w)^2

The tie-break term selects the demand-tracking point of the optimal set
(the slack costs alone leave u flat wherever no constraint is near) and is
small enough to leave the two real objectives untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import qp
from .hydrology import (
    HOUR_SECONDS,
    LakeParams,
    LakeState,
    level_of_storage,
    release_bounds,
    step_hourly,
)
from .scenario import HOURS_PER_DAY, Scenario
from .trace import ClosedLoopTrace

HOURLY = "hourly"
DAILY = "daily"

# Storage bounds matching the default LakeParams thresholds mapped through
# the level-storage relation.
DEFAULT_S_MIN = 29_180_000.0
DEFAULT_S_MAX = 218_850_000.0


class MpcInfeasibleError(RuntimeError):
    """A decision step had no feasible release plan and recovery was disabled."""

    def __init__(self, message: str, hour: int | None = None):
        super().__init__(message)
        self.hour = hour


@dataclass
class MpcConfig:
    """Controller configuration.

    s_min is the hard dry storage bound, s_max the storage at the flood
    threshold (exceedance above it is soft). flood_slack_ref (m) and
    demand_ref (m^3/s) are the unit normalizations making the two slack
    costs commensurate at lam = 1: a 1 m flood exceedance costs as much as a
    100 m^3/s deficit. dry_margin (m, in level units) backs the hard bound
    off by a hair so plant arithmetic cannot land a whisker below it.
    """

    horizon: int = 24
    lam: float = 1.0
    s_min: float = DEFAULT_S_MIN
    s_max: float = DEFAULT_S_MAX
    tie_break_weight: float = 1e-6
    feasibility_recovery: bool = True
    mode: str = HOURLY
    flood_slack_ref: float = 1.0
    demand_ref: float = 100.0
    dry_penalty_weight: float = 1e6
    dry_margin: float = 1e-9

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")
        if self.lam < 0.0:
            raise ValueError("lam must be nonnegative")
        if not self.s_min < self.s_max:
            raise ValueError("s_min must lie below s_max")
        if self.tie_break_weight < 0.0:
            raise ValueError("tie_break_weight must be nonnegative")
        if self.mode not in (HOURLY, DAILY):
            raise ValueError(f"mode must be '{HOURLY}' or '{DAILY}', got {self.mode!r}")
        if self.flood_slack_ref <= 0.0 or self.demand_ref <= 0.0:
            raise ValueError("slack normalizations must be positive")
        if self.dry_penalty_weight <= 0.0:
            raise ValueError("dry_penalty_weight must be positive")
        if self.dry_margin < 0.0:
            raise ValueError("dry_margin must be nonnegative")

    @classmethod
    def for_lake(cls, params: LakeParams, **overrides) -> "MpcConfig":
        """Config with storage bounds derived from the lake's thresholds."""
        area = params.surface_area
        return cls(
            s_min=(params.dry_threshold - params.level_offset) * area,
            s_max=(params.flood_threshold - params.level_offset) * area,
            **overrides,
        )


@dataclass(frozen=True)
class SolveInfo:
    status: str
    kkt_residual: float
    iterations: int = 0


@dataclass
class MpcStepResult:
    planned_releases: np.ndarray
    slack_max: np.ndarray
    slack_demand: np.ndarray
    objective: float
    recovery_used: bool
    solve_diagnostics: SolveInfo
    dry_slack: np.ndarray | None = None


def interpret_demand_slack(u: float, w: float) -> float:
    """Optimal demand slack for a release u against demand w: min(u - w, 0)."""
    return min(u - w, 0.0)


def _check_horizon_inputs(config, s0, inflow_forecast, demand, u_bounds):
    h = config.horizon
    if s0 < 0.0:
        raise ValueError(f"s0 must be nonnegative, got {s0}")
    inflow_forecast = np.asarray(inflow_forecast, dtype=float)
    demand = np.asarray(demand, dtype=float)
    u_bounds = np.asarray(u_bounds, dtype=float).reshape(-1, 2)
    if inflow_forecast.shape != (h,) or demand.shape != (h,) or u_bounds.shape != (h, 2):
        raise ValueError(
            f"horizon mismatch: expected {h} forecast/demand/bound entries, got "
            f"{inflow_forecast.size}/{demand.size}/{u_bounds.shape[0]}"
        )
    if np.any(u_bounds[:, 0] > u_bounds[:, 1]):
        raise ValueError("u_bounds must be ordered (lower <= upper)")
    return inflow_forecast, demand, u_bounds


def assemble_qp(
    params: LakeParams,
    config: MpcConfig,
    s0: float,
    inflow_forecast,
    demand,
    u_bounds,
    soften_dry: bool = False,
) -> qp.QpProblem:
    """Build the decision-step QP.

    Decision vector: (u[0..H-1], slack_flood[0..H-1], slack_demand[0..H-1])
    plus a dry-recovery slack block when soften_dry is set. slack_flood[t]
    refers to the storage reached after step t. Constraint rows:

        storage lower (hard):  s(t)/A >= (s_min)/A + dry_margin
        storage upper (soft):  s(t)/A <= s_max/A + slack_flood(t)
        demand:                u(t) >= w(t) + slack_demand(t)

    with s(t) = s0 + 3600 * sum_{tau<t} (q - u). When soften_dry is set the
    hard rows gain a heavily penalized nonnegative slack (in level units)
    so the problem is always feasible.
    """
    h = config.horizon
    inflow_forecast, demand, u_bounds = _check_horizon_inputs(
        config, s0, inflow_forecast, demand, u_bounds
    )
    area = params.surface_area
    n_var = 4 * h if soften_dry else 3 * h
    iu, iem, ied, idry = 0, h, 2 * h, 3 * h

    diag = np.zeros(n_var)
    diag[iu:iem] = 2.0 * config.tie_break_weight
    diag[iem:ied] = 2.0 / config.flood_slack_ref**2
    diag[ied:ied + h] = 2.0 * config.lam / config.demand_ref**2
    if soften_dry:
        diag[idry:] = 2.0 * config.dry_penalty_weight / config.flood_slack_ref**2
    hessian = np.diag(diag)
    linear = np.zeros(n_var)
    linear[iu:iem] = -2.0 * config.tie_break_weight * demand

    # s(t) for t=1..H before releases, all divided by the surface area.
    stored_q = (s0 + HOUR_SECONDS * np.cumsum(inflow_forecast)) / area
    lower_tri = np.tril(np.ones((h, h))) * (HOUR_SECONDS / area)

    rows = []
    rhs = []
    # Hard dry bound (optionally softened): 3600/A sum u <= (s(t)_inflow - s_min)/A - margin
    dry_rows = np.zeros((h, n_var))
    dry_rows[:, iu:iem] = lower_tri
    if soften_dry:
        dry_rows[:, idry:] = -np.eye(h)
    rows.append(dry_rows)
    rhs.append(stored_q - config.s_min / area - config.dry_margin)
    # Soft flood bound: -3600/A sum u - slack_flood <= (s_max - s(t)_inflow)/A
    flood_rows = np.zeros((h, n_var))
    flood_rows[:, iu:iem] = -lower_tri
    flood_rows[:, iem:ied] = -np.eye(h)
    rows.append(flood_rows)
    rhs.append(config.s_max / area - stored_q)
    # Demand: -u + slack_demand <= -w
    demand_rows = np.zeros((h, n_var))
    demand_rows[:, iu:iem] = -np.eye(h)
    demand_rows[:, ied:ied + h] = np.eye(h)
    rows.append(demand_rows)
    rhs.append(-demand)

    lower = np.full(n_var, -np.inf)
    upper = np.full(n_var, np.inf)
    lower[iu:iem] = u_bounds[:, 0]
    upper[iu:iem] = u_bounds[:, 1]
    lower[iem:ied] = 0.0
    if soften_dry:
        lower[idry:] = 0.0

    return qp.QpProblem(
        hessian=hessian,
        linear_cost=linear,
        ineq_matrix=np.vstack(rows),
        ineq_rhs=np.concatenate(rhs),
        lower=lower,
        upper=upper,
    )


def _feasible_point(config, problem, s0, inflow_forecast, demand, u_guess, area, soften_dry):
    """Cheap feasible hint: clip u, then set every slack to its binding value."""
    h = config.horizon
    u = np.clip(u_guess, problem.lower[:h], problem.upper[:h])
    storage = (s0 + HOUR_SECONDS * np.cumsum(inflow_forecast - u)) / area
    em = np.maximum(storage - config.s_max / area, 0.0)
    ed = np.minimum(u - demand, 0.0)
    parts = [u, em, ed]
    if soften_dry:
        parts.append(np.maximum(config.s_min / area + config.dry_margin - storage, 0.0))
    return np.concatenate(parts)


def step_objective(config: MpcConfig, u, slack_max, slack_demand, demand, dry_slack=None) -> float:
    """The interpretable soft cost of a horizon plan (see module docstring)."""
    u = np.asarray(u, dtype=float)
    cost = float(np.sum((np.asarray(slack_max) / config.flood_slack_ref) ** 2))
    cost += config.lam * float(np.sum((np.asarray(slack_demand) / config.demand_ref) ** 2))
    cost += config.tie_break_weight * float(np.sum((u - np.asarray(demand)) ** 2))
    if dry_slack is not None:
        cost += config.dry_penalty_weight * float(
            np.sum((np.asarray(dry_slack) / config.flood_slack_ref) ** 2)
        )
    return cost


def solve_step(
    params: LakeParams,
    config: MpcConfig,
    s0: float,
    inflow_forecast,
    demand,
    u_bounds,
    u_hint=None,
    hour: int | None = None,
) -> MpcStepResult:
    """Assemble and solve one decision step, with the recovery fallback.

    u_hint warm-starts the solver (a shifted previous plan in closed loop);
    when absent the demand profile clipped into the bounds is used.
    """
    h = config.horizon
    inflow_forecast = np.asarray(inflow_forecast, dtype=float)
    demand = np.asarray(demand, dtype=float)
    problem = assemble_qp(params, config, s0, inflow_forecast, demand, u_bounds)
    guess = demand if u_hint is None else np.asarray(u_hint, dtype=float)
    hint = _feasible_point(
        config, problem, s0, inflow_forecast, demand, guess, params.surface_area, False
    )
    solution = qp.solve(problem, initial_point=hint)
    recovery_used = False
    dry_slack = None
    if solution.status == "infeasible":
        if not config.feasibility_recovery:
            where = f" at hour {hour}" if hour is not None else ""
            raise MpcInfeasibleError(
                f"decision step infeasible{where}: {solution.message}", hour=hour
            )
        problem = assemble_qp(
            params, config, s0, inflow_forecast, demand, u_bounds, soften_dry=True
        )
        hint = _feasible_point(
            config, problem, s0, inflow_forecast, demand, guess, params.surface_area, True
        )
        solution = qp.solve(problem, initial_point=hint)
        if solution.status == "infeasible":  # softened problem is always feasible
            raise RuntimeError(f"recovery solve reported infeasible: {solution.message}")
        recovery_used = True
        dry_slack = solution.x[3 * h:]
    u = solution.x[:h]
    slack_max = solution.x[h:2 * h]
    slack_demand = solution.x[2 * h:3 * h]
    return MpcStepResult(
        planned_releases=u,
        slack_max=slack_max,
        slack_demand=slack_demand,
        objective=step_objective(config, u, slack_max, slack_demand, demand, dry_slack),
        recovery_used=recovery_used,
        solve_diagnostics=SolveInfo(
            status=solution.status,
            kkt_residual=solution.kkt_residual,
            iterations=solution.iterations,
        ),
        dry_slack=dry_slack,
    )


def _trace_arrays(n_steps):
    return {
        "levels": np.zeros(n_steps),
        "storages": np.zeros(n_steps + 1),
        "releases": np.zeros(n_steps),
        "commands": np.zeros(n_steps),
        "slack_flood": np.zeros(n_steps),
        "slack_demand": np.zeros(n_steps),
        "kkt_residuals": np.zeros(n_steps),
    }


def run_hourly(
    params: LakeParams,
    config: MpcConfig,
    scenario: Scenario,
    s0: float,
    n_steps: int | None = None,
) -> ClosedLoopTrace:
    """Receding-horizon closed loop: solve, apply the first action, repeat.

    The forecast handed to each step is the true future inflow slice
    (deterministic control). Every step needs a full horizon of lookahead,
    so at most scenario.n_hours - horizon steps can be simulated.
    """
    if config.mode != HOURLY:
        raise ValueError(f"run_hourly needs mode='{HOURLY}', got {config.mode!r}")
    h = config.horizon
    limit = scenario.n_hours - h
    if limit < 1:
        raise ValueError(f"scenario too short: {scenario.n_hours} hours for horizon {h}")
    n_steps = limit if n_steps is None else int(n_steps)
    if not 1 <= n_steps <= limit:
        raise ValueError(f"n_steps must lie in [1, {limit}], got {n_steps}")

    arrays = _trace_arrays(n_steps)
    statuses: list[str] = []
    state = LakeState(storage=float(s0), time_index=0)
    arrays["storages"][0] = state.storage
    recovery_hours = 0
    hint = None
    for t in range(n_steps):
        level = level_of_storage(params, state.storage)
        bounds = release_bounds(params, level)
        u_bounds = np.tile(bounds, (h, 1))
        step = solve_step(
            params,
            config,
            state.storage,
            scenario.inflow_hourly[t:t + h],
            scenario.demand_hourly[t:t + h],
            u_bounds,
            u_hint=hint,
            hour=t,
        )
        command = float(step.planned_releases[0])
        state, release = step_hourly(params, state, float(scenario.inflow_hourly[t]), command)
        arrays["storages"][t + 1] = state.storage
        arrays["levels"][t] = level_of_storage(params, state.storage)
        arrays["commands"][t] = command
        arrays["releases"][t] = release
        arrays["slack_flood"][t] = step.slack_max[0]
        arrays["slack_demand"][t] = step.slack_demand[0]
        arrays["kkt_residuals"][t] = step.solve_diagnostics.kkt_residual
        statuses.append(step.solve_diagnostics.status)
        recovery_hours += int(step.recovery_used)
        hint = np.append(step.planned_releases[1:], step.planned_releases[-1])
    return ClosedLoopTrace(
        inflows=scenario.inflow_hourly[:n_steps].copy(),
        demands=scenario.demand_hourly[:n_steps].copy(),
        recovery_hours=recovery_hours,
        label=f"mpc-hourly(lam={config.lam:g})",
        solve_statuses=statuses,
        **arrays,
    )


def run_daily(
    params: LakeParams,
    config: MpcConfig,
    scenario: Scenario,
    s0: float,
    n_steps: int | None = None,
) -> ClosedLoopTrace:
    """Daily open-loop mode: solve once per day, apply all 24 actions.

    The release bounds are frozen at the level measured when the day's
    problem is assembled, and the forecast is the day's inflow at daily
    resolution (scenario.inflow_daily when available, otherwise the day's
    mean), held constant over the 24 hours. The plant still saturates every
    applied action at its true hourly bounds.
    """
    if config.mode != DAILY:
        raise ValueError(f"run_daily needs mode='{DAILY}', got {config.mode!r}")
    if config.horizon != HOURS_PER_DAY:
        raise ValueError("daily mode requires a 24-hour horizon")
    n_steps = scenario.n_hours if n_steps is None else int(n_steps)
    if n_steps < HOURS_PER_DAY or n_steps % HOURS_PER_DAY != 0:
        raise ValueError(f"n_steps must be a positive multiple of 24, got {n_steps}")
    if n_steps > scenario.n_hours:
        raise ValueError(f"n_steps {n_steps} exceeds scenario length {scenario.n_hours}")

    arrays = _trace_arrays(n_steps)
    statuses: list[str] = []
    state = LakeState(storage=float(s0), time_index=0)
    arrays["storages"][0] = state.storage
    recovery_hours = 0
    hint = None
    for day in range(n_steps // HOURS_PER_DAY):
        t0 = day * HOURS_PER_DAY
        level = level_of_storage(params, state.storage)
        bounds = release_bounds(params, level)
        u_bounds = np.tile(bounds, (HOURS_PER_DAY, 1))
        if scenario.inflow_daily is not None:
            day_inflow = float(scenario.inflow_daily[day])
        else:
            day_inflow = float(np.mean(scenario.inflow_hourly[t0:t0 + HOURS_PER_DAY]))
        forecast = np.full(HOURS_PER_DAY, day_inflow)
        demand = scenario.demand_hourly[t0:t0 + HOURS_PER_DAY]
        step = solve_step(
            params, config, state.storage, forecast, demand, u_bounds, u_hint=hint, hour=t0
        )
        recovery_hours += HOURS_PER_DAY * int(step.recovery_used)
        for k in range(HOURS_PER_DAY):
            t = t0 + k
            command = float(step.planned_releases[k])
            state, release = step_hourly(
                params, state, float(scenario.inflow_hourly[t]), command
            )
            arrays["storages"][t + 1] = state.storage
            arrays["levels"][t] = level_of_storage(params, state.storage)
            arrays["commands"][t] = command
            arrays["releases"][t] = release
            arrays["slack_flood"][t] = step.slack_max[k]
            arrays["slack_demand"][t] = step.slack_demand[k]
            arrays["kkt_residuals"][t] = step.solve_diagnostics.kkt_residual
            statuses.append(step.solve_diagnostics.status)
        hint = step.planned_releases
    return ClosedLoopTrace(
        inflows=scenario.inflow_hourly[:n_steps].copy(),
        demands=scenario.demand_hourly[:n_steps].copy(),
        recovery_hours=recovery_hours,
        label=f"mpc-daily(lam={config.lam:g})",
        solve_statuses=statuses,
        **arrays,
    )
