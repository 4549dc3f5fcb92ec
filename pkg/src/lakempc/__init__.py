"""Simulation and control toolkit for a regulated lake.

Hourly mass-balance plant model, receding-horizon quadratic-programming
control with soft flood/demand objectives and a hard dry-level constraint,
a deterministic dynamic-programming benchmark, and the experiment harness
comparing them.
"""

from .ddp import DdpConfig, ValueTable, backward_induction, simulate_policy, stage_cost, trace_cost
from .hydrology import (
    LakeParams,
    LakeState,
    aggregate_daily,
    level_of_storage,
    release_bounds,
    saturate_release,
    step_hourly,
    storage_of_level,
)
from .metrics import RunReport, compare_runs, compute_report, lambda_sweep
from .mpc import (
    MpcConfig,
    MpcInfeasibleError,
    MpcStepResult,
    assemble_qp,
    interpret_demand_slack,
    run_daily,
    run_hourly,
)
from .qp import QpProblem, QpSolution, kkt_residual
from .qp import solve as solve_qp
from .scenario import (
    GaussianInflowParams,
    Scenario,
    load_timeseries,
    synth_inflow,
    synthetic_year,
)
from .trace import ClosedLoopTrace, mass_balance_error

__version__ = "0.1.0"

__all__ = [
    "ClosedLoopTrace",
    "DdpConfig",
    "GaussianInflowParams",
    "LakeParams",
    "LakeState",
    "MpcConfig",
    "MpcInfeasibleError",
    "MpcStepResult",
    "QpProblem",
    "QpSolution",
    "RunReport",
    "Scenario",
    "ValueTable",
    "aggregate_daily",
    "assemble_qp",
    "backward_induction",
    "compare_runs",
    "compute_report",
    "interpret_demand_slack",
    "kkt_residual",
    "lambda_sweep",
    "level_of_storage",
    "load_timeseries",
    "mass_balance_error",
    "release_bounds",
    "run_daily",
    "run_hourly",
    "saturate_release",
    "simulate_policy",
    "solve_qp",
    "stage_cost",
    "step_hourly",
    "storage_of_level",
    "synth_inflow",
    "synthetic_year",
    "trace_cost",
]
