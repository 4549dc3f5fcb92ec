"""Closed-loop trace: what a simulated run records, one row per hour."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hydrology import HOUR_SECONDS


@dataclass
class ClosedLoopTrace:
    """Time series produced by one simulated run.

    storages has one more entry than the hourly arrays (initial storage
    included); levels[t] is the level reached at the end of hour t, i.e. the
    level of storages[t + 1]. commands are the controller outputs before
    plant saturation, releases the flows actually discharged.

    The controller diagnostics (slacks, KKT residuals, solver statuses) are
    None for runs that did not come from the QP controller.
    """

    levels: np.ndarray
    storages: np.ndarray
    releases: np.ndarray
    commands: np.ndarray
    inflows: np.ndarray
    demands: np.ndarray
    recovery_hours: int = 0
    label: str = ""
    slack_flood: np.ndarray | None = None
    slack_demand: np.ndarray | None = None
    kkt_residuals: np.ndarray | None = None
    solve_statuses: list[str] | None = None

    def __post_init__(self) -> None:
        for name in ("levels", "storages", "releases", "commands", "inflows", "demands"):
            setattr(self, name, np.asarray(getattr(self, name), dtype=float))
        t = self.levels.size
        if t == 0:
            raise ValueError("empty trace")
        for name in ("releases", "commands", "inflows", "demands"):
            if getattr(self, name).size != t:
                raise ValueError(f"{name} length {getattr(self, name).size} != {t}")
        if self.storages.size != t + 1:
            raise ValueError(f"storages must have length {t + 1}, got {self.storages.size}")
        for name in ("slack_flood", "slack_demand", "kkt_residuals"):
            value = getattr(self, name)
            if value is not None:
                value = np.asarray(value, dtype=float)
                setattr(self, name, value)
                if value.size != t:
                    raise ValueError(f"{name} length {value.size} != {t}")

    @property
    def n_hours(self) -> int:
        return self.levels.size


def mass_balance_error(trace: ClosedLoopTrace) -> float:
    """Relative violation of storage(final) - storage(initial) = 3600 (sum q - sum r)."""
    ds = trace.storages[-1] - trace.storages[0]
    flux = HOUR_SECONDS * (float(np.sum(trace.inflows)) - float(np.sum(trace.releases)))
    scale = max(
        abs(float(trace.storages[0])),
        abs(float(trace.storages[-1])),
        HOUR_SECONDS * float(np.sum(np.abs(trace.inflows))),
        1.0,
    )
    return abs(ds - flux) / scale
