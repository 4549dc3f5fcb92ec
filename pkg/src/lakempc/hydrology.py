"""Plant model of a regulated lake.

Hourly mass balance, level/storage conversion, and the nonlinear release
saturation of the dam. All quantities are plain floats: storage in m^3,
levels in m relative to the gauge zero, flows in m^3/s. One step is one
hour (3600 s).

Everything here is a pure function of value types and safe to call from
multiple threads.
"""

from __future__ import annotations

from dataclasses import dataclass

HOUR_SECONDS = 3600.0


@dataclass(frozen=True)
class LakeParams:
    """Physical constants of the lake and its release actuator.

    Attributes:
        surface_area: lake surface in m^2. The regulated portion is treated
            as cylindrical, so level and storage are affinely related.
        level_offset: gauge level in m at zero regulated storage.
        flood_threshold: level in m above which the lakeside city floods.
        dry_threshold: level in m below which navigation is impaired.
        mef: minimum environmental flow in m^3/s owed to the downstream river.
        sat_k, sat_n, sat_e: rating-curve coefficients; the maximum feasible
            discharge at level h is sat_k * (h + sat_n) ** sat_e.

    Default construction gives the Lake Como constants.
    """

    surface_area: float = 145_900_000.0
    level_offset: float = -0.4
    flood_threshold: float = 1.1
    dry_threshold: float = -0.2
    mef: float = 10.0
    sat_k: float = 33.37
    sat_n: float = 2.5
    sat_e: float = 2.015

    def __post_init__(self) -> None:
        if self.surface_area <= 0.0:
            raise ValueError("surface_area must be positive")
        if self.sat_k <= 0.0 or self.sat_e <= 0.0:
            raise ValueError("rating-curve coefficients sat_k, sat_e must be positive")
        if self.mef < 0.0:
            raise ValueError("mef must be nonnegative")
        if not self.dry_threshold < self.flood_threshold:
            raise ValueError("dry_threshold must lie below flood_threshold")
        if not self.level_offset < self.dry_threshold:
            raise ValueError("level_offset must lie below dry_threshold")


@dataclass(frozen=True)
class LakeState:
    """Regulated storage (m^3) at an hourly time index."""

    storage: float
    time_index: int = 0

    def __post_init__(self) -> None:
        if self.storage < 0.0:
            raise ValueError("storage must be nonnegative")


def level_of_storage(params: LakeParams, storage: float) -> float:
    """Lake level in m for a given storage, h = s / A + h_0."""
    if storage < 0.0:
        raise ValueError(f"storage must be nonnegative, got {storage}")
    return storage / params.surface_area + params.level_offset


def storage_of_level(params: LakeParams, level: float) -> float:
    """Inverse of :func:`level_of_storage`; level must not be below the gauge offset."""
    if level < params.level_offset:
        raise ValueError(
            f"level {level} below gauge offset {params.level_offset}; no storage maps there"
        )
    return (level - params.level_offset) * params.surface_area


def rating_curve(params: LakeParams, level: float) -> float:
    """Maximum feasible discharge sat_k * (level + sat_n) ** sat_e, in m^3/s."""
    base = level + params.sat_n
    if base <= 0.0:
        return 0.0
    return params.sat_k * base**params.sat_e


def release_bounds(params: LakeParams, level: float) -> tuple[float, float]:
    """Lower and upper physical release bounds (r_min, r_max) at a lake level.

    Below the gauge offset nothing can be released. Between the offset and
    the flood threshold the lower bound is the minimum environmental flow;
    above the flood threshold both bounds collapse onto the rating curve and
    the dam is forced to discharge at capacity. The lower bound is capped by
    the upper so the pair is always ordered.
    """
    if level <= params.level_offset:
        return (0.0, 0.0)
    r_max = rating_curve(params, level)
    if level <= params.flood_threshold:
        r_min = params.mef
    else:
        r_min = r_max
    return (min(r_min, r_max), r_max)


def saturate_release(bounds: tuple[float, float], command: float) -> float:
    """Clamp a commanded release into the physical bounds."""
    r_min, r_max = bounds
    if r_min > r_max:
        raise ValueError(f"inverted release bounds ({r_min}, {r_max})")
    return min(max(command, r_min), r_max)


def step_hourly(
    params: LakeParams, state: LakeState, inflow: float, command: float
) -> tuple[LakeState, float]:
    """Advance the mass balance by one hour.

    The release bounds are evaluated at the pre-step level (explicit-Euler
    convention), the command is saturated to the applied release r, and the
    storage is updated by 3600 * (inflow - r), floored at zero.

    Returns:
        (new state, applied release in m^3/s)
    """
    if inflow < 0.0:
        raise ValueError(f"inflow must be nonnegative, got {inflow}")
    level = level_of_storage(params, state.storage)
    release = saturate_release(release_bounds(params, level), command)
    new_storage = state.storage + HOUR_SECONDS * (inflow - release)
    if new_storage < 0.0:
        new_storage = 0.0
    return LakeState(storage=new_storage, time_index=state.time_index + 1), release


def aggregate_daily(hourly_inflows, hourly_releases) -> tuple[float, float]:
    """Daily net storage change (m^3) and mean release (m^3/s) of 24 hourly values."""
    if len(hourly_inflows) != 24 or len(hourly_releases) != 24:
        raise ValueError(
            f"expected 24 hourly values, got {len(hourly_inflows)} inflows "
            f"and {len(hourly_releases)} releases"
        )
    q_sum = float(sum(hourly_inflows))
    r_sum = float(sum(hourly_releases))
    return (HOUR_SECONDS * (q_sum - r_sum), r_sum / 24.0)
