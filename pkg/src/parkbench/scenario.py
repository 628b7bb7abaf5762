"""Procedural parking scenarios: lot layout, static vehicles, spawn grid, expert maneuvers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .expert import PlanningFailedError, plan_expert_path, sample_trajectory
from .geometry import (
    OrientedBox,
    PathSegment,
    Pose2D,
    advance_pose,
    any_box_overlap,
    boxes_corners,
    count_direction_changes,
    normalize_angle,
    path_arc_length,
    pose_to_world,
)
from .trajectory import Trajectory


class ScenarioInfeasibleError(RuntimeError):
    """All jitter attempts failed to produce a collision-free successful maneuver."""


@dataclass(frozen=True)
class SlotSpec:
    """A perpendicular parking slot; the center heading points into the slot depth."""

    slot_id: int
    center: Pose2D
    length: float
    width: float

    def __post_init__(self):
        if not (self.length > self.width > 0):
            raise ValueError("slot must satisfy length > width > 0")


@dataclass
class GenParams:
    """Generation knobs with their built-in defaults (overridable via config file)."""

    slot_length: float = 5.5
    slot_width: float = 2.8
    lane_width: float = 7.0
    slots_per_row: int = 8
    vehicle_length: float = 4.7
    vehicle_width: float = 1.9
    wheelbase: float = 2.9
    steer_limit_deg: float = 30.0
    v_max: float = 1.5
    accel: float = 1.0
    dt: float = 0.2
    pause_frames: int = 2
    cruise_throttle: float = 0.2
    collision_margin: float = 0.1
    collision_step: float = 0.1
    static_yaw_sigma_deg: float = 3.0
    static_yaw_clip_deg: float = 8.0
    spawn_x_range: float = 1.0
    spawn_x_step: float = 1.0
    spawn_y_range: float = 10.0
    spawn_y_step: float = 2.0
    spawn_jitter_pos: float = 0.2
    spawn_jitter_yaw_deg: float = 15.0
    success_dist: float = 0.25
    success_heading_deg: float = 2.5
    max_attempts: int = 20
    min_segment_length: float = 0.3
    max_path_length: float = 55.0
    lane_overrun: float = 12.0
    max_idle_lead_frames: int = 3

    @property
    def r_min(self) -> float:
        return self.wheelbase / math.tan(math.radians(self.steer_limit_deg))

    @property
    def ego_half_length(self) -> float:
        return self.vehicle_length / 2.0

    @property
    def ego_half_width(self) -> float:
        return self.vehicle_width / 2.0

    def lot_bounds(self) -> tuple[float, float]:
        """(half extent across the lane, half extent along the lane)."""
        half_x = self.lane_width / 2.0 + self.slot_length
        half_y = self.slots_per_row * self.slot_width / 2.0 + self.lane_overrun
        return half_x, half_y


@dataclass
class ScenarioConfig:
    seed: int
    lot: list[SlotSpec]
    target_slot_id: int
    static_vehicles: list[OrientedBox]
    ego_spawn: Pose2D

    def target_slot(self) -> SlotSpec:
        for slot in self.lot:
            if slot.slot_id == self.target_slot_id:
                return slot
        raise KeyError(f"slot {self.target_slot_id} not in lot")


def default_lot(params: GenParams | None = None) -> list[SlotSpec]:
    """Two facing rows of perpendicular slots across a straight lane along the y axis."""
    p = params or GenParams()
    row_x = p.lane_width / 2.0 + p.slot_length / 2.0
    slots = []
    for row, (x, heading) in enumerate(((row_x, 0.0), (-row_x, math.pi))):
        for i in range(p.slots_per_row):
            y = (i - (p.slots_per_row - 1) / 2.0) * p.slot_width
            slots.append(
                SlotSpec(
                    slot_id=row * p.slots_per_row + i,
                    center=Pose2D(x, y, heading),
                    length=p.slot_length,
                    width=p.slot_width,
                )
            )
    return slots


def populate_static_vehicles(
    lot: list[SlotSpec],
    target_slot_id: int,
    rng: np.random.Generator,
    params: GenParams | None = None,
) -> list[OrientedBox]:
    """Fill every non-target slot with a parked vehicle.

    Base orientation is a fair coin between head-in and back-in; yaw jitter is
    a clipped normal inside the configured clip range.
    """
    p = params or GenParams()
    if not lot:
        raise ValueError("lot must not be empty")
    if not any(s.slot_id == target_slot_id for s in lot):
        raise ValueError(f"target slot {target_slot_id} not present")
    clip = math.radians(p.static_yaw_clip_deg)
    sigma = math.radians(p.static_yaw_sigma_deg)
    vehicles = []
    for slot in lot:
        if slot.slot_id == target_slot_id:
            continue
        base = 0.0 if rng.integers(2) == 0 else math.pi
        jitter = float(np.clip(rng.normal(0.0, sigma), -clip, clip))
        heading = normalize_angle(slot.center.theta + base + jitter)
        vehicles.append(
            OrientedBox(
                Pose2D(slot.center.x, slot.center.y, heading),
                p.vehicle_length / 2.0,
                p.vehicle_width / 2.0,
            )
        )
    return vehicles


def spawn_grid(params: GenParams | None = None) -> list[tuple[float, float]]:
    """Deterministic spawn offsets, row-major with the across-lane offset outer."""
    p = params or GenParams()
    xs = np.arange(-p.spawn_x_range, p.spawn_x_range + 1e-9, p.spawn_x_step)
    ys = np.arange(-p.spawn_y_range, p.spawn_y_range + 1e-9, p.spawn_y_step)
    return [(float(x), float(y)) for x in xs for y in ys]


def spawn_pose(
    base: Pose2D,
    offset: tuple[float, float],
    rng: np.random.Generator,
    params: GenParams | None = None,
) -> Pose2D:
    """Base pose plus grid offset plus uniform position/heading jitter."""
    p = params or GenParams()
    jx = rng.uniform(-p.spawn_jitter_pos, p.spawn_jitter_pos)
    jy = rng.uniform(-p.spawn_jitter_pos, p.spawn_jitter_pos)
    jt = math.radians(rng.uniform(-p.spawn_jitter_yaw_deg, p.spawn_jitter_yaw_deg))
    return Pose2D(base.x + offset[0] + jx, base.y + offset[1] + jy, base.theta + jt)


def parking_success(final: Pose2D, slot: SlotSpec, params: GenParams | None = None) -> bool:
    """Position within the distance gate and heading within the gate up to a 180 flip."""
    p = params or GenParams()
    dist = math.hypot(final.x - slot.center.x, final.y - slot.center.y)
    if dist >= p.success_dist:
        return False
    diff = abs(normalize_angle(final.theta - slot.center.theta))
    tol = math.radians(p.success_heading_deg)
    return diff < tol or abs(diff - math.pi) < tol


# --- maneuver composition ---------------------------------------------------


def sweep_path_poses(segments: list[PathSegment], start: Pose2D, step: float) -> np.ndarray:
    """Poses (K, 3) along the path at most ``step`` meters apart, endpoints included."""
    poses = [start.as_tuple()]
    pose = start
    for seg in segments:
        n = max(1, int(math.ceil(seg.arc_length / step)))
        ds = seg.arc_length / n
        for _ in range(n):
            pose = advance_pose(pose, float(seg.direction) * ds, seg.curvature)
            poses.append(pose.as_tuple())
    return np.asarray(poses)


def _path_ok(
    segments: list[PathSegment],
    start: Pose2D,
    statics: list[OrientedBox],
    params: GenParams,
) -> bool:
    if not segments:
        return False
    if any(s.arc_length < params.min_segment_length for s in segments):
        return False
    if path_arc_length(segments) > params.max_path_length:
        return False
    poses = sweep_path_poses(segments, start, params.collision_step)
    hl = params.ego_half_length + params.collision_margin
    hw = params.ego_half_width + params.collision_margin
    if any_box_overlap(poses, hl, hw, statics).any():
        return False
    half_x, half_y = params.lot_bounds()
    corners = boxes_corners(poses, hl, hw)
    if (np.abs(corners[..., 0]) > half_x).any() or (np.abs(corners[..., 1]) > half_y).any():
        return False
    return True


def _goal_poses(slot: SlotSpec) -> tuple[Pose2D, Pose2D]:
    head_in = slot.center
    back_in = Pose2D(slot.center.x, slot.center.y, slot.center.theta + math.pi)
    return head_in, back_in


def _plan_direct(spawn, slot, rng, params):
    head_in, back_in = _goal_poses(slot)
    candidates = []
    for goal in (head_in, back_in):
        try:
            candidates.append(plan_expert_path(spawn, goal, params.r_min))
        except PlanningFailedError:
            continue
    candidates.sort(key=path_arc_length)
    return candidates


def _plan_pull_past(spawn, slot, rng, params):
    _, back_in = _goal_poses(slot)
    along = 1.0 if spawn.y < slot.center.y else -1.0
    pull = rng.uniform(4.0, 7.0)
    # swing the nose away from the slot side while passing it
    away = -math.copysign(1.0, slot.center.x)
    swing_x = away * rng.uniform(0.0, 1.2)
    tilt = away * math.copysign(1.0, along) * math.radians(rng.uniform(5.0, 20.0))
    mid = Pose2D(swing_x, slot.center.y + along * pull, along * math.pi / 2.0 + tilt)
    try:
        first = plan_expert_path(spawn, mid, params.r_min)
        second = plan_expert_path(mid, back_in, params.r_min)
    except PlanningFailedError:
        return []
    return [first + second]


def _plan_shuffle(spawn, slot, rng, params):
    """Deliberate multi-point maneuver: partial insertion, forward correction, final reverse."""
    _, back_in = _goal_poses(slot)
    slot_frame = slot.center
    d_out = rng.uniform(2.4, 3.4)
    lateral = rng.uniform(-0.3, 0.3)
    alpha = math.copysign(math.radians(rng.uniform(12.0, 30.0)), rng.uniform(-1.0, 1.0))
    partial = pose_to_world(Pose2D(-d_out, lateral, math.pi + alpha), slot_frame)
    correct_len = rng.uniform(1.2, 2.4)
    curv = rng.uniform(-0.6, 0.6) / params.r_min
    correction = advance_pose(partial, correct_len, curv)
    try:
        first = plan_expert_path(spawn, partial, params.r_min)
        second = plan_expert_path(partial, correction, params.r_min)
        third = plan_expert_path(correction, back_in, params.r_min)
    except PlanningFailedError:
        return []
    return [first + second + third]


_STRATEGIES = (_plan_direct, _plan_pull_past, _plan_shuffle)


def generate_scenario(
    seed: int,
    lot: list[SlotSpec],
    target_slot_id: int,
    grid_index: int,
    params: GenParams | None = None,
) -> tuple[ScenarioConfig, Trajectory]:
    """One seeded scenario plus its expert demonstration.

    Collision-free against all static vehicles (swept footprint check) and
    guaranteed to satisfy the parking success gate; jitter and strategy are
    resampled up to ``max_attempts`` times, after which the scenario is
    declared infeasible.
    """
    p = params or GenParams()
    grid = spawn_grid(p)
    if not 0 <= grid_index < len(grid):
        raise ValueError(f"grid_index {grid_index} out of range 0..{len(grid) - 1}")
    rng = np.random.default_rng(seed)
    statics = populate_static_vehicles(lot, target_slot_id, rng, p)
    slot = next(s for s in lot if s.slot_id == target_slot_id)
    sid = f"{seed}_{target_slot_id}_{grid_index}"
    half_x, half_y = p.lot_bounds()

    for _ in range(p.max_attempts):
        along = 1.0 if rng.integers(2) == 0 else -1.0
        base = Pose2D(0.0, slot.center.y, along * math.pi / 2.0)
        spawn = spawn_pose(base, grid[grid_index], rng, p)

        spawn_box = np.asarray([spawn.as_tuple()])
        hl = p.ego_half_length + p.collision_margin
        hw = p.ego_half_width + p.collision_margin
        corners = boxes_corners(spawn_box, hl, hw)
        if (np.abs(corners[..., 0]) > half_x).any() or (np.abs(corners[..., 1]) > half_y).any():
            continue
        if any_box_overlap(spawn_box, hl, hw, statics).any():
            continue

        pick = rng.random()
        preferred = 0 if pick < 0.4 else (1 if pick < 0.65 else 2)
        order = [preferred] + [i for i in range(len(_STRATEGIES)) if i != preferred]
        chosen = None
        for idx in order:
            for segs in _STRATEGIES[idx](spawn, slot, rng, p):
                if _path_ok(segs, spawn, statics, p):
                    chosen = segs
                    break
            if chosen is not None:
                break
        if chosen is None:
            continue

        idle = int(rng.integers(0, p.max_idle_lead_frames + 1))
        traj = sample_trajectory(
            chosen,
            spawn,
            v_max=p.v_max,
            accel=p.accel,
            dt=p.dt,
            pause_frames=p.pause_frames,
            idle_lead_frames=idle,
            cruise_throttle=p.cruise_throttle,
            scenario_ref=sid,
            target_slot=slot.center,
            statics=statics,
        )
        final = Pose2D(*traj.poses[-1])
        if not parking_success(final, slot, p):
            continue
        config = ScenarioConfig(
            seed=seed,
            lot=list(lot),
            target_slot_id=target_slot_id,
            static_vehicles=statics,
            ego_spawn=spawn,
        )
        return config, traj

    raise ScenarioInfeasibleError(f"scenario {sid}: no feasible maneuver in {p.max_attempts} attempts")


def maneuver_gear_shifts(segments: list[PathSegment]) -> int:
    return count_direction_changes(segments)
