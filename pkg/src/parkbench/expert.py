"""Kinematic expert: curve-word path planning with reversals and speed-profile sampling.

The planner searches bang-bang steering words (arc/straight/arc and
arc/arc/arc families, each segment driven forward or backward) between two
poses, verifies every closed-form candidate by exact integration, and returns
the shortest one.  Direction alternations along the returned segment list are
the maneuver's gear shifts.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .geometry import (
    Direction,
    PathSegment,
    Pose2D,
    TWO_PI,
    advance_pose,
    normalize_angle,
    pose_in_frame,
)
from .trajectory import Trajectory

_VERIFY_TOL = 1e-9
_MIN_SEG = 1e-10


class PlanningFailedError(RuntimeError):
    """No implemented curve family connects the requested pose pair."""


def _unit(angle: float) -> tuple[float, float]:
    return math.cos(angle), math.sin(angle)


def _circle_center(x: float, y: float, theta: float, side: int) -> tuple[float, float]:
    # side +1: turn-left circle, side -1: turn-right circle (unit radius).
    return x - side * math.sin(theta), y + side * math.cos(theta)


def _sweeps(delta: float) -> tuple[float, float]:
    # Both ways around the circle: CCW sweep in [0, 2pi) and its CW complement.
    m = delta % TWO_PI
    return m, m - TWO_PI


def _verify(cand: list[tuple[int, float]], goal: tuple[float, float, float]) -> bool:
    pose = Pose2D(0.0, 0.0, 0.0)
    for curv, ds in cand:
        pose = advance_pose(pose, ds, float(curv))
    gx, gy, gt = goal
    return (
        math.hypot(pose.x - gx, pose.y - gy) < _VERIFY_TOL
        and abs(normalize_angle(pose.theta - gt)) < _VERIFY_TOL
    )


def _gen_single_arc(gx, gy, gt):
    for side in (1, -1):
        c1 = _circle_center(0.0, 0.0, 0.0, side)
        c2 = _circle_center(gx, gy, gt, side)
        if math.hypot(c2[0] - c1[0], c2[1] - c1[1]) > 1e-9:
            continue
        a_start = -side * math.pi / 2.0
        a_goal = gt - side * math.pi / 2.0
        for sweep in _sweeps(a_goal - a_start):
            yield [(side, side * sweep)]


def _gen_csc(gx, gy, gt):
    for s1, s3 in itertools.product((1, -1), repeat=2):
        c1 = _circle_center(0.0, 0.0, 0.0, s1)
        c2 = _circle_center(gx, gy, gt, s3)
        dxy = (c2[0] - c1[0], c2[1] - c1[1])
        d = math.hypot(*dxy)
        alpha = math.atan2(dxy[1], dxy[0])
        a_start = -s1 * math.pi / 2.0
        a_goal = gt - s3 * math.pi / 2.0

        if s1 == s3:
            if d < 1e-12:
                continue  # coincident circles handled by the single-arc family
            options = [(alpha, d), (alpha + math.pi, -d)]
        else:
            if d < 2.0:
                continue
            run = math.sqrt(max(d * d - 4.0, 0.0))
            options = [
                (alpha + math.atan2(2.0 * s1, run), run),
                (alpha + math.atan2(2.0 * s1, -run), -run),
            ]

        for heading, straight in options:
            a_t1 = heading - s1 * math.pi / 2.0
            a_t2 = heading - s3 * math.pi / 2.0
            for d1, d3 in itertools.product(_sweeps(a_t1 - a_start), _sweeps(a_goal - a_t2)):
                yield [(s1, s1 * d1), (0, straight), (s3, s3 * d3)]


def _gen_ccc(gx, gy, gt):
    for side in (1, -1):
        c1 = np.array(_circle_center(0.0, 0.0, 0.0, side))
        c2 = np.array(_circle_center(gx, gy, gt, side))
        d = float(np.hypot(*(c2 - c1)))
        if d < 1e-12 or d > 4.0:
            continue
        alpha = math.atan2(c2[1] - c1[1], c2[0] - c1[0])
        cap = math.acos(min(max(d / 4.0, -1.0), 1.0))
        a_start = -side * math.pi / 2.0
        a_goal = gt - side * math.pi / 2.0
        for beta in (cap, -cap):
            mid = c1 + 2.0 * np.array(_unit(alpha + beta))
            t1 = c1 + np.array(_unit(alpha + beta))
            t2 = (c2 + mid) / 2.0
            a_t1_c1 = alpha + beta
            a_t1_m = alpha + beta + math.pi
            a_t2_m = math.atan2(t2[1] - mid[1], t2[0] - mid[0])
            a_t2_c2 = math.atan2(t2[1] - c2[1], t2[0] - c2[0])
            for d1, d2, d3 in itertools.product(
                _sweeps(a_t1_c1 - a_start),
                _sweeps(a_t2_m - a_t1_m),
                _sweeps(a_goal - a_t2_c2),
            ):
                yield [(side, side * d1), (-side, -side * d2), (side, side * d3)]


def _assemble(cand: list[tuple[int, float]], r_min: float) -> list[PathSegment]:
    segs = []
    for curv, ds in cand:
        length = abs(ds) * r_min  # the whole solve runs in turning-radius units
        if length < _MIN_SEG:
            continue
        segs.append(
            PathSegment(
                direction=Direction.FORWARD if ds > 0 else Direction.BACKWARD,
                curvature=curv / r_min if curv != 0 else 0.0,
                arc_length=length,
            )
        )
    return segs


def plan_expert_path(start: Pose2D, goal: Pose2D, r_min: float) -> list[PathSegment]:
    """Shortest verified curve-word path from ``start`` to ``goal``.

    Raises :class:`PlanningFailedError` when no family applies (callers
    resample the scenario).  ``start == goal`` yields an empty list.
    """
    if not r_min > 0:
        raise ValueError("r_min must be positive")
    rel = pose_in_frame(goal, start)
    if math.hypot(rel.x, rel.y) < 1e-12 and abs(rel.theta) < 1e-12:
        return []

    gx, gy, gt = rel.x / r_min, rel.y / r_min, rel.theta
    goal_u = (gx, gy, gt)
    best: list[tuple[int, float]] | None = None
    best_len = math.inf
    for cand in itertools.chain(
        _gen_single_arc(gx, gy, gt), _gen_csc(gx, gy, gt), _gen_ccc(gx, gy, gt)
    ):
        total = sum(abs(ds) for _, ds in cand)
        if total >= best_len or not _verify(cand, goal_u):
            continue
        best, best_len = cand, total
    if best is None:
        raise PlanningFailedError(f"no curve family reaches {goal} from {start}")
    return _assemble(best, r_min)


# --- speed-profile sampling -------------------------------------------------


class _Trapezoid:
    """Per-segment speed profile: ramp at ``accel`` to at most ``v_max`` and back to rest."""

    def __init__(self, distance: float, v_max: float, accel: float):
        self.s = distance
        self.a = accel
        full_ramp = v_max * v_max / accel
        if distance >= full_ramp:
            self.v_peak = v_max
            self.t_ramp = v_max / accel
            self.t_cruise = (distance - full_ramp) / v_max
        else:
            self.v_peak = math.sqrt(accel * distance)
            self.t_ramp = self.v_peak / accel
            self.t_cruise = 0.0
        self.duration = 2.0 * self.t_ramp + self.t_cruise

    def sample(self, t: float) -> tuple[float, float, str]:
        """(distance, speed, phase) at local time t; phase in {accel, cruise, decel}."""
        t = min(max(t, 0.0), self.duration)
        if t <= self.t_ramp:
            return 0.5 * self.a * t * t, self.a * t, "accel"
        s_ramp = 0.5 * self.a * self.t_ramp * self.t_ramp
        if t <= self.t_ramp + self.t_cruise:
            return s_ramp + self.v_peak * (t - self.t_ramp), self.v_peak, "cruise"
        remain = self.duration - t
        return self.s - 0.5 * self.a * remain * remain, self.a * remain, "decel"


def sample_trajectory(
    segments: list[PathSegment],
    start: Pose2D,
    v_max: float,
    accel: float,
    dt: float,
    *,
    pause_frames: int = 2,
    idle_lead_frames: int = 0,
    cruise_throttle: float = 0.2,
    scenario_ref: str = "",
    target_slot: Pose2D | None = None,
    statics=None,
) -> Trajectory:
    """Sample the planned segments into constant-``dt`` frames.

    Each segment gets its own trapezoidal profile; a dwell of ``pause_frames``
    frames at zero speed is inserted at every direction change so gear shifts
    read as deliberate pauses.  The final frame stops exactly at the endpoint.
    """
    if dt <= 0 or v_max <= 0 or accel <= 0:
        raise ValueError("dt, v_max and accel must be positive")

    # Phase list: (kind, duration, pose_at_phase_start, payload)
    phases: list[tuple[str, float, Pose2D, object]] = []
    if idle_lead_frames > 0:
        phases.append(("pause", idle_lead_frames * dt, start, None))
    pose = start
    for i, seg in enumerate(segments):
        prof = _Trapezoid(seg.arc_length, v_max, accel)
        phases.append(("move", prof.duration, pose, (seg, prof)))
        pose = advance_pose(pose, seg.signed_length, seg.curvature)
        if i + 1 < len(segments) and segments[i + 1].direction != seg.direction:
            phases.append(("pause", pause_frames * dt, pose, None))
    end_pose = pose
    total = sum(p[1] for p in phases)

    n_frames = int(math.ceil(total / dt - 1e-9)) + 1
    poses = np.zeros((n_frames, 3))
    speeds = np.zeros(n_frames)
    throttles = np.zeros(n_frames)

    starts = np.cumsum([0.0] + [p[1] for p in phases])
    for k in range(n_frames):
        t = k * dt
        if t >= total or not phases:
            poses[k] = end_pose.as_tuple()
            continue
        idx = int(np.searchsorted(starts, t, side="right")) - 1
        idx = min(max(idx, 0), len(phases) - 1)
        kind, _, p0, payload = phases[idx]
        tau = t - starts[idx]
        if kind == "pause":
            poses[k] = p0.as_tuple()
            continue
        seg, prof = payload
        dist, spd, phase = prof.sample(tau)
        frame_pose = advance_pose(p0, float(seg.direction) * dist, seg.curvature)
        poses[k] = frame_pose.as_tuple()
        speeds[k] = float(seg.direction) * spd
        throttles[k] = 1.0 if phase == "accel" else (cruise_throttle if phase == "cruise" else 0.0)

    return Trajectory(
        poses=poses,
        speeds=speeds,
        throttles=throttles,
        dt=dt,
        scenario_ref=scenario_ref,
        target_slot=target_slot,
        statics=list(statics) if statics else [],
    )
