"""Planar pose algebra, constant-curvature motion, and oriented-box collision tests."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

TWO_PI = 2.0 * math.pi


def normalize_angle(angle: float) -> float:
    """Wrap an angle to the half-open interval (-pi, pi]."""
    if not math.isfinite(angle):
        raise ValueError(f"angle must be finite, got {angle!r}")
    return angle - TWO_PI * math.ceil((angle - math.pi) / TWO_PI)


def normalize_angles(angles: np.ndarray) -> np.ndarray:
    """Vectorised :func:`normalize_angle` over an array, same (-pi, pi] convention."""
    a = np.asarray(angles, dtype=float)
    if not np.all(np.isfinite(a)):
        raise ValueError("angles must be finite")
    return a - TWO_PI * np.ceil((a - math.pi) / TWO_PI)


@dataclass(frozen=True)
class Pose2D:
    """Planar pose: position in meters, heading in radians wrapped to (-pi, pi]."""

    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta", normalize_angle(self.theta))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.theta)


def pose_to_world(local: Pose2D, frame: Pose2D) -> Pose2D:
    """Forward rigid transform: express a pose given in ``frame`` in world coordinates."""
    c, s = math.cos(frame.theta), math.sin(frame.theta)
    return Pose2D(
        frame.x + c * local.x - s * local.y,
        frame.y + s * local.x + c * local.y,
        local.theta + frame.theta,
    )


def pose_in_frame(world: Pose2D, frame: Pose2D) -> Pose2D:
    """Inverse rigid transform: express a world pose in the coordinates of ``frame``."""
    c, s = math.cos(frame.theta), math.sin(frame.theta)
    dx, dy = world.x - frame.x, world.y - frame.y
    return Pose2D(c * dx + s * dy, -s * dx + c * dy, world.theta - frame.theta)


def advance_pose(pose: Pose2D, ds: float, curvature: float) -> Pose2D:
    """Advance along a constant-curvature arc by signed arc length ``ds`` (closed form)."""
    if curvature == 0.0:
        return Pose2D(
            pose.x + ds * math.cos(pose.theta),
            pose.y + ds * math.sin(pose.theta),
            pose.theta,
        )
    t1 = pose.theta
    t2 = t1 + curvature * ds
    return Pose2D(
        pose.x + (math.sin(t2) - math.sin(t1)) / curvature,
        pose.y - (math.cos(t2) - math.cos(t1)) / curvature,
        t2,
    )


class Direction(IntEnum):
    FORWARD = 1
    BACKWARD = -1


@dataclass(frozen=True)
class PathSegment:
    """One constant-curvature piece of a planned path.

    ``curvature`` is 0 for straights and +/-1/r_min for arcs; ``arc_length``
    is unsigned, the driving sense lives in ``direction``.
    """

    direction: Direction
    curvature: float
    arc_length: float

    def __post_init__(self):
        if not (self.arc_length >= 0.0):
            raise ValueError(f"arc_length must be >= 0, got {self.arc_length}")

    @property
    def signed_length(self) -> float:
        return float(self.direction) * self.arc_length


def drive_segments(start: Pose2D, segments: list[PathSegment]) -> Pose2D:
    """Endpoint of driving ``segments`` from ``start`` under unicycle kinematics."""
    pose = start
    for seg in segments:
        pose = advance_pose(pose, seg.signed_length, seg.curvature)
    return pose


def count_direction_changes(segments: list[PathSegment]) -> int:
    """Number of forward/backward alternations along the segment list."""
    changes = 0
    for a, b in zip(segments, segments[1:]):
        if a.direction != b.direction:
            changes += 1
    return changes


def path_arc_length(segments: list[PathSegment]) -> float:
    return sum(seg.arc_length for seg in segments)


@dataclass(frozen=True)
class OrientedBox:
    """Rectangle footprint given by a center pose and half extents (meters)."""

    center: Pose2D
    half_length: float
    half_width: float

    def __post_init__(self):
        if self.half_length <= 0 or self.half_width <= 0:
            raise ValueError("box half extents must be positive")

    def corners(self) -> list[tuple[float, float]]:
        c, s = math.cos(self.center.theta), math.sin(self.center.theta)
        out = []
        for lx, ly in (
            (self.half_length, self.half_width),
            (self.half_length, -self.half_width),
            (-self.half_length, -self.half_width),
            (-self.half_length, self.half_width),
        ):
            out.append((self.center.x + c * lx - s * ly, self.center.y + s * lx + c * ly))
        return out

    def inflate(self, margin: float) -> "OrientedBox":
        return OrientedBox(self.center, self.half_length + margin, self.half_width + margin)

    def contains_point(self, x: float, y: float) -> bool:
        local = pose_in_frame(Pose2D(x, y, 0.0), self.center)
        return abs(local.x) <= self.half_length and abs(local.y) <= self.half_width


def _axes(theta: float) -> list[tuple[float, float]]:
    c, s = math.cos(theta), math.sin(theta)
    return [(c, s), (-s, c)]


def obb_intersect(a: OrientedBox, b: OrientedBox) -> bool:
    """Separating-axis overlap test over the 4 candidate axes (closed boxes)."""
    ca, cb = a.corners(), b.corners()
    for ax, ay in _axes(a.center.theta) + _axes(b.center.theta):
        pa = [cx * ax + cy * ay for cx, cy in ca]
        pb = [cx * ax + cy * ay for cx, cy in cb]
        if max(pa) < min(pb) or max(pb) < min(pa):
            return False
    return True


def boxes_corners(centers: np.ndarray, half_length: float, half_width: float) -> np.ndarray:
    """Corners (N, 4, 2) of N boxes given center poses (N, 3) and shared half extents."""
    centers = np.asarray(centers, dtype=float)
    c, s = np.cos(centers[:, 2]), np.sin(centers[:, 2])
    local = np.array(
        [
            (half_length, half_width),
            (half_length, -half_width),
            (-half_length, -half_width),
            (-half_length, half_width),
        ]
    )
    x = centers[:, 0:1] + np.outer(c, local[:, 0]) - np.outer(s, local[:, 1])
    y = centers[:, 1:2] + np.outer(s, local[:, 0]) + np.outer(c, local[:, 1])
    return np.stack([x, y], axis=-1)


def _axes_np(thetas: np.ndarray) -> np.ndarray:
    c, s = np.cos(thetas), np.sin(thetas)
    return np.stack([np.stack([c, s], -1), np.stack([-s, c], -1)], axis=1)  # (N, 2, 2)


def any_box_overlap(
    ego_poses: np.ndarray,
    ego_half_length: float,
    ego_half_width: float,
    obstacles: list[OrientedBox],
) -> np.ndarray:
    """Per-pose overlap flags (P,) of an ego footprint swept over poses vs obstacle boxes.

    Batched separating-axis test; used for collision screening of expert paths.
    """
    ego_poses = np.asarray(ego_poses, dtype=float).reshape(-1, 3)
    n_pose = ego_poses.shape[0]
    if not obstacles or n_pose == 0:
        return np.zeros(n_pose, dtype=bool)

    obs_centers = np.array([b.center.as_tuple() for b in obstacles])
    obs_corners = np.stack([np.array(b.corners()) for b in obstacles])  # (M, 4, 2)
    ego_corners = boxes_corners(ego_poses, ego_half_length, ego_half_width)  # (P, 4, 2)
    ego_axes = _axes_np(ego_poses[:, 2])  # (P, 2, 2)
    obs_axes = _axes_np(obs_centers[:, 2])  # (M, 2, 2)

    # Project both corner sets on ego axes: (P, 1|M, 2axes, 4corners).
    pe_on_e = np.einsum("pkc,pac->pak", ego_corners, ego_axes)[:, None]  # (P,1,2,4)
    po_on_e = np.einsum("mkc,pac->pmak", obs_corners, ego_axes)  # (P,M,2,4)
    sep_e = (pe_on_e.max(-1) < po_on_e.min(-1)) | (po_on_e.max(-1) < pe_on_e.min(-1))

    pe_on_o = np.einsum("pkc,mac->pmak", ego_corners, obs_axes)  # (P,M,2,4)
    po_on_o = np.einsum("mkc,mac->mak", obs_corners, obs_axes)[None]  # (1,M,2,4)
    sep_o = (pe_on_o.max(-1) < po_on_o.min(-1)) | (po_on_o.max(-1) < pe_on_o.min(-1))

    separated = sep_e.any(-1) | sep_o.any(-1)  # (P, M)
    return (~separated).any(axis=1)
