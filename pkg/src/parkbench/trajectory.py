"""Demonstration trajectories: time-ordered frames of pose, signed speed, and commands."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .geometry import OrientedBox, Pose2D


class MotionState(IntEnum):
    """Per-frame motion label derived from signed speed with a +/-0.05 m/s dead band."""

    FORWARD = 1
    STATIONARY = 0
    REVERSE = -1


STATIONARY_SPEED = 0.05  # m/s dead band for the stationary label


@dataclass
class Trajectory:
    """One demonstration sampled at constant ``dt``.

    ``states`` stays ``None`` until motion-state labeling runs; ``statics``
    carries the obstacle boxes of the source scenario so occupancy grids can
    be regenerated instead of stored.
    """

    poses: np.ndarray  # (N, 3) x, y, theta
    speeds: np.ndarray  # (N,) signed m/s, negative when reversing
    throttles: np.ndarray  # (N,) in [0, 1], command placeholder
    dt: float
    scenario_ref: str = ""
    target_slot: Pose2D | None = None
    states: np.ndarray | None = None  # (N,) int8 in {1, 0, -1}
    statics: list[OrientedBox] = field(default_factory=list)

    def __post_init__(self):
        self.poses = np.asarray(self.poses, dtype=float).reshape(-1, 3)
        self.speeds = np.asarray(self.speeds, dtype=float).reshape(-1)
        self.throttles = np.asarray(self.throttles, dtype=float).reshape(-1)
        n = self.poses.shape[0]
        if n == 0:
            raise ValueError("trajectory must have at least one frame")
        if self.speeds.shape[0] != n or self.throttles.shape[0] != n:
            raise ValueError("frame arrays must share one length")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.states is not None:
            self.states = np.asarray(self.states, dtype=np.int8).reshape(-1)
            if self.states.shape[0] != n:
                raise ValueError("states length mismatch")

    @property
    def n_frames(self) -> int:
        return self.poses.shape[0]

    def path_length(self) -> float:
        deltas = np.diff(self.poses[:, :2], axis=0)
        return float(np.sum(np.hypot(deltas[:, 0], deltas[:, 1])))

    def avg_speed_kmh(self) -> float:
        return float(np.mean(np.abs(self.speeds)) * 3.6)

    def final_direction(self) -> int:
        """Direction (+1/-1) of the last non-stationary frame; +1 if never moving."""
        moving = np.abs(self.speeds) > STATIONARY_SPEED
        if not moving.any():
            return 1
        return 1 if self.speeds[np.nonzero(moving)[0][-1]] > 0 else -1

    def slice_frames(self, start: int, stop: int) -> "Trajectory":
        """Copy of frames ``start:stop`` (python slice semantics)."""
        return Trajectory(
            poses=self.poses[start:stop].copy(),
            speeds=self.speeds[start:stop].copy(),
            throttles=self.throttles[start:stop].copy(),
            dt=self.dt,
            scenario_ref=self.scenario_ref,
            target_slot=self.target_slot,
            states=None if self.states is None else self.states[start:stop].copy(),
            statics=list(self.statics),
        )
