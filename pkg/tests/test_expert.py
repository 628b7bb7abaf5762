import math

import numpy as np
import pytest

from parkbench.geometry import (
    Direction,
    PathSegment,
    Pose2D,
    advance_pose,
    count_direction_changes,
    normalize_angle,
    pose_in_frame,
)
from parkbench.expert import plan_expert_path, sample_trajectory

R_MIN = 2.9 / math.tan(math.radians(30.0))


def _integrate_mm(start: Pose2D, segments) -> Pose2D:
    """Independent endpoint oracle: march each segment in 1 mm steps."""
    pose = start
    for seg in segments:
        step = 1e-3 * float(seg.direction)
        n_full = int(seg.arc_length / 1e-3)
        for _ in range(n_full):
            pose = advance_pose(pose, step, seg.curvature)
        pose = advance_pose(pose, float(seg.direction) * (seg.arc_length - n_full * 1e-3), seg.curvature)
    return pose


def _endpoint_error(start, goal, segments):
    end = _integrate_mm(start, segments)
    return math.hypot(end.x - goal.x, end.y - goal.y), abs(normalize_angle(end.theta - goal.theta))


def test_zero_length_path():
    start = Pose2D(1.0, 2.0, 0.5)
    assert plan_expert_path(start, start, R_MIN) == []


def test_straight_ahead():
    segs = plan_expert_path(Pose2D(0, 0, 0), Pose2D(5, 0, 0), R_MIN)
    assert len(segs) == 1
    seg = segs[0]
    assert seg.direction == Direction.FORWARD
    assert seg.curvature == 0.0
    assert seg.arc_length == pytest.approx(5.0)


def test_straight_behind_is_reverse():
    segs = plan_expert_path(Pose2D(0, 0, 0), Pose2D(-3, 0, 0), R_MIN)
    assert len(segs) == 1
    assert segs[0].direction == Direction.BACKWARD
    assert segs[0].arc_length == pytest.approx(3.0)


def test_generic_pair_integration_oracle():
    start = Pose2D(0.4, -1.0, 0.3)
    goal = Pose2D(6.0, 4.0, -2.2)
    segs = plan_expert_path(start, goal, R_MIN)
    pos_err, ang_err = _endpoint_error(start, goal, segs)
    assert pos_err < 1e-6
    assert ang_err < 1e-6


def test_curvature_magnitudes_are_legal():
    segs = plan_expert_path(Pose2D(0, 0, 0), Pose2D(3.0, 3.0, math.pi / 2), R_MIN)
    for seg in segs:
        assert abs(seg.curvature) in (0.0, pytest.approx(1.0 / R_MIN))


def test_thousand_random_pairs_reach_goal():
    rng = np.random.default_rng(11)
    planned = 0
    for _ in range(1000):
        start = Pose2D(*rng.uniform(-8, 8, 2), rng.uniform(-math.pi, math.pi))
        goal = Pose2D(*rng.uniform(-8, 8, 2), rng.uniform(-math.pi, math.pi))
        segs = plan_expert_path(start, goal, R_MIN)
        planned += 1
        end = start
        for seg in segs:
            end = advance_pose(end, seg.signed_length, seg.curvature)
        assert math.hypot(end.x - goal.x, end.y - goal.y) < 1e-6
        assert abs(normalize_angle(end.theta - goal.theta)) < 1e-6
    assert planned == 1000


def test_r_min_must_be_positive():
    with pytest.raises(ValueError):
        plan_expert_path(Pose2D(0, 0, 0), Pose2D(1, 0, 0), 0.0)


# --- trajectory sampling ----------------------------------------------------


def test_sample_single_forward_segment():
    segs = [PathSegment(Direction.FORWARD, 0.0, 4.0)]
    traj = sample_trajectory(segs, Pose2D(0, 0, 0), v_max=1.5, accel=1.0, dt=0.2)
    assert np.all(traj.speeds >= 0.0)
    assert traj.speeds[-1] == 0.0
    assert traj.poses[-1, 0] == pytest.approx(4.0, abs=1e-9)
    assert traj.poses[-1, 1] == pytest.approx(0.0, abs=1e-9)
    # closed-form trapezoid duration: ramp 1.5 s twice plus cruise (4 - 2.25)/1.5
    expect_T = 2 * 1.5 + (4.0 - 2.25) / 1.5
    assert (traj.n_frames - 1) * traj.dt == pytest.approx(expect_T, abs=0.2)
    # speeds follow the trapezoid against the closed form at every frame
    for k in range(traj.n_frames):
        t = k * 0.2
        if t <= 1.5:
            expect = t
        elif t <= 1.5 + (4.0 - 2.25) / 1.5:
            expect = 1.5
        else:
            expect = max(0.0, expect_T - t)
        assert traj.speeds[k] == pytest.approx(expect, abs=1e-9)


def test_sample_inserts_pause_at_cusp():
    segs = [
        PathSegment(Direction.FORWARD, 0.0, 3.0),
        PathSegment(Direction.BACKWARD, 0.0, 2.0),
    ]
    traj = sample_trajectory(segs, Pose2D(0, 0, 0), v_max=1.5, accel=1.0, dt=0.2)
    signs = np.sign(traj.speeds[np.abs(traj.speeds) > 1e-12])
    flips = int(np.sum(signs[1:] != signs[:-1]))
    assert flips == 1
    first_rev = int(np.argmax(traj.speeds < 0))
    last_fwd = int(np.nonzero(traj.speeds > 0)[0][-1])
    pause = traj.speeds[last_fwd + 1 : first_rev]
    assert len(pause) >= 1
    assert np.all(np.abs(pause) <= 0.05)


def test_sample_zero_segments():
    traj = sample_trajectory([], Pose2D(1, 1, 0.3), v_max=1.0, accel=1.0, dt=0.2)
    assert traj.n_frames == 1
    assert traj.speeds[0] == 0.0


def test_sign_changes_match_direction_changes():
    rng = np.random.default_rng(5)
    for _ in range(25):
        start = Pose2D(*rng.uniform(-6, 6, 2), rng.uniform(-math.pi, math.pi))
        goal = Pose2D(*rng.uniform(-6, 6, 2), rng.uniform(-math.pi, math.pi))
        segs = plan_expert_path(start, goal, R_MIN)
        if not segs:
            continue
        traj = sample_trajectory(segs, start, v_max=1.5, accel=1.0, dt=0.2)
        signs = np.sign(traj.speeds[np.abs(traj.speeds) > 1e-12])
        flips = int(np.sum(signs[1:] != signs[:-1]))
        assert flips == count_direction_changes(segs)


def test_sampled_endpoint_matches_plan():
    start = Pose2D(0.0, 0.0, 0.0)
    goal = Pose2D(4.0, 3.0, 1.2)
    segs = plan_expert_path(start, goal, R_MIN)
    traj = sample_trajectory(segs, start, v_max=1.5, accel=1.0, dt=0.2)
    assert traj.poses[-1, 0] == pytest.approx(goal.x, abs=1e-6)
    assert traj.poses[-1, 1] == pytest.approx(goal.y, abs=1e-6)
    assert abs(normalize_angle(traj.poses[-1, 2] - goal.theta)) < 1e-6
