"""
Tests for gravity, bounce and perspective checks
"""

import pytest

from dsl import trajectory_of
from models import Canvas
from physics import (
    check_all,
    check_bounce,
    check_gravity,
    check_perspective,
    default_ground_y,
    falling_segments,
)
from validation import TooFewFrames, ValidationError


def drop(layout_factory, tops, size=20):
    layout = layout_factory([[(0, 'stone', 100, y, size, size)] for y in tops])
    return trajectory_of(layout, 0)


class TestGravity:
    """Tests for accelerating falls"""

    def test_red_ball(self, red_ball_dsl):
        """Test the thrown ball speeds up on the way down"""
        traj = trajectory_of(red_ball_dsl, 0)
        verdict = check_gravity(traj, default_ground_y(traj))
        assert verdict.holds
        assert verdict.evidence['dy'] == [40.0, 80.0, 120.0, -80.0, 80.0]
        assert verdict.evidence['falling_segments'] == [[40.0, 80.0, 120.0], [80.0]]

    def test_rock(self, rock_dsl):
        """Test the dropped rock accelerates"""
        traj = trajectory_of(rock_dsl, 0)
        assert check_gravity(traj, 452).holds

    def test_jumping_man(self, woman_man_dsl):
        """Test the jumping man falls faster after the apex"""
        traj = trajectory_of(woman_man_dsl, 1)
        assert check_gravity(traj, default_ground_y(traj)).holds

    def test_constant_speed_fall(self, layout_factory):
        """Test a decelerating fall fails"""
        traj = drop(layout_factory, [0, 100, 180, 240])
        assert not check_gravity(traj, 492).holds

    def test_subsampled_parabola(self, layout_factory):
        """Test every other sample of y = 5 t^2 still accelerates"""
        tops = [5 * t * t for t in range(0, 9, 2)]
        assert check_gravity(drop(layout_factory, tops), 492).holds

    def test_never_falls(self, layout_factory):
        """Test a resting object holds vacuously"""
        assert check_gravity(drop(layout_factory, [50, 50, 50]), 492).holds

    def test_ground_ends_segment(self):
        """Test steps landing at or below the ground end a segment"""
        assert falling_segments([0, 10, 30, 40], ground_y=30) == [[10.0]]

    def test_too_few_samples(self, layout_factory):
        """Test two samples are not enough"""
        with pytest.raises(TooFewFrames):
            check_gravity(drop(layout_factory, [0, 10]), 492)


class TestBounce:
    """Tests for elastic and inelastic contact"""

    def test_ball_bounces(self, red_ball_dsl):
        """Test the ball turns upward at frame 5"""
        traj = trajectory_of(red_ball_dsl, 0)
        verdict = check_bounce(traj, default_ground_y(traj))
        assert verdict.holds
        assert verdict.property_name == 'elastic_bounce'
        assert verdict.evidence['bounce_frame'] == 5
        assert verdict.evidence['near_ground_frame'] == 4

    def test_rock_lands(self, rock_dsl):
        """Test the rock stays down"""
        traj = trajectory_of(rock_dsl, 0)
        assert check_bounce(traj, 452, elastic=False).holds
        assert not check_bounce(traj, 452, elastic=True).holds

    def test_inelastic_ball_fails(self, red_ball_dsl):
        """Test a bouncing object fails the inelastic property"""
        traj = trajectory_of(red_ball_dsl, 0)
        verdict = check_bounce(traj, default_ground_y(traj), elastic=False)
        assert verdict.property_name == 'inelastic_landing'
        assert not verdict.holds

    def test_turn_far_above_ground(self, layout_factory):
        """Test an apex in mid-air is not a bounce"""
        traj = drop(layout_factory, [100, 150, 120, 100])
        assert not check_bounce(traj, 492).holds


class TestPerspective:
    """Tests for camera distance cues"""

    def test_painting_recedes(self, painting_dsl):
        """Test the painting shrinks every frame"""
        traj = trajectory_of(painting_dsl, 0)
        assert check_perspective(traj, receding=True).holds
        assert not check_perspective(traj, receding=False).holds

    def test_approaching(self, layout_factory):
        """Test a growing box approaches"""
        layout = layout_factory([[(0, 'car', 200, 200, s, s)] for s in (20, 40, 60)])
        verdict = check_perspective(trajectory_of(layout, 0), receding=False)
        assert verdict.property_name == 'perspective_approaching'
        assert verdict.holds

    def test_tolerance(self, layout_factory):
        """Test eps forgives small steps the wrong way"""
        layout = layout_factory([[(0, 'car', 200, 200, w, 10)] for w in (50, 40, 40.5, 30)])
        traj = trajectory_of(layout, 0)
        assert not check_perspective(traj).holds
        assert check_perspective(traj, eps=10.0).holds

    def test_negative_eps(self, painting_dsl):
        """Test eps cannot be negative"""
        with pytest.raises(ValidationError):
            check_perspective(trajectory_of(painting_dsl, 0), eps=-1.0)

    def test_single_sample(self, layout_factory):
        """Test one sample is not enough"""
        with pytest.raises(TooFewFrames):
            check_perspective(drop(layout_factory, [0]))


class TestCheckAll:
    """Tests for running every applicable check"""

    def test_default_ground(self, red_ball_dsl):
        """Test the ground defaults to the canvas bottom minus the final box height"""
        traj = trajectory_of(red_ball_dsl, 0)
        assert default_ground_y(traj, Canvas()) == 462
        verdicts = check_all(traj)
        assert [v.property_name for v in verdicts] == ['gravity', 'elastic_bounce', 'perspective_receding']
        assert verdicts[0].evidence['ground_y'] == 462.0

    def test_short_trajectory(self, layout_factory):
        """Test two samples only get the perspective check"""
        traj = drop(layout_factory, [0, 10])
        assert [v.property_name for v in check_all(traj)] == ['perspective_receding']

    def test_verdict_dict(self, rock_dsl):
        """Test verdicts serialize with their evidence"""
        data = check_all(trajectory_of(rock_dsl, 0), elastic=False)[1].to_dict()
        assert data['property'] == 'inelastic_landing'
        assert data['holds'] is True
        assert data['evidence']['bounce_frame'] is None
