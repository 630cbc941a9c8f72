"""
Physics - World and camera property checks over layout trajectories
"""

from .checks import (
    check_all,
    check_bounce,
    check_gravity,
    check_perspective,
    default_ground_y,
    falling_segments,
)

__all__ = [
    'check_all',
    'check_bounce',
    'check_gravity',
    'check_perspective',
    'default_ground_y',
    'falling_segments',
]
