"""
Physics Checks - Gravity, bounce and perspective predicates over trajectories

Vertical motion is read from the box top edge; y grows downward, so a
positive step is a fall.
"""

from typing import List, Optional

import numpy as np

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from models.layout import Canvas, Trajectory
from models.physics import PhysicsVerdict
from validation import TooFewFrames, ValidationError


def _require(traj: Trajectory, minimum: int, check: str) -> None:
    if len(traj.samples) < minimum:
        raise TooFewFrames(
            f"{check} needs at least {minimum} samples, object {traj.id} has {len(traj.samples)}"
        )


def default_ground_y(traj: Trajectory, canvas: Optional[Canvas] = None) -> float:
    """Canvas height minus the object's final box height"""
    canvas = canvas or Canvas()
    return canvas.height - traj.samples[-1].box.h


def _steps(traj: Trajectory) -> np.ndarray:
    return np.diff(np.asarray(traj.tops, dtype=float))


def falling_segments(tops: List[float], ground_y: float) -> List[List[float]]:
    """Maximal runs of positive steps whose end stays above the ground"""
    segments: List[List[float]] = []
    current: List[float] = []
    for start, end in zip(tops, tops[1:]):
        dy = end - start
        if dy > 0 and end < ground_y:
            current.append(dy)
            continue
        if current:
            segments.append(current)
        current = []
    if current:
        segments.append(current)
    return segments


def check_gravity(traj: Trajectory, ground_y: float) -> PhysicsVerdict:
    """
    Falls speed up until the ground

    Holds iff every falling segment has non-decreasing steps. Objects that
    never fall hold vacuously.

    Raises:
        TooFewFrames: With fewer than 3 samples
    """
    _require(traj, 3, "gravity check")
    tops = [float(y) for y in traj.tops]
    segments = falling_segments(tops, ground_y)
    holds = all(later >= earlier for seg in segments for earlier, later in zip(seg, seg[1:]))
    return PhysicsVerdict(
        property_name='gravity',
        holds=holds,
        evidence={
            'dy': [float(d) for d in np.diff(tops)],
            'falling_segments': segments,
            'ground_y': float(ground_y),
        }
    )


def _first_near_ground(traj: Trajectory, ground_y: float) -> Optional[int]:
    for i, sample in enumerate(traj.samples):
        if sample.box.y >= ground_y - sample.box.h:
            return i
    return None


def check_bounce(traj: Trajectory, ground_y: float, elastic: bool = True) -> PhysicsVerdict:
    """
    Elastic objects turn upward after reaching the ground; inelastic ones never do

    A turn is a falling step followed by a rising step at a sample that is
    within one box height of the ground, or any later sample.

    Raises:
        TooFewFrames: With fewer than 3 samples
    """
    _require(traj, 3, "bounce check")
    dy = _steps(traj)
    near = _first_near_ground(traj, ground_y)
    bounce_frame = None
    if near is not None:
        for i in range(max(near, 1), len(dy)):
            if dy[i - 1] > 0 and dy[i] < 0:
                bounce_frame = traj.samples[i + 1].frame
                break
    bounced = bounce_frame is not None
    return PhysicsVerdict(
        property_name='elastic_bounce' if elastic else 'inelastic_landing',
        holds=bounced if elastic else not bounced,
        evidence={
            'dy': [float(d) for d in dy],
            'near_ground_frame': traj.samples[near].frame if near is not None else None,
            'bounce_frame': bounce_frame,
            'ground_y': float(ground_y),
        }
    )


def check_perspective(traj: Trajectory, receding: bool = True, eps: float = 0.0) -> PhysicsVerdict:
    """
    Receding objects shrink, approaching objects grow

    With eps = 0 areas must change strictly monotonically; a positive eps
    forgives steps the wrong way smaller than eps.

    Raises:
        TooFewFrames: With fewer than 2 samples
    """
    if eps < 0:
        raise ValidationError(f"eps must be nonnegative, got {eps}")
    _require(traj, 2, "perspective check")
    areas = [float(a) for a in traj.areas]
    changes = np.diff(areas)
    if receding:
        holds = bool(np.all(changes < eps))
    else:
        holds = bool(np.all(changes > -eps))
    return PhysicsVerdict(
        property_name='perspective_receding' if receding else 'perspective_approaching',
        holds=holds,
        evidence={'areas': areas, 'eps': eps}
    )


def check_all(
    traj: Trajectory,
    canvas: Optional[Canvas] = None,
    elastic: bool = True,
    receding: bool = True,
    ground_y: Optional[float] = None
) -> List[PhysicsVerdict]:
    """
    Every check that the trajectory is long enough for

    Gravity and bounce need 3 samples, perspective needs 2; shorter
    trajectories skip the checks they cannot support.
    """
    if ground_y is None and traj.samples:
        ground_y = default_ground_y(traj, canvas)
    verdicts: List[PhysicsVerdict] = []
    if len(traj.samples) >= 3:
        verdicts.append(check_gravity(traj, ground_y))
        verdicts.append(check_bounce(traj, ground_y, elastic=elastic))
    if len(traj.samples) >= 2:
        verdicts.append(check_perspective(traj, receding=receding))
    return verdicts
