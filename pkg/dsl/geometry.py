"""
Layout Geometry - Validation, keyframe interpolation and trajectories
"""

import math
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from models.layout import (
    BoundingBox, Canvas, DynamicSceneLayout, Frame, NameMismatch, NonConsecutiveFrames,
    OutOfBounds, Overlap, Trajectory, TrajectorySample, Violation
)
from validation import TargetTooSmall, UnknownId


def validate_dsl(dsl: DynamicSceneLayout, canvas: Optional[Canvas] = None) -> List[Violation]:
    """
    Collect layout problems without fixing any of them

    Overlapping boxes are reported with their IoU; they are legitimate in
    generated layouts (occlusion) and never rejected.

    Args:
        dsl: Layout to check
        canvas: Canvas to check bounds against (the layout's own by default)

    Returns:
        List of violations, possibly empty
    """
    canvas = canvas or dsl.canvas
    violations: List[Violation] = []

    indices = tuple(frame.index for frame in dsl.frames)
    if indices != tuple(range(1, len(indices) + 1)):
        violations.append(NonConsecutiveFrames(indices=indices))

    names: Dict[int, List[str]] = {}
    for frame in dsl.frames:
        for box in frame.boxes:
            if not box.is_inside(canvas):
                violations.append(OutOfBounds(frame=frame.index, id=box.id))
            seen = names.setdefault(box.id, [])
            if box.name not in seen:
                seen.append(box.name)
        for a, b in combinations(frame.boxes, 2):
            iou = a.iou(b)
            if iou > 0:
                violations.append(Overlap(frame=frame.index, id_a=a.id, id_b=b.id, iou=iou))

    for object_id, seen in names.items():
        if len(seen) > 1:
            violations.append(NameMismatch(id=object_id, names=tuple(seen)))

    return violations


def _lerp(a: float, b: float, t: Fraction) -> float:
    if t == 0 or a == b:
        return a
    return a + (b - a) * float(t)


def _lerp_box(first: BoundingBox, second: BoundingBox, t: Fraction) -> BoundingBox:
    return BoundingBox(
        id=first.id,
        name=first.name,
        x=_lerp(first.x, second.x, t),
        y=_lerp(first.y, second.y, t),
        w=_lerp(first.w, second.w, t),
        h=_lerp(first.h, second.h, t)
    )


def interpolate_frames(dsl: DynamicSceneLayout, target_n: int) -> DynamicSceneLayout:
    """
    Resample keyframes to target_n frames by piecewise-linear interpolation

    Output frame j reads source position u = 1 + (j-1)(N-1)/(target_n-1),
    interpolating each box between frames floor(u) and ceil(u). An object
    present in only one of the two is kept iff u rounds (half up) to that
    frame. The frame rate scales so the clip keeps its duration.

    Args:
        dsl: Source layout with N >= 2 consecutive frames
        target_n: Number of output frames (>= N)

    Returns:
        Interpolated layout

    Raises:
        TargetTooSmall: If N < 2 or target_n < N
    """
    n = dsl.frame_count
    if n < 2:
        raise TargetTooSmall(f"interpolation needs at least 2 source frames, got {n}")
    if target_n < n:
        raise TargetTooSmall(f"target {target_n} is below the source frame count {n}")
    if target_n == n:
        return dsl

    out_frames = []
    for j in range(1, target_n + 1):
        u = 1 + Fraction((j - 1) * (n - 1), target_n - 1)
        lo, hi = math.floor(u), math.ceil(u)
        t = u - lo
        nearest = math.floor(u + Fraction(1, 2))
        first, second = dsl.frames[lo - 1], dsl.frames[hi - 1]

        boxes = []
        for box in first.boxes:
            partner = second.box_for(box.id)
            if partner is not None:
                boxes.append(_lerp_box(box, partner, t))
            elif nearest == lo:
                boxes.append(box)
        for box in second.boxes:
            if first.box_for(box.id) is None and nearest == hi:
                boxes.append(box)
        out_frames.append(Frame(index=j, boxes=tuple(boxes)))

    return DynamicSceneLayout(
        frames=tuple(out_frames),
        background_keyword=dsl.background_keyword,
        canvas=dsl.canvas,
        fps=dsl.fps * Fraction(target_n - 1, n - 1)
    )


def box_com(box: BoundingBox) -> Tuple[float, float]:
    """Center of mass of a filled box: (x + w/2, y + h/2)"""
    return box.com


def trajectory_of(dsl: DynamicSceneLayout, object_id: int) -> Trajectory:
    """
    Collect one object's per-frame center, area and presence

    Raises:
        UnknownId: If the id never occurs in the layout
    """
    samples = []
    present = []
    name = None
    for frame in dsl.frames:
        box = frame.box_for(object_id)
        present.append(box is not None)
        if box is None:
            continue
        if name is None:
            name = box.name
        samples.append(TrajectorySample(frame=frame.index, com=box.com, area=box.area, box=box))

    if not samples:
        raise UnknownId(f"id {object_id} does not occur in the layout")

    return Trajectory(id=object_id, name=name, samples=tuple(samples), present=tuple(present))


def trajectories(dsl: DynamicSceneLayout) -> List[Trajectory]:
    """Trajectories of every object in order of first appearance"""
    return [trajectory_of(dsl, object_id) for object_id in dsl.object_ids()]
