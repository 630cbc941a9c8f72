"""
Benchmark Oracle - Layouts built to pass, and targeted mutations built to fail
"""

from typing import Dict, List, Optional, Tuple

import numpy as np

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from benchmark.verifier import find_object, mentions
from models.benchmark import BenchmarkPrompt, BenchmarkTask
from models.layout import BoundingBox, Canvas, DynamicSceneLayout, Frame
from validation import UnknownTask


ORACLE_FRAMES = 6
ORACLE_BACKGROUND = 'scene'
QUADRANT_BOX = 80


def _layout(per_frame: List[List[BoundingBox]]) -> DynamicSceneLayout:
    return DynamicSceneLayout(
        frames=tuple(Frame(index=i + 1, boxes=tuple(boxes)) for i, boxes in enumerate(per_frame)),
        background_keyword=ORACLE_BACKGROUND,
        canvas=Canvas()
    )


def _static(boxes: List[BoundingBox]) -> List[List[BoundingBox]]:
    return [list(boxes) for _ in range(ORACLE_FRAMES)]


def _sweep_x(start: str, step: int = 78, first: int = 20) -> List[int]:
    xs = [first + step * i for i in range(ORACLE_FRAMES)]
    return xs if start == 'left' else xs[::-1]


def _quadrant_box(object_id: int, name: str, location: str, canvas: Canvas) -> BoundingBox:
    vertical, horizontal = location.split()
    cx = canvas.width / 4 if horizontal == 'left' else 3 * canvas.width / 4
    cy = canvas.height / 4 if vertical == 'upper' else 3 * canvas.height / 4
    half = QUADRANT_BOX // 2
    return BoundingBox(object_id, name, int(cx) - half, int(cy) - half, QUADRANT_BOX, QUADRANT_BOX)


def synthesize_oracle_dsl(prompt: BenchmarkPrompt) -> DynamicSceneLayout:
    """
    Smallest six-frame layout that satisfies the prompt's rule

    Raises:
        UnknownTask: If the prompt's task is not one of the five
    """
    truth = prompt.truth
    task = prompt.task

    if task is BenchmarkTask.NUMERACY:
        boxes = [
            BoundingBox(i, truth['object'], 16 + 96 * i, 216, 80, 80)
            for i in range(int(truth['number']))
        ]
        return _layout(_static(boxes))

    if task is BenchmarkTask.ATTRIBUTE_BINDING:
        return _layout(_static([
            BoundingBox(0, f"{truth['color1']} {truth['object1']}", 60, 196, 120, 120),
            BoundingBox(1, f"{truth['color2']} {truth['object2']}", 332, 196, 120, 120),
        ]))

    if task is BenchmarkTask.VISIBILITY:
        box = BoundingBox(0, truth['object'], 216, 216, 80, 80)
        shown = range(0, 3) if truth['half'] == 'first' else range(3, 6)
        return _layout([[box] if i in shown else [] for i in range(ORACLE_FRAMES)])

    if task is BenchmarkTask.SPATIAL_DYNAMICS:
        xs = _sweep_x(truth['start'])
        if truth.get('form') == 'relative':
            reference = BoundingBox(1, truth['reference'], 216, 300, 80, 80)
            return _layout([
                [BoundingBox(0, truth['object'], x, 120, 80, 80), reference] for x in xs
            ])
        return _layout([[BoundingBox(0, truth['object'], x, 216, 80, 80)] for x in xs])

    if task is BenchmarkTask.SEQUENTIAL_ACTIONS:
        canvas = Canvas()
        first, middle, last = truth['locations']
        stops = [first, first, middle, middle, last, last]
        return _layout([[_quadrant_box(0, truth['object'], loc, canvas)] for loc in stops])

    raise UnknownTask(f"unknown benchmark task: {task!r}")


def _replace_object_boxes(
    dsl: DynamicSceneLayout,
    object_id: int,
    new_boxes: Dict[int, Optional[BoundingBox]]
) -> DynamicSceneLayout:
    """Swap one object's box per frame index (None removes it)"""
    frames = []
    for frame in dsl.frames:
        boxes = [box for box in frame.boxes if box.id != object_id]
        replacement = new_boxes.get(frame.index)
        if replacement is not None:
            boxes.append(replacement)
        frames.append(Frame(index=frame.index, boxes=tuple(boxes)))
    return DynamicSceneLayout(
        frames=tuple(frames), background_keyword=dsl.background_keyword,
        canvas=dsl.canvas, fps=dsl.fps
    )


def _reverse_object(dsl: DynamicSceneLayout, object_id: int) -> DynamicSceneLayout:
    """Play one object's boxes backwards in time"""
    n = dsl.frame_count
    boxes = {frame.index: frame.box_for(object_id) for frame in dsl.frames}
    return _replace_object_boxes(dsl, object_id, {i: boxes.get(n + 1 - i) for i in range(1, n + 1)})


def _swap_colors(dsl: DynamicSceneLayout, first: str, second: str) -> DynamicSceneLayout:
    def swap(name: str) -> str:
        words = name.split(' ')
        out = []
        for word in words:
            lowered = word.lower()
            out.append(second if lowered == first else first if lowered == second else word)
        return ' '.join(out)

    frames = [
        Frame(index=frame.index, boxes=tuple(
            BoundingBox(box.id, swap(box.name), box.x, box.y, box.w, box.h) for box in frame.boxes
        ))
        for frame in dsl.frames
    ]
    return DynamicSceneLayout(
        frames=tuple(frames), background_keyword=dsl.background_keyword,
        canvas=dsl.canvas, fps=dsl.fps
    )


def _change_count(dsl: DynamicSceneLayout, noun: str, delta: int, frame_pos: int) -> DynamicSceneLayout:
    frames = list(dsl.frames)
    target = frames[frame_pos]
    matching = [box for box in target.boxes if mentions(box.name, noun)]
    if delta < 0 and matching:
        drop = matching[-1].id
        boxes = tuple(box for box in target.boxes if box.id != drop)
    else:
        new_id = max((box.id for f in dsl.frames for box in f.boxes), default=-1) + 1
        size = 60
        x = min(16 + 96 * len(matching), dsl.canvas.width - size)
        extra = BoundingBox(new_id, noun, x, max(dsl.canvas.height - size - 40, 0), size, size)
        boxes = target.boxes + (extra,)
    frames[frame_pos] = Frame(index=target.index, boxes=boxes)
    return DynamicSceneLayout(
        frames=tuple(frames), background_keyword=dsl.background_keyword,
        canvas=dsl.canvas, fps=dsl.fps
    )


def _move_to_other_half(dsl: DynamicSceneLayout, noun: str, half: str) -> DynamicSceneLayout:
    object_id = find_object(dsl, noun)
    n = dsl.frame_count
    split = (n + 1) // 2
    template: Optional[BoundingBox] = None
    if object_id is not None:
        template = next(
            frame.box_for(object_id) for frame in dsl.frames if frame.box_for(object_id) is not None
        )
    else:
        object_id = max((box.id for f in dsl.frames for box in f.boxes), default=-1) + 1
        template = BoundingBox(object_id, noun, 216, 216, 80, 80)
    other = range(split + 1, n + 1) if half == 'first' else range(1, split + 1)

    stripped = [
        Frame(index=frame.index, boxes=tuple(b for b in frame.boxes if not mentions(b.name, noun)))
        for frame in dsl.frames
    ]
    base = DynamicSceneLayout(
        frames=tuple(stripped), background_keyword=dsl.background_keyword,
        canvas=dsl.canvas, fps=dsl.fps
    )
    return _replace_object_boxes(base, object_id, {i: template for i in other})


def mutate_to_fail(prompt: BenchmarkPrompt, dsl: DynamicSceneLayout, seed: int = 0) -> DynamicSceneLayout:
    """
    Apply one targeted violation of the prompt's rule

    Numeracy changes the count by one in one seeded frame (a count of one
    never drops to zero), attribute binding swaps the two colors, visibility
    moves the object to the other half, spatial dynamics reverses the moving
    object, and sequential actions plays the object backwards so its first
    and last locations trade places.

    Raises:
        UnknownTask: If the prompt's task is not one of the five
    """
    truth = prompt.truth
    task = prompt.task
    rng = np.random.default_rng(seed)

    if task is BenchmarkTask.NUMERACY:
        delta = int(rng.choice([-1, 1]))
        if int(truth['number']) == 1 and delta < 0:
            delta = 1
        frame_pos = int(rng.integers(dsl.frame_count))
        return _change_count(dsl, truth['object'], delta, frame_pos)

    if task is BenchmarkTask.ATTRIBUTE_BINDING:
        return _swap_colors(dsl, truth['color1'], truth['color2'])

    if task is BenchmarkTask.VISIBILITY:
        return _move_to_other_half(dsl, truth['object'], truth['half'])

    if task in (BenchmarkTask.SPATIAL_DYNAMICS, BenchmarkTask.SEQUENTIAL_ACTIONS):
        object_id = find_object(dsl, truth['object'])
        if object_id is None:
            return dsl
        return _reverse_object(dsl, object_id)

    raise UnknownTask(f"unknown benchmark task: {task!r}")
