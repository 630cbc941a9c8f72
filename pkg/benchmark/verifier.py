"""
Benchmark Verifier - Rule-based checks of a layout against a prompt
"""

import math
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from dsl.geometry import trajectory_of
from models.benchmark import BenchmarkPrompt, BenchmarkTask, Verdict
from models.layout import DynamicSceneLayout, Trajectory
from validation import UnknownTask, ValidationError


@dataclass(frozen=True)
class BenchmarkRules:
    """Thresholds of the rule-based checks"""

    displacement_fraction: float = 0.25

    def __post_init__(self):
        if not 0.0 <= self.displacement_fraction <= 1.0:
            raise ValidationError(
                f"displacement_fraction must lie in [0, 1], got {self.displacement_fraction}"
            )


def name_tokens(name: str) -> List[str]:
    """Lowercase alphabetic tokens of a box name"""
    return re.findall(r"[a-z]+", name.lower())


def token_matches(token: str, noun: str) -> bool:
    """A token names the noun if it is the noun or its plural"""
    return token in (noun, noun + 's', noun + 'es')


def mentions(name: str, noun: str) -> bool:
    """Whether a box name mentions the noun (case-insensitive, plural-tolerant)"""
    return any(token_matches(token, noun) for token in name_tokens(name))


def has_pair(name: str, color: str, noun: str) -> bool:
    """Whether `color` is immediately followed by `noun` in the name"""
    tokens = name_tokens(name)
    return any(
        first == color and token_matches(second, noun)
        for first, second in zip(tokens, tokens[1:])
    )


def find_object(dsl: DynamicSceneLayout, noun: str) -> Optional[int]:
    """Lowest id whose name mentions the noun"""
    ids = sorted({box.id for frame in dsl.frames for box in frame.boxes if mentions(box.name, noun)})
    return ids[0] if ids else None


def quadrant(x: float, y: float, width: float, height: float) -> Optional[str]:
    """'upper left' .. 'lower right'; None on a midline (y grows downward)"""
    if x == width / 2 or y == height / 2:
        return None
    vertical = 'upper' if y < height / 2 else 'lower'
    horizontal = 'left' if x < width / 2 else 'right'
    return f"{vertical} {horizontal}"


def _verify_numeracy(truth: dict, dsl: DynamicSceneLayout, rules: BenchmarkRules) -> Tuple[bool, str]:
    noun, number = truth['object'], int(truth['number'])
    if not dsl.frames:
        return False, "layout has no frames"
    for frame in dsl.frames:
        count = sum(1 for box in frame.boxes if mentions(box.name, noun))
        if count != number:
            return False, f"frame {frame.index} has {count} {noun} boxes, expected {number}"
    return True, f"{number} {noun} boxes in all {dsl.frame_count} frames"


def _verify_attribute_binding(truth: dict, dsl: DynamicSceneLayout, rules: BenchmarkRules) -> Tuple[bool, str]:
    targets = [(truth['color1'], truth['object1']), (truth['color2'], truth['object2'])]
    names: Dict[int, set] = {}
    for frame in dsl.frames:
        for box in frame.boxes:
            names.setdefault(box.id, set()).add(box.name)

    for object_id, id_names in names.items():
        for name in id_names:
            for (color, _), (_, wrong_noun) in ((targets[0], targets[1]), (targets[1], targets[0])):
                if has_pair(name, color, wrong_noun):
                    return False, f"id {object_id} '{name}' binds {color} to {wrong_noun}"

    holders = []
    for color, noun in targets:
        ids = {i for i, id_names in names.items() if any(has_pair(n, color, noun) for n in id_names)}
        if not ids:
            return False, f"no box named '{color} {noun}'"
        holders.append(ids)

    if not any(a != b for a in holders[0] for b in holders[1]):
        return False, "both attribute pairs sit on the same id"
    return True, "both color/object pairs bound to distinct objects"


def _verify_visibility(truth: dict, dsl: DynamicSceneLayout, rules: BenchmarkRules) -> Tuple[bool, str]:
    noun, half = truth['object'], truth['half']
    n = dsl.frame_count
    if n < 2:
        return False, "layout needs at least 2 frames"
    split = math.ceil(n / 2)
    visible = [any(mentions(box.name, noun) for box in frame.boxes) for frame in dsl.frames]
    first, second = visible[:split], visible[split:]
    wanted, other = (first, second) if half == 'first' else (second, first)
    if not any(wanted):
        return False, f"{noun} never appears in the {half} half"
    if any(other):
        return False, f"{noun} also appears outside the {half} half"
    return True, f"{noun} appears only in the {half} half"


def _trajectory(dsl: DynamicSceneLayout, noun: str) -> Optional[Trajectory]:
    object_id = find_object(dsl, noun)
    return trajectory_of(dsl, object_id) if object_id is not None else None


def _verify_spatial(truth: dict, dsl: DynamicSceneLayout, rules: BenchmarkRules) -> Tuple[bool, str]:
    width = dsl.canvas.width
    rightward = truth['start'] == 'left'

    if truth.get('form') == 'relative':
        moving = _trajectory(dsl, truth['object'])
        reference = _trajectory(dsl, truth['reference'])
        if moving is None or reference is None:
            return False, "moving or reference object missing"
        moving_x = {s.frame: s.com[0] for s in moving.samples}
        reference_x = {s.frame: s.com[0] for s in reference.samples}
        shared = sorted(set(moving_x) & set(reference_x))
        if len(shared) < 2:
            return False, "objects share fewer than 2 frames"
        d_first = moving_x[shared[0]] - reference_x[shared[0]]
        d_last = moving_x[shared[-1]] - reference_x[shared[-1]]
        ok = (d_first < 0 < d_last) if rightward else (d_first > 0 > d_last)
        return ok, f"offset to {truth['reference']} goes {d_first:.1f} -> {d_last:.1f}"

    trajectory = _trajectory(dsl, truth['object'])
    if trajectory is None:
        return False, f"no {truth['object']} box"
    x_first, x_last = trajectory.xs[0], trajectory.xs[-1]
    threshold = rules.displacement_fraction * width
    if rightward:
        ok = x_first < width / 2 < x_last and x_last - x_first >= threshold
    else:
        ok = x_first > width / 2 > x_last and x_first - x_last >= threshold
    return ok, f"CoM x goes {x_first:.1f} -> {x_last:.1f} (threshold {threshold:.1f})"


def _verify_sequential(truth: dict, dsl: DynamicSceneLayout, rules: BenchmarkRules) -> Tuple[bool, str]:
    first, middle, last = truth['locations']
    trajectory = _trajectory(dsl, truth['object'])
    n = dsl.frame_count
    if trajectory is None:
        return False, f"no {truth['object']} box"
    if n < 3:
        return False, "layout needs at least 3 frames"

    where = {
        s.frame: quadrant(s.com[0], s.com[1], dsl.canvas.width, dsl.canvas.height)
        for s in trajectory.samples
    }
    if where.get(1) != first:
        return False, f"frame 1 is in {where.get(1)}, expected {first}"
    if where.get(n) != last:
        return False, f"frame {n} is in {where.get(n)}, expected {last}"
    if not any(where.get(j) == middle for j in range(2, n)):
        return False, f"no intermediate frame in {middle}"
    return True, f"{first} -> {middle} -> {last}"


_RULES = {
    BenchmarkTask.NUMERACY: _verify_numeracy,
    BenchmarkTask.ATTRIBUTE_BINDING: _verify_attribute_binding,
    BenchmarkTask.VISIBILITY: _verify_visibility,
    BenchmarkTask.SPATIAL_DYNAMICS: _verify_spatial,
    BenchmarkTask.SEQUENTIAL_ACTIONS: _verify_sequential,
}


def verify(
    prompt: BenchmarkPrompt,
    dsl: DynamicSceneLayout,
    rules: Optional[BenchmarkRules] = None,
    generation: int = 0
) -> Verdict:
    """
    Check a layout against a benchmark prompt

    Args:
        prompt: Prompt with its ground truth
        dsl: Parsed, frame-consecutive layout
        rules: Thresholds (defaults)
        generation: Generation index recorded on the verdict

    Returns:
        Verdict with pass/fail and a reason

    Raises:
        UnknownTask: If the prompt's task has no rule
    """
    check = _RULES.get(prompt.task)
    if check is None:
        raise UnknownTask(f"unknown benchmark task: {prompt.task!r}")
    passed, reason = check(prompt.truth, dsl, rules or BenchmarkRules())
    return Verdict(
        prompt_id=prompt.prompt_id,
        task=prompt.task,
        passed=bool(passed),
        reason=reason,
        generation=generation
    )
