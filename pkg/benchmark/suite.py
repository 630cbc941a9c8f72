"""
Benchmark Suite - Programmatic prompts for the five alignment tasks
"""

from typing import Any, Dict, List, Optional, Sequence

import numpy as np

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from models.benchmark import BenchmarkPrompt, BenchmarkTask
from validation import UnknownTask


OBJECTS = ('car', 'cat', 'bird', 'ball', 'dog')
COLORS = (
    'red', 'orange', 'yellow', 'green', 'blue', 'purple', 'pink', 'brown', 'black', 'white', 'gray'
)
LOCATION_TRIPLES = (
    ('lower left', 'lower right', 'upper right'),
    ('lower left', 'upper left', 'upper right'),
    ('lower right', 'lower left', 'upper left'),
    ('lower right', 'upper right', 'upper left'),
)
DIRECTIONS = (('left', 'right'), ('right', 'left'))
HALVES = ('first', 'second')
NUMBERS = (1, 2, 3, 4, 5)
PROMPTS_PER_TASK = 100

PREFIX = "A realistic lively video of a scene"


def plural(noun: str, count: int) -> str:
    """Noun with an 's' for counts other than one"""
    return noun if count == 1 else f"{noun}s"


def render_prompt_text(task: BenchmarkTask, truth: Dict[str, Any]) -> str:
    """
    Caption of a benchmark prompt from its ground truth

    Raises:
        UnknownTask: If the task is not one of the five
    """
    if task is BenchmarkTask.NUMERACY:
        return f"{PREFIX} with {truth['number']} {plural(truth['object'], truth['number'])}"
    if task is BenchmarkTask.ATTRIBUTE_BINDING:
        return (
            f"{PREFIX} with a {truth['color1']} {truth['object1']} "
            f"and a {truth['color2']} {truth['object2']}"
        )
    if task is BenchmarkTask.VISIBILITY:
        return f"{PREFIX} in which a {truth['object']} appears only in the {truth['half']} half of the video"
    if task is BenchmarkTask.SPATIAL_DYNAMICS:
        if truth['form'] == 'relative':
            return (
                f"{PREFIX} with a {truth['object']} moving from the {truth['start']} "
                f"of a {truth['reference']} to its {truth['end']}"
            )
        return f"{PREFIX} with a {truth['object']} moving from the {truth['start']} to the {truth['end']}"
    if task is BenchmarkTask.SEQUENTIAL_ACTIONS:
        first, second, third = truth['locations']
        return (
            f"{PREFIX} in which a {truth['object']} initially on the {first} of the scene. "
            f"It first moves to the {second} of the scene and then moves to the {third} of the scene."
        )
    raise UnknownTask(f"unknown benchmark task: {task!r}")


def _pick(rng: np.random.Generator, pool: Sequence[Any], size: Optional[int] = None):
    if size is None:
        return pool[int(rng.integers(len(pool)))]
    indices = rng.choice(len(pool), size=size, replace=False)
    return [pool[int(i)] for i in indices]


def _draw_truth(task: BenchmarkTask, rng: np.random.Generator) -> Dict[str, Any]:
    if task is BenchmarkTask.NUMERACY:
        return {'number': _pick(rng, NUMBERS), 'object': _pick(rng, OBJECTS)}
    if task is BenchmarkTask.ATTRIBUTE_BINDING:
        color1, color2 = _pick(rng, COLORS, 2)
        object1, object2 = _pick(rng, OBJECTS, 2)
        return {'color1': color1, 'object1': object1, 'color2': color2, 'object2': object2}
    if task is BenchmarkTask.VISIBILITY:
        return {'object': _pick(rng, OBJECTS), 'half': _pick(rng, HALVES)}
    if task is BenchmarkTask.SPATIAL_DYNAMICS:
        start, end = _pick(rng, DIRECTIONS)
        if rng.integers(2) == 1:
            moving, reference = _pick(rng, OBJECTS, 2)
            return {'form': 'relative', 'object': moving, 'reference': reference,
                    'start': start, 'end': end}
        return {'form': 'single', 'object': _pick(rng, OBJECTS), 'start': start, 'end': end}
    if task is BenchmarkTask.SEQUENTIAL_ACTIONS:
        return {'object': _pick(rng, OBJECTS), 'locations': list(_pick(rng, LOCATION_TRIPLES))}
    raise UnknownTask(f"unknown benchmark task: {task!r}")


def generate_suite(
    seed: int = 0,
    per_task: int = PROMPTS_PER_TASK,
    tasks: Optional[Sequence[BenchmarkTask]] = None
) -> List[BenchmarkPrompt]:
    """
    Draw the benchmark prompts

    Prompts are drawn task by task from one seeded stream, so the suite for
    a seed is fixed. Attribute-binding prompts use two different objects and
    two different colors; spatial prompts mix the single and relative
    templates evenly in expectation.

    Args:
        seed: Random seed
        per_task: Prompts per task (100 in the standard suite)
        tasks: Subset of tasks (all five by default)

    Returns:
        List of prompts, grouped by task in canonical order
    """
    rng = np.random.default_rng(seed)
    selected = set(tasks) if tasks else set(BenchmarkTask)
    suite: List[BenchmarkPrompt] = []
    for task in BenchmarkTask:
        for i in range(per_task):
            truth = _draw_truth(task, rng)
            if task not in selected:
                continue
            suite.append(BenchmarkPrompt(
                prompt_id=f"{task.slug}-{i:03d}",
                task=task,
                text=render_prompt_text(task, truth),
                truth=truth,
                seed=seed
            ))
    return suite


def stratified_subsample(
    suite: Sequence[BenchmarkPrompt],
    total: int,
    seed: int = 0
) -> List[BenchmarkPrompt]:
    """Equal share of each task present in the suite, drawn without replacement"""
    tasks = [task for task in BenchmarkTask if any(p.task is task for p in suite)]
    if not tasks:
        return []
    rng = np.random.default_rng(seed)
    per_task = total // len(tasks)
    picked: List[BenchmarkPrompt] = []
    for task in tasks:
        group = [p for p in suite if p.task is task]
        count = min(per_task, len(group))
        indices = sorted(int(i) for i in rng.choice(len(group), size=count, replace=False))
        picked.extend(group[i] for i in indices)
    return picked
