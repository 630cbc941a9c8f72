"""
Benchmark Models - Tasks, prompts, verdicts and reports
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from validation import UnknownTask, ValidationError


class BenchmarkTask(Enum):
    """The five text/layout alignment tasks"""

    NUMERACY = 'Numeracy'
    ATTRIBUTE_BINDING = 'AttributeBinding'
    VISIBILITY = 'Visibility'
    SPATIAL_DYNAMICS = 'SpatialDynamics'
    SEQUENTIAL_ACTIONS = 'SequentialActions'

    @classmethod
    def parse(cls, value: Any) -> 'BenchmarkTask':
        """Look up a task by value, member name or a loose spelling"""
        if isinstance(value, cls):
            return value
        key = str(value).replace('-', '').replace('_', '').replace(' ', '').lower()
        for task in cls:
            if key in (task.value.lower(), task.name.replace('_', '').lower()):
                return task
        raise UnknownTask(f"unknown benchmark task: {value!r}")

    @property
    def slug(self) -> str:
        """Short lowercase name used in prompt ids"""
        return {
            BenchmarkTask.NUMERACY: 'numeracy',
            BenchmarkTask.ATTRIBUTE_BINDING: 'attribute',
            BenchmarkTask.VISIBILITY: 'visibility',
            BenchmarkTask.SPATIAL_DYNAMICS: 'spatial',
            BenchmarkTask.SEQUENTIAL_ACTIONS: 'sequential',
        }[self]


@dataclass(frozen=True)
class BenchmarkPrompt:
    """A generated caption with the parameters it was built from"""

    prompt_id: str
    task: BenchmarkTask
    text: str
    truth: Dict[str, Any]
    seed: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            'prompt_id': self.prompt_id,
            'task': self.task.value,
            'text': self.text,
            'truth': dict(self.truth),
            'seed': self.seed
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'BenchmarkPrompt':
        try:
            return cls(
                prompt_id=data['prompt_id'],
                task=BenchmarkTask.parse(data['task']),
                text=data['text'],
                truth=dict(data['truth']),
                seed=int(data.get('seed', 0))
            )
        except KeyError as e:
            raise ValidationError(f"benchmark prompt is missing field {e}") from e


@dataclass(frozen=True)
class Verdict:
    """Pass/fail of one generation for one prompt"""

    prompt_id: str
    task: BenchmarkTask
    passed: bool
    reason: str
    generation: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'prompt_id': self.prompt_id,
            'task': self.task.value,
            'generation': self.generation,
            'passed': self.passed,
            'reason': self.reason
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Verdict':
        return cls(
            prompt_id=data['prompt_id'],
            task=BenchmarkTask.parse(data['task']),
            passed=bool(data['passed']),
            reason=data.get('reason', ''),
            generation=int(data.get('generation', 0))
        )


@dataclass
class VerdictReport:
    """Per-task tallies over a list of verdicts"""

    verdicts: List[Verdict] = field(default_factory=list)

    @classmethod
    def from_verdicts(cls, verdicts: List[Verdict]) -> 'VerdictReport':
        return cls(verdicts=list(verdicts))

    def tasks(self) -> List[BenchmarkTask]:
        """Tasks with at least one verdict, in canonical order"""
        seen = {v.task for v in self.verdicts}
        return [task for task in BenchmarkTask if task in seen]

    def attempted(self, task: BenchmarkTask) -> int:
        return sum(1 for v in self.verdicts if v.task is task)

    def passed(self, task: BenchmarkTask) -> int:
        return sum(1 for v in self.verdicts if v.task is task and v.passed)

    def rate(self, task: BenchmarkTask) -> Optional[float]:
        attempted = self.attempted(task)
        if attempted == 0:
            return None
        return self.passed(task) / attempted

    @property
    def average(self) -> float:
        """Unweighted mean of the task rates"""
        rates = [self.rate(task) for task in self.tasks()]
        return sum(rates) / len(rates) if rates else 0.0

    def summary_row(self) -> Dict[str, Optional[float]]:
        """Five task columns plus the average"""
        row: Dict[str, Optional[float]] = {task.value: self.rate(task) for task in BenchmarkTask}
        row['Average'] = self.average
        return row

    def to_dict(self) -> Dict[str, Any]:
        return {
            'tasks': {
                task.value: {
                    'attempted': self.attempted(task),
                    'passed': self.passed(task),
                    'rate': self.rate(task)
                }
                for task in self.tasks()
            },
            'average': self.average
        }
