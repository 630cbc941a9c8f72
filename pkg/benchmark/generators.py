"""
Benchmark Generators - Layout sources for the benchmark runner

A generator is any callable (prompt, generation) -> DynamicSceneLayout.
"""

from typing import Callable

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from benchmark.oracle import mutate_to_fail, synthesize_oracle_dsl
from models.benchmark import BenchmarkPrompt
from models.layout import DynamicSceneLayout


LayoutGenerator = Callable[[BenchmarkPrompt, int], DynamicSceneLayout]


class OracleGenerator:
    """Layouts built to satisfy every rule"""

    def __call__(self, prompt: BenchmarkPrompt, generation: int = 0) -> DynamicSceneLayout:
        return synthesize_oracle_dsl(prompt)


class MutatingGenerator:
    """Oracle layouts with one targeted violation, seeded per prompt and generation"""

    def __init__(self, seed: int = 0):
        self.seed = seed

    def __call__(self, prompt: BenchmarkPrompt, generation: int = 0) -> DynamicSceneLayout:
        index = int(prompt.prompt_id.rsplit('-', 1)[-1]) if prompt.prompt_id[-1:].isdigit() else 0
        return mutate_to_fail(
            prompt, synthesize_oracle_dsl(prompt), seed=self.seed * 100_003 + index * 7 + generation
        )
