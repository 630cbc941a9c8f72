"""
Benchmark Runner - Generate, verify and tally layouts for a prompt suite
"""

from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from benchmark.generators import LayoutGenerator
from benchmark.verifier import BenchmarkRules, verify
from logger_setup import get_logger, log_execution_time
from models.benchmark import BenchmarkPrompt, Verdict, VerdictReport
from validation import LvdException, UnknownTask, Validator


logger = get_logger(__name__)


def evaluate_prompt(
    prompt: BenchmarkPrompt,
    generator: LayoutGenerator,
    generations_per_prompt: int = 2,
    rules: Optional[BenchmarkRules] = None
) -> List[Verdict]:
    """
    Verdicts of every generation for one prompt

    A generation whose layout cannot be produced (all LLM attempts failed,
    missing replay fixture, unparseable text) becomes a failing verdict
    carrying the error kind. Unknown tasks are not recoverable and propagate.
    """
    verdicts = []
    for generation in range(generations_per_prompt):
        try:
            dsl = generator(prompt, generation)
        except UnknownTask:
            raise
        except LvdException as e:
            logger.info(f"{prompt.prompt_id} generation {generation}: {e.kind}: {e}")
            verdicts.append(Verdict(
                prompt_id=prompt.prompt_id,
                task=prompt.task,
                passed=False,
                reason=f"{e.kind}: {e}",
                generation=generation
            ))
            continue
        verdicts.append(verify(prompt, dsl, rules, generation=generation))
    return verdicts


def run_benchmark(
    suite: Sequence[BenchmarkPrompt],
    generator: LayoutGenerator,
    generations_per_prompt: int = 2,
    jobs: int = 1,
    rules: Optional[BenchmarkRules] = None
) -> VerdictReport:
    """
    Run a generator over a suite and collect the verdicts

    Args:
        suite: Prompts to evaluate
        generator: Callable (prompt, generation) -> layout
        generations_per_prompt: Independent generations per prompt
        jobs: Worker threads; verdicts keep suite order regardless
        rules: Verifier thresholds (defaults)

    Returns:
        VerdictReport with verdicts ordered by prompt, then generation
    """
    Validator.validate_integer(generations_per_prompt, "generations_per_prompt", min_value=1)
    Validator.validate_integer(jobs, "jobs", min_value=1)
    rules = rules or BenchmarkRules()

    def evaluate(prompt: BenchmarkPrompt) -> List[Verdict]:
        return evaluate_prompt(prompt, generator, generations_per_prompt, rules)

    with log_execution_time(
        f"benchmark over {len(suite)} prompts x {generations_per_prompt} generations", logger
    ):
        if jobs == 1:
            per_prompt = [evaluate(prompt) for prompt in suite]
        else:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                per_prompt = list(pool.map(evaluate, suite))

    report = VerdictReport.from_verdicts([v for verdicts in per_prompt for v in verdicts])
    logger.info(f"benchmark average {report.average:.3f}")
    return report
