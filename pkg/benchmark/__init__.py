"""
Benchmark - Five-task prompt suite, rule-based verifier and runner
"""

from .suite import generate_suite, render_prompt_text, stratified_subsample
from .verifier import BenchmarkRules, quadrant, verify
from .oracle import mutate_to_fail, synthesize_oracle_dsl
from .generators import LayoutGenerator, MutatingGenerator, OracleGenerator
from .runner import evaluate_prompt, run_benchmark
from .report import detail_table, summary_csv, summary_table

__all__ = [
    'generate_suite',
    'render_prompt_text',
    'stratified_subsample',
    'BenchmarkRules',
    'quadrant',
    'verify',
    'mutate_to_fail',
    'synthesize_oracle_dsl',
    'LayoutGenerator',
    'MutatingGenerator',
    'OracleGenerator',
    'evaluate_prompt',
    'run_benchmark',
    'detail_table',
    'summary_csv',
    'summary_table',
]
