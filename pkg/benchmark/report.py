"""
Benchmark Report - Summary tables in the shape of a per-task accuracy row
"""

import csv
import io
from typing import List

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from models.benchmark import BenchmarkTask, VerdictReport
from utils.formatters import format_percent, format_table


SUMMARY_COLUMNS = [task.value for task in BenchmarkTask] + ['Average']


def summary_table(report: VerdictReport, label: str = 'DSL') -> str:
    """Aligned text table: one row of five task rates plus the average"""
    row = report.summary_row()
    header = ['Method'] + SUMMARY_COLUMNS
    cells = [label] + [format_percent(row[column]) for column in SUMMARY_COLUMNS]
    return format_table(header, [cells])


def detail_table(report: VerdictReport) -> str:
    """Aligned text table of passed/attempted counts per task"""
    rows: List[List[str]] = []
    for task in report.tasks():
        rows.append([
            task.value,
            str(report.passed(task)),
            str(report.attempted(task)),
            format_percent(report.rate(task)),
        ])
    rows.append(['Average', '', '', format_percent(report.average)])
    return format_table(['Task', 'Passed', 'Attempted', 'Rate'], rows)


def summary_csv(report: VerdictReport, label: str = 'DSL') -> str:
    """CSV with a header row and one row of rates (empty for absent tasks)"""
    row = report.summary_row()
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(['method'] + SUMMARY_COLUMNS)
    writer.writerow([label] + [
        '' if row[column] is None else f"{row[column]:.4f}" for column in SUMMARY_COLUMNS
    ])
    return buffer.getvalue()
