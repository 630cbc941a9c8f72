"""
Data Visualizations - Charts
Energy traces, ablation curves and per-task benchmark bars
"""

import matplotlib
matplotlib.use('Agg')

import matplotlib.pyplot as plt
from matplotlib.figure import Figure
import numpy as np
from typing import Dict, List, Sequence, Tuple
from pathlib import Path
import sys

sys.path.insert(0, str(Path(__file__).parent.parent))
from logger_setup import LoggerMixin, log_method_call
from models.benchmark import BenchmarkTask, VerdictReport
from models.guidance import TraceRow
from validation import FileOperationError, handle_errors


class ChartGenerator(LoggerMixin):
    """Generates charts for guidance runs and benchmark reports"""

    def __init__(self, style: str = 'seaborn-v0_8-darkgrid'):
        """
        Initialize chart generator

        Args:
            style: Matplotlib style to use
        """
        self.style = style if style in plt.style.available else 'default'

    def _figure(self, figsize: Tuple[int, int]) -> Figure:
        fig = Figure(figsize=figsize)
        fig.set_facecolor(plt.style.library.get(self.style, {}).get('figure.facecolor', 'white'))
        return fig

    @log_method_call
    def create_energy_trace(self, trace: Sequence[TraceRow], figsize: Tuple[int, int] = (8, 5)) -> Figure:
        """
        Line chart of the energy terms over the guidance updates

        Args:
            trace: One row per update
            figsize: Figure size (width, height)

        Returns:
            matplotlib Figure
        """
        fig = self._figure(figsize)
        ax = fig.add_subplot(111)
        updates = np.arange(len(trace))
        ax.plot(updates, [r.e_total for r in trace], label='total', color='#1f77b4', linewidth=2)
        ax.plot(updates, [r.e_topk for r in trace], label='top-k', color='#ff7f0e', linestyle='--')
        ax.plot(updates, [r.e_com for r in trace], label='CoM', color='#2ca02c', linestyle=':')
        ax.set_xlabel('Guidance update')
        ax.set_ylabel('Energy')
        ax.set_title('Layout energy during guidance')
        ax.legend(loc='upper right')
        fig.tight_layout()
        return fig

    @log_method_call
    def create_ablation_curve(
        self,
        values: Dict[float, float],
        xlabel: str,
        ylabel: str,
        figsize: Tuple[int, int] = (6, 4)
    ) -> Figure:
        """Metric per setting of one ablated parameter"""
        fig = self._figure(figsize)
        ax = fig.add_subplot(111)
        xs = sorted(values)
        ax.plot(xs, [values[x] for x in xs], marker='o', color='#1f77b4')
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        fig.tight_layout()
        return fig

    @log_method_call
    def create_benchmark_bars(
        self,
        reports: Dict[str, VerdictReport],
        figsize: Tuple[int, int] = (10, 5)
    ) -> Figure:
        """
        Grouped bars of per-task accuracy, one group per task plus the average

        Args:
            reports: Method label -> report
        """
        columns: List[str] = [task.value for task in BenchmarkTask] + ['Average']
        fig = self._figure(figsize)
        ax = fig.add_subplot(111)
        positions = np.arange(len(columns))
        width = 0.8 / max(len(reports), 1)
        for i, (label, report) in enumerate(reports.items()):
            row = report.summary_row()
            heights = [100.0 * (row[c] or 0.0) for c in columns]
            ax.bar(positions + i * width, heights, width, label=label)
        ax.set_xticks(positions + width * (len(reports) - 1) / 2)
        ax.set_xticklabels(columns, rotation=20, ha='right')
        ax.set_ylim(0, 100)
        ax.set_ylabel('Accuracy (%)')
        ax.legend()
        fig.tight_layout()
        return fig

    @handle_errors()
    def save(self, fig: Figure, path: Path, dpi: int = 100) -> Path:
        """Write a figure to disk (format from the suffix)"""
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(path, dpi=dpi)
        except OSError as e:
            raise FileOperationError(f"Cannot write chart {path}: {e}") from e
        self.logger.info(f"Saved chart to {path}")
        return path
