"""
Export Service - Guidance, benchmark and generation output files
"""

import csv
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from benchmark.report import summary_csv
from dsl.io import save_dsl_json
from logger_setup import LoggerMixin, log_method_call
from models import GenerationResult, GroundingMetrics, TraceRow, VerdictReport
from validation import FileOperationError


TRACE_COLUMNS = ['step', 'repeat', 'e_topk', 'e_com', 'e_total']


class ExportService(LoggerMixin):
    """Service for exporting run outputs"""

    @staticmethod
    def _prepare(filename) -> Path:
        filepath = Path(filename)
        try:
            filepath.parent.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise FileOperationError(f"Cannot create directory for {filepath}: {e}") from e
        return filepath

    @log_method_call
    def export_json(self, data: Any, filename) -> Path:
        """
        Export any JSON-serializable value

        Args:
            data: Value to write
            filename: Output filename
        """
        filepath = self._prepare(filename)
        with open(filepath, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2, sort_keys=True)
            f.write('\n')
        self.logger.info(f"Exported JSON to {filepath}")
        return filepath

    @log_method_call
    def export_metrics(
        self,
        metrics: GroundingMetrics,
        filename,
        extra: Optional[Dict[str, Any]] = None
    ) -> Path:
        """Export grounding metrics (plus run settings) to JSON"""
        data = {'metrics': metrics.to_dict()}
        if extra:
            data.update(extra)
        return self.export_json(data, filename)

    @log_method_call
    def export_trace_to_csv(self, trace: Sequence[TraceRow], filename) -> Path:
        """
        Export the energy trace to CSV

        Args:
            trace: One row per guidance update
            filename: Output filename
        """
        filepath = self._prepare(filename)
        with open(filepath, 'w', newline='', encoding='utf-8') as f:
            writer = csv.DictWriter(f, fieldnames=TRACE_COLUMNS)
            writer.writeheader()
            for row in trace:
                writer.writerow(row.to_dict())
        if not trace:
            self.logger.warning("Energy trace is empty")
        self.logger.info(f"Exported {len(trace)} trace rows to {filepath}")
        return filepath

    @log_method_call
    def export_summary_to_csv(self, report: VerdictReport, filename, label: str = 'DSL') -> Path:
        """Export the per-task summary row to CSV"""
        filepath = self._prepare(filename)
        filepath.write_text(summary_csv(report, label), encoding='utf-8')
        self.logger.info(f"Exported benchmark summary to {filepath}")
        return filepath

    @log_method_call
    def export_generation(self, result: GenerationResult, out_path) -> List[Path]:
        """
        Write a generated layout, its last raw completion and its reasoning

        Files: <out>.json (layout), <out>.completion.txt, <out>.reasoning.txt
        and <out>.attempts.json (attempt log).
        """
        out_path = self._prepare(out_path)
        stem = out_path.with_suffix('')
        layout_path = save_dsl_json(result.layout, out_path)

        completion_path = Path(f"{stem}.completion.txt")
        completion_path.write_text(result.attempts[-1].completion if result.attempts else '', encoding='utf-8')
        reasoning_path = Path(f"{stem}.reasoning.txt")
        reasoning_path.write_text((result.reasoning or '') + '\n', encoding='utf-8')
        attempts_path = self.export_json(result.to_dict(), f"{stem}.attempts.json")

        self.logger.info(f"Exported generated layout to {layout_path}")
        return [layout_path, completion_path, reasoning_path, attempts_path]
