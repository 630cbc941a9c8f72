"""
Suite Repository - JSONL storage for benchmark prompts, verdicts and layouts
"""

import json
from pathlib import Path
from typing import Any, Dict, Iterable, List

import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from logger_setup import LoggerMixin, log_method_call
from models.benchmark import BenchmarkPrompt, Verdict
from validation import FileOperationError, ValidationError


class SuiteRepository(LoggerMixin):
    """Reads and writes one JSON object per line"""

    @staticmethod
    def _write_lines(path: Path, records: Iterable[Dict[str, Any]]) -> int:
        path = Path(path)
        count = 0
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'w', encoding='utf-8') as f:
                for record in records:
                    f.write(json.dumps(record, sort_keys=True) + '\n')
                    count += 1
        except OSError as e:
            raise FileOperationError(f"Cannot write {path}: {e}") from e
        return count

    @staticmethod
    def _read_lines(path: Path) -> List[Dict[str, Any]]:
        path = Path(path)
        records = []
        try:
            with open(path, 'r', encoding='utf-8') as f:
                for number, line in enumerate(f, start=1):
                    if not line.strip():
                        continue
                    try:
                        records.append(json.loads(line))
                    except json.JSONDecodeError as e:
                        raise ValidationError(f"{path}:{number}: invalid JSON: {e}") from e
        except OSError as e:
            raise FileOperationError(f"Cannot read {path}: {e}") from e
        return records

    @log_method_call
    def save_suite(self, prompts: Iterable[BenchmarkPrompt], path: Path) -> int:
        count = self._write_lines(path, (p.to_dict() for p in prompts))
        self.logger.info(f"Wrote {count} prompts to {path}")
        return count

    @log_method_call
    def load_suite(self, path: Path) -> List[BenchmarkPrompt]:
        return [BenchmarkPrompt.from_dict(r) for r in self._read_lines(path)]

    @log_method_call
    def save_verdicts(self, verdicts: Iterable[Verdict], path: Path) -> int:
        count = self._write_lines(path, (v.to_dict() for v in verdicts))
        self.logger.info(f"Wrote {count} verdicts to {path}")
        return count

    @log_method_call
    def load_verdicts(self, path: Path) -> List[Verdict]:
        return [Verdict.from_dict(r) for r in self._read_lines(path)]

    @log_method_call
    def save_generations(self, records: Iterable[Dict[str, Any]], path: Path) -> int:
        """Per-generation records: prompt id, generation index and layout JSON"""
        return self._write_lines(path, records)

    @log_method_call
    def load_generations(self, path: Path) -> List[Dict[str, Any]]:
        return self._read_lines(path)
