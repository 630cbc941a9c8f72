"""
Completion Cache Repository - Write-once store of raw LLM completions

Layout: <cache_dir>/<model>/<key>.txt, one completion per file.
"""

import hashlib
import os
import re
import tempfile
from pathlib import Path
from typing import Optional

import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from logger_setup import LoggerMixin, get_logger, log_method_call
from validation import FileOperationError


logger = get_logger(__name__)


def cache_key(model: str, prompt: str, attempt: int, sample: int = 0) -> str:
    """
    Hex SHA-256 of model, prompt text and attempt index

    A nonzero sample index (independent generations of one prompt) is
    appended, so sample 0 keeps the plain three-part key.
    """
    material = f"{model}\n{prompt}\n{attempt}"
    if sample:
        material += f"\n{sample}"
    return hashlib.sha256(material.encode('utf-8')).hexdigest()


def _model_dir_name(model: str) -> str:
    return re.sub(r'[^A-Za-z0-9._-]', '_', model) or '_'


class CompletionCacheRepository(LoggerMixin):
    """Repository for cached completions keyed by (model, prompt, attempt, sample)"""

    def __init__(self, cache_dir: Path):
        """
        Initialize repository

        Args:
            cache_dir: Root directory of the cache
        """
        self.cache_dir = Path(cache_dir)

    def path_for(self, model: str, key: str) -> Path:
        return self.cache_dir / _model_dir_name(model) / f"{key}.txt"

    @log_method_call
    def find(self, model: str, key: str) -> Optional[str]:
        """
        Get a cached completion

        Returns:
            Completion text or None when absent
        """
        path = self.path_for(model, key)
        if not path.exists():
            return None
        try:
            return path.read_text(encoding='utf-8')
        except OSError as e:
            raise FileOperationError(f"Cannot read cached completion {path}: {e}") from e

    @log_method_call
    def save(self, model: str, key: str, completion: str) -> bool:
        """
        Store a completion unless the key already exists

        The text is written to a temporary file beside the entry and then
        hard-linked into place, so readers never see a partial completion
        and concurrent writers of one key leave the first write in place.

        Returns:
            True if this call wrote the file
        """
        path = self.path_for(model, key)
        temp_name = None
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, temp_name = tempfile.mkstemp(prefix=f".{key[:12]}-", suffix='.tmp', dir=path.parent)
            with os.fdopen(fd, 'w', encoding='utf-8') as f:
                f.write(completion)
                f.flush()
                os.fsync(f.fileno())
            os.link(temp_name, path)
        except FileExistsError:
            self.logger.debug(f"Cache entry {key[:12]} already present")
            return False
        except OSError as e:
            raise FileOperationError(f"Cannot write cached completion {path}: {e}") from e
        finally:
            if temp_name is not None:
                Path(temp_name).unlink(missing_ok=True)
        self.logger.debug(f"Cached completion {key[:12]} for {model}")
        return True


def purge_cache(cache_dir: Path) -> int:
    """
    Delete every cached completion under a cache directory

    Returns:
        Number of completion files removed
    """
    root = Path(cache_dir)
    if not root.exists():
        return 0
    count = 0
    for path in sorted(root.glob('*/*.txt')):
        path.unlink()
        count += 1
    for directory in sorted(p for p in root.iterdir() if p.is_dir()):
        if not any(directory.iterdir()):
            directory.rmdir()
    logger.info(f"Purged {count} cached completions from {root}")
    return count
