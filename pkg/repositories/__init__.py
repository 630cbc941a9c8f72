"""
Repositories - File-backed stores for completions, suites and verdicts
"""

from .completion_cache import CompletionCacheRepository, cache_key, purge_cache
from .suite_repository import SuiteRepository

__all__ = [
    'CompletionCacheRepository',
    'cache_key',
    'purge_cache',
    'SuiteRepository',
]
