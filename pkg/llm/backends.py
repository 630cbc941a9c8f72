"""
LLM Backends - Live HTTP, on-disk replay and scripted completion sources

A backend turns (messages, config, attempt, sample) into completion text.
"""

import os
import threading
from pathlib import Path
from typing import Callable, Iterable, List, Optional, Sequence, Union

import requests

import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from logger_setup import LoggerMixin
from models.llm import LlmConfig
from models.prompt import ChatMessage
from prompting.builder import flatten_messages
from repositories.completion_cache import CompletionCacheRepository, cache_key
from validation import ConfigurationError, MissingFixture, TransportError


class LiveBackend(LoggerMixin):
    """Chat-completions endpoint over HTTP"""

    name = 'live'

    def __init__(self, session: Optional[requests.Session] = None):
        self.session = session

    def _api_key(self, cfg: LlmConfig) -> str:
        key = os.getenv(cfg.api_key_env)
        if not key:
            raise ConfigurationError(f"API key variable {cfg.api_key_env} is not set")
        return key

    def complete(
        self,
        messages: Sequence[ChatMessage],
        cfg: LlmConfig,
        attempt: int = 1,
        sample: int = 0
    ) -> str:
        """
        Request one completion

        Raises:
            TransportError: On HTTP errors, timeouts or a malformed response
            ConfigurationError: If the API key variable is unset
        """
        payload = {
            'model': cfg.model,
            'messages': [m.to_dict() for m in messages],
            'temperature': cfg.temperature,
            'max_tokens': cfg.max_tokens,
        }
        headers = {'Authorization': f"Bearer {self._api_key(cfg)}"}
        post = self.session.post if self.session is not None else requests.post
        try:
            response = post(cfg.endpoint, json=payload, headers=headers, timeout=cfg.timeout)
            response.raise_for_status()
            data = response.json()
        except requests.RequestException as e:
            raise TransportError(f"request to {cfg.endpoint} failed: {e}") from e
        except ValueError as e:
            raise TransportError(f"response from {cfg.endpoint} is not JSON: {e}") from e

        try:
            content = data['choices'][0]['message']['content']
        except (KeyError, IndexError, TypeError) as e:
            raise TransportError(f"response from {cfg.endpoint} has no completion text") from e
        self.logger.debug(f"live completion: {len(content or '')} chars (attempt {attempt})")
        return content or ''


class ReplayBackend(LoggerMixin):
    """Completions recorded in a cache-layout directory"""

    name = 'replay'

    def __init__(self, replay_dir: Path):
        self.replay_dir = Path(replay_dir)
        self.store = CompletionCacheRepository(self.replay_dir)

    def complete(
        self,
        messages: Sequence[ChatMessage],
        cfg: LlmConfig,
        attempt: int = 1,
        sample: int = 0
    ) -> str:
        """
        Raises:
            MissingFixture: If no completion was recorded for the request
        """
        key = cache_key(cfg.model, flatten_messages(messages), attempt, sample)
        completion = self.store.find(cfg.model, key)
        if completion is None:
            raise MissingFixture(
                f"no recorded completion {key[:12]} for model {cfg.model} "
                f"(attempt {attempt}) in {self.replay_dir}"
            )
        return completion


Script = Union[Sequence[str], Callable[[Sequence[ChatMessage], int, int], str]]


class ScriptedBackend:
    """
    Canned completions, for tests and dry runs

    Either a list consumed in call order or a callable
    (messages, attempt, sample) -> text.
    """

    name = 'scripted'

    def __init__(self, script: Script):
        self._lock = threading.Lock()
        if callable(script):
            self._func = script
            self._queue: Optional[List[str]] = None
        else:
            self._func = None
            self._queue = list(script)
        self.calls = 0

    def complete(
        self,
        messages: Sequence[ChatMessage],
        cfg: LlmConfig,
        attempt: int = 1,
        sample: int = 0
    ) -> str:
        with self._lock:
            self.calls += 1
            if self._func is not None:
                return self._func(messages, attempt, sample)
            if not self._queue:
                raise MissingFixture("scripted backend has no completions left")
            return self._queue.pop(0)


def make_backend(kind: str, replay_dir: Optional[Path] = None, script: Iterable[str] = ()):
    """
    Backend by name: 'live', 'replay' or 'scripted'

    Raises:
        ConfigurationError: For unknown names or a replay backend without a directory
    """
    if kind == 'live':
        return LiveBackend()
    if kind == 'replay':
        if replay_dir is None:
            raise ConfigurationError("replay backend needs a replay directory")
        return ReplayBackend(replay_dir)
    if kind == 'scripted':
        return ScriptedBackend(list(script))
    raise ConfigurationError(f"unknown backend '{kind}' (expected live, replay or scripted)")
