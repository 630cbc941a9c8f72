"""
LLM Client - Layout generation with retries and a completion cache
"""

import time
from pathlib import Path
from typing import List, Optional

import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from dsl.parser import parse_dsl
from logger_setup import LoggerMixin, log_method_call
from models.benchmark import BenchmarkPrompt
from models.layout import Canvas, DynamicSceneLayout
from models.llm import GenerationAttempt, GenerationResult, LlmConfig
from models.prompt import InContextExample, PromptBundle
from prompting.builder import build_bundle, build_messages, flatten_messages, prompt_hash
from repositories.completion_cache import CompletionCacheRepository, cache_key
from validation import AllAttemptsFailed, DslParseError


class LlmClient(LoggerMixin):
    """
    Sends prompt bundles to a backend and parses the completions

    Safe to share across threads: backends are stateless or locked and the
    cache writes each key at most once.
    """

    def __init__(
        self,
        backend,
        cfg: Optional[LlmConfig] = None,
        cache: Optional[CompletionCacheRepository] = None,
        canvas: Optional[Canvas] = None
    ):
        """
        Initialize client

        Args:
            backend: Object with complete(messages, cfg, attempt, sample)
            cfg: Endpoint settings
            cache: Completion cache; live completions are written to it and
                cached completions are reused instead of re-requesting
            canvas: Canvas parsed layouts are placed on
        """
        self.backend = backend
        self.cfg = cfg or LlmConfig()
        self.cache = cache
        self.canvas = canvas or Canvas()

    def _uses_cache(self) -> bool:
        return self.cache is not None and getattr(self.backend, 'name', '') == 'live'

    def _complete(self, messages, prompt_text: str, attempt: int, sample: int):
        """Completion text and whether it came from the cache"""
        key = cache_key(self.cfg.model, prompt_text, attempt, sample)
        if self._uses_cache():
            cached = self.cache.find(self.cfg.model, key)
            if cached is not None:
                return cached, True
        completion = self.backend.complete(messages, self.cfg, attempt=attempt, sample=sample)
        if self._uses_cache():
            self.cache.save(self.cfg.model, key, completion)
        return completion, False

    @log_method_call
    def generate_dsl(self, bundle: PromptBundle, sample: int = 0) -> GenerationResult:
        """
        Generate a layout for a prompt bundle

        The identical prompt is re-sent until a completion parses, up to
        max_attempts times.

        Args:
            bundle: Instructions, examples and query caption
            sample: Index of an independent generation for the same prompt

        Returns:
            GenerationResult with the layout, reasoning and attempt log

        Raises:
            AllAttemptsFailed: If no completion parsed
            TransportError: On endpoint failures (live backend)
            MissingFixture: If a replayed completion is absent
        """
        messages = build_messages(bundle)
        prompt_text = flatten_messages(messages)
        digest = prompt_hash(messages)

        attempts: List[GenerationAttempt] = []
        completions: List[str] = []
        errors: List[str] = []
        for attempt in range(1, self.cfg.max_attempts + 1):
            started = time.perf_counter()
            completion, cached = self._complete(messages, prompt_text, attempt, sample)
            completions.append(completion)
            try:
                parsed = parse_dsl(completion, canvas=self.canvas)
            except DslParseError as e:
                errors.append(f"{e.kind}: {e}")
                attempts.append(GenerationAttempt(
                    prompt_hash=digest,
                    completion=completion,
                    outcome=e.kind,
                    attempt=attempt,
                    wall_time=time.perf_counter() - started,
                    error_message=str(e),
                    cached=cached
                ))
                self.logger.info(f"attempt {attempt} did not parse: {e.kind}: {e}")
                continue

            attempts.append(GenerationAttempt(
                prompt_hash=digest,
                completion=completion,
                outcome='ok',
                attempt=attempt,
                wall_time=time.perf_counter() - started,
                cached=cached
            ))
            self.logger.debug(f"parsed {parsed.layout.frame_count} frames on attempt {attempt}")
            return GenerationResult(layout=parsed.layout, reasoning=parsed.reasoning, attempts=attempts)

        raise AllAttemptsFailed(completions, errors)


class LlmDslGenerator:
    """Benchmark generator backed by an LlmClient"""

    def __init__(
        self,
        client: LlmClient,
        examples: Optional[List[InContextExample]] = None,
        example_count: int = 3
    ):
        self.client = client
        self.examples = examples
        self.example_count = example_count

    def __call__(self, prompt: BenchmarkPrompt, generation: int = 0) -> DynamicSceneLayout:
        bundle = build_bundle(
            prompt.text, examples=self.examples, count=self.example_count, canvas=self.client.canvas
        )
        return self.client.generate_dsl(bundle, sample=generation).layout


def generate_dsl(
    bundle: PromptBundle,
    cfg: Optional[LlmConfig] = None,
    backend=None,
    cache: Optional[CompletionCacheRepository] = None
) -> GenerationResult:
    """Functional form of LlmClient.generate_dsl"""
    return LlmClient(backend, cfg, cache).generate_dsl(bundle)
