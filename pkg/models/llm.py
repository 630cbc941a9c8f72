"""
LLM Models - Endpoint configuration and generation attempt records
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from validation import ValidationError, Validator


@dataclass
class LlmConfig:
    """Chat-completions endpoint settings"""

    endpoint: str = 'https://api.openai.com/v1/chat/completions'
    model: str = 'gpt-4'
    temperature: float = 0.7
    max_tokens: int = 1024
    api_key_env: str = 'OPENAI_API_KEY'
    timeout: float = 60.0
    max_attempts: int = 3

    def validate(self) -> None:
        """Validate endpoint settings"""
        Validator.validate_string(self.model, "model")
        Validator.validate_float(self.temperature, "temperature", min_value=0.0)
        Validator.validate_float(self.timeout, "timeout", min_value=0.0, exclusive_min=True)
        Validator.validate_integer(self.max_tokens, "max_tokens", min_value=1)
        Validator.validate_integer(self.max_attempts, "max_attempts", min_value=1, max_value=3)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'endpoint': self.endpoint,
            'model': self.model,
            'temperature': self.temperature,
            'max_tokens': self.max_tokens,
            'api_key_env': self.api_key_env,
            'timeout': self.timeout,
            'max_attempts': self.max_attempts
        }


@dataclass(frozen=True)
class GenerationAttempt:
    """One request/response round with its parse outcome"""

    prompt_hash: str
    completion: str
    outcome: str
    attempt: int
    wall_time: float = field(compare=False)
    error_message: Optional[str] = None
    cached: bool = False

    def __post_init__(self):
        if self.attempt not in (1, 2, 3):
            raise ValidationError(f"attempt index must be 1, 2 or 3, got {self.attempt}")

    @property
    def ok(self) -> bool:
        return self.outcome == 'ok'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'prompt_hash': self.prompt_hash,
            'completion': self.completion,
            'outcome': self.outcome,
            'attempt': self.attempt,
            'wall_time': self.wall_time,
            'error_message': self.error_message,
            'cached': self.cached
        }


@dataclass
class GenerationResult:
    """Parsed layout, reasoning and the attempt log of one generate_dsl call"""

    layout: Any
    reasoning: Optional[str]
    attempts: list = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'reasoning': self.reasoning,
            'attempts': [a.to_dict() for a in self.attempts]
        }
