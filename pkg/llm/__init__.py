"""
LLM - Chat-completions client, backends and benchmark generator
"""

from .backends import LiveBackend, ReplayBackend, ScriptedBackend, make_backend
from .client import LlmClient, LlmDslGenerator, generate_dsl

__all__ = [
    'LiveBackend',
    'ReplayBackend',
    'ScriptedBackend',
    'make_backend',
    'LlmClient',
    'LlmDslGenerator',
    'generate_dsl',
]
