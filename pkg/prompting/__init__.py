"""
Prompting - Layout-generation prompt assembly
"""

from .builder import (
    available_examples,
    build_bundle,
    build_merged_prompt,
    build_messages,
    flatten_messages,
    load_examples,
    number_words,
    prompt_hash,
    render_system_text,
)

__all__ = [
    'available_examples',
    'build_bundle',
    'build_merged_prompt',
    'build_messages',
    'flatten_messages',
    'load_examples',
    'number_words',
    'prompt_hash',
    'render_system_text',
]
