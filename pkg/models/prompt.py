"""
Prompt Models - In-context examples, prompt bundles and chat messages
"""

from dataclasses import dataclass
from typing import Any, Dict, Tuple

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from validation import ValidationError, Validator


ROLES = ('system', 'user', 'assistant')


@dataclass(frozen=True)
class InContextExample:
    """A caption / reasoning / layout-text triple shown to the LLM"""

    caption: str
    reasoning: str
    dsl_text: str
    name: str = ""
    source: str = "published"

    def render(self) -> str:
        """Full example block as it appears in the merged prompt"""
        return f"Caption: {self.caption}\n{self.completion_text()}"

    def completion_text(self) -> str:
        """The assistant side of the example: reasoning, frames, background"""
        return f"Reasoning: {self.reasoning}\n{self.dsl_text}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'source': self.source,
            'caption': self.caption,
            'reasoning': self.reasoning,
            'dsl_text': self.dsl_text
        }


@dataclass(frozen=True)
class PromptBundle:
    """Everything needed to render one layout-generation prompt"""

    system_text: str
    examples: Tuple[InContextExample, ...]
    query_caption: str

    def __post_init__(self):
        object.__setattr__(self, 'examples', tuple(self.examples))


@dataclass(frozen=True)
class ChatMessage:
    """One chat-completions message"""

    role: str
    content: str

    def __post_init__(self):
        Validator.validate_choice(self.role, "Message role", list(ROLES))
        if not isinstance(self.content, str):
            raise ValidationError("Message content must be a string")

    def to_dict(self) -> Dict[str, str]:
        return {'role': self.role, 'content': self.content}
