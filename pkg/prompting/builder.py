"""
Prompt Builder - Assembles layout-generation prompts from template files
"""

import hashlib
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from dsl.parser import parse_dsl
from models.layout import Canvas, DEFAULT_FPS
from models.prompt import ChatMessage, InContextExample, PromptBundle
from validation import EmptyCaption, FileOperationError, ValidationError


TEMPLATES_DIR = Path(__file__).parent / 'templates'
EXAMPLE_SOURCES = ('published', 'extra')
DEFAULT_FRAMES = 6
DEFAULT_EXAMPLE_COUNT = 3

_NUMBER_WORDS = (
    'zero', 'one', 'two', 'three', 'four', 'five', 'six', 'seven', 'eight', 'nine', 'ten',
    'eleven', 'twelve', 'thirteen', 'fourteen', 'fifteen', 'sixteen', 'seventeen',
    'eighteen', 'nineteen', 'twenty'
)


def number_words(value: Union[int, Fraction]) -> str:
    """Spell small whole numbers out; anything else stays numeric"""
    if isinstance(value, Fraction):
        if value.denominator != 1:
            return f"{value.numerator}/{value.denominator}"
        value = value.numerator
    if 0 <= value < len(_NUMBER_WORDS):
        return _NUMBER_WORDS[value]
    return str(value)


def _plural(count_text: str, count: Union[int, Fraction], noun: str) -> str:
    return f"{count_text} {noun}" if count == 1 else f"{count_text} {noun}s"


def _fill(template: str, values: Dict[str, str]) -> str:
    # The instructions contain literal record braces, so str.format is unusable.
    for key, value in values.items():
        template = template.replace('{' + key + '}', value)
    return template


def _read_template(name: str, templates_dir: Optional[Path] = None) -> str:
    path = (templates_dir or TEMPLATES_DIR) / name
    try:
        return path.read_text(encoding='utf-8').rstrip('\n')
    except FileNotFoundError as e:
        raise FileOperationError(f"Prompt template not found: {path}") from e


def render_system_text(
    canvas: Optional[Canvas] = None,
    frames: int = DEFAULT_FRAMES,
    fps: Fraction = DEFAULT_FPS,
    templates_dir: Optional[Path] = None
) -> str:
    """
    Render the instruction paragraphs

    Args:
        canvas: Canvas size stated to the model (512 x 512 by default)
        frames: Number of frames requested
        fps: Frames per second stated to the model

    Returns:
        System text
    """
    canvas = canvas or Canvas()
    fps = Fraction(fps)
    frames_text = _plural(number_words(frames), frames, 'frame')
    fps_text = _plural(number_words(fps), fps, 'frame') + ' per second'
    return _fill(_read_template('system.txt', templates_dir), {
        'width': str(canvas.width),
        'height': str(canvas.height),
        'frames': frames_text,
        'fps': fps_text,
    })


def load_example_file(path: Path, source: str) -> InContextExample:
    """
    Read one example file: a Caption line, a Reasoning line, then frames

    Raises:
        ValidationError: If the file does not have that shape or its frames do not parse
    """
    text = path.read_text(encoding='utf-8').strip()
    lines = text.splitlines()
    if len(lines) < 3 or not lines[0].startswith('Caption: ') or not lines[1].startswith('Reasoning: '):
        raise ValidationError(f"Example file {path} must start with Caption: and Reasoning: lines")
    dsl_text = "\n".join(lines[2:])
    parse_dsl(dsl_text)
    return InContextExample(
        caption=lines[0][len('Caption: '):],
        reasoning=lines[1][len('Reasoning: '):],
        dsl_text=dsl_text,
        name=path.stem.split('_', 1)[-1],
        source=source
    )


def available_examples(templates_dir: Optional[Path] = None) -> List[InContextExample]:
    """Every shipped example, published examples first, each group in file order"""
    root = (templates_dir or TEMPLATES_DIR) / 'examples'
    examples = []
    for source in EXAMPLE_SOURCES:
        for path in sorted((root / source).glob('*.txt')):
            examples.append(load_example_file(path, source))
    return examples


def load_examples(
    count: int = DEFAULT_EXAMPLE_COUNT,
    names: Optional[Sequence[str]] = None,
    templates_dir: Optional[Path] = None
) -> Tuple[InContextExample, ...]:
    """
    Choose the in-context examples for a prompt

    Counts follow the example-count ablation: 1 and 3 draw from the three
    published examples, 5 adds the two self-authored extras. Explicit names
    (e.g. ['red_ball']) override the count.

    Args:
        count: Number of examples
        names: Example names to use instead, in the given order
        templates_dir: Alternative template directory

    Returns:
        Tuple of examples
    """
    pool = available_examples(templates_dir)
    if names:
        by_name = {example.name: example for example in pool}
        missing = [name for name in names if name not in by_name]
        if missing:
            raise ValidationError(f"Unknown in-context examples: {missing}")
        return tuple(by_name[name] for name in names)
    if not 0 <= count <= len(pool):
        raise ValidationError(f"Example count must be between 0 and {len(pool)}, got {count}")
    return tuple(pool[:count])


def build_bundle(
    caption: str,
    examples: Optional[Sequence[InContextExample]] = None,
    count: int = DEFAULT_EXAMPLE_COUNT,
    canvas: Optional[Canvas] = None,
    frames: int = DEFAULT_FRAMES,
    fps: Fraction = DEFAULT_FPS
) -> PromptBundle:
    """Bundle instructions, examples and a query caption"""
    if caption is None or not caption.strip():
        raise EmptyCaption("query caption is empty")
    if examples is None:
        examples = load_examples(count)
    return PromptBundle(
        system_text=render_system_text(canvas, frames, fps),
        examples=tuple(examples),
        query_caption=caption.strip()
    )


def _query_line(bundle: PromptBundle) -> str:
    if bundle.query_caption is None or not bundle.query_caption.strip():
        raise EmptyCaption("query caption is empty")
    return _fill(_read_template('query.txt'), {'caption': bundle.query_caption})


def build_messages(bundle: PromptBundle) -> List[ChatMessage]:
    """
    Lay a bundle out as chat messages

    One system message, then a user/assistant pair per example (caption,
    then reasoning + frames + background), then the query caption as the
    final user message. No trailing "Reasoning:" is added.
    """
    messages = [ChatMessage('system', bundle.system_text)]
    for example in bundle.examples:
        messages.append(ChatMessage('user', f"Caption: {example.caption}"))
        messages.append(ChatMessage('assistant', example.completion_text()))
    messages.append(ChatMessage('user', _query_line(bundle)))
    return messages


def build_merged_prompt(bundle: PromptBundle) -> str:
    """Single-text prompt (web-interface style) ending with 'Reasoning:'"""
    blocks = [bundle.system_text]
    blocks.extend(example.render() for example in bundle.examples)
    blocks.append(f"{_query_line(bundle)}\nReasoning:")
    return "\n\n".join(blocks)


def flatten_messages(messages: Sequence[ChatMessage]) -> str:
    """
    Join chat messages back into one text

    User turns start a new block; assistant turns continue the block of the
    caption they answer. The result equals the merged prompt without its
    final 'Reasoning:' line.
    """
    parts = []
    for message in messages:
        if not parts:
            parts.append(message.content)
        elif message.role == 'assistant':
            parts.append("\n" + message.content)
        else:
            parts.append("\n\n" + message.content)
    return "".join(parts)


def prompt_hash(messages: Sequence[ChatMessage]) -> str:
    """SHA-256 hex digest of the flattened prompt"""
    return hashlib.sha256(flatten_messages(messages).encode('utf-8')).hexdigest()
