"""
Layout Text Parser - Reads and writes the "Frame k: [...]" completion format
"""

import ast
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from models.layout import (
    BoundingBox, Canvas, DynamicSceneLayout, Frame, DEFAULT_FPS, plain_number
)
from validation import (
    EmptyCompletion, InconsistentName, MalformedFrameLine, MissingFrames, ValidationError
)


FRAME_LINE = re.compile(r'^Frame\s+(\d+)\s*:\s*(.*)$')
REASONING_LINE = re.compile(r'^Reasoning\s*:\s*(.*)$')
BACKGROUND_LINE = re.compile(r'^Background\s+keyword\s*:\s*(.*)$', re.IGNORECASE)
RECORD_KEYS = frozenset({'id', 'name', 'box'})
FORBIDDEN_PREFIXES = ('-', '```')


@dataclass(frozen=True)
class ParsedCompletion:
    """A parsed layout plus the reasoning statement that preceded it"""

    layout: DynamicSceneLayout
    reasoning: Optional[str] = None


def round_half_up(value: float) -> int:
    """Round to the nearest integer, halves going up"""
    return int(math.floor(value + 0.5))


def _coordinate(value: Any, line_number: int) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MalformedFrameLine(f"box coordinate {value!r} is not a number", line_number)
    if isinstance(value, float) and not math.isfinite(value):
        raise MalformedFrameLine(f"box coordinate {value!r} is not finite", line_number)
    return value if isinstance(value, int) else round_half_up(value)


def _parse_record(record: Any, line_number: int) -> BoundingBox:
    if not isinstance(record, dict):
        raise MalformedFrameLine(f"expected a record, got {record!r}", line_number)

    keys = set(record)
    if keys != RECORD_KEYS:
        extra = sorted(str(k) for k in keys - RECORD_KEYS)
        missing = sorted(RECORD_KEYS - keys)
        raise MalformedFrameLine(
            f"record keys must be id/name/box (unknown: {extra}, missing: {missing})",
            line_number
        )

    object_id = record['id']
    if isinstance(object_id, bool) or not isinstance(object_id, int) or object_id < 0:
        raise MalformedFrameLine(f"id must be a nonnegative integer, got {object_id!r}", line_number)

    name = record['name']
    if not isinstance(name, str):
        raise MalformedFrameLine(f"name must be a string, got {name!r}", line_number)

    box = record['box']
    if not isinstance(box, (list, tuple)) or len(box) != 4:
        raise MalformedFrameLine(f"box must hold four numbers, got {box!r}", line_number)
    x, y, w, h = (_coordinate(v, line_number) for v in box)

    try:
        return BoundingBox(id=object_id, name=name, x=x, y=y, w=w, h=h)
    except ValidationError as e:
        raise MalformedFrameLine(str(e), line_number) from e


def _parse_frame_line(index: int, payload: str, line_number: int) -> Frame:
    payload = payload.strip()
    if not (payload.startswith('[') and payload.endswith(']')):
        raise MalformedFrameLine("frame payload must be a bracketed list", line_number)
    try:
        records = ast.literal_eval(payload)
    except (ValueError, SyntaxError, MemoryError, RecursionError) as e:
        raise MalformedFrameLine(f"frame payload is not a literal list: {e}", line_number) from e
    if not isinstance(records, list):
        raise MalformedFrameLine("frame payload must be a list", line_number)
    return Frame(index=index, boxes=tuple(_parse_record(r, line_number) for r in records))


def _check_names(frames: List[Frame]) -> None:
    names: Dict[int, str] = {}
    for frame in frames:
        for box in frame.boxes:
            first = names.setdefault(box.id, box.name)
            if first != box.name:
                raise InconsistentName(box.id, first, box.name)


def parse_dsl(
    text: Optional[str],
    canvas: Optional[Canvas] = None,
    fps: Fraction = DEFAULT_FPS
) -> ParsedCompletion:
    """
    Parse a raw LLM completion into a layout

    Accepted shape: optional prose, an optional "Reasoning:" statement (which
    may wrap over several lines), consecutive "Frame k: [...]" lines and an
    optional "Background keyword:" line. Anything after the background line
    is ignored. Markdown fences and lines starting with '-' are rejected once
    the reasoning or frames have started.

    Args:
        text: Raw completion
        canvas: Canvas the layout is drawn on (512 x 512 by default)
        fps: Frame rate of the keyframes

    Returns:
        ParsedCompletion with the layout and the reasoning text (or None)

    Raises:
        EmptyCompletion, MalformedFrameLine, MissingFrames,
        DuplicateIdInFrame, InconsistentName
    """
    if text is None or not text.strip():
        raise EmptyCompletion("completion is empty")

    state = 'preamble'
    reasoning_lines: List[str] = []
    frames: List[Frame] = []
    background = ""

    for line_number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()

        if state != 'preamble' and line.startswith(FORBIDDEN_PREFIXES):
            raise MalformedFrameLine(f"unexpected formatting: {line[:40]!r}", line_number)

        frame_match = FRAME_LINE.match(line)
        if frame_match:
            state = 'frames'
            index = int(frame_match.group(1))
            frames.append(_parse_frame_line(index, frame_match.group(2), line_number))
            continue

        background_match = BACKGROUND_LINE.match(line)
        if background_match and state != 'preamble':
            background = background_match.group(1).strip()
            break

        if state == 'preamble':
            reasoning_match = REASONING_LINE.match(line)
            if reasoning_match:
                state = 'reasoning'
                reasoning_lines.append(reasoning_match.group(1).strip())
            continue

        if state == 'reasoning':
            reasoning_lines.append(line)
            continue

        if line:
            raise MalformedFrameLine(f"unexpected line between frames: {line[:40]!r}", line_number)

    if not frames:
        raise MissingFrames("completion contains no frame lines")

    indices = [frame.index for frame in frames]
    if indices != list(range(1, len(frames) + 1)):
        raise MissingFrames(f"frame indices must run 1..{len(frames)}, got {indices}")

    _check_names(frames)

    reasoning = "\n".join(reasoning_lines).strip() or None
    layout = DynamicSceneLayout(
        frames=tuple(frames),
        background_keyword=background,
        canvas=canvas or Canvas(),
        fps=fps
    )
    return ParsedCompletion(layout=layout, reasoning=reasoning)


def _format_record(box: BoundingBox) -> str:
    coords = ", ".join(repr(plain_number(float(v))) for v in (box.x, box.y, box.w, box.h))
    return f"{{'id': {box.id}, 'name': {box.name!r}, 'box': [{coords}]}}"


def serialize_dsl(dsl: DynamicSceneLayout, reasoning: Optional[str] = None) -> str:
    """
    Write a layout in the completion format

    Integer-valued layouts re-parse to an equal layout; fractional
    coordinates are written as decimals and round on re-parse.

    Args:
        dsl: Layout to write
        reasoning: Optional reasoning statement to put first

    Returns:
        Frame lines followed by the background line
    """
    lines = []
    if reasoning:
        lines.append(f"Reasoning: {reasoning}")
    for frame in dsl.frames:
        records = ", ".join(_format_record(box) for box in frame.boxes)
        lines.append(f"Frame {frame.index}: [{records}]")
    lines.append(f"Background keyword: {dsl.background_keyword}")
    return "\n".join(lines)
