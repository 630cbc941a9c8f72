"""
Layout File IO - JSON and completion-text layout files
"""

import json
from pathlib import Path
from typing import Union

import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from dsl.parser import parse_dsl
from models.layout import DynamicSceneLayout
from validation import FileOperationError, ValidationError


def load_dsl_json(path: Union[str, Path]) -> DynamicSceneLayout:
    """Read a layout from the JSON exchange format"""
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise FileOperationError(f"Layout file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ValidationError(f"Layout file {path} is not valid JSON: {e}") from e
    return DynamicSceneLayout.from_dict(data)


def save_dsl_json(dsl: DynamicSceneLayout, path: Union[str, Path]) -> Path:
    """Write a layout in the JSON exchange format"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(dsl.to_dict(), f, indent=2)
        f.write('\n')
    return path


def load_dsl_file(path: Union[str, Path]) -> DynamicSceneLayout:
    """
    Read a layout from JSON or from a raw completion text file

    Files ending in .json use the exchange format; anything else is parsed
    as completion text.
    """
    path = Path(path)
    if path.suffix.lower() == '.json':
        return load_dsl_json(path)
    try:
        text = path.read_text(encoding='utf-8')
    except FileNotFoundError as e:
        raise FileOperationError(f"Layout file not found: {path}") from e
    return parse_dsl(text).layout
