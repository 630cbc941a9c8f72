"""
Layout Toolkit - Dynamic scene layout parsing, checking and resampling
"""

from .parser import ParsedCompletion, parse_dsl, serialize_dsl, round_half_up
from .geometry import validate_dsl, interpolate_frames, box_com, trajectory_of, trajectories
from .io import load_dsl_json, save_dsl_json, load_dsl_file

__all__ = [
    'ParsedCompletion',
    'parse_dsl',
    'serialize_dsl',
    'round_half_up',
    'validate_dsl',
    'interpolate_frames',
    'box_com',
    'trajectory_of',
    'trajectories',
    'load_dsl_json',
    'save_dsl_json',
    'load_dsl_file',
]
