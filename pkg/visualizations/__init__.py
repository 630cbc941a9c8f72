"""
Visualizations Module - Layout drawings, attention rasters and charts
"""

from .chart_generator import ChartGenerator
from .pgm_renderer import attention_to_gray, render_attention_pgm, write_attention_pgm
from .svg_renderer import (
    SvgOptions,
    box_color,
    render_animated_svg,
    render_dsl_svg,
    render_frame_svg,
    write_dsl_svg,
)

__all__ = [
    'ChartGenerator',
    'attention_to_gray',
    'render_attention_pgm',
    'write_attention_pgm',
    'SvgOptions',
    'box_color',
    'render_animated_svg',
    'render_dsl_svg',
    'render_frame_svg',
    'write_dsl_svg',
]
