"""
SVG Renderer - Layout frames as SVG 1.1 documents
"""

from dataclasses import dataclass
from typing import List
from xml.sax.saxutils import escape

from matplotlib import colormaps
from matplotlib.colors import to_hex

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from models.layout import BoundingBox, DynamicSceneLayout, Frame, plain_number


SVG_HEADER = '<?xml version="1.0" encoding="UTF-8"?>'
PALETTE_SIZE = 10


@dataclass(frozen=True)
class SvgOptions:
    """Labeling and color choices"""

    show_ids: bool = True
    show_names: bool = True
    palette_seed: int = 0


def _num(value: float) -> str:
    return str(plain_number(float(value)))


def box_color(object_id: int, palette_seed: int = 0) -> str:
    """Stable hex color per object id (tab10 palette)"""
    return to_hex(colormaps['tab10']((object_id + palette_seed) % PALETTE_SIZE))


def _label(box: BoundingBox, options: SvgOptions) -> str:
    if options.show_ids and options.show_names:
        return f"{box.id}: {box.name}"
    if options.show_ids:
        return str(box.id)
    if options.show_names:
        return box.name
    return ''


def _frame_body(frame: Frame, options: SvgOptions, indent: str) -> List[str]:
    lines = []
    for box in frame.boxes:
        color = box_color(box.id, options.palette_seed)
        lines.append(
            f'{indent}<rect x="{_num(box.x)}" y="{_num(box.y)}" width="{_num(box.w)}" '
            f'height="{_num(box.h)}" fill="{color}" fill-opacity="0.35" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        label = _label(box, options)
        if label:
            lines.append(
                f'{indent}<text x="{_num(box.x + 3)}" y="{_num(box.y + 14)}" '
                f'font-family="sans-serif" font-size="12" fill="{color}">{escape(label)}</text>'
            )
    return lines


def _open_svg(dsl: DynamicSceneLayout) -> List[str]:
    width, height = dsl.canvas.width, dsl.canvas.height
    return [
        SVG_HEADER,
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'  <rect x="0" y="0" width="{width}" height="{height}" fill="white" stroke="black"/>',
    ]


def render_frame_svg(dsl: DynamicSceneLayout, frame: Frame, options: SvgOptions = SvgOptions()) -> str:
    """One frame as a standalone SVG document"""
    lines = _open_svg(dsl)
    lines.append(f'  <g id="frame-{frame.index}">')
    lines.extend(_frame_body(frame, options, '    '))
    lines.append('  </g>')
    lines.append('</svg>')
    return '\n'.join(lines) + '\n'


def _key_time(value: float) -> str:
    return f"{value:.6g}"


def render_animated_svg(dsl: DynamicSceneLayout, options: SvgOptions = SvgOptions()) -> str:
    """
    All frames in one SVG, shown in turn at the layout's frame rate

    Each frame group switches its visibility with a discrete animation over
    one loop of N / fps seconds.
    """
    n = dsl.frame_count
    lines = _open_svg(dsl)
    if n:
        duration = _key_time(n / float(dsl.fps))
        for i, frame in enumerate(dsl.frames):
            if i == 0:
                key_times, values = f"0;{_key_time(1 / n)}", "visible;hidden"
            else:
                key_times = f"0;{_key_time(i / n)};{_key_time((i + 1) / n)}"
                values = "hidden;visible;hidden"
            lines.append(f'  <g id="frame-{frame.index}" visibility="hidden">')
            lines.append(
                f'    <animate attributeName="visibility" values="{values}" keyTimes="{key_times}" '
                f'dur="{duration}s" calcMode="discrete" repeatCount="indefinite"/>'
            )
            lines.extend(_frame_body(frame, options, '    '))
            lines.append('  </g>')
    lines.append('</svg>')
    return '\n'.join(lines) + '\n'


def render_dsl_svg(dsl: DynamicSceneLayout, options: SvgOptions = SvgOptions()):
    """
    Per-frame SVG documents and one animated SVG

    Returns:
        (list of frame documents, animated document)
    """
    frames = [render_frame_svg(dsl, frame, options) for frame in dsl.frames]
    return frames, render_animated_svg(dsl, options)


def write_dsl_svg(dsl: DynamicSceneLayout, out_dir: Path, options: SvgOptions = SvgOptions()) -> List[Path]:
    """Write frame_<k>.svg files and animated.svg; returns the written paths"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    frames, animated = render_dsl_svg(dsl, options)
    paths = []
    for frame, document in zip(dsl.frames, frames):
        path = out_dir / f"frame_{frame.index}.svg"
        path.write_text(document, encoding='utf-8')
        paths.append(path)
    path = out_dir / 'animated.svg'
    path.write_text(animated, encoding='utf-8')
    paths.append(path)
    return paths
