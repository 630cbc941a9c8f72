"""
Tests for SVG layout drawings, PGM attention rasters, charts and exports
"""

import csv
import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from benchmark import OracleGenerator, generate_suite, run_benchmark
from dsl import load_dsl_json
from guidance import run_guidance
from models import GenerationAttempt, GenerationResult
from services import ExportService
from visualizations import (
    ChartGenerator,
    SvgOptions,
    attention_to_gray,
    box_color,
    render_animated_svg,
    render_attention_pgm,
    render_dsl_svg,
    render_frame_svg,
    write_attention_pgm,
    write_dsl_svg,
)
from validation import ShapeMismatch, ValidationError, ZeroMass


SVG_NS = '{http://www.w3.org/2000/svg}'


class TestSvg:
    """Tests for layout drawings"""

    def test_golden_first_frame(self, red_ball_dsl, golden_dir):
        """Test the first red-ball frame matches the checked-in drawing"""
        expected = (golden_dir / 'red_ball_frame1.svg').read_text(encoding='utf-8')
        assert render_frame_svg(red_ball_dsl, red_ball_dsl.frames[0]) == expected

    def test_palette(self):
        """Test colors come from a ten-entry palette keyed by id"""
        assert box_color(0) == '#1f77b4'
        assert box_color(1) == '#ff7f0e'
        assert box_color(10) == box_color(0)
        assert box_color(0, palette_seed=1) == box_color(1)

    def test_labels(self, woman_man_dsl):
        """Test label options"""
        frame = woman_man_dsl.frames[0]
        plain = render_frame_svg(woman_man_dsl, frame, SvgOptions(show_ids=False, show_names=False))
        assert '<text' not in plain
        ids_only = render_frame_svg(woman_man_dsl, frame, SvgOptions(show_names=False))
        assert '>1</text>' in ids_only
        names_only = render_frame_svg(woman_man_dsl, frame, SvgOptions(show_ids=False))
        assert '>jumping man</text>' in names_only

    def test_escaping(self, layout_factory):
        """Test names are escaped as XML text"""
        layout = layout_factory([[(0, 'salt & <pepper>', 10, 10, 50, 50)]])
        document = render_frame_svg(layout, layout.frames[0])
        assert 'salt &amp; &lt;pepper&gt;' in document
        ET.fromstring(document.split('\n', 1)[1])

    def test_animated(self, red_ball_dsl):
        """Test one hidden group per frame, each shown for its slot of a 3 s loop"""
        document = render_animated_svg(red_ball_dsl)
        root = ET.fromstring(document.split('\n', 1)[1])
        groups = root.findall(f'{SVG_NS}g')
        assert [g.get('id') for g in groups] == [f'frame-{k}' for k in range(1, 7)]
        animations = [g.find(f'{SVG_NS}animate') for g in groups]
        assert {a.get('dur') for a in animations} == {'3s'}
        assert animations[0].get('keyTimes') == '0;0.166667'
        assert animations[0].get('values') == 'visible;hidden'
        assert animations[1].get('keyTimes') == '0;0.166667;0.333333'
        assert animations[1].get('values') == 'hidden;visible;hidden'

    def test_write(self, painting_dsl, tmp_path):
        """Test frame files plus the animated file"""
        paths = write_dsl_svg(painting_dsl, tmp_path / 'svg')
        assert [p.name for p in paths] == [f'frame_{k}.svg' for k in range(1, 7)] + ['animated.svg']
        frames, animated = render_dsl_svg(painting_dsl)
        assert paths[0].read_text(encoding='utf-8') == frames[0]
        assert paths[-1].read_text(encoding='utf-8') == animated


class TestPgm:
    """Tests for attention rasters"""

    def test_golden(self, golden_dir):
        """Test a 2 x 2 map matches the checked-in bytes"""
        A = np.array([[0.0, 0.25], [0.75, 1.0]])
        assert render_attention_pgm(A) == (golden_dir / 'attention_2x2.pgm').read_bytes()

    def test_peak_is_white(self):
        """Test levels are relative to the map maximum"""
        gray = attention_to_gray(np.array([[0.1, 0.2]]))
        assert gray.tolist() == [[128, 255]]

    def test_scale(self, tmp_path):
        """Test upscaling repeats each cell"""
        data = render_attention_pgm(np.array([[1.0, 0.0]]), scale=3)
        assert data.startswith(b'P5\n6 3\n255\n')
        assert data[len(b'P5\n6 3\n255\n'):] == bytes([255, 255, 255, 0, 0, 0]) * 3
        path = write_attention_pgm(np.array([[1.0, 0.0]]), tmp_path / 'a' / 'map.pgm')
        assert path.read_bytes().startswith(b'P5\n2 1\n')

    def test_invalid_maps(self):
        """Test empty, negative and non-2-D maps"""
        with pytest.raises(ZeroMass):
            render_attention_pgm(np.zeros((2, 2)))
        with pytest.raises(ValidationError):
            render_attention_pgm(np.array([[-1.0, 1.0]]))
        with pytest.raises(ShapeMismatch):
            render_attention_pgm(np.ones(4))
        with pytest.raises(ValidationError):
            render_attention_pgm(np.ones((2, 2)), scale=0)


class TestCharts:
    """Tests for matplotlib charts"""

    def test_energy_trace(self, red_ball_dsl, tmp_path):
        """Test the energy chart has three lines and saves as PNG"""
        run = run_guidance(red_ball_dsl, H=8, W=8, seed=0)
        charts = ChartGenerator()
        fig = charts.create_energy_trace(run.trace)
        assert len(fig.axes[0].lines) == 3
        path = charts.save(fig, tmp_path / 'trace.png')
        assert path.read_bytes()[:8] == b'\x89PNG\r\n\x1a\n'

    def test_benchmark_bars(self):
        """Test one bar per column per method"""
        report = run_benchmark(generate_suite(seed=0, per_task=2), OracleGenerator())
        fig = ChartGenerator().create_benchmark_bars({'oracle': report})
        assert len(fig.axes[0].patches) == 6

    def test_ablation_curve(self):
        """Test an ablation curve is sorted by setting"""
        fig = ChartGenerator().create_ablation_curve({5: 0.9, 1: 0.5, 3: 0.8}, 'repeats', 'mass')
        xs = list(fig.axes[0].lines[0].get_xdata())
        assert xs == [1, 3, 5]


class TestExportService:
    """Tests for run output files"""

    def test_trace_csv(self, red_ball_dsl, tmp_path):
        """Test the trace CSV columns"""
        run = run_guidance(red_ball_dsl, H=8, W=8, seed=0)
        path = ExportService().export_trace_to_csv(run.trace, tmp_path / 'trace.csv')
        with open(path, newline='', encoding='utf-8') as f:
            rows = list(csv.DictReader(f))
        assert list(rows[0]) == ['step', 'repeat', 'e_topk', 'e_com', 'e_total']
        assert len(rows) == 50
        assert float(rows[0]['e_total']) == pytest.approx(run.trace[0].e_total)

    def test_metrics_json(self, red_ball_dsl, tmp_path):
        """Test metrics are written with extra settings"""
        run = run_guidance(red_ball_dsl, H=8, W=8, seed=0)
        path = ExportService().export_metrics(run.metrics, tmp_path / 'm.json', extra={'seed': 0})
        data = json.loads(path.read_text(encoding='utf-8'))
        assert data['seed'] == 0
        assert len(data['metrics']['entries']) == 6

    def test_generation_files(self, red_ball_dsl, tmp_path):
        """Test a generation writes layout, completion, reasoning and attempts"""
        attempt = GenerationAttempt('abc', 'Frame 1: []', 'ok', 1, 0.01)
        result = GenerationResult(layout=red_ball_dsl, reasoning='It falls.', attempts=[attempt])
        paths = ExportService().export_generation(result, tmp_path / 'out' / 'ball.json')
        assert [p.name for p in paths] == [
            'ball.json', 'ball.completion.txt', 'ball.reasoning.txt', 'ball.attempts.json'
        ]
        assert load_dsl_json(paths[0]) == red_ball_dsl
        assert paths[1].read_text(encoding='utf-8') == 'Frame 1: []'
        assert paths[2].read_text(encoding='utf-8') == 'It falls.\n'
