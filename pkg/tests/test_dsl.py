"""
Tests for layout parsing, validation, interpolation and geometry
"""

import json
from fractions import Fraction

import numpy as np
import pytest

from dsl import (
    box_com,
    interpolate_frames,
    load_dsl_file,
    load_dsl_json,
    parse_dsl,
    save_dsl_json,
    serialize_dsl,
    trajectory_of,
    validate_dsl,
)
from models import BoundingBox, Canvas, DynamicSceneLayout, Frame
from validation import (
    DuplicateIdInFrame,
    EmptyCompletion,
    InconsistentName,
    MalformedFrameLine,
    MissingFrames,
    TargetTooSmall,
    UnknownId,
)


RED_BALL_TEXT = """Frame 1: [{'id': 0, 'name': 'red ball', 'box': [0, 206, 50, 50]}]
Frame 2: [{'id': 0, 'name': 'red ball', 'box': [80, 246, 50, 50]}]
Frame 3: [{'id': 0, 'name': 'red ball', 'box': [160, 326, 50, 50]}]
Frame 4: [{'id': 0, 'name': 'red ball', 'box': [240, 446, 50, 50]}]
Frame 5: [{'id': 0, 'name': 'red ball', 'box': [320, 366, 50, 50]}]
Frame 6: [{'id': 0, 'name': 'red ball', 'box': [400, 446, 50, 50]}]
Background keyword: garden"""


class TestParseDsl:
    """Tests for parse_dsl"""

    def test_red_ball(self):
        """Test the red-ball completion parses to six one-box frames"""
        parsed = parse_dsl(RED_BALL_TEXT)
        layout = parsed.layout
        assert layout.frame_count == 6
        assert all(len(frame.boxes) == 1 for frame in layout.frames)
        assert layout.background_keyword == 'garden'
        assert layout.frames[3].boxes[0].coords() == [240, 446, 50, 50]
        assert parsed.reasoning is None

    def test_empty_frames(self):
        """Test six empty frames are a valid layout"""
        text = "\n".join(f"Frame {i}: []" for i in range(1, 7)) + "\nBackground keyword: beach"
        layout = parse_dsl(text).layout
        assert layout.frame_count == 6
        assert layout.box_count() == 0

    def test_two_objects(self, woman_man_dsl):
        """Test the walking-woman example keeps ids 0 and 1 in every frame"""
        assert woman_man_dsl.frame_count == 6
        assert all(frame.ids == [0, 1] for frame in woman_man_dsl.frames)
        assert woman_man_dsl.name_of(0) == 'walking woman'

    def test_reasoning_and_prose(self):
        """Test prose before the reasoning is ignored and the reasoning is kept"""
        text = "Sure, here you go.\nReasoning: It falls.\n" + RED_BALL_TEXT
        parsed = parse_dsl(text)
        assert parsed.reasoning == 'It falls.'
        assert parsed.layout.frame_count == 6

    def test_decimals_round_half_up(self):
        """Test decimal coordinates round half up"""
        text = "Frame 1: [{'id': 0, 'name': 'cat', 'box': [10.5, 20.4, 30.5, 40.6]}]"
        box = parse_dsl(text).layout.frames[0].boxes[0]
        assert box.coords() == [11, 20, 31, 41]

    def test_missing_background_is_empty(self):
        """Test the background line is optional"""
        text = "Frame 1: [{'id': 0, 'name': 'cat', 'box': [0, 0, 10, 10]}]"
        assert parse_dsl(text).layout.background_keyword == ''

    @pytest.mark.parametrize('text', ['', '   \n  ', None])
    def test_empty_completion(self, text):
        """Test empty completions raise EmptyCompletion"""
        with pytest.raises(EmptyCompletion):
            parse_dsl(text)

    def test_no_frames(self):
        """Test a completion without frame lines raises MissingFrames"""
        with pytest.raises(MissingFrames):
            parse_dsl("I cannot help with that.")

    def test_gap_in_indices(self):
        """Test frame indices must run from 1 without gaps"""
        text = "Frame 1: []\nFrame 3: []"
        with pytest.raises(MissingFrames):
            parse_dsl(text)

    def test_unknown_key(self):
        """Test unknown record keys are rejected"""
        text = "Frame 1: [{'id': 0, 'name': 'cat', 'box': [0, 0, 10, 10], 'color': 'red'}]"
        with pytest.raises(MalformedFrameLine):
            parse_dsl(text)

    def test_markdown_bullet(self):
        """Test frame lines starting with '-' are rejected"""
        text = "Reasoning: ok\n- Frame 1: []"
        with pytest.raises(MalformedFrameLine):
            parse_dsl(text)

    def test_code_fence(self):
        """Test markdown fences after the reasoning are rejected"""
        text = "Reasoning: ok\n```\nFrame 1: []\n```"
        with pytest.raises(MalformedFrameLine):
            parse_dsl(text)

    def test_not_a_literal(self):
        """Test a frame payload that is not a literal list"""
        with pytest.raises(MalformedFrameLine):
            parse_dsl("Frame 1: [{'id': 0, 'name': cat}]")

    def test_duplicate_id(self):
        """Test duplicate ids within one frame"""
        text = ("Frame 1: [{'id': 0, 'name': 'cat', 'box': [0, 0, 10, 10]}, "
                "{'id': 0, 'name': 'cat', 'box': [20, 0, 10, 10]}]")
        with pytest.raises(DuplicateIdInFrame):
            parse_dsl(text)

    def test_inconsistent_name(self):
        """Test one id with two names"""
        text = ("Frame 1: [{'id': 0, 'name': 'cat', 'box': [0, 0, 10, 10]}]\n"
                "Frame 2: [{'id': 0, 'name': 'dog', 'box': [0, 0, 10, 10]}]")
        with pytest.raises(InconsistentName):
            parse_dsl(text)

    def test_nonpositive_size(self):
        """Test zero-width boxes are malformed"""
        with pytest.raises(MalformedFrameLine):
            parse_dsl("Frame 1: [{'id': 0, 'name': 'cat', 'box': [0, 0, 0, 10]}]")

    def test_bool_id(self):
        """Test a boolean id is not an integer id"""
        with pytest.raises(MalformedFrameLine):
            parse_dsl("Frame 1: [{'id': True, 'name': 'cat', 'box': [0, 0, 10, 10]}]")


class TestSerializeDsl:
    """Tests for serialize_dsl"""

    def test_fixture_text_is_reproduced(self):
        """Test serializing the parsed fixture gives the fixture text back"""
        assert serialize_dsl(parse_dsl(RED_BALL_TEXT).layout) == RED_BALL_TEXT

    def test_empty_layout(self):
        """Test an empty six-frame layout"""
        layout = DynamicSceneLayout(frames=tuple(Frame(i) for i in range(1, 7)), background_keyword='sky')
        lines = serialize_dsl(layout).splitlines()
        assert lines[:6] == [f"Frame {i}: []" for i in range(1, 7)]
        assert lines[6] == 'Background keyword: sky'

    def test_reasoning_first(self):
        """Test the reasoning line comes before the frames"""
        text = serialize_dsl(parse_dsl(RED_BALL_TEXT).layout, reasoning='It bounces.')
        assert text.startswith('Reasoning: It bounces.\nFrame 1:')

    def test_random_layouts_round_trip(self):
        """Test parse(serialize(d)) == d on random integer layouts with random names"""
        rng = np.random.default_rng(0)
        alphabet = list("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789'-")

        def random_name():
            words = [
                ''.join(rng.choice(alphabet, size=int(rng.integers(1, 9))))
                for _ in range(int(rng.integers(1, 4)))
            ]
            return ' '.join(words)

        multi_word = with_digits = 0
        for _ in range(1000):
            n_frames = int(rng.integers(1, 8))
            n_objects = int(rng.integers(0, 4))
            names = [random_name() for _ in range(n_objects)]
            multi_word += sum(' ' in name for name in names)
            with_digits += sum(any(c.isdigit() for c in name) for name in names)
            frames = []
            for index in range(1, n_frames + 1):
                boxes = [
                    BoundingBox(
                        object_id, names[object_id],
                        int(rng.integers(-20, 500)), int(rng.integers(-20, 500)),
                        int(rng.integers(1, 200)), int(rng.integers(1, 200))
                    )
                    for object_id in range(n_objects) if rng.random() < 0.7
                ]
                frames.append(Frame(index, tuple(boxes)))
            layout = DynamicSceneLayout(frames=tuple(frames), background_keyword='park')
            assert parse_dsl(serialize_dsl(layout)).layout == layout

        assert multi_word > 100
        assert with_digits > 100


class TestValidateDsl:
    """Tests for validate_dsl"""

    def test_published_fixtures_in_bounds(self, red_ball_dsl, painting_dsl, woman_man_dsl):
        """Test the published examples have no out-of-bounds boxes"""
        for layout in (red_ball_dsl, painting_dsl, woman_man_dsl):
            assert not [v for v in validate_dsl(layout) if v.kind == 'OutOfBounds']

    def test_out_of_bounds(self, layout_factory):
        """Test a box past the canvas edge"""
        layout = layout_factory([[(0, 'cat', 500, 500, 50, 50)]])
        violations = validate_dsl(layout)
        assert [v.to_dict() for v in violations] == [{'kind': 'OutOfBounds', 'frame': 1, 'id': 0}]

    def test_identical_boxes_overlap(self, layout_factory):
        """Test two identical boxes overlap with IoU 1"""
        layout = layout_factory([[(0, 'cat', 10, 10, 50, 50), (1, 'dog', 10, 10, 50, 50)]])
        overlaps = [v for v in validate_dsl(layout) if v.kind == 'Overlap']
        assert len(overlaps) == 1
        assert overlaps[0].iou == pytest.approx(1.0)

    def test_non_consecutive_and_names(self):
        """Test JSON-built layouts can carry gaps and renamed ids"""
        layout = DynamicSceneLayout(frames=(
            Frame(1, (BoundingBox(0, 'cat', 0, 0, 10, 10),)),
            Frame(3, (BoundingBox(0, 'kitten', 0, 0, 10, 10),)),
        ))
        kinds = {v.kind for v in validate_dsl(layout)}
        assert kinds == {'NonConsecutiveFrames', 'InconsistentName'}

    def test_smaller_canvas(self, red_ball_dsl):
        """Test bounds are checked against an explicit canvas"""
        violations = validate_dsl(red_ball_dsl, Canvas(256, 256))
        assert {v.frame for v in violations} == {2, 3, 4, 5, 6}


class TestInterpolateFrames:
    """Tests for interpolate_frames"""

    def test_identity(self, red_ball_dsl):
        """Test the same frame count is the identity"""
        assert interpolate_frames(red_ball_dsl, 6) == red_ball_dsl

    def test_midpoint(self, red_ball_dsl):
        """Test output frame 2 of 11 sits halfway between keyframes 1 and 2"""
        out = interpolate_frames(red_ball_dsl, 11)
        assert out.frame_count == 11
        assert out.frames[1].boxes[0].x == pytest.approx(40)
        assert out.frames[1].boxes[0].y == pytest.approx(226)
        assert out.fps == Fraction(4)

    def test_endpoints_kept(self, red_ball_dsl):
        """Test first and last frames equal the keyframes"""
        out = interpolate_frames(red_ball_dsl, 16)
        assert out.frames[0].boxes[0] == red_ball_dsl.frames[0].boxes[0]
        assert out.frames[-1].boxes[0] == red_ball_dsl.frames[-1].boxes[0]
        assert out.fps == Fraction(2) * Fraction(15, 5)

    def test_late_appearance(self, layout_factory):
        """Test an object from keyframe 4 on appears from output frame 9 of 16"""
        per_frame = [[] for _ in range(3)] + [[(0, 'bird', 100, 100, 20, 20)] for _ in range(3)]
        out = interpolate_frames(layout_factory(per_frame), 16)
        present = [j for j, frame in enumerate(out.frames, start=1) if frame.boxes]
        assert present == list(range(9, 17))

    def test_monotone_between_keyframes(self, red_ball_dsl):
        """Test interpolated x stays between the bracketing keyframe values"""
        out = interpolate_frames(red_ball_dsl, 16)
        xs = [frame.boxes[0].x for frame in out.frames]
        assert xs == sorted(xs)

    def test_target_too_small(self, red_ball_dsl):
        """Test shrinking is rejected"""
        with pytest.raises(TargetTooSmall):
            interpolate_frames(red_ball_dsl, 5)


class TestGeometry:
    """Tests for centers and trajectories"""

    def test_box_com(self):
        """Test the box center formula"""
        assert box_com(BoundingBox(0, 'ball', 0, 206, 50, 50)) == (25, 231)
        assert box_com(BoundingBox(0, 'room', 0, 0, 512, 512)) == (256, 256)

    def test_red_ball_trajectory(self, red_ball_dsl):
        """Test the red-ball trajectory centers"""
        trajectory = trajectory_of(red_ball_dsl, 0)
        assert trajectory.xs == [25, 105, 185, 265, 345, 425]
        assert trajectory.present == (True,) * 6
        assert trajectory.areas == [2500] * 6

    def test_unknown_id(self, red_ball_dsl):
        """Test a missing id raises UnknownId"""
        with pytest.raises(UnknownId):
            trajectory_of(red_ball_dsl, 7)


class TestLayoutFiles:
    """Tests for JSON and text layout files"""

    def test_json_round_trip(self, red_ball_dsl, tmp_path):
        """Test save then load gives the same layout"""
        path = save_dsl_json(red_ball_dsl, tmp_path / 'ball.json')
        assert load_dsl_json(path) == red_ball_dsl
        data = json.loads(path.read_text())
        assert data['canvas'] == [512, 512]
        assert data['fps'] == 2
        assert data['frames'][0] == {
            'index': 1, 'boxes': [{'id': 0, 'name': 'red ball', 'box': [0, 206, 50, 50]}]
        }

    def test_text_file(self, tmp_path):
        """Test non-JSON files are parsed as completion text"""
        path = tmp_path / 'ball.txt'
        path.write_text(RED_BALL_TEXT)
        assert load_dsl_file(path).frame_count == 6
