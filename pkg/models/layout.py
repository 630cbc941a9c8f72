"""
Layout Models - Dynamic scene layouts (frames of id-linked boxes)
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from validation import DuplicateIdInFrame, ValidationError, Validator


DEFAULT_CANVAS_SIZE = 512
DEFAULT_FPS = Fraction(2)

Number = Union[int, float]


def plain_number(value: float) -> Number:
    """Return an int for integral floats so JSON and text stay integer-valued"""
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


def parse_fps(value: Any) -> Fraction:
    """
    Read a frame rate from JSON (int, float or "p/q" string)

    Args:
        value: Raw frame rate

    Returns:
        Frame rate as a Fraction
    """
    if isinstance(value, Fraction):
        fps = value
    elif isinstance(value, float):
        fps = Fraction(value).limit_denominator(1_000_000)
    else:
        try:
            fps = Fraction(value)
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise ValidationError(f"fps must be a positive rational, got {value!r}") from e
    if fps <= 0:
        raise ValidationError(f"fps must be positive, got {value!r}")
    return fps


def fps_to_json(fps: Fraction) -> Union[int, str]:
    """Frame rate as a JSON value: an integer when whole, else 'p/q'"""
    if fps.denominator == 1:
        return fps.numerator
    return f"{fps.numerator}/{fps.denominator}"


@dataclass(frozen=True)
class Canvas:
    """Frame size in pixels"""

    width: int = DEFAULT_CANVAS_SIZE
    height: int = DEFAULT_CANVAS_SIZE

    def __post_init__(self):
        Validator.validate_integer(self.width, "Canvas width", min_value=1)
        Validator.validate_integer(self.height, "Canvas height", min_value=1)

    def to_list(self) -> List[int]:
        return [self.width, self.height]

    @classmethod
    def from_list(cls, data: Optional[List[int]]) -> 'Canvas':
        if not data:
            return cls()
        if len(data) != 2:
            raise ValidationError(f"canvas must be [width, height], got {data!r}")
        return cls(width=int(data[0]), height=int(data[1]))


@dataclass(frozen=True)
class BoundingBox:
    """
    One object's box in one frame

    Coordinates are pixels with a top-left origin and y growing downward.
    Boxes parsed from LLM text are integer-valued; interpolated boxes may
    carry fractional coordinates.
    """

    id: int
    name: str
    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        Validator.validate_integer(self.id, "Box id", min_value=0)
        if not isinstance(self.name, str):
            raise ValidationError(f"Box name must be a string, got {type(self.name).__name__}")
        for key in ('x', 'y', 'w', 'h'):
            Validator.validate_float(getattr(self, key), f"Box {key}")
        if self.w <= 0 or self.h <= 0:
            raise ValidationError(f"Box size must be positive, got w={self.w}, h={self.h}")

    @property
    def com(self) -> Tuple[float, float]:
        """Center of the box in pixels"""
        return (self.x + self.w / 2, self.y + self.h / 2)

    @property
    def area(self) -> float:
        return self.w * self.h

    @property
    def right(self) -> float:
        return self.x + self.w

    @property
    def bottom(self) -> float:
        return self.y + self.h

    def coords(self) -> List[Number]:
        """[x, y, w, h] with integral values as ints"""
        return [plain_number(float(v)) for v in (self.x, self.y, self.w, self.h)]

    def iou(self, other: 'BoundingBox') -> float:
        """Intersection over union with another box"""
        ix = max(0.0, min(self.right, other.right) - max(self.x, other.x))
        iy = max(0.0, min(self.bottom, other.bottom) - max(self.y, other.y))
        inter = ix * iy
        union = self.area + other.area - inter
        return inter / union if union > 0 else 0.0

    def is_inside(self, canvas: Canvas) -> bool:
        return (
            self.x >= 0 and self.y >= 0
            and self.right <= canvas.width and self.bottom <= canvas.height
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {'id': self.id, 'name': self.name, 'box': self.coords()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'BoundingBox':
        """Create from dictionary"""
        box = data.get('box')
        if not isinstance(box, (list, tuple)) or len(box) != 4:
            raise ValidationError(f"box must be [x, y, w, h], got {box!r}")
        x, y, w, h = box
        return cls(id=data.get('id'), name=data.get('name'), x=x, y=y, w=w, h=h)


@dataclass(frozen=True)
class Frame:
    """One keyframe: 1-based index and the boxes visible in it"""

    index: int
    boxes: Tuple[BoundingBox, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'boxes', tuple(self.boxes))
        seen = set()
        for box in self.boxes:
            if box.id in seen:
                raise DuplicateIdInFrame(self.index, box.id)
            seen.add(box.id)

    def box_for(self, object_id: int) -> Optional[BoundingBox]:
        """Box of the given object in this frame, if present"""
        for box in self.boxes:
            if box.id == object_id:
                return box
        return None

    @property
    def ids(self) -> List[int]:
        return [box.id for box in self.boxes]

    def to_dict(self) -> Dict[str, Any]:
        return {'index': self.index, 'boxes': [box.to_dict() for box in self.boxes]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Frame':
        return cls(
            index=int(data['index']),
            boxes=tuple(BoundingBox.from_dict(b) for b in data.get('boxes', []))
        )


@dataclass(frozen=True)
class DynamicSceneLayout:
    """
    Per-frame id-linked boxes plus a background keyword

    Consecutive frame indices and consistent names are guaranteed by the
    text parser; layouts built from JSON may violate them and are checked
    by validate_dsl instead.
    """

    frames: Tuple[Frame, ...]
    background_keyword: str = ""
    canvas: Canvas = field(default_factory=Canvas)
    fps: Fraction = DEFAULT_FPS

    def __post_init__(self):
        object.__setattr__(self, 'frames', tuple(self.frames))
        object.__setattr__(self, 'fps', parse_fps(self.fps))

    @property
    def frame_count(self) -> int:
        return len(self.frames)

    def object_ids(self) -> List[int]:
        """All object ids in order of first appearance"""
        ids: List[int] = []
        for frame in self.frames:
            for box in frame.boxes:
                if box.id not in ids:
                    ids.append(box.id)
        return ids

    def name_of(self, object_id: int) -> Optional[str]:
        """Name of an object at its first appearance"""
        for frame in self.frames:
            box = frame.box_for(object_id)
            if box is not None:
                return box.name
        return None

    def box_count(self) -> int:
        return sum(len(frame.boxes) for frame in self.frames)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to the JSON exchange format"""
        return {
            'frames': [frame.to_dict() for frame in self.frames],
            'background': self.background_keyword,
            'canvas': self.canvas.to_list(),
            'fps': fps_to_json(self.fps)
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'DynamicSceneLayout':
        """Create from the JSON exchange format"""
        if not isinstance(data, dict) or 'frames' not in data:
            raise ValidationError("layout JSON must be an object with a 'frames' list")
        return cls(
            frames=tuple(Frame.from_dict(f) for f in data['frames']),
            background_keyword=data.get('background', ''),
            canvas=Canvas.from_list(data.get('canvas')),
            fps=data.get('fps', 2)
        )


@dataclass(frozen=True)
class TrajectorySample:
    """One present frame of an object's trajectory"""

    frame: int
    com: Tuple[float, float]
    area: float
    box: BoundingBox


@dataclass(frozen=True)
class Trajectory:
    """Derived view of one object across a layout"""

    id: int
    name: str
    samples: Tuple[TrajectorySample, ...]
    present: Tuple[bool, ...]

    @property
    def xs(self) -> List[float]:
        return [s.com[0] for s in self.samples]

    @property
    def ys(self) -> List[float]:
        return [s.com[1] for s in self.samples]

    @property
    def tops(self) -> List[float]:
        """Top-edge y of the box per sample"""
        return [s.box.y for s in self.samples]

    @property
    def areas(self) -> List[float]:
        return [s.area for s in self.samples]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'id': self.id,
            'name': self.name,
            'present': list(self.present),
            'samples': [
                {'frame': s.frame, 'com': list(s.com), 'area': s.area, 'box': s.box.coords()}
                for s in self.samples
            ]
        }


# Validation findings (reported, never raised)

@dataclass(frozen=True)
class OutOfBounds:
    """Box leaves the canvas"""
    frame: int
    id: int
    kind: str = field(default='OutOfBounds', init=False)

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'frame': self.frame, 'id': self.id}


@dataclass(frozen=True)
class Overlap:
    """Two boxes in one frame intersect"""
    frame: int
    id_a: int
    id_b: int
    iou: float
    kind: str = field(default='Overlap', init=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind, 'frame': self.frame,
            'id_a': self.id_a, 'id_b': self.id_b, 'iou': self.iou
        }


@dataclass(frozen=True)
class NonConsecutiveFrames:
    """Frame indices are not 1..N"""
    indices: Tuple[int, ...]
    kind: str = field(default='NonConsecutiveFrames', init=False)

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'indices': list(self.indices)}


@dataclass(frozen=True)
class NameMismatch:
    """One id carries different names across frames"""
    id: int
    names: Tuple[str, ...]
    kind: str = field(default='InconsistentName', init=False)

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'id': self.id, 'names': list(self.names)}


Violation = Union[OutOfBounds, Overlap, NonConsecutiveFrames, NameMismatch]
