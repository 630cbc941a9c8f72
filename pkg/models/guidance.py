"""
Guidance Models - Energy settings, schedules, substrate state and metrics
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple
import math

import numpy as np

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from validation import ValidationError, Validator


NATURAL_STEP = 'natural'
EUCLIDEAN_STEP = 'euclidean'
STEP_GEOMETRIES = [NATURAL_STEP, EUCLIDEAN_STEP]


@dataclass(frozen=True)
class EnergyConfig:
    """
    Energy weights and guidance strength

    Defaults: foreground weight 1.0, background weight 4.0, top-k over 75%
    of each region, CoM term weighted 0.03, guidance scaled by 5.
    A com_weight of 0 is allowed so the CoM term can be ablated.
    """

    w_fg: float = 1.0
    w_bg: float = 4.0
    topk_fraction: float = 0.75
    com_weight: float = 0.03
    guidance_scale: float = 5.0

    def __post_init__(self):
        Validator.validate_float(self.w_fg, "w_fg", min_value=0.0, exclusive_min=True)
        Validator.validate_float(self.w_bg, "w_bg", min_value=0.0, exclusive_min=True)
        Validator.validate_float(
            self.topk_fraction, "topk_fraction", min_value=0.0, max_value=1.0, exclusive_min=True
        )
        Validator.validate_float(self.com_weight, "com_weight", min_value=0.0)
        Validator.validate_float(self.guidance_scale, "guidance_scale", min_value=0.0)

    def to_dict(self) -> Dict[str, float]:
        return {
            'w_fg': self.w_fg,
            'w_bg': self.w_bg,
            'topk_fraction': self.topk_fraction,
            'com_weight': self.com_weight,
            'guidance_scale': self.guidance_scale
        }


@dataclass(frozen=True)
class EnergyBreakdown:
    """Energy terms of one evaluation (before the guidance scale)"""

    e_topk: float
    e_com: float
    e_total: float

    def __post_init__(self):
        if not math.isfinite(self.e_total):
            raise ValidationError(f"total energy is not finite: {self.e_total}")

    def to_dict(self) -> Dict[str, float]:
        return {'e_topk': self.e_topk, 'e_com': self.e_com, 'e_total': self.e_total}


@dataclass(frozen=True)
class GuidanceSchedule:
    """
    When and how strongly guidance is applied

    alpha_bar[t] is the cumulative signal level at sampling step t
    (t = 0 is the noisiest step); it is filled from the linear beta
    schedule when omitted. geometry picks how an energy gradient becomes a
    logit step: 'natural' (the default) or the plain chained gradient,
    'euclidean'. See GuidanceSimulator.step_direction.
    """

    total_steps: int = 40
    guided_steps: int = 10
    repeats_per_step: int = 5
    alpha_bar: Tuple[float, ...] = ()
    scale: float = 5.0
    geometry: str = NATURAL_STEP

    def __post_init__(self):
        Validator.validate_integer(self.total_steps, "total_steps", min_value=1)
        Validator.validate_integer(
            self.guided_steps, "guided_steps", min_value=0, max_value=self.total_steps
        )
        Validator.validate_integer(self.repeats_per_step, "repeats_per_step", min_value=1)
        Validator.validate_float(self.scale, "scale", min_value=0.0)
        geometry = Validator.validate_choice(
            self.geometry, "geometry", STEP_GEOMETRIES, case_sensitive=False
        )
        object.__setattr__(self, 'geometry', geometry)

        if not self.alpha_bar:
            from guidance.schedule import make_alpha_bar
            object.__setattr__(self, 'alpha_bar', tuple(make_alpha_bar(self.total_steps)))
        else:
            object.__setattr__(self, 'alpha_bar', tuple(float(a) for a in self.alpha_bar))

        if len(self.alpha_bar) != self.total_steps:
            raise ValidationError(
                f"alpha_bar has {len(self.alpha_bar)} entries for {self.total_steps} steps"
            )
        if any(not 0.0 < a < 1.0 for a in self.alpha_bar):
            raise ValidationError("alpha_bar entries must lie in (0, 1)")

    def step_size(self, t: int) -> float:
        """sqrt(1 - alpha_bar_t) for sampling step t"""
        return math.sqrt(1.0 - self.alpha_bar[t])

    @property
    def total_updates(self) -> int:
        return self.guided_steps * self.repeats_per_step

    def to_dict(self) -> Dict[str, Any]:
        return {
            'total_steps': self.total_steps,
            'guided_steps': self.guided_steps,
            'repeats_per_step': self.repeats_per_step,
            'scale': self.scale,
            'geometry': self.geometry
        }


@dataclass(eq=False)
class SubstrateState:
    """
    Logit field standing in for the denoiser's cross-attention

    logits has shape [frames, objects, H, W]; slot (f, o) is only
    meaningful where present[f, o] is True (the object has a box there).
    """

    logits: np.ndarray
    present: np.ndarray
    object_ids: Tuple[int, ...]
    frame_indices: Tuple[int, ...]
    seed: int

    def __post_init__(self):
        if self.logits.ndim != 4:
            raise ValidationError(f"logits must be 4-D, got shape {self.logits.shape}")
        if self.present.shape != self.logits.shape[:2]:
            raise ValidationError("presence mask does not match the logit field")
        if not np.all(np.isfinite(self.logits)):
            raise ValidationError("logits contain non-finite entries")

    @property
    def shape(self) -> Tuple[int, int]:
        return self.logits.shape[2], self.logits.shape[3]

    def attention(self) -> np.ndarray:
        """Softmax over each H x W slice; every slice is positive and sums to 1"""
        flat = self.logits.reshape(self.logits.shape[0], self.logits.shape[1], -1)
        shifted = flat - flat.max(axis=-1, keepdims=True)
        weights = np.exp(shifted)
        weights /= weights.sum(axis=-1, keepdims=True)
        return weights.reshape(self.logits.shape)

    def copy(self) -> 'SubstrateState':
        return SubstrateState(
            logits=self.logits.copy(),
            present=self.present.copy(),
            object_ids=self.object_ids,
            frame_indices=self.frame_indices,
            seed=self.seed
        )

    def equals(self, other: 'SubstrateState') -> bool:
        """Bit-identical comparison of two states"""
        return (
            self.object_ids == other.object_ids
            and self.frame_indices == other.frame_indices
            and np.array_equal(self.present, other.present)
            and np.array_equal(self.logits, other.logits)
        )


@dataclass(frozen=True)
class ObjectFrameMetric:
    """Alignment of one object's attention with its box in one frame"""

    frame: int
    id: int
    mass_fraction: float
    com_error: float
    velocity_error: Optional[float] = None

    @property
    def alignment(self) -> float:
        """mass_fraction * exp(-com_error^2): 1 only with all mass in the box and the CoM on target"""
        return self.mass_fraction * math.exp(-self.com_error ** 2)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'frame': self.frame,
            'id': self.id,
            'mass_fraction': self.mass_fraction,
            'com_error': self.com_error,
            'velocity_error': self.velocity_error
        }


@dataclass(frozen=True)
class GroundingMetrics:
    """Per (frame, object) alignment plus aggregates"""

    entries: Tuple[ObjectFrameMetric, ...]

    def __post_init__(self):
        object.__setattr__(self, 'entries', tuple(self.entries))
        for entry in self.entries:
            if not 0.0 <= entry.mass_fraction <= 1.0 + 1e-12:
                raise ValidationError(f"mass fraction out of range: {entry.mass_fraction}")

    @property
    def min_mass(self) -> float:
        return min((e.mass_fraction for e in self.entries), default=0.0)

    @property
    def mean_mass(self) -> float:
        return float(np.mean([e.mass_fraction for e in self.entries])) if self.entries else 0.0

    @property
    def max_com_error(self) -> float:
        return max((e.com_error for e in self.entries), default=0.0)

    @property
    def mean_com_error(self) -> float:
        return float(np.mean([e.com_error for e in self.entries])) if self.entries else 0.0

    @property
    def velocity_errors(self) -> List[float]:
        return [e.velocity_error for e in self.entries if e.velocity_error is not None]

    @property
    def mean_velocity_error(self) -> float:
        errors = self.velocity_errors
        return float(np.mean(errors)) if errors else 0.0

    @property
    def max_velocity_error(self) -> float:
        return max(self.velocity_errors, default=0.0)

    @property
    def mean_alignment(self) -> float:
        return float(np.mean([e.alignment for e in self.entries])) if self.entries else 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'aggregates': {
                'min_mass': self.min_mass,
                'mean_mass': self.mean_mass,
                'max_com_error': self.max_com_error,
                'mean_com_error': self.mean_com_error,
                'mean_velocity_error': self.mean_velocity_error,
                'max_velocity_error': self.max_velocity_error,
                'mean_alignment': self.mean_alignment
            },
            'entries': [e.to_dict() for e in self.entries]
        }


@dataclass(frozen=True)
class TraceRow:
    """Energy recorded just before one guidance update"""

    step: int
    repeat: int
    e_topk: float
    e_com: float
    e_total: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'step': self.step,
            'repeat': self.repeat,
            'e_topk': self.e_topk,
            'e_com': self.e_com,
            'e_total': self.e_total
        }


@dataclass
class GuidanceRun:
    """Result of one guidance simulation"""

    state: SubstrateState
    metrics: GroundingMetrics
    trace: List[TraceRow] = field(default_factory=list)
    initial_state: Optional[SubstrateState] = None

    @property
    def energies(self) -> List[float]:
        return [row.e_total for row in self.trace]
