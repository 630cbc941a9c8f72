"""
Guidance - Mock cross-attention substrate driven by layout energies
"""

from .schedule import make_alpha_bar, schedule_index
from .substrate import (
    init_substrate,
    layout_masks,
    natural_direction,
    objects_in_frame,
    positional_spread,
    softmax_backward,
)
from .metrics import grounding_metrics
from .simulator import GuidanceSimulator, GuidanceUpdate, run_guidance, unguided_metrics
from .ablation import com_weight_ablation, repeat_ablation

__all__ = [
    'make_alpha_bar',
    'schedule_index',
    'init_substrate',
    'layout_masks',
    'objects_in_frame',
    'softmax_backward',
    'natural_direction',
    'positional_spread',
    'grounding_metrics',
    'GuidanceSimulator',
    'GuidanceUpdate',
    'run_guidance',
    'unguided_metrics',
    'com_weight_ablation',
    'repeat_ablation',
]
