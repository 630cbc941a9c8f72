"""
Grounding Metrics - How well attention sits on, and moves with, each box
"""

from typing import Optional

import numpy as np

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from energy.com import com_of_map
from models.guidance import GroundingMetrics, ObjectFrameMetric


def grounding_metrics(
    attention: np.ndarray,
    masks: np.ndarray,
    present: np.ndarray,
    object_ids: tuple,
    frame_indices: Optional[tuple] = None
) -> GroundingMetrics:
    """
    Per (frame, object) in-box mass, CoM error and CoM-velocity error

    Errors are Euclidean distances in cells; the velocity error compares the
    frame-to-frame CoM step of the attention with that of the mask and is
    only defined when the object is present in the next frame too.

    Args:
        attention: Normalized maps [frames, objects, H, W]
        masks: Masks of the same shape
        present: [frames, objects] flags
        object_ids: Object id per slot
        frame_indices: Frame number per slot (1..N by default)

    Returns:
        GroundingMetrics
    """
    n_frames, n_objects = present.shape
    frame_indices = frame_indices or tuple(range(1, n_frames + 1))
    entries = []
    for f in range(n_frames):
        for o in range(n_objects):
            if not present[f, o]:
                continue
            attn, mask = attention[f, o], masks[f, o]
            mass = float(np.clip((attn * mask).sum() / attn.sum(), 0.0, 1.0))
            pa, pm = com_of_map(attn), com_of_map(mask)
            velocity_error = None
            if f + 1 < n_frames and present[f + 1, o]:
                step_a = com_of_map(attention[f + 1, o]) - pa
                step_m = com_of_map(masks[f + 1, o]) - pm
                velocity_error = float(np.linalg.norm(step_a - step_m))
            entries.append(ObjectFrameMetric(
                frame=frame_indices[f],
                id=object_ids[o],
                mass_fraction=mass,
                com_error=float(np.linalg.norm(pa - pm)),
                velocity_error=velocity_error
            ))
    return GroundingMetrics(entries=tuple(entries))
