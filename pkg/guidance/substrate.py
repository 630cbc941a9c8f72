"""
Attention Substrate - Softmax logit field standing in for cross-attention
"""

from typing import List, Tuple, Union

import numpy as np

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from energy.masks import center_cell, rasterize_mask
from models.guidance import SubstrateState
from models.layout import DynamicSceneLayout, Frame
from validation import EmptyDsl, ShapeMismatch


def objects_in_frame(
    dsl: DynamicSceneLayout,
    frame: Union[int, Frame],
    H: int,
    W: int
) -> List[Tuple[int, np.ndarray]]:
    """
    (id, mask) for every box in one frame

    Args:
        dsl: Layout
        frame: 1-based frame index or the Frame itself
        H: Latent height
        W: Latent width

    Returns:
        List of (object id, H x W mask) in box order
    """
    if isinstance(frame, int):
        frame = dsl.frames[frame - 1]
    return [(box.id, rasterize_mask(box, dsl.canvas, H, W)) for box in frame.boxes]


def layout_masks(dsl: DynamicSceneLayout, H: int, W: int) -> Tuple[np.ndarray, np.ndarray, Tuple[int, ...]]:
    """
    Stack the layout's masks as [frames, objects, H, W]

    A box too small to cover any cell center still needs a target, so it
    gets the single cell holding its center.

    Returns:
        (masks, presence flags [frames, objects], object ids)
    """
    object_ids = tuple(dsl.object_ids())
    slot = {object_id: o for o, object_id in enumerate(object_ids)}
    masks = np.zeros((dsl.frame_count, len(object_ids), H, W), dtype=np.float64)
    present = np.zeros((dsl.frame_count, len(object_ids)), dtype=bool)

    for f, frame in enumerate(dsl.frames):
        for box in frame.boxes:
            o = slot[box.id]
            mask = rasterize_mask(box, dsl.canvas, H, W)
            if not mask.any():
                mask[center_cell(box, dsl.canvas, H, W)] = 1.0
            masks[f, o] = mask
            present[f, o] = True
    return masks, present, object_ids


def init_substrate(dsl: DynamicSceneLayout, H: int, W: int, seed: int) -> SubstrateState:
    """
    Fresh substrate with i.i.d. standard normal logits

    Raises:
        EmptyDsl: If the layout has fewer than 2 frames or no boxes
    """
    if dsl.frame_count < 2:
        raise EmptyDsl(f"guidance needs at least 2 frames, got {dsl.frame_count}")
    if dsl.box_count() == 0:
        raise EmptyDsl("layout has no boxes to guide")
    if H < 2 or W < 2:
        raise ShapeMismatch(f"latent grid must be at least 2 x 2, got {H} x {W}")

    _, present, object_ids = layout_masks(dsl, H, W)
    rng = np.random.default_rng(seed)
    logits = rng.standard_normal((dsl.frame_count, len(object_ids), H, W))
    return SubstrateState(
        logits=logits,
        present=present,
        object_ids=object_ids,
        frame_indices=tuple(frame.index for frame in dsl.frames),
        seed=seed
    )


def softmax_backward(attention: np.ndarray, grad_attention: np.ndarray) -> np.ndarray:
    """
    Pull a gradient on softmaxed slices back to the logits

    dE/dz_i = a_i * (g_i - sum_j a_j g_j) within each H x W slice.
    """
    if attention.shape != grad_attention.shape:
        raise ShapeMismatch("attention and its gradient differ in shape")
    inner = (attention * grad_attention).sum(axis=(-2, -1), keepdims=True)
    return attention * (grad_attention - inner)


def natural_direction(attention: np.ndarray, grad_attention: np.ndarray) -> np.ndarray:
    """
    Logit step direction in the softmax's own geometry

    g_i - sum_j a_j g_j within each H x W slice: the chained gradient of
    softmax_backward divided by the attention, so cells with little mass
    still move at the rate their energy gradient asks for.
    """
    if attention.shape != grad_attention.shape:
        raise ShapeMismatch("attention and its gradient differ in shape")
    inner = (attention * grad_attention).sum(axis=(-2, -1), keepdims=True)
    return grad_attention - inner


def positional_spread(attention: np.ndarray) -> np.ndarray:
    """
    Spread of each attention slice around its CoM, in squared cells

    Mean of the x and y variances with every cell counted as a unit
    square, so a slice on a single cell still has spread 1/12.

    Returns:
        Array shaped [..., 1, 1] for broadcasting against the slices
    """
    rows, cols = np.indices(attention.shape[-2:], dtype=np.float64)
    xs, ys = cols + 0.5, rows + 0.5
    total = attention.sum(axis=(-2, -1), keepdims=True)
    cx = (attention * xs).sum(axis=(-2, -1), keepdims=True) / total
    cy = (attention * ys).sum(axis=(-2, -1), keepdims=True) / total
    squared = (xs - cx) ** 2 + (ys - cy) ** 2
    variance = (attention * squared).sum(axis=(-2, -1), keepdims=True) / total
    return variance / 2.0 + 1.0 / 12.0
