"""
Total Energy - Average the per-object, per-frame terms of a whole clip
"""

from typing import Optional, Tuple

import numpy as np

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from energy.com import com_of_map, com_energy_from_points, grad_e_com, grad_e_com_position, e_com_position
from energy.topk import topk_energy_and_grad
from models.guidance import EnergyBreakdown, EnergyConfig
from validation import ShapeMismatch


def _check_inputs(maps: np.ndarray, masks: np.ndarray, present: Optional[np.ndarray]) -> np.ndarray:
    if maps.ndim != 4:
        raise ShapeMismatch(f"maps must be [frames, objects, H, W], got shape {maps.shape}")
    if maps.shape != masks.shape:
        raise ShapeMismatch(f"maps {maps.shape} and masks {masks.shape} differ in shape")
    if present is None:
        return np.ones(maps.shape[:2], dtype=bool)
    present = np.asarray(present, dtype=bool)
    if present.shape != maps.shape[:2]:
        raise ShapeMismatch(f"presence {present.shape} does not match maps {maps.shape[:2]}")
    return present


def energy_terms_and_gradients(
    maps: np.ndarray,
    masks: np.ndarray,
    cfg: EnergyConfig,
    present: Optional[np.ndarray] = None
) -> Tuple[EnergyBreakdown, np.ndarray, np.ndarray]:
    """
    Clip energy with separate gradients of its top-k and CoM terms

    e_topk is averaged over present (frame, object) pairs. e_com is averaged
    over one term per present (frame, object): position plus velocity when
    the object is also present in the next frame, position only otherwise.

    Args:
        maps: Attention maps, shape [frames, objects, H, W]
        masks: Box masks of the same shape
        cfg: Energy weights
        present: [frames, objects] flags; absent slots are ignored

    Returns:
        (EnergyBreakdown, d e_topk / d maps, d e_com / d maps); both gradients
        are averaged like the energies and the CoM one is not weighted yet

    Raises:
        ShapeMismatch, ZeroMass
    """
    present = _check_inputs(maps, masks, present)
    n_frames, n_objects = present.shape

    topk_sum = 0.0
    topk_grad = np.zeros_like(maps, dtype=np.float64)
    com_sum = 0.0
    com_grad = np.zeros_like(maps, dtype=np.float64)
    n_terms = 0

    for o in range(n_objects):
        for f in range(n_frames):
            if not present[f, o]:
                continue
            n_terms += 1
            value, grad = topk_energy_and_grad(maps[f, o], masks[f, o], cfg)
            topk_sum += value
            topk_grad[f, o] += grad

            if f + 1 < n_frames and present[f + 1, o]:
                com_sum += com_energy_from_points(
                    com_of_map(maps[f, o]), com_of_map(maps[f + 1, o]),
                    com_of_map(masks[f, o]), com_of_map(masks[f + 1, o])
                )
                g_t, g_t1 = grad_e_com(maps[f, o], maps[f + 1, o], masks[f, o], masks[f + 1, o])
                com_grad[f, o] += g_t
                com_grad[f + 1, o] += g_t1
            else:
                com_sum += e_com_position(maps[f, o], masks[f, o])
                com_grad[f, o] += grad_e_com_position(maps[f, o], masks[f, o])

    if n_terms == 0:
        return EnergyBreakdown(0.0, 0.0, 0.0), topk_grad, com_grad

    e_topk_mean = topk_sum / n_terms
    e_com_mean = com_sum / n_terms
    breakdown = EnergyBreakdown(
        e_topk=e_topk_mean,
        e_com=e_com_mean,
        e_total=e_topk_mean + cfg.com_weight * e_com_mean
    )
    return breakdown, topk_grad / n_terms, com_grad / n_terms


def total_energy_and_gradients(
    maps: np.ndarray,
    masks: np.ndarray,
    cfg: EnergyConfig,
    present: Optional[np.ndarray] = None
) -> Tuple[EnergyBreakdown, np.ndarray]:
    """
    Clip energy and its gradient with respect to every map

    Returns:
        (EnergyBreakdown, gradient of e_total shaped like maps)

    Raises:
        ShapeMismatch, ZeroMass
    """
    breakdown, topk_grad, com_grad = energy_terms_and_gradients(maps, masks, cfg, present)
    return breakdown, topk_grad + cfg.com_weight * com_grad


def total_energy(
    maps: np.ndarray,
    masks: np.ndarray,
    cfg: EnergyConfig,
    present: Optional[np.ndarray] = None
) -> EnergyBreakdown:
    """Clip energy: e_total = e_topk + com_weight * e_com (guidance scale applied later)"""
    return total_energy_and_gradients(maps, masks, cfg, present)[0]
