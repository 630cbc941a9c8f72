"""
Top-k Energy - Reward attention inside a box, penalize it outside
"""

import math
from typing import Tuple

import numpy as np

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from models.guidance import EnergyConfig
from validation import ShapeMismatch


def topk_count(fraction: float, count: int) -> int:
    """
    Number of cells averaged in a region of `count` cells

    k = max(1, ceil(fraction * count)); 75% of 3 cells gives 3.
    """
    if count <= 0:
        return 0
    # Rounded first so that e.g. 0.7 * 10 does not become 8.
    return max(1, math.ceil(round(fraction * count, 9)))


def check_shapes(A: np.ndarray, M: np.ndarray) -> None:
    if A.shape != M.shape:
        raise ShapeMismatch(f"attention {A.shape} and mask {M.shape} differ in shape")
    if A.ndim != 2:
        raise ShapeMismatch(f"attention map must be 2-D, got {A.ndim}-D")


def _top_cells(values: np.ndarray, region: np.ndarray, k: int) -> np.ndarray:
    # region is ascending (row-major), so the stable sort breaks ties in row-major order
    order = np.argsort(-values[region], kind='stable')
    return region[order[:k]]


def topk_energy_and_grad(
    A: np.ndarray,
    M: np.ndarray,
    cfg: EnergyConfig
) -> Tuple[float, np.ndarray]:
    """
    Weighted top-k energy of one map and its gradient

    E = -w_fg * mean(top-k_fg of A inside M) + w_bg * mean(top-k_bg of A outside M).
    Selection is restricted to each region; an empty region contributes 0.

    Args:
        A: H x W attention map
        M: H x W binary mask
        cfg: Energy weights and top-k fraction

    Returns:
        (energy, gradient with respect to A)
    """
    check_shapes(A, M)
    values = A.ravel()
    inside = M.ravel() > 0.5
    fg_region = np.flatnonzero(inside)
    bg_region = np.flatnonzero(~inside)

    grad = np.zeros(values.shape, dtype=np.float64)
    energy = 0.0

    k_fg = topk_count(cfg.topk_fraction, fg_region.size)
    if k_fg:
        selected = _top_cells(values, fg_region, k_fg)
        energy -= cfg.w_fg * values[selected].mean()
        grad[selected] = -cfg.w_fg / k_fg

    k_bg = topk_count(cfg.topk_fraction, bg_region.size)
    if k_bg:
        selected = _top_cells(values, bg_region, k_bg)
        energy += cfg.w_bg * values[selected].mean()
        grad[selected] = cfg.w_bg / k_bg

    return float(energy), grad.reshape(A.shape)


def e_topk(A: np.ndarray, M: np.ndarray, cfg: EnergyConfig) -> float:
    """Weighted top-k energy of one attention map against one box mask"""
    return topk_energy_and_grad(A, M, cfg)[0]


def grad_e_topk(A: np.ndarray, M: np.ndarray, cfg: EnergyConfig) -> np.ndarray:
    """
    Gradient of e_topk with respect to A

    -w_fg/k_fg on the selected foreground cells, +w_bg/k_bg on the selected
    background cells, 0 elsewhere (a subgradient where values tie).
    """
    return topk_energy_and_grad(A, M, cfg)[1]
