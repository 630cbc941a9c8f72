"""
Guidance Ablations - Repeat count and CoM weight sweeps over seeds
"""

from dataclasses import replace
from typing import Dict, Optional, Sequence

import numpy as np

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from guidance.simulator import run_guidance
from logger_setup import get_logger, log_execution_time
from models.guidance import EnergyConfig, GuidanceSchedule
from models.layout import DynamicSceneLayout


logger = get_logger(__name__)


def repeat_ablation(
    dsl: DynamicSceneLayout,
    repeats: Sequence[int] = (1, 3, 5, 7),
    seeds: Sequence[int] = tuple(range(5)),
    H: int = 32,
    W: int = 32,
    cfg: Optional[EnergyConfig] = None,
    schedule: Optional[GuidanceSchedule] = None
) -> Dict[int, float]:
    """
    Mean alignment for each number of guidance repeats per step

    Alignment is in-box mass times exp(-CoM error^2) per (frame, object),
    so it keeps rising after the mass saturates while the CoM still settles.

    Args:
        dsl: Layout to ground
        repeats: Repeat counts to compare
        seeds: Substrate seeds averaged per repeat count
        H: Latent height
        W: Latent width
        cfg: Energy weights
        schedule: Base schedule; only repeats_per_step is varied

    Returns:
        {repeats: mean alignment over seeds and (frame, object) pairs}
    """
    cfg = cfg or EnergyConfig()
    base = schedule or GuidanceSchedule(scale=cfg.guidance_scale)
    results: Dict[int, float] = {}
    with log_execution_time(f"repeat ablation {list(repeats)} over {len(seeds)} seeds", logger):
        for count in repeats:
            varied = replace(base, repeats_per_step=count)
            scores = [
                run_guidance(dsl, varied, cfg, H, W, seed).metrics.mean_alignment for seed in seeds
            ]
            results[count] = float(np.mean(scores))
            logger.info(f"repeats {count}: mean alignment {results[count]:.4f}")
    return results


def com_weight_ablation(
    dsl: DynamicSceneLayout,
    weights: Sequence[float] = (0.0, 0.03),
    seeds: Sequence[int] = tuple(range(20)),
    H: int = 32,
    W: int = 32,
    cfg: Optional[EnergyConfig] = None,
    schedule: Optional[GuidanceSchedule] = None
) -> Dict[float, float]:
    """
    Mean CoM-velocity error for each CoM weight

    The same seeds are used for every weight so the comparison is paired.

    Returns:
        {com_weight: mean velocity error in cells/frame}
    """
    cfg = cfg or EnergyConfig()
    results: Dict[float, float] = {}
    with log_execution_time(f"CoM weight ablation {list(weights)} over {len(seeds)} seeds", logger):
        for weight in weights:
            weighted = replace(cfg, com_weight=weight)
            varied = schedule or GuidanceSchedule(scale=weighted.guidance_scale)
            errors = [
                run_guidance(dsl, varied, weighted, H, W, seed).metrics.mean_velocity_error
                for seed in seeds
            ]
            results[weight] = float(np.mean(errors))
            logger.info(f"com_weight {weight}: mean velocity error {results[weight]:.4f}")
    return results
