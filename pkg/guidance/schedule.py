"""
Noise Schedule - Cumulative signal levels that set the guidance step size
"""

from typing import List

import numpy as np

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from validation import Validator


BETA_START = 0.00085
BETA_END = 0.012
TRAIN_STEPS = 1000


def training_alpha_bar() -> np.ndarray:
    """Cumulative product of (1 - beta) over the linear 1000-step beta schedule"""
    betas = np.linspace(BETA_START, BETA_END, TRAIN_STEPS, dtype=np.float64)
    return np.cumprod(1.0 - betas)


def schedule_index(t: int, total_steps: int) -> int:
    """
    Training index sampled at step t of a total_steps sampler

    round(999 * (T-1-t) / (T-1)) with halves rounded up; a single-step
    sampler uses the last index.
    """
    last = TRAIN_STEPS - 1
    if total_steps == 1:
        return last
    numerator = last * (total_steps - 1 - t)
    denominator = total_steps - 1
    return (2 * numerator + denominator) // (2 * denominator)


def make_alpha_bar(total_steps: int) -> List[float]:
    """
    alpha_bar for each sampling step, noisiest first

    Step 0 maps to the last training index, so alpha_bar rises with t and
    the guidance step size sqrt(1 - alpha_bar_t) falls.

    Args:
        total_steps: Number of sampling steps (>= 1)

    Returns:
        List of total_steps values in (0, 1)

    Raises:
        ValidationError: If total_steps is below 1
    """
    Validator.validate_integer(total_steps, "total_steps", min_value=1)
    table = training_alpha_bar()
    return [float(table[schedule_index(t, total_steps)]) for t in range(total_steps)]
