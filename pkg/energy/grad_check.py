"""
Gradient Checker - Central finite differences against the analytic gradients
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from energy.com import com_energy_from_points, com_of_map, grad_e_com
from energy.topk import e_topk, grad_e_topk
from logger_setup import get_logger, log_execution_time
from models.guidance import EnergyConfig


DEFAULT_STEP = 1e-5
DEFAULT_TOLERANCE = 1e-4

logger = get_logger(__name__)


def finite_difference_gradient(
    f: Callable[[np.ndarray], float],
    A: np.ndarray,
    h: float = DEFAULT_STEP
) -> np.ndarray:
    """Central-difference gradient of a scalar function of one array"""
    A = np.array(A, dtype=np.float64)
    grad = np.zeros_like(A)
    for index in np.ndindex(A.shape):
        original = A[index]
        A[index] = original + h
        upper = f(A)
        A[index] = original - h
        lower = f(A)
        A[index] = original
        grad[index] = (upper - lower) / (2.0 * h)
    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """max |analytic - numeric| relative to the larger gradient magnitude"""
    scale = max(float(np.abs(analytic).max()), float(np.abs(numeric).max()), 1e-12)
    return float(np.abs(analytic - numeric).max()) / scale


def tie_free_map(rng: np.random.Generator, H: int, W: int) -> np.ndarray:
    """Map whose entries are a shuffled 1/n .. n/n, so no two cells tie"""
    n = H * W
    return (rng.permutation(n) + 1.0).reshape(H, W) / n


def random_box_mask(rng: np.random.Generator, H: int, W: int) -> np.ndarray:
    """Random axis-aligned rectangle that is neither empty nor the whole grid"""
    while True:
        r0, r1 = sorted(rng.choice(H + 1, size=2, replace=False))
        c0, c1 = sorted(rng.choice(W + 1, size=2, replace=False))
        if (r1 - r0) * (c1 - c0) < H * W:
            mask = np.zeros((H, W))
            mask[r0:r1, c0:c1] = 1.0
            return mask


def check_topk_instance(
    rng: np.random.Generator,
    size: int,
    cfg: EnergyConfig,
    h: float = DEFAULT_STEP
) -> float:
    """Relative error of grad_e_topk on one random tie-free instance"""
    A = tie_free_map(rng, size, size)
    M = random_box_mask(rng, size, size)
    numeric = finite_difference_gradient(lambda X: e_topk(X, M, cfg), A, h)
    return relative_error(grad_e_topk(A, M, cfg), numeric)


def check_com_instance(rng: np.random.Generator, size: int, h: float = DEFAULT_STEP) -> float:
    """Relative error of grad_e_com (both maps) on one random positive instance"""
    A_t = rng.uniform(0.1, 1.0, size=(size, size))
    A_t1 = rng.uniform(0.1, 1.0, size=(size, size))
    M_t = random_box_mask(rng, size, size)
    M_t1 = random_box_mask(rng, size, size)

    g_t, g_t1 = grad_e_com(A_t, A_t1, M_t, M_t1)
    pa_t, pa_t1 = com_of_map(A_t), com_of_map(A_t1)
    pm_t, pm_t1 = com_of_map(M_t), com_of_map(M_t1)
    n_t = finite_difference_gradient(
        lambda X: com_energy_from_points(com_of_map(X), pa_t1, pm_t, pm_t1), A_t, h
    )
    n_t1 = finite_difference_gradient(
        lambda X: com_energy_from_points(pa_t, com_of_map(X), pm_t, pm_t1), A_t1, h
    )
    return relative_error(np.concatenate([g_t, g_t1]), np.concatenate([n_t, n_t1]))


@dataclass
class GradientCheckReport:
    """Per-seed relative errors of both analytic gradients"""

    tolerance: float
    topk_errors: Dict[int, List[float]] = field(default_factory=dict)
    com_errors: Dict[int, List[float]] = field(default_factory=dict)

    @property
    def max_topk_error(self) -> float:
        return max((e for errs in self.topk_errors.values() for e in errs), default=0.0)

    @property
    def max_com_error(self) -> float:
        return max((e for errs in self.com_errors.values() for e in errs), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_topk_error < self.tolerance and self.max_com_error < self.tolerance

    def to_dict(self) -> Dict[str, object]:
        return {
            'tolerance': self.tolerance,
            'passed': self.passed,
            'max_topk_error': self.max_topk_error,
            'max_com_error': self.max_com_error,
            'instances': sum(len(errs) for errs in self.topk_errors.values()),
            'seeds': sorted(self.topk_errors)
        }


def run_gradient_suite(
    seeds: Sequence[int] = (0, 1, 2, 3, 4),
    instances: int = 20,
    size: int = 16,
    h: float = DEFAULT_STEP,
    tolerance: float = DEFAULT_TOLERANCE,
    cfg: EnergyConfig = None
) -> GradientCheckReport:
    """
    Finite-difference check of both energy gradients

    Args:
        seeds: One random stream per seed
        instances: Random instances per seed and per energy
        size: Grid side length
        h: Finite-difference step
        tolerance: Largest acceptable relative error
        cfg: Energy weights (defaults)

    Returns:
        GradientCheckReport
    """
    cfg = cfg or EnergyConfig()
    report = GradientCheckReport(tolerance=tolerance)
    with log_execution_time(f"gradient suite ({len(seeds)} seeds x {instances} instances)", logger):
        for seed in seeds:
            rng = np.random.default_rng(seed)
            report.topk_errors[seed] = [check_topk_instance(rng, size, cfg, h) for _ in range(instances)]
            report.com_errors[seed] = [check_com_instance(rng, size, h) for _ in range(instances)]
            logger.debug(
                f"seed {seed}: topk max {max(report.topk_errors[seed]):.2e}, "
                f"com max {max(report.com_errors[seed]):.2e}"
            )
    return report
