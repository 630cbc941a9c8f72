"""
Center-of-Mass Energy - Match attention and box centers and velocities
"""

from functools import lru_cache
from typing import Tuple

import numpy as np

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from validation import ShapeMismatch, ZeroMass


Point = Tuple[float, float]


@lru_cache(maxsize=32)
def _grid(shape: Tuple[int, ...]) -> Tuple[np.ndarray, np.ndarray]:
    """Cell-center coordinates (x, y) in cell units for a 2-D shape (read-only)"""
    rows, cols = np.indices(shape, dtype=np.float64)
    xs, ys = cols + 0.5, rows + 0.5
    xs.setflags(write=False)
    ys.setflags(write=False)
    return xs, ys


def _mass(A: np.ndarray) -> float:
    if A.ndim != 2:
        raise ShapeMismatch(f"map must be 2-D, got {A.ndim}-D")
    total = float(A.sum())
    if not total > 0:
        raise ZeroMass("map has no mass")
    return total


def com_of_map(A: np.ndarray) -> np.ndarray:
    """
    Center of mass of a nonnegative map in cell units

    Cell (i, j) sits at (j + 0.5, i + 0.5); the result is (x, y).

    Raises:
        ZeroMass: If the map sums to zero
    """
    total = _mass(A)
    xs, ys = _grid(A.shape)
    return np.array([(A * xs).sum() / total, (A * ys).sum() / total])


def com_energy_from_points(pa_t: Point, pa_t1: Point, pm_t: Point, pm_t1: Point) -> float:
    """
    Position plus velocity mismatch of two consecutive frames

    ||pA_t - pM_t||^2 + ||(pA_t1 - pA_t) - (pM_t1 - pM_t)||^2
    """
    pa_t, pa_t1 = np.asarray(pa_t, dtype=float), np.asarray(pa_t1, dtype=float)
    pm_t, pm_t1 = np.asarray(pm_t, dtype=float), np.asarray(pm_t1, dtype=float)
    position = pa_t - pm_t
    velocity = (pa_t1 - pa_t) - (pm_t1 - pm_t)
    return float(position @ position + velocity @ velocity)


def e_com(A_t: np.ndarray, A_t1: np.ndarray, M_t: np.ndarray, M_t1: np.ndarray) -> float:
    """CoM energy of one frame pair, in cell units"""
    _check_pair(A_t, A_t1, M_t, M_t1)
    return com_energy_from_points(
        com_of_map(A_t), com_of_map(A_t1), com_of_map(M_t), com_of_map(M_t1)
    )


def e_com_position(A: np.ndarray, M: np.ndarray) -> float:
    """Position-only CoM energy, used for an object's last frame"""
    if A.shape != M.shape:
        raise ShapeMismatch(f"attention {A.shape} and mask {M.shape} differ in shape")
    offset = com_of_map(A) - com_of_map(M)
    return float(offset @ offset)


def _com_pullback(A: np.ndarray, com: np.ndarray, total: float, d_com: np.ndarray) -> np.ndarray:
    """Chain d(energy)/d(com) through the CoM quotient: d(com)/dA_ij = (c_ij - com) / total"""
    xs, ys = _grid(A.shape)
    return (d_com[0] * (xs - com[0]) + d_com[1] * (ys - com[1])) / total


def grad_e_com(
    A_t: np.ndarray,
    A_t1: np.ndarray,
    M_t: np.ndarray,
    M_t1: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Analytic gradient of e_com with respect to both attention maps

    Returns:
        (dE/dA_t, dE/dA_t1)
    """
    _check_pair(A_t, A_t1, M_t, M_t1)
    s_t, s_t1 = _mass(A_t), _mass(A_t1)
    pa_t, pa_t1 = com_of_map(A_t), com_of_map(A_t1)
    pm_t, pm_t1 = com_of_map(M_t), com_of_map(M_t1)

    position = pa_t - pm_t
    velocity = (pa_t1 - pa_t) - (pm_t1 - pm_t)

    d_pa_t = 2.0 * position - 2.0 * velocity
    d_pa_t1 = 2.0 * velocity
    return (
        _com_pullback(A_t, pa_t, s_t, d_pa_t),
        _com_pullback(A_t1, pa_t1, s_t1, d_pa_t1)
    )


def grad_e_com_position(A: np.ndarray, M: np.ndarray) -> np.ndarray:
    """Gradient of e_com_position with respect to A"""
    if A.shape != M.shape:
        raise ShapeMismatch(f"attention {A.shape} and mask {M.shape} differ in shape")
    total = _mass(A)
    pa = com_of_map(A)
    return _com_pullback(A, pa, total, 2.0 * (pa - com_of_map(M)))


def _check_pair(*maps: np.ndarray) -> None:
    shape = maps[0].shape
    for other in maps[1:]:
        if other.shape != shape:
            raise ShapeMismatch(f"maps of shapes {shape} and {other.shape} cannot be paired")
