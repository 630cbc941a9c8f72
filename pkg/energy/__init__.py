"""
Energy - Attention guidance energies and their gradients
"""

from .masks import rasterize_mask, center_cell
from .topk import e_topk, grad_e_topk, topk_count, topk_energy_and_grad
from .com import (
    com_of_map,
    com_energy_from_points,
    e_com,
    e_com_position,
    grad_e_com,
    grad_e_com_position,
)
from .total import energy_terms_and_gradients, total_energy, total_energy_and_gradients

__all__ = [
    'rasterize_mask',
    'center_cell',
    'e_topk',
    'grad_e_topk',
    'topk_count',
    'topk_energy_and_grad',
    'com_of_map',
    'com_energy_from_points',
    'e_com',
    'e_com_position',
    'grad_e_com',
    'grad_e_com_position',
    'energy_terms_and_gradients',
    'total_energy',
    'total_energy_and_gradients',
]
