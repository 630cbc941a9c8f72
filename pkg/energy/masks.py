"""
Box Masks - Rasterize layout boxes onto the latent grid
"""

import numpy as np

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from models.layout import BoundingBox, Canvas
from validation import ValidationError


def cell_centers(length: float, cells: int) -> np.ndarray:
    """Pixel coordinates of the centers of `cells` equal cells spanning `length`"""
    return (np.arange(cells) + 0.5) * (length / cells)


def rasterize_mask(box: BoundingBox, canvas: Canvas, H: int, W: int) -> np.ndarray:
    """
    Binary H x W mask of a box

    Cell (i, j) is 1 iff its center ((j+0.5)*width/W, (i+0.5)*height/H)
    lies in [x, x+w) x [y, y+h) after clipping the box to the canvas.

    Args:
        box: Box in canvas pixels
        canvas: Canvas the box is drawn on
        H: Latent height (>= 2)
        W: Latent width (>= 2)

    Returns:
        float64 array of zeros and ones
    """
    if H < 2 or W < 2:
        raise ValidationError(f"latent grid must be at least 2 x 2, got {H} x {W}")

    x0, x1 = max(box.x, 0.0), min(box.x + box.w, float(canvas.width))
    y0, y1 = max(box.y, 0.0), min(box.y + box.h, float(canvas.height))

    xs = cell_centers(canvas.width, W)
    ys = cell_centers(canvas.height, H)
    cols = (xs >= x0) & (xs < x1)
    rows = (ys >= y0) & (ys < y1)
    return np.outer(rows, cols).astype(np.float64)


def center_cell(box: BoundingBox, canvas: Canvas, H: int, W: int) -> tuple:
    """Grid cell (row, col) holding the box center, clamped to the grid"""
    cx, cy = box.com
    col = int(np.clip(np.floor(cx * W / canvas.width), 0, W - 1))
    row = int(np.clip(np.floor(cy * H / canvas.height), 0, H - 1))
    return row, col
