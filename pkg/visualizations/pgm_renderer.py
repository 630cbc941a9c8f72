"""
PGM Renderer - Attention maps as binary grayscale rasters
"""

from pathlib import Path

import numpy as np

import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from validation import ShapeMismatch, ValidationError, Validator, ZeroMass


def attention_to_gray(A: np.ndarray) -> np.ndarray:
    """8-bit levels with the map maximum at 255 (rounded to nearest)"""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise ShapeMismatch(f"attention map must be 2-D, got {A.ndim}-D")
    if np.any(A < 0) or not np.all(np.isfinite(A)):
        raise ValidationError("attention map must be finite and nonnegative")
    peak = float(A.max()) if A.size else 0.0
    if not peak > 0:
        raise ZeroMass("attention map has no mass")
    return np.rint(255.0 * A / peak).astype(np.uint8)


def render_attention_pgm(A: np.ndarray, scale: int = 1) -> bytes:
    """
    Binary PGM (P5) of a nonnegative map, each cell drawn as scale x scale pixels

    Raises:
        ZeroMass: If the map is all zero
    """
    Validator.validate_integer(scale, "scale", min_value=1)
    gray = attention_to_gray(A)
    if scale > 1:
        gray = np.kron(gray, np.ones((scale, scale), dtype=np.uint8))
    height, width = gray.shape
    header = f"P5\n{width} {height}\n255\n".encode('ascii')
    return header + gray.tobytes(order='C')


def write_attention_pgm(A: np.ndarray, path: Path, scale: int = 1) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(render_attention_pgm(A, scale))
    return path
