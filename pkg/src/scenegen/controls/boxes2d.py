"""Axis-aligned 2-D boxes fitted to masks and rasterized back."""

from __future__ import annotations

import numpy as np

from scenegen.controls.types import Box2D, RegionMask
from scenegen.errors import CodecError


def fit_box2d(mask: RegionMask) -> Box2D:
    """Tightest half-open axis-aligned box containing every set pixel."""
    if mask.is_empty():
        raise CodecError("cannot fit a box to an empty mask")
    rows, cols = np.nonzero(mask.bits)
    return Box2D(
        x0=int(cols.min()),
        y0=int(rows.min()),
        x1=int(cols.max()) + 1,
        y1=int(rows.max()) + 1,
    )


def box2d_to_region(box: Box2D, canvas: tuple[int, int]) -> RegionMask:
    """Filled rectangle mask on a (width, height) canvas."""
    width, height = canvas
    if box.x1 > width or box.y1 > height:
        raise CodecError(f"box {box} extends outside canvas {canvas}")
    bits = np.zeros((height, width), dtype=bool)
    bits[box.y0 : box.y1, box.x0 : box.x1] = True
    return RegionMask(bits)
