"""Depth-channel construction: subject masking and 8-bit quantization."""

from __future__ import annotations

import numpy as np

from scenegen.controls.types import DepthMap, RegionMask
from scenegen.errors import CodecError

# Floor applied before inversion so depth 0 stays finite.
_INV_EPS = 1e-6


def mask_depth_to_subjects(depth: DepthMap, union: RegionMask) -> DepthMap:
    """Keep depth only inside the subject union; everything else becomes invalid."""
    if depth.shape != union.shape:
        raise CodecError(f"depth shape {depth.shape} != mask shape {union.shape}")
    keep = depth.valid & union.bits
    return DepthMap(np.where(keep, depth.values, 0.0), keep)


def quantize_depth(depth: DepthMap) -> np.ndarray:
    """Map valid depth to 8-bit by normalized inverse depth, nearer = brighter.

    Valid pixels land in [1, 255]; invalid pixels are 0. A constant-depth
    scene (no range) maps every valid pixel to 255.
    """
    if not depth.valid.any():
        raise CodecError("cannot quantize a depth map with no valid pixels")
    inv = 1.0 / np.maximum(depth.values, _INV_EPS)
    inv_valid = inv[depth.valid]
    lo, hi = float(inv_valid.min()), float(inv_valid.max())
    out = np.zeros(depth.shape, dtype=np.uint8)
    if hi - lo <= 0.0:
        out[depth.valid] = 255
        return out
    scaled = 1.0 + 254.0 * (inv - lo) / (hi - lo)
    out[depth.valid] = np.rint(scaled[depth.valid]).astype(np.uint8)
    return out
