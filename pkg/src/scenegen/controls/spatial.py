"""Packing the two routing images and the depth channel into one control image."""

from __future__ import annotations

import numpy as np

from scenegen.controls.types import RoutingImage, SpatialControlImage
from scenegen.errors import CodecError


def assemble_spatial_control(
    asc: RoutingImage, dsc: RoutingImage, depth8: np.ndarray
) -> SpatialControlImage:
    """Stack channels in the fixed order (ascending, descending, depth)."""
    depth8 = np.asarray(depth8)
    if depth8.shape != asc.shape or asc.shape != dsc.shape:
        raise CodecError(
            f"channel shapes disagree: {asc.shape}, {dsc.shape}, {depth8.shape}"
        )
    return SpatialControlImage(asc=asc, dsc=dsc, depth8=depth8.astype(np.uint8))


def disassemble_spatial_control(
    control: SpatialControlImage,
) -> tuple[RoutingImage, RoutingImage, np.ndarray]:
    return control.asc, control.dsc, control.depth8
