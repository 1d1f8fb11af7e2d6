"""Procedural target renderer: hard-edged shapes, depth occlusion, flat backgrounds."""

from __future__ import annotations

import numpy as np

from scenegen.controls import DepthMap, RegionMask
from scenegen.worldgen.attributes import BACKGROUND_DEPTH, BACKGROUNDS, COLORS, shade_for_depth
from scenegen.worldgen.rasters import object_coords, pattern_ink, silhouette

__all__ = ["draw_subject", "render_target", "silhouette", "pattern_ink"]


def draw_subject(image: np.ndarray, subject, shade: float = None) -> np.ndarray:
    """Paint one subject into `image` in place; returns its silhouette mask."""
    x, y = object_coords(image.shape[:2], (subject.center[1], subject.center[0]), subject.rotation_deg)
    mask = silhouette(subject.identity.shape, x, y, subject.radius)
    ink = pattern_ink(subject.identity.pattern, x, y, subject.radius) & mask
    if shade is None:
        shade = shade_for_depth(subject.depth)
    color = np.round(np.array(COLORS[subject.identity.color], dtype=np.float64) * shade)
    image[mask] = color.astype(np.uint8)
    image[ink] = 0
    return mask


def render_target(spec) -> tuple[np.ndarray, list[RegionMask], DepthMap]:
    """Rasterize a scene: target image, visible per-subject masks, full depth.

    Subjects are painted far-to-near so nearer subjects occlude; the returned
    masks are the visible (post-occlusion) regions in slot order.
    """
    width, height = spec.canvas
    image = np.empty((height, width, 3), dtype=np.uint8)
    image[:] = BACKGROUNDS[spec.background]
    depth = np.full((height, width), BACKGROUND_DEPTH, dtype=np.float64)
    order = sorted(range(len(spec.subjects)), key=lambda i: -spec.subjects[i].depth)
    visible: list[np.ndarray | None] = [None] * len(spec.subjects)
    for idx in order:
        subject = spec.subjects[idx]
        mask = draw_subject(image, subject)
        depth[mask] = subject.depth
        visible[idx] = mask
        for prev in order[: order.index(idx)]:
            visible[prev] = visible[prev] & ~mask
    masks = [RegionMask(m) for m in visible]
    return image, masks, DepthMap.full(depth)
