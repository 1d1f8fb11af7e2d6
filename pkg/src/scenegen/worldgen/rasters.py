"""Shared silhouette/pattern rasterization primitives (hard edges, object space)."""

from __future__ import annotations

import numpy as np


def object_coords(shape_hw: tuple[int, int], center: tuple[float, float], rotation_deg: float):
    """Per-pixel object-frame coordinates for a canvas of (H, W)."""
    h, w = shape_hw
    cy, cx = center
    rows, cols = np.mgrid[0:h, 0:w]
    dy = rows - cy
    dx = cols - cx
    t = np.deg2rad(rotation_deg)
    c, s = np.cos(t), np.sin(t)
    x = c * dx + s * dy
    y = -s * dx + c * dy
    return x, y


def silhouette(shape: str, x: np.ndarray, y: np.ndarray, radius: float) -> np.ndarray:
    if shape == "circle":
        return x**2 + y**2 <= radius**2
    if shape == "square":
        half = radius / np.sqrt(2.0)
        return (np.abs(x) <= half) & (np.abs(y) <= half)
    if shape == "triangle":
        # equilateral, apex up, circumradius = radius
        verts = [
            (radius * np.cos(np.deg2rad(a)), radius * np.sin(np.deg2rad(a)))
            for a in (-90.0, 30.0, 150.0)
        ]
        inside = np.ones_like(x, dtype=bool)
        for i in range(3):
            x0, y0 = verts[i]
            x1, y1 = verts[(i + 1) % 3]
            inside &= (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0) >= 0
        return inside
    raise ValueError(f"unknown shape {shape!r}")


def pattern_ink(pattern: str, x: np.ndarray, y: np.ndarray, radius: float) -> np.ndarray:
    """Where pattern ink (black) replaces the primary color, in object space.

    Dot spacing is fixed (not radius-scaled) so the ink fraction stays in a
    narrow band regardless of subject size or lattice alignment.
    """
    if pattern == "solid":
        return np.zeros_like(x, dtype=bool)
    if pattern == "striped":
        period = max(6.0, round(0.7 * radius))
        return np.mod(x, period) < period / 2.0
    if pattern == "dotted":
        spacing = 3.0
        r_dot = 0.7
        ux = np.mod(x, spacing) - spacing / 2.0
        uy = np.mod(y, spacing) - spacing / 2.0
        return ux**2 + uy**2 <= r_dot**2
    raise ValueError(f"unknown pattern {pattern!r}")
