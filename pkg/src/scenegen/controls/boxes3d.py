"""Oriented 3-D boxes: fitting to unprojected depth points and rendering back.

Fitting searches a small candidate set of orientations (principal axes of
the point covariance plus an exhaustive yaw sweep about the camera's
vertical axis) and keeps the minimum-volume box. Depth outliers are trimmed
at the 1st/99th percentiles before fitting; the fitted box is then expanded
just enough to contain at least 99% of all points.
"""

from __future__ import annotations

import numpy as np

from scenegen.controls.types import (
    MIN_EXTENT,
    Box2D,
    CameraModel,
    DepthMap,
    OrientedBox3D,
    RegionMask,
)
from scenegen.errors import CodecError

YAW_STEP_DEG = 1.0
MIN_FIT_POINTS = 10
CONTAINMENT_FRACTION = 0.99
TRIM_PERCENTILES = (1.0, 99.0)
# Pure min-volume is unstable on surface shells (a hull-hugging diagonal box
# can tie the true orientation); near-ties are broken toward compactness.
VOLUME_TIE_TOLERANCE = 0.10


def unproject(mask: RegionMask, depth: DepthMap, cam: CameraModel) -> np.ndarray:
    """Masked valid depth pixels -> (N, 3) camera-space points (pinhole model)."""
    if mask.shape != depth.shape:
        raise CodecError(f"mask shape {mask.shape} != depth shape {depth.shape}")
    keep = mask.bits & depth.valid
    rows, cols = np.nonzero(keep)
    z = depth.values[rows, cols]
    x = (cols - cam.cx) / cam.fx * z
    y = (rows - cam.cy) / cam.fy * z
    return np.stack([x, y, z], axis=1)


def _yaw_rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def _pca_rotation(points: np.ndarray) -> np.ndarray:
    cov = np.cov(points, rowvar=False)
    _, vecs = np.linalg.eigh(cov)
    if np.linalg.det(vecs) < 0:
        vecs = vecs.copy()
        vecs[:, 0] = -vecs[:, 0]
    return vecs


def _box_from_rotation(points: np.ndarray, rotation: np.ndarray):
    local = points @ rotation
    lo = local.min(axis=0)
    hi = local.max(axis=0)
    extents = hi - lo
    center_local = (hi + lo) / 2.0
    center = rotation @ center_local
    e = np.maximum(extents, MIN_EXTENT)
    volume = float(np.prod(e))
    surface = float(2.0 * (e[0] * e[1] + e[1] * e[2] + e[0] * e[2]))
    return center, extents, volume, surface


def fit_box_to_points(points: np.ndarray) -> OrientedBox3D:
    """Minimum-volume oriented box over a (N, 3) point cloud."""
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != 3:
        raise CodecError(f"expected (N, 3) points, got shape {points.shape}")
    if len(points) < MIN_FIT_POINTS:
        raise CodecError(
            f"oriented-box fit needs >= {MIN_FIT_POINTS} points, got {len(points)}"
        )
    lo_d, hi_d = np.percentile(points[:, 2], TRIM_PERCENTILES)
    kept = points[(points[:, 2] >= lo_d) & (points[:, 2] <= hi_d)]
    if len(kept) < MIN_FIT_POINTS:
        kept = points

    candidates = [_pca_rotation(kept)]
    for deg in np.arange(0.0, 90.0, YAW_STEP_DEG):
        candidates.append(_yaw_rotation(np.deg2rad(deg)))

    fits = []
    for rotation in candidates:
        center, extents, volume, surface = _box_from_rotation(kept, rotation)
        fits.append((center, extents, rotation, volume, surface))
    min_volume = min(f[3] for f in fits)
    near_minimal = [f for f in fits if f[3] <= min_volume * (1.0 + VOLUME_TIE_TOLERANCE)]
    center, extents, rotation, _, _ = min(near_minimal, key=lambda f: f[4])

    # Guarantee the containment contract over the untrimmed point set.
    local = (points - center) @ rotation
    half = extents / 2.0
    violation = (np.abs(local) - half).max(axis=1)
    rank = int(np.ceil(CONTAINMENT_FRACTION * len(points))) - 1
    allowed = np.partition(violation, rank)[rank]
    if allowed > 0:
        half = half + allowed
        extents = 2.0 * half

    degenerate = bool((extents < MIN_EXTENT).any())
    extents = np.maximum(extents, MIN_EXTENT)
    return OrientedBox3D(center=center, extents=extents, rotation=rotation, degenerate=degenerate)


def fit_oriented_box3d(
    mask: RegionMask, depth: DepthMap, cam: CameraModel
) -> OrientedBox3D:
    """Minimum-volume oriented box over the masked, unprojected depth pixels."""
    points = unproject(mask, depth, cam)
    if len(points) < MIN_FIT_POINTS:
        raise CodecError(
            f"oriented-box fit needs >= {MIN_FIT_POINTS} masked depth pixels, got {len(points)}"
        )
    return fit_box_to_points(points)


def render_obox_control(
    box: OrientedBox3D, cam: CameraModel, canvas: tuple[int, int]
) -> tuple[RegionMask, DepthMap]:
    """Project a box: silhouette mask plus per-pixel depth of the nearest visible face.

    Pixels are ray-cast through the pinhole model; a partially clipped box
    renders only its on-screen portion. A box entirely behind the camera is
    an error.
    """
    if box.corners()[:, 2].max() <= 0:
        raise CodecError("box is entirely behind the camera")
    width, height = canvas
    cols, rows = np.meshgrid(np.arange(width), np.arange(height))
    # Ray directions with dir_z = 1, so the ray parameter equals camera z-depth.
    dirs = np.stack(
        [(cols - cam.cx) / cam.fx, (rows - cam.cy) / cam.fy, np.ones_like(cols, dtype=np.float64)],
        axis=-1,
    )
    origin_local = box.rotation.T @ (-box.center)
    dirs_local = dirs @ box.rotation  # (H, W, 3), row vector form of R^T d
    half = box.extents / 2.0

    t_enter = np.full((height, width), -np.inf)
    t_exit = np.full((height, width), np.inf)
    hit = np.ones((height, width), dtype=bool)
    for axis in range(3):
        d = dirs_local[..., axis]
        o = origin_local[axis]
        with np.errstate(divide="ignore", invalid="ignore"):
            t1 = (-half[axis] - o) / d
            t2 = (half[axis] - o) / d
        near = np.minimum(t1, t2)
        far = np.maximum(t1, t2)
        parallel = np.abs(d) < 1e-12
        inside_slab = np.abs(o) <= half[axis]
        hit &= ~parallel | inside_slab
        near = np.where(parallel, -np.inf, near)
        far = np.where(parallel, np.inf, far)
        t_enter = np.maximum(t_enter, near)
        t_exit = np.minimum(t_exit, far)

    hit &= (t_enter <= t_exit) & (t_exit > 0)
    t_surface = np.where(t_enter > 0, t_enter, t_exit)  # camera inside: exit face
    depth_values = np.where(hit, t_surface, 0.0)
    return RegionMask(hit), DepthMap(depth_values, hit)


def project_box2d(box: OrientedBox3D, cam: CameraModel, canvas: tuple[int, int]) -> Box2D:
    """Tight image-space box around the rendered silhouette."""
    mask, _ = render_obox_control(box, cam, canvas)
    if mask.is_empty():
        raise CodecError("box projects entirely off-canvas")
    from scenegen.controls.boxes2d import fit_box2d

    return fit_box2d(mask)
