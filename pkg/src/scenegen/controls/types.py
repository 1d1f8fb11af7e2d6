"""Core raster and geometry types used by the control-image codec.

All raster types wrap plain numpy arrays and validate their invariants on
construction. They are treated as immutable: operations return new objects
and never write into an input array.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from scenegen.errors import CodecError

# Routing intensity step: slot i is painted with value 10*i, so an 8-bit
# channel can address at most 25 slots.
INTENSITY_STEP = 10
MAX_SLOTS = 255 // INTENSITY_STEP


@dataclass(frozen=True)
class RegionMask:
    """Binary occupancy grid for one subject's spatial region."""

    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=bool)
        if bits.ndim != 2:
            raise CodecError(f"mask must be 2-D, got shape {bits.shape}")
        object.__setattr__(self, "bits", bits)

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.bits.shape

    def area(self) -> int:
        return int(self.bits.sum())

    def is_empty(self) -> bool:
        return not self.bits.any()

    @classmethod
    def empty(cls, width: int, height: int) -> "RegionMask":
        return cls(np.zeros((height, width), dtype=bool))


@dataclass(frozen=True)
class RoutingImage:
    """Single-channel 8-bit image assigning each pixel to a subject slot.

    Value 0 is background; nonzero values are multiples of INTENSITY_STEP.
    """

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 2:
            raise CodecError(f"routing image must be 2-D, got shape {values.shape}")
        if values.dtype != np.uint8:
            if values.min(initial=0) < 0 or values.max(initial=0) > 255:
                raise CodecError("routing values outside 8-bit range")
            values = values.astype(np.uint8)
        object.__setattr__(self, "values", values)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


@dataclass(frozen=True)
class DepthMap:
    """Per-pixel scene depth with an explicit validity mask.

    Valid pixels are finite and >= 0; invalid pixels carry no information
    (their stored value is forced to 0).
    """

    values: np.ndarray
    valid: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        valid = np.asarray(self.valid, dtype=bool)
        if values.ndim != 2 or values.shape != valid.shape:
            raise CodecError(
                f"depth/validity shape mismatch: {values.shape} vs {valid.shape}"
            )
        masked = values[valid]
        if masked.size and (not np.isfinite(masked).all() or (masked < 0).any()):
            raise CodecError("valid depth pixels must be finite and >= 0")
        values = np.where(valid, values, 0.0)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "valid", valid)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @classmethod
    def full(cls, values: np.ndarray) -> "DepthMap":
        values = np.asarray(values, dtype=np.float64)
        return cls(values, np.ones_like(values, dtype=bool))

    @classmethod
    def invalid(cls, width: int, height: int) -> "DepthMap":
        return cls(np.zeros((height, width)), np.zeros((height, width), dtype=bool))


@dataclass(frozen=True)
class IdentitySheet:
    """Vertical stack of fixed-size subject images; slot order defines routing intensity."""

    pixels: np.ndarray
    slot_height: int
    slot_width: int
    count: int

    def __post_init__(self):
        pixels = np.asarray(self.pixels)
        if pixels.dtype != np.uint8:
            pixels = pixels.astype(np.uint8)
        if pixels.ndim != 3 or pixels.shape[2] != 3:
            raise CodecError(f"sheet must be HxWx3, got {pixels.shape}")
        if self.count < 1 or self.count > MAX_SLOTS:
            raise CodecError(f"sheet slot count must be in [1, {MAX_SLOTS}], got {self.count}")
        expect = (self.count * self.slot_height, self.slot_width, 3)
        if pixels.shape != expect:
            raise CodecError(f"sheet shape {pixels.shape} != expected {expect}")
        object.__setattr__(self, "pixels", pixels)

    def slot(self, index: int) -> np.ndarray:
        """Pixels of 1-based slot `index`."""
        if not 1 <= index <= self.count:
            raise CodecError(f"slot {index} out of range 1..{self.count}")
        r0 = (index - 1) * self.slot_height
        return self.pixels[r0 : r0 + self.slot_height]


@dataclass(frozen=True)
class SpatialControlImage:
    """3-channel control: (ascending routing, descending routing, quantized depth)."""

    asc: RoutingImage
    dsc: RoutingImage
    depth8: np.ndarray

    def __post_init__(self):
        depth8 = np.asarray(self.depth8)
        if depth8.dtype != np.uint8:
            depth8 = depth8.astype(np.uint8)
        if not (self.asc.shape == self.dsc.shape == depth8.shape):
            raise CodecError(
                "spatial control channels disagree: "
                f"{self.asc.shape}, {self.dsc.shape}, {depth8.shape}"
            )
        object.__setattr__(self, "depth8", depth8)

    @property
    def shape(self) -> tuple[int, int]:
        return self.asc.shape

    def to_array(self) -> np.ndarray:
        """(H, W, 3) uint8 with channels (asc, dsc, depth8)."""
        return np.stack([self.asc.values, self.dsc.values, self.depth8], axis=-1)


@dataclass(frozen=True)
class Box2D:
    """Axis-aligned pixel box, half-open: [x0, x1) x [y0, y1)."""

    x0: int
    y0: int
    x1: int
    y1: int

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise CodecError(f"degenerate box {self}")
        if self.x0 < 0 or self.y0 < 0:
            raise CodecError(f"box {self} extends outside the canvas")

    @property
    def width(self) -> int:
        return self.x1 - self.x0

    @property
    def height(self) -> int:
        return self.y1 - self.y0

    def area(self) -> int:
        return self.width * self.height


ROTATION_TOL = 1e-6
MIN_EXTENT = 1e-3  # clamp for rank-deficient point sets


@dataclass(frozen=True)
class OrientedBox3D:
    """Oriented 3-D box: center, full side lengths, and a rotation whose
    columns are the box axes in camera coordinates."""

    center: np.ndarray
    extents: np.ndarray
    rotation: np.ndarray
    degenerate: bool = field(default=False)

    def __post_init__(self):
        center = np.asarray(self.center, dtype=np.float64).reshape(3)
        extents = np.asarray(self.extents, dtype=np.float64).reshape(3)
        rotation = np.asarray(self.rotation, dtype=np.float64).reshape(3, 3)
        if (extents <= 0).any():
            raise CodecError(f"box extents must be positive, got {extents}")
        if not np.allclose(rotation @ rotation.T, np.eye(3), atol=ROTATION_TOL):
            raise CodecError("box rotation is not orthonormal")
        if np.linalg.det(rotation) < 0:
            raise CodecError("box rotation must have determinant +1")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "extents", extents)
        object.__setattr__(self, "rotation", rotation)

    def corners(self) -> np.ndarray:
        """(8, 3) corner coordinates in camera space."""
        half = self.extents / 2.0
        signs = np.array(
            [[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)],
            dtype=np.float64,
        )
        return self.center + (signs * half) @ self.rotation.T

    def volume(self) -> float:
        return float(np.prod(self.extents))


@dataclass(frozen=True)
class CameraModel:
    """Pinhole intrinsics used to unproject depth and render box controls."""

    fx: float
    fy: float
    cx: float
    cy: float

    def __post_init__(self):
        if self.fx <= 0 or self.fy <= 0:
            raise CodecError("focal lengths must be positive")

    @classmethod
    def default_for_canvas(cls, width: int, height: int) -> "CameraModel":
        # ~45 degree horizontal FOV, principal point at the pixel-center middle
        return cls(fx=1.2 * width, fy=1.2 * width, cx=(width - 1) / 2.0, cy=(height - 1) / 2.0)
