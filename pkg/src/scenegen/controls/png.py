"""PNG serialization for control images and identity sheets.

One writer path is used everywhere (tests, CLI, service) so that golden-file
byte comparisons are meaningful.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
from PIL import Image

from scenegen.controls.types import IdentitySheet, RegionMask, RoutingImage, SpatialControlImage
from scenegen.errors import CorruptDataError


def encode_png(array: np.ndarray) -> bytes:
    """Deterministic PNG bytes for a uint8 grayscale or RGB array."""
    array = np.asarray(array, dtype=np.uint8)
    mode = "L" if array.ndim == 2 else "RGB"
    buf = io.BytesIO()
    Image.fromarray(array, mode=mode).save(buf, format="PNG", optimize=False)
    return buf.getvalue()


def decode_png(data: bytes) -> np.ndarray:
    with Image.open(io.BytesIO(data)) as img:
        return np.asarray(img.convert("RGB") if img.mode not in ("L", "RGB") else img)


def save_png(array: np.ndarray, path: str | Path) -> None:
    Path(path).write_bytes(encode_png(array))


def load_png(path: str | Path) -> np.ndarray:
    return decode_png(Path(path).read_bytes())


def routing_to_png(img: RoutingImage) -> bytes:
    return encode_png(img.values)


def spatial_control_to_png(control: SpatialControlImage) -> bytes:
    """RGB packing with (R, G, B) = (ascending, descending, depth8)."""
    return encode_png(control.to_array())


def spatial_control_from_png(data: bytes) -> SpatialControlImage:
    array = decode_png(data)
    if array.ndim != 3 or array.shape[2] != 3:
        raise CorruptDataError("spatial control PNG must be RGB")
    return SpatialControlImage(
        asc=RoutingImage(array[..., 0]),
        dsc=RoutingImage(array[..., 1]),
        depth8=array[..., 2],
    )


def sheet_to_png(sheet: IdentitySheet) -> bytes:
    return encode_png(sheet.pixels)


def sheet_from_png(data: bytes, slot_height: int, slot_width: int) -> IdentitySheet:
    pixels = decode_png(data)
    if pixels.ndim != 3 or pixels.shape[2] != 3:
        raise CorruptDataError("identity sheet PNG must be RGB")
    if pixels.shape[1] != slot_width or pixels.shape[0] % slot_height != 0:
        raise CorruptDataError(
            f"sheet of shape {pixels.shape} does not divide into "
            f"{slot_height}x{slot_width} slots"
        )
    return IdentitySheet(
        pixels=pixels,
        slot_height=slot_height,
        slot_width=slot_width,
        count=pixels.shape[0] // slot_height,
    )


def mask_to_png(mask: RegionMask) -> bytes:
    return encode_png(mask.bits.astype(np.uint8) * 255)


def mask_from_png(data: bytes) -> RegionMask:
    array = decode_png(data)
    if array.ndim == 3:
        array = array[..., 0]
    return RegionMask(array > 127)
