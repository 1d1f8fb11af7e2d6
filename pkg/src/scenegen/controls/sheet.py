"""Identity sheets: fixed-size subject images stacked along the height axis."""

from __future__ import annotations

import numpy as np
from PIL import Image

from scenegen.controls.types import MAX_SLOTS, IdentitySheet
from scenegen.errors import CodecError

DEFAULT_SLOT_SIZE = (64, 64)  # (H', W')


def resize_with_pad(image: np.ndarray, slot_size: tuple[int, int]) -> np.ndarray:
    """Aspect-preserving resize, then center-pad with black to (H', W')."""
    target_h, target_w = slot_size
    image = np.asarray(image, dtype=np.uint8)
    if image.ndim != 3 or image.shape[2] != 3:
        raise CodecError(f"subject image must be HxWx3, got {image.shape}")
    h, w = image.shape[:2]
    if h == 0 or w == 0:
        raise CodecError("subject image is empty")
    scale = min(target_h / h, target_w / w)
    new_h = max(1, round(h * scale))
    new_w = max(1, round(w * scale))
    if (new_h, new_w) != (h, w):
        resized = Image.fromarray(image).resize((new_w, new_h), Image.Resampling.BILINEAR)
        image = np.asarray(resized, dtype=np.uint8)
    out = np.zeros((target_h, target_w, 3), dtype=np.uint8)
    top = (target_h - new_h) // 2
    left = (target_w - new_w) // 2
    out[top : top + new_h, left : left + new_w] = image
    return out


def build_identity_sheet(
    images: list[np.ndarray], slot_size: tuple[int, int] = DEFAULT_SLOT_SIZE
) -> IdentitySheet:
    """Stack subject images top-to-bottom; slot i pairs with routing intensity 10*i."""
    if not images:
        raise CodecError("identity sheet needs at least one subject image")
    if len(images) > MAX_SLOTS:
        raise CodecError(f"{len(images)} subjects exceed the {MAX_SLOTS}-slot ceiling")
    slot_h, slot_w = slot_size
    slots = [resize_with_pad(img, (slot_h, slot_w)) for img in images]
    return IdentitySheet(
        pixels=np.concatenate(slots, axis=0),
        slot_height=slot_h,
        slot_width=slot_w,
        count=len(images),
    )


def resize_sheet_slots(sheet: IdentitySheet, slot_size: tuple[int, int]) -> IdentitySheet:
    """Rebuild a sheet at a different slot resolution (used by model configs)."""
    return build_identity_sheet([sheet.slot(i) for i in range(1, sheet.count + 1)], slot_size)
