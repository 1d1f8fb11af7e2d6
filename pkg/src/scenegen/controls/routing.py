"""Routing control images: painting subject regions to unique intensities.

A routing image maps every pixel to the subject occupying it (value
10*slot) or to background (0). Overlaps are resolved painter-style, and the
two composite orders (ascending / descending slot order) together keep every
subject at least partially visible whenever it is topmost in one order.
"""

from __future__ import annotations

import numpy as np

from scenegen.controls.types import INTENSITY_STEP, MAX_SLOTS, RegionMask, RoutingImage
from scenegen.errors import CodecError, CorruptDataError


def intensity_of(slot_index: int) -> int:
    """8-bit intensity for a 1-based subject slot (10, 20, ...)."""
    if not 1 <= slot_index <= MAX_SLOTS:
        raise CodecError(
            f"slot {slot_index} out of range: at most {MAX_SLOTS} subjects fit "
            f"an 8-bit routing channel at intensity step {INTENSITY_STEP}"
        )
    return INTENSITY_STEP * slot_index


def slot_of(intensity: int) -> int:
    """Inverse of intensity_of. 0 is background and has no slot."""
    if intensity == 0 or intensity % INTENSITY_STEP != 0 or intensity > INTENSITY_STEP * MAX_SLOTS:
        raise CorruptDataError(f"invalid routing intensity {intensity}")
    return intensity // INTENSITY_STEP


def build_routing_pair(
    regions: list[RegionMask], canvas: tuple[int, int] | None = None
) -> tuple[RoutingImage, RoutingImage]:
    """Paint regions in ascending and descending slot order.

    Ascending paints slots 1..N so the last (highest) slot wins overlaps;
    descending paints N..1 so slot 1 wins. Returns (asc, dsc). An empty
    region list yields an all-background pair, in which case `canvas`
    (width, height) must be given.
    """
    if len(regions) > MAX_SLOTS:
        raise CodecError(f"{len(regions)} regions exceed the {MAX_SLOTS}-slot ceiling")
    if not regions:
        if canvas is None:
            raise CodecError("empty region list needs an explicit canvas size")
        width, height = canvas
        zero = RoutingImage(np.zeros((height, width), dtype=np.uint8))
        return zero, zero
    shape = regions[0].shape
    if canvas is not None and shape != (canvas[1], canvas[0]):
        raise CodecError(f"regions of shape {shape} do not match canvas {canvas}")
    for i, region in enumerate(regions):
        if region.shape != shape:
            raise CodecError(
                f"region {i + 1} shape {region.shape} != canvas shape {shape}"
            )
    asc = np.zeros(shape, dtype=np.uint8)
    dsc = np.zeros(shape, dtype=np.uint8)
    for slot, region in enumerate(regions, start=1):
        asc[region.bits] = intensity_of(slot)
    for slot in range(len(regions), 0, -1):
        dsc[regions[slot - 1].bits] = intensity_of(slot)
    return RoutingImage(asc), RoutingImage(dsc)


def decode_routing(img: RoutingImage) -> dict[int, RegionMask]:
    """Map each nonzero intensity back to its slot's region mask.

    The decoded masks plus background partition the canvas. Raises on any
    value that is not a multiple of the intensity step.
    """
    values = img.values
    out: dict[int, RegionMask] = {}
    for value in np.unique(values):
        if value == 0:
            continue
        slot = slot_of(int(value))
        out[slot] = RegionMask(values == value)
    return out
