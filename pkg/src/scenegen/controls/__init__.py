"""Control-image codec: routing, identity sheets, depth, boxes, spatial packing."""

from scenegen.controls.boxes2d import box2d_to_region, fit_box2d
from scenegen.controls.boxes3d import fit_oriented_box3d, render_obox_control, unproject
from scenegen.controls.depth import mask_depth_to_subjects, quantize_depth
from scenegen.controls.routing import build_routing_pair, decode_routing, intensity_of, slot_of
from scenegen.controls.sheet import DEFAULT_SLOT_SIZE, build_identity_sheet, resize_sheet_slots
from scenegen.controls.spatial import assemble_spatial_control, disassemble_spatial_control
from scenegen.controls.types import (
    INTENSITY_STEP,
    MAX_SLOTS,
    MIN_EXTENT,
    Box2D,
    CameraModel,
    DepthMap,
    IdentitySheet,
    OrientedBox3D,
    RegionMask,
    RoutingImage,
    SpatialControlImage,
)

__all__ = [
    "INTENSITY_STEP",
    "MAX_SLOTS",
    "MIN_EXTENT",
    "DEFAULT_SLOT_SIZE",
    "Box2D",
    "CameraModel",
    "DepthMap",
    "IdentitySheet",
    "OrientedBox3D",
    "RegionMask",
    "RoutingImage",
    "SpatialControlImage",
    "assemble_spatial_control",
    "box2d_to_region",
    "build_identity_sheet",
    "build_routing_pair",
    "decode_routing",
    "disassemble_spatial_control",
    "fit_box2d",
    "fit_oriented_box3d",
    "intensity_of",
    "mask_depth_to_subjects",
    "quantize_depth",
    "render_obox_control",
    "resize_sheet_slots",
    "slot_of",
    "unproject",
]
