import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scenegen.controls import (
    Box2D,
    CameraModel,
    DepthMap,
    RegionMask,
    RoutingImage,
    assemble_spatial_control,
    box2d_to_region,
    build_routing_pair,
    disassemble_spatial_control,
    fit_box2d,
)
from scenegen.errors import CodecError


def brute_force_box(bits):
    """Oracle: exhaustive pixel scan for the minimal cover."""
    x0 = y0 = 10**9
    x1 = y1 = -1
    for r in range(bits.shape[0]):
        for c in range(bits.shape[1]):
            if bits[r, c]:
                x0 = min(x0, c)
                y0 = min(y0, r)
                x1 = max(x1, c + 1)
                y1 = max(y1, r + 1)
    return (x0, y0, x1, y1)


class TestFitBox2d:
    def test_single_pixel(self):
        bits = np.zeros((16, 16), dtype=bool)
        bits[7, 5] = True
        assert fit_box2d(RegionMask(bits)) == Box2D(5, 7, 6, 8)

    def test_full_canvas(self):
        assert fit_box2d(RegionMask(np.ones((12, 20), dtype=bool))) == Box2D(0, 0, 20, 12)

    def test_l_shape_brute_force(self):
        bits = np.zeros((20, 20), dtype=bool)
        bits[3:15, 4:7] = True
        bits[12:15, 4:17] = True
        box = fit_box2d(RegionMask(bits))
        assert (box.x0, box.y0, box.x1, box.y1) == brute_force_box(bits)

    def test_empty_rejected(self):
        with pytest.raises(CodecError):
            fit_box2d(RegionMask.empty(8, 8))

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 100_000))
    def test_random_masks_match_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        bits = rng.random((14, 14)) < 0.15
        if not bits.any():
            bits[rng.integers(14), rng.integers(14)] = True
        box = fit_box2d(RegionMask(bits))
        assert (box.x0, box.y0, box.x1, box.y1) == brute_force_box(bits)


class TestBox2dToRegion:
    def test_round_trip(self):
        box = Box2D(3, 5, 9, 11)
        assert fit_box2d(box2d_to_region(box, (16, 16))) == box

    def test_single_pixel_box(self):
        mask = box2d_to_region(Box2D(4, 4, 5, 5), (8, 8))
        assert mask.area() == 1 and mask.bits[4, 4]

    def test_degenerate_rejected(self):
        with pytest.raises(CodecError):
            Box2D(4, 4, 4, 5)

    def test_outside_canvas_rejected(self):
        with pytest.raises(CodecError):
            box2d_to_region(Box2D(0, 0, 9, 4), (8, 8))

    def test_overlapping_boxes_follow_painter_order(self):
        a = box2d_to_region(Box2D(0, 0, 6, 6), (8, 8))
        b = box2d_to_region(Box2D(3, 3, 8, 8), (8, 8))
        asc, dsc = build_routing_pair([a, b])
        assert asc.values[4, 4] == 20
        assert dsc.values[4, 4] == 10


class TestSpatialControl:
    def test_precise_masks_equal_channels(self):
        bits = np.zeros((8, 8), dtype=bool)
        bits[2:5, 2:5] = True
        asc, dsc = build_routing_pair([RegionMask(bits)])
        control = assemble_spatial_control(asc, dsc, np.zeros((8, 8), dtype=np.uint8))
        assert np.array_equal(control.asc.values, control.dsc.values)

    def test_zero_depth_channel_allowed(self):
        asc, dsc = build_routing_pair([], canvas=(8, 8))
        control = assemble_spatial_control(asc, dsc, np.zeros((8, 8), dtype=np.uint8))
        assert not control.depth8.any()

    def test_round_trip(self):
        rng = np.random.default_rng(0)
        asc = RoutingImage((rng.integers(0, 3, (8, 8)) * 10).astype(np.uint8))
        dsc = RoutingImage((rng.integers(0, 3, (8, 8)) * 10).astype(np.uint8))
        depth8 = rng.integers(0, 255, (8, 8)).astype(np.uint8)
        a, d, t = disassemble_spatial_control(assemble_spatial_control(asc, dsc, depth8))
        assert np.array_equal(a.values, asc.values)
        assert np.array_equal(d.values, dsc.values)
        assert np.array_equal(t, depth8)

    def test_shape_mismatch_rejected(self):
        asc, dsc = build_routing_pair([], canvas=(8, 8))
        with pytest.raises(CodecError):
            assemble_spatial_control(asc, dsc, np.zeros((9, 8), dtype=np.uint8))


def test_camera_requires_positive_focal():
    with pytest.raises(CodecError):
        CameraModel(fx=0, fy=1, cx=0, cy=0)


def test_depthmap_rejects_negative_valid_pixels():
    with pytest.raises(CodecError):
        DepthMap(np.full((4, 4), -1.0), np.ones((4, 4), dtype=bool))
