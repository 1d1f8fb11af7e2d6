"""Filtering and assembly of training records."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from scenegen.controls import (
    Box2D,
    CameraModel,
    DepthMap,
    IdentitySheet,
    OrientedBox3D,
    RegionMask,
    build_identity_sheet,
    fit_box2d,
    fit_oriented_box3d,
)
from scenegen.worldgen.attributes import Identity
from scenegen.worldgen.clients import ExternalClients
from scenegen.worldgen.scenes import PipelineConfig, SceneSpec, SubjectSpec, compose_captions

MIN_AREA_FRACTION = 0.01
MAX_AREA_FRACTION = 0.40
DUPLICATE_IOU = 0.9
MIN_SURVIVORS = 3
CROP_MARGIN = 1
# Crops are reposed at 3x working resolution (pixel duplication) so the
# rotate/rescale augmentations cannot alias attributes away.
CROP_UPSCALE = 3


@dataclass
class FilterOutcome:
    kept: list[int]
    removed: dict[int, str] = field(default_factory=dict)

    @property
    def rejected(self) -> bool:
        return len(self.kept) < MIN_SURVIVORS


def mask_iou(a: RegionMask, b: RegionMask) -> float:
    union = (a.bits | b.bits).sum()
    if union == 0:
        return 0.0
    return float((a.bits & b.bits).sum() / union)


def filter_subjects(masks: list[RegionMask], canvas: tuple[int, int]) -> FilterOutcome:
    """Area and duplicate filtering; rejection (a valid outcome) when fewer
    than MIN_SURVIVORS masks survive."""
    width, height = canvas
    total = float(width * height)
    outcome = FilterOutcome(kept=[])
    for i, mask in enumerate(masks):
        fraction = mask.area() / total
        if fraction < MIN_AREA_FRACTION:
            outcome.removed[i] = f"area fraction {fraction:.4f} < {MIN_AREA_FRACTION}"
        elif fraction > MAX_AREA_FRACTION:
            outcome.removed[i] = f"area fraction {fraction:.4f} > {MAX_AREA_FRACTION}"
    survivors = [i for i in range(len(masks)) if i not in outcome.removed]
    kept: list[int] = []
    for i in survivors:
        dup_of = next((j for j in kept if mask_iou(masks[i], masks[j]) > DUPLICATE_IOU), None)
        if dup_of is None:
            kept.append(i)
        else:
            outcome.removed[i] = f"duplicate of subject {dup_of + 1} (IoU > {DUPLICATE_IOU})"
    outcome.kept = kept
    return outcome


@dataclass
class TrainingRecord:
    scene_id: str
    canvas: tuple[int, int]
    image: np.ndarray
    masks: list[RegionMask]
    depth: DepthMap
    boxes2d: list[Box2D]
    boxes3d: list[OrientedBox3D]
    identity_sheet: IdentitySheet
    identities: list[Identity]
    subject_depths: list[float]
    full_caption: str
    background_caption: str
    subject_captions: list[str]
    background: str
    seed: int

    @property
    def subject_count(self) -> int:
        return len(self.masks)

    def camera(self) -> CameraModel:
        return CameraModel.default_for_canvas(*self.canvas)

    def union_mask(self) -> RegionMask:
        bits = np.zeros((self.canvas[1], self.canvas[0]), dtype=bool)
        for mask in self.masks:
            bits |= mask.bits
        return RegionMask(bits)


def crop_to_mask(
    image: np.ndarray, mask: RegionMask, margin: int = CROP_MARGIN, upscale: int = 1
) -> np.ndarray:
    box = fit_box2d(mask)
    h, w = image.shape[:2]
    y0 = max(0, box.y0 - margin)
    x0 = max(0, box.x0 - margin)
    y1 = min(h, box.y1 + margin)
    x1 = min(w, box.x1 + margin)
    crop = image[y0:y1, x0:x1]
    if upscale > 1:
        crop = np.kron(crop, np.ones((upscale, upscale, 1), dtype=np.uint8))
    return np.ascontiguousarray(crop)


def build_training_record(
    spec: SceneSpec,
    rendered: tuple[np.ndarray, list[RegionMask], DepthMap],
    clients: ExternalClients,
    config: PipelineConfig,
    rng: np.random.Generator,
) -> TrainingRecord | None:
    """Ground, filter, repose, and fit boxes; None when the sample is rejected.

    Grounded (noisy) masks drive the filter; surviving subjects keep their
    exact rendered masks so record invariants (disjoint, subset-of-layout)
    hold by construction.
    """
    image, gt_masks, gt_depth = rendered
    _, _, subject_captions = clients.captioner.captions(spec)
    grounded = clients.grounder.segment(image, subject_captions, {"masks": gt_masks}, rng)
    depth = clients.depth_estimator.estimate(image, {"depth": gt_depth})
    outcome = filter_subjects(grounded, spec.canvas)
    if outcome.rejected:
        return None

    kept_subjects: list[SubjectSpec] = [spec.subjects[i] for i in outcome.kept]
    kept_masks = [gt_masks[i] for i in outcome.kept]
    cam = CameraModel.default_for_canvas(*spec.canvas)
    identity_images = [
        clients.reposer.repose(crop_to_mask(image, mask, upscale=CROP_UPSCALE), rng)
        for mask in kept_masks
    ]
    sheet = build_identity_sheet(identity_images, config.identity_slot)
    boxes2d = [fit_box2d(mask) for mask in kept_masks]
    boxes3d = [fit_oriented_box3d(mask, depth, cam) for mask in kept_masks]
    full_caption, background_caption = compose_captions(kept_subjects, spec.background)
    return TrainingRecord(
        scene_id=spec.scene_id,
        canvas=spec.canvas,
        image=image,
        masks=kept_masks,
        depth=depth,
        boxes2d=boxes2d,
        boxes3d=boxes3d,
        identity_sheet=sheet,
        identities=[s.identity for s in kept_subjects],
        subject_depths=[s.depth for s in kept_subjects],
        full_caption=full_caption,
        background_caption=background_caption,
        subject_captions=[s.caption for s in kept_subjects],
        background=spec.background,
        seed=spec.seed,
    )
