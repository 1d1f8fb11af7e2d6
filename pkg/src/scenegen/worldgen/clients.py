"""External-model client interfaces with deterministic procedural backends.

The real pipeline would call an LLM captioner, a text-to-image model, a
grounded segmenter, a depth estimator, and a reposing model. Each client
here is an interface whose procedural default consumes privileged `hints`
(ground truth from the renderer) so the whole pipeline runs offline and
deterministically; a real backend would ignore `hints` and must be
deterministic given (input, seed).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

import numpy as np
from PIL import Image
from scipy import ndimage

from scenegen.controls import DepthMap, RegionMask
from scenegen.worldgen.render import render_target
from scenegen.worldgen.scenes import SceneSpec, compose_captions


class Captioner(Protocol):
    def captions(self, spec: SceneSpec) -> tuple[str, str, list[str]]:
        """(full_caption, background_caption, per-subject captions)."""


class ImageGenerator(Protocol):
    def generate(self, spec: SceneSpec) -> tuple[np.ndarray, list[RegionMask], DepthMap]:
        """Target image plus privileged ground truth (visible masks, depth)."""


class Grounder(Protocol):
    def segment(
        self,
        image: np.ndarray,
        subject_captions: list[str],
        hints: dict,
        rng: np.random.Generator,
    ) -> list[RegionMask]: ...


class DepthEstimator(Protocol):
    def estimate(self, image: np.ndarray, hints: dict) -> DepthMap: ...


class Reposer(Protocol):
    def repose(self, crop: np.ndarray, rng: np.random.Generator) -> np.ndarray: ...


class ProceduralCaptioner:
    def captions(self, spec: SceneSpec) -> tuple[str, str, list[str]]:
        full, bg = compose_captions(spec.subjects, spec.background)
        return full, bg, [s.caption for s in spec.subjects]


class ProceduralImageGenerator:
    def generate(self, spec: SceneSpec):
        return render_target(spec)


class ProceduralGrounder:
    """Returns ground-truth masks perturbed by <= 1 px of dilation noise."""

    def __init__(self, noise: bool = True):
        self.noise = noise

    def segment(self, image, subject_captions, hints, rng):
        masks = hints["masks"]
        if not self.noise:
            return list(masks)
        out = []
        for mask in masks:
            if rng.random() < 0.5 and not mask.is_empty():
                out.append(RegionMask(ndimage.binary_dilation(mask.bits)))
            else:
                out.append(mask)
        return out


class ProceduralDepthEstimator:
    def estimate(self, image, hints):
        return hints["depth"]


@dataclass(frozen=True)
class ReposeConfig:
    max_rotation_deg: float = 45.0
    scale_range: tuple[float, float] = (0.7, 1.3)
    brightness_range: tuple[float, float] = (0.8, 1.2)

    @classmethod
    def zero_strength(cls) -> "ReposeConfig":
        return cls(max_rotation_deg=0.0, scale_range=(1.0, 1.0), brightness_range=(1.0, 1.0))


class ProceduralReposer:
    """Pose/lighting proxy: rotation, rescale, and brightness on the crop.

    Nearest-neighbour resampling keeps edges hard, so the identity
    attributes (shape class, color, pattern) survive classification.
    """

    def __init__(self, config: ReposeConfig = ReposeConfig()):
        self.config = config

    def repose(self, crop: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        crop = np.asarray(crop, dtype=np.uint8)
        if crop.size == 0:
            raise ValueError("cannot repose an empty crop")
        cfg = self.config
        angle = float(rng.uniform(-cfg.max_rotation_deg, cfg.max_rotation_deg))
        scale = float(rng.uniform(*cfg.scale_range))
        brightness = float(rng.uniform(*cfg.brightness_range))
        out = crop
        if angle != 0.0:
            img = Image.fromarray(out).rotate(
                angle, resample=Image.Resampling.NEAREST, expand=True, fillcolor=(255, 255, 255)
            )
            out = np.asarray(img)
        if scale != 1.0:
            h, w = out.shape[:2]
            nh, nw = max(1, round(h * scale)), max(1, round(w * scale))
            img = Image.fromarray(out).resize((nw, nh), Image.Resampling.NEAREST)
            out = np.asarray(img)
        if brightness != 1.0:
            out = np.clip(np.round(out.astype(np.float64) * brightness), 0, 255).astype(np.uint8)
        return np.ascontiguousarray(out)


@dataclass
class ExternalClients:
    captioner: Captioner
    image_generator: ImageGenerator
    grounder: Grounder
    depth_estimator: DepthEstimator
    reposer: Reposer

    @classmethod
    def procedural(cls, grounding_noise: bool = True, repose: ReposeConfig | None = None):
        return cls(
            captioner=ProceduralCaptioner(),
            image_generator=ProceduralImageGenerator(),
            grounder=ProceduralGrounder(noise=grounding_noise),
            depth_estimator=ProceduralDepthEstimator(),
            reposer=ProceduralReposer(repose or ReposeConfig()),
        )
