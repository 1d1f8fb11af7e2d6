"""Scene specification sampling: identities, layout, captions, depth layers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from scenegen.errors import PipelineError
from scenegen.worldgen.attributes import BACKGROUNDS, DEPTH_LAYERS, Identity, all_identities


@dataclass(frozen=True)
class PipelineConfig:
    canvas: tuple[int, int] = (64, 64)
    min_subjects: int = 3
    max_subjects: int = 10
    identity_slot: tuple[int, int] = (48, 48)
    grounding_noise: bool = True

    def __post_init__(self):
        if not 1 <= self.min_subjects <= self.max_subjects <= 25:
            raise PipelineError(
                f"subject bounds ({self.min_subjects}, {self.max_subjects}) invalid"
            )


@dataclass(frozen=True)
class SubjectSpec:
    slot: int
    identity: Identity
    center: tuple[float, float]  # (x, y) pixels
    radius: float
    rotation_deg: float
    depth: float

    @property
    def caption(self) -> str:
        return self.identity.phrase()


@dataclass(frozen=True)
class SceneSpec:
    scene_id: str
    canvas: tuple[int, int]
    subjects: tuple[SubjectSpec, ...]
    background: str
    seed: int
    full_caption: str = field(default="")
    background_caption: str = field(default="")

    @property
    def subject_count(self) -> int:
        return len(self.subjects)


def _radius_range(n_subjects: int) -> tuple[float, float]:
    # floor 6.5: the attribute extractor's shape boundaries are calibrated
    # for radii >= 6.5
    if n_subjects <= 4:
        return (8.0, 11.0)
    if n_subjects <= 7:
        return (7.0, 9.0)
    return (6.5, 6.8)

_LATTICE_RADIUS = (6.5, 6.8)
_LATTICE_JITTER = 0.25


def _hex_lattice(width: float, height: float) -> list[tuple[float, float]]:
    """14 staggered cells inside the canvas margins; spacing fits radius 6.8
    subjects with >= 1 px silhouette gap after jitter."""
    ys = np.linspace(9.0, height - 9.0, 4)
    cells = []
    for row, y in enumerate(ys):
        if row % 2 == 0:
            xs = np.linspace(9.0, width - 9.0, 4)
        else:
            step = (width - 18.0) / 3.0
            xs = np.linspace(9.0 + step / 2, width - 9.0 - step / 2, 3)
        cells.extend((float(x), float(y)) for x in xs)
    return cells


def _sample_layout(rng: np.random.Generator, canvas, n: int, gap: float = 2.5):
    """Dart-throwing placement of non-overlapping circumcircles, falling back
    to a staggered lattice so every subject count succeeds deterministically."""
    width, height = canvas
    r_lo, r_hi = _radius_range(n)
    placed: list[tuple[float, float, float]] = []
    if n <= 7:
        for _ in range(n):
            radius = float(np.round(rng.uniform(r_lo, r_hi), 2))
            for _try in range(300):
                x = rng.uniform(radius + 1, width - radius - 2)
                y = rng.uniform(radius + 1, height - radius - 2)
                if all(
                    (x - px) ** 2 + (y - py) ** 2 >= (radius + pr + gap) ** 2
                    for px, py, pr in placed
                ):
                    placed.append((float(np.round(x, 2)), float(np.round(y, 2)), radius))
                    break
            else:
                break
        if len(placed) == n:
            return placed
    cells = _hex_lattice(width, height)
    order = rng.permutation(len(cells))[:n]
    placed = []
    for k in order:
        cx, cy = cells[int(k)]
        radius = float(np.round(rng.uniform(*_LATTICE_RADIUS), 2))
        x = float(np.round(cx + rng.uniform(-_LATTICE_JITTER, _LATTICE_JITTER), 2))
        y = float(np.round(cy + rng.uniform(-_LATTICE_JITTER, _LATTICE_JITTER), 2))
        placed.append((x, y, radius))
    return placed


def compose_captions(subjects, background: str) -> tuple[str, str]:
    bg_phrase = f"a {background} background"
    listed = ", ".join(s.caption for s in subjects)
    return f"{listed} on {bg_phrase}", bg_phrase


def generate_scene_spec(
    rng_seed: int, config: PipelineConfig = PipelineConfig(), scene_id: str | None = None
) -> SceneSpec:
    """Deterministic scene from a seed: subject count uniform in the bounds."""
    rng = np.random.default_rng(np.random.SeedSequence(rng_seed))
    n = int(rng.integers(config.min_subjects, config.max_subjects + 1))
    identity_pool = all_identities()
    picks = rng.choice(len(identity_pool), size=n, replace=False)
    layout = _sample_layout(rng, config.canvas, n)
    depths = rng.choice(len(DEPTH_LAYERS), size=n, replace=False)
    background = list(BACKGROUNDS)[int(rng.integers(len(BACKGROUNDS)))]
    subjects = tuple(
        SubjectSpec(
            slot=i + 1,
            identity=identity_pool[int(picks[i])],
            center=(layout[i][0], layout[i][1]),
            radius=layout[i][2],
            rotation_deg=float(np.round(rng.uniform(0.0, 360.0), 2)),
            depth=DEPTH_LAYERS[int(depths[i])],
        )
        for i in range(n)
    )
    full, bg = compose_captions(subjects, background)
    return SceneSpec(
        scene_id=scene_id if scene_id is not None else f"scene-{rng_seed:016x}",
        canvas=config.canvas,
        subjects=subjects,
        background=background,
        seed=rng_seed,
        full_caption=full,
        background_caption=bg,
    )
