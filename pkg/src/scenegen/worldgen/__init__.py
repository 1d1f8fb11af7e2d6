"""Synthetic dataset pipeline: procedural scenes with full labels."""

from __future__ import annotations

import numpy as np

from scenegen.worldgen.attributes import (
    BACKGROUNDS,
    COLORS,
    DEPTH_LAYERS,
    PATTERNS,
    SHAPES,
    Identity,
    extract_attributes,
)
from scenegen.worldgen.clients import ExternalClients, ReposeConfig
from scenegen.worldgen.records import TrainingRecord, build_training_record, filter_subjects
from scenegen.worldgen.render import render_target
from scenegen.worldgen.scenes import PipelineConfig, SceneSpec, SubjectSpec, generate_scene_spec
from scenegen.worldgen.store import export_dataset, import_dataset, import_record, validate_dataset


def record_seed(dataset_seed: int, index: int) -> int:
    """Stable per-record scene seed derived from (dataset seed, index)."""
    ss = np.random.SeedSequence([int(dataset_seed), int(index)])
    return int(ss.generate_state(1, np.uint64)[0] & 0x7FFFFFFFFFFFFFFF)


def build_record(
    dataset_seed: int,
    index: int,
    config: PipelineConfig = PipelineConfig(),
    clients: ExternalClients | None = None,
) -> TrainingRecord | None:
    """One pipeline pass: spec -> render -> ground -> filter -> record."""
    clients = clients or ExternalClients.procedural(grounding_noise=config.grounding_noise)
    seed = record_seed(dataset_seed, index)
    spec = generate_scene_spec(seed, config, scene_id=f"r{index:06d}")
    rendered = clients.image_generator.generate(spec)
    rng = np.random.default_rng(np.random.SeedSequence([int(dataset_seed), int(index), 1]))
    return build_training_record(spec, rendered, clients, config, rng)


def build_dataset(
    dataset_seed: int,
    count: int,
    config: PipelineConfig = PipelineConfig(),
    clients: ExternalClients | None = None,
) -> list[TrainingRecord]:
    """`count` accepted records; rejected samples are skipped, not retried,
    so the subject-count distribution is exactly the sampling distribution."""
    records = []
    for index in range(count):
        record = build_record(dataset_seed, index, config, clients)
        if record is not None:
            records.append(record)
    return records


__all__ = [
    "BACKGROUNDS",
    "COLORS",
    "DEPTH_LAYERS",
    "PATTERNS",
    "SHAPES",
    "ExternalClients",
    "Identity",
    "PipelineConfig",
    "ReposeConfig",
    "SceneSpec",
    "SubjectSpec",
    "TrainingRecord",
    "build_dataset",
    "build_record",
    "build_training_record",
    "export_dataset",
    "extract_attributes",
    "filter_subjects",
    "generate_scene_spec",
    "import_dataset",
    "import_record",
    "record_seed",
    "render_target",
    "validate_dataset",
]
