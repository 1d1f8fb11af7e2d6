"""On-disk dataset layout and its exact inverse.

Each record lives in `{dataset}/{scene_id}/` as:
    target.png, depth.npy, masks/{slot}.png, identity_sheet.png,
    boxes.json, captions.json, meta.json
Export order is canonical (sorted by scene_id) and every writer is
deterministic, so equal (seed, config) builds are byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from scenegen.controls import Box2D, DepthMap, IdentitySheet, OrientedBox3D, RegionMask
from scenegen.controls.png import encode_png, load_png, mask_from_png, mask_to_png
from scenegen.errors import PipelineError
from scenegen.worldgen.attributes import Identity
from scenegen.worldgen.records import (
    MIN_SURVIVORS,
    TrainingRecord,
    filter_subjects,
)

SCHEMA_VERSION = 1


def _dump_json(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def export_record(record: TrainingRecord, record_dir: str | Path) -> None:
    record_dir = Path(record_dir)
    record_dir.mkdir(parents=True, exist_ok=True)
    (record_dir / "target.png").write_bytes(encode_png(record.image))
    with open(record_dir / "depth.npy", "wb") as fh:
        np.save(fh, record.depth.values.astype(np.float64), allow_pickle=False)
    masks_dir = record_dir / "masks"
    masks_dir.mkdir(exist_ok=True)
    for slot, mask in enumerate(record.masks, start=1):
        (masks_dir / f"{slot:02d}.png").write_bytes(mask_to_png(mask))
    (record_dir / "identity_sheet.png").write_bytes(encode_png(record.identity_sheet.pixels))
    _dump_json(
        {
            "box2d": [[b.x0, b.y0, b.x1, b.y1] for b in record.boxes2d],
            "box3d": [
                {
                    "center": b.center.tolist(),
                    "extents": b.extents.tolist(),
                    "rotation": b.rotation.reshape(-1).tolist(),
                    "degenerate": b.degenerate,
                }
                for b in record.boxes3d
            ],
        },
        record_dir / "boxes.json",
    )
    _dump_json(
        {
            "full": record.full_caption,
            "background": record.background_caption,
            "subjects": record.subject_captions,
        },
        record_dir / "captions.json",
    )
    _dump_json(
        {
            "schema_version": SCHEMA_VERSION,
            "scene_id": record.scene_id,
            "seed": record.seed,
            "canvas": list(record.canvas),
            "subject_count": record.subject_count,
            "background": record.background,
            "identities": [
                {"shape": i.shape, "color": i.color, "pattern": i.pattern}
                for i in record.identities
            ],
            "subject_depths": record.subject_depths,
            "slot_size": [record.identity_sheet.slot_height, record.identity_sheet.slot_width],
        },
        record_dir / "meta.json",
    )


def _require(path: Path, record_id: str, what: str) -> Path:
    if not path.exists():
        raise PipelineError(f"record {record_id}: missing {what} ({path.name})")
    return path


def import_record(record_dir: str | Path) -> TrainingRecord:
    record_dir = Path(record_dir)
    rid = record_dir.name
    meta = json.loads(_require(record_dir / "meta.json", rid, "meta").read_text())
    if meta.get("schema_version") != SCHEMA_VERSION:
        raise PipelineError(f"record {rid}: unsupported schema {meta.get('schema_version')}")
    canvas = tuple(meta["canvas"])
    width, height = canvas

    image = load_png(_require(record_dir / "target.png", rid, "target image"))
    if image.shape != (height, width, 3):
        raise PipelineError(f"record {rid}: target image shape {image.shape} != canvas {canvas}")
    depth_values = np.load(_require(record_dir / "depth.npy", rid, "depth raster"))
    if depth_values.shape != (height, width):
        raise PipelineError(f"record {rid}: depth shape {depth_values.shape} != canvas {canvas}")
    depth = DepthMap.full(depth_values)

    count = int(meta["subject_count"])
    masks = []
    for slot in range(1, count + 1):
        mpath = _require(record_dir / "masks" / f"{slot:02d}.png", rid, f"mask slot {slot}")
        mask = mask_from_png(mpath.read_bytes())
        if mask.shape != (height, width):
            raise PipelineError(
                f"record {rid}: mask slot {slot} shape {mask.shape} != canvas {canvas}"
            )
        masks.append(mask)

    slot_h, slot_w = meta["slot_size"]
    sheet_px = load_png(_require(record_dir / "identity_sheet.png", rid, "identity sheet"))
    if sheet_px.shape != (count * slot_h, slot_w, 3):
        raise PipelineError(f"record {rid}: identity sheet shape {sheet_px.shape} is wrong")
    sheet = IdentitySheet(pixels=sheet_px, slot_height=slot_h, slot_width=slot_w, count=count)

    boxes = json.loads(_require(record_dir / "boxes.json", rid, "boxes").read_text())
    if len(boxes["box2d"]) != count or len(boxes["box3d"]) != count:
        raise PipelineError(f"record {rid}: box count mismatch with subject_count")
    boxes2d = [Box2D(*b) for b in boxes["box2d"]]
    boxes3d = [
        OrientedBox3D(
            center=np.array(b["center"]),
            extents=np.array(b["extents"]),
            rotation=np.array(b["rotation"]).reshape(3, 3),
            degenerate=bool(b.get("degenerate", False)),
        )
        for b in boxes["box3d"]
    ]
    captions = json.loads(_require(record_dir / "captions.json", rid, "captions").read_text())

    record = TrainingRecord(
        scene_id=meta["scene_id"],
        canvas=canvas,
        image=image,
        masks=masks,
        depth=depth,
        boxes2d=boxes2d,
        boxes3d=boxes3d,
        identity_sheet=sheet,
        identities=[Identity(**i) for i in meta["identities"]],
        subject_depths=[float(d) for d in meta["subject_depths"]],
        full_caption=captions["full"],
        background_caption=captions["background"],
        subject_captions=captions["subjects"],
        background=meta["background"],
        seed=int(meta["seed"]),
    )
    _validate_record(record)
    return record


def _validate_record(record: TrainingRecord) -> None:
    rid = record.scene_id
    outcome = filter_subjects(record.masks, record.canvas)
    if outcome.removed:
        slot = min(outcome.removed) + 1
        raise PipelineError(
            f"record {rid}: mask slot {slot} fails filter thresholds ({outcome.removed[min(outcome.removed)]})"
        )
    if record.subject_count < MIN_SURVIVORS:
        raise PipelineError(f"record {rid}: fewer than {MIN_SURVIVORS} subjects")
    covered = np.zeros((record.canvas[1], record.canvas[0]), dtype=bool)
    for slot, mask in enumerate(record.masks, start=1):
        if (covered & mask.bits).any():
            raise PipelineError(f"record {rid}: mask slot {slot} overlaps an earlier mask")
        covered |= mask.bits


def export_dataset(records: list[TrainingRecord], out_dir: str | Path) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ordered = sorted(records, key=lambda r: r.scene_id)
    ids = [r.scene_id for r in ordered]
    if len(set(ids)) != len(ids):
        raise PipelineError("duplicate scene ids in dataset export")
    for record in ordered:
        export_record(record, out_dir / record.scene_id)
    _dump_json(
        {"schema_version": SCHEMA_VERSION, "count": len(ordered), "scene_ids": ids},
        out_dir / "dataset.json",
    )


def import_dataset(dataset_dir: str | Path) -> list[TrainingRecord]:
    dataset_dir = Path(dataset_dir)
    manifest_path = dataset_dir / "dataset.json"
    if not manifest_path.exists():
        raise PipelineError(f"{dataset_dir} has no dataset.json manifest")
    manifest = json.loads(manifest_path.read_text())
    records = [import_record(dataset_dir / sid) for sid in manifest["scene_ids"]]
    if len(records) != manifest["count"]:
        raise PipelineError("manifest count disagrees with scene_ids")
    return records


def validate_dataset(dataset_dir: str | Path) -> dict:
    """Re-validate every record; collect rather than raise per-record errors."""
    dataset_dir = Path(dataset_dir)
    manifest = json.loads((dataset_dir / "dataset.json").read_text())
    errors = []
    for sid in manifest["scene_ids"]:
        try:
            import_record(dataset_dir / sid)
        except (PipelineError, Exception) as exc:  # noqa: BLE001 - report, don't die
            errors.append({"scene_id": sid, "error": str(exc)})
    return {"count": manifest["count"], "valid": manifest["count"] - len(errors), "errors": errors}
