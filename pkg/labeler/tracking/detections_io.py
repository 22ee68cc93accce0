"""
Detection interchange file.

One JSON document per sequence:
    {"sequence_id": str, "frames": [[detection, ...], ...]}
where frames[t] holds the detections of frame t and each detection is
    {"bbox": [x1, y1, x2, y2], "class_id": int, "score": float,
     "mask": {"height": int, "width": int, "counts": str},
     "embedding": [float, ...], "soft_mask": optional path to a .npy array}
Soft-mask paths are relative to the JSON file.
"""
import json
import os
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

import config
from granularity import SoftMask
from masks import BBox, RleMask
from utils.atomic import atomic_write_json
from utils.errors import FileFormatError, SchemaError
from .types import Detection


class MaskModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    height: int = Field(ge=1)
    width: int = Field(ge=1)
    counts: str


class DetectionModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    bbox: List[float] = Field(min_length=4, max_length=4)
    class_id: int
    score: float = Field(ge=0.0, le=1.0)
    mask: MaskModel
    embedding: List[float] = Field(min_length=1)
    soft_mask: Optional[str] = None

    @field_validator("bbox")
    @classmethod
    def _ordered_corners(cls, v):
        if v[2] < v[0] or v[3] < v[1]:
            raise ValueError(f"bbox corners out of order: {v}")
        return v

    @field_validator("class_id")
    @classmethod
    def _known_class(cls, v):
        if v not in config.CLASS_LABELS:
            raise ValueError(f"class_id must be one of {sorted(config.CLASS_LABELS)}, got {v}")
        return v


class DetectionFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    sequence_id: str = ""
    frames: List[List[DetectionModel]]


def detection_schema() -> dict:
    return DetectionFile.model_json_schema()


def _load_soft_mask(base_dir: str, rel_path: str) -> SoftMask:
    path = os.path.join(base_dir, rel_path)
    try:
        values = np.load(path, allow_pickle=False)
    except (OSError, ValueError) as e:
        raise FileFormatError(f"{path}: cannot read soft mask ({e})")
    return SoftMask(values)


def parse_detections(payload, base_dir: str = ".") -> Tuple[str, List[List[Detection]]]:
    try:
        doc = DetectionFile.model_validate(payload)
    except ValidationError as e:
        raise SchemaError(f"detection file failed validation: {e.errors()[0]['msg']} "
                          f"at {'.'.join(str(p) for p in e.errors()[0]['loc'])}")

    frames = []
    for t, dets in enumerate(doc.frames):
        row = []
        for d in dets:
            soft = _load_soft_mask(base_dir, d.soft_mask) if d.soft_mask else None
            row.append(Detection(
                frame=t,
                bbox=BBox(*d.bbox),
                class_id=d.class_id,
                score=d.score,
                mask=RleMask(d.mask.height, d.mask.width, d.mask.counts),
                embedding=tuple(d.embedding),
                soft_mask=soft,
            ))
        frames.append(row)
    return doc.sequence_id, frames


def load_detections(path) -> Tuple[str, List[List[Detection]]]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: not valid JSON ({e})")
    sequence_id, frames = parse_detections(payload, os.path.dirname(os.path.abspath(path)))
    if not sequence_id:
        sequence_id = os.path.splitext(os.path.basename(path))[0]
    return sequence_id, frames


def detections_to_payload(sequence_id: str, frames: Sequence[Sequence[Detection]],
                          soft_paths: Optional[Dict[Tuple[int, int], str]] = None) -> dict:
    """soft_paths maps (frame, index in frame) to a relative .npy path"""
    soft_paths = soft_paths or {}
    out_frames = []
    for t, dets in enumerate(frames):
        row = []
        for j, det in enumerate(dets):
            entry = {
                "bbox": det.bbox.as_list(),
                "class_id": det.class_id,
                "score": det.score,
                "mask": det.mask.to_dict(),
                "embedding": list(det.embedding),
            }
            if (t, j) in soft_paths:
                entry["soft_mask"] = soft_paths[(t, j)]
            row.append(entry)
        out_frames.append(row)
    return {"sequence_id": sequence_id, "frames": out_frames}


def save_detections(path, sequence_id: str, frames: Sequence[Sequence[Detection]],
                    soft_paths: Optional[Dict[Tuple[int, int], str]] = None):
    atomic_write_json(path, detections_to_payload(sequence_id, frames, soft_paths))
