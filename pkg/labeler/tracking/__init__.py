"""Tracking package: detections, association and the end-to-end labeling pipeline"""
from .types import Detection, Track, AssocParams
from .association import associate, group_by_frame
from .pipeline import (
    mask_guided_box, refine_frame, run_labeler_pipeline,
    tracks_to_annotation, paste_frame, track_annotation, refine_annotation,
)
from .detections_io import (
    DetectionFile, detection_schema, parse_detections, load_detections,
    detections_to_payload, save_detections,
)

__all__ = [
    'Detection', 'Track', 'AssocParams',
    'associate', 'group_by_frame',
    'mask_guided_box', 'refine_frame', 'run_labeler_pipeline',
    'tracks_to_annotation', 'paste_frame', 'track_annotation', 'refine_annotation',
    'DetectionFile', 'detection_schema', 'parse_detections', 'load_detections',
    'detections_to_payload', 'save_detections',
]
