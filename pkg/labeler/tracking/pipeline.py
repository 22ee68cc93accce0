"""
End-to-end labeling: depth-guided refinement, non-overlapping paste,
mask-guided boxes, then association into tracks.
"""
import dataclasses
from collections import defaultdict
from typing import Dict, List, Mapping, Optional, Sequence, Union

import numpy as np

import config
from dataset import AnnotatedObject, SequenceAnnotation
from granularity import DepthMap, DgmParams, PasteItem, Patch, SoftMask, paste_roi, refine_detection
from masks import BBox, mask_to_bbox, rle_decode, rle_encode
from utils.errors import FrameRangeMismatchError, ShapeMismatchError, ValueRangeError
from .association import FrameDetections, associate, group_by_frame
from .types import AssocParams, Detection, Track

DepthFrames = Union[Mapping[int, DepthMap], Sequence[DepthMap]]


def mask_guided_box(det: Detection) -> BBox:
    """Tight box of the decoded mask; det.bbox when the mask is empty"""
    box = mask_to_bbox(rle_decode(det.mask))
    return det.bbox if box.is_empty else box


def base_mask(det: Detection) -> SoftMask:
    if det.soft_mask is not None:
        return det.soft_mask
    return SoftMask(rle_decode(det.mask).data.astype(np.float64))


def refine_frame(dets: Sequence[Detection], depth: DepthMap, dgm: DgmParams) -> List[Detection]:
    """
    Refine every detection of one frame and paste them without overlap.
    Detections whose refined mask ends up empty are dropped.

    Pasting runs before association, so equal scores fall back to detection order.
    Detections that open new tracks get ids in the same (score, index) order, which
    makes this the lower-track-id rule for them; a detection extending an older
    track keeps its detection-order priority.
    """
    items = []
    for j, det in enumerate(dets):
        base = base_mask(det)
        if base.shape != depth.shape:
            raise ShapeMismatchError(
                f"frame {det.frame}: mask {base.shape} and depth map {depth.shape} differ"
            )
        items.append(PasteItem(j, det.score, refine_detection(base, depth, det.bbox, dgm)))

    pasted = paste_roi(depth.height, depth.width, items)
    refined = []
    for j, det in enumerate(dets):
        mask = pasted[j]
        if mask.area == 0:
            continue
        refined.append(dataclasses.replace(det, mask=rle_encode(mask), bbox=mask_to_bbox(mask), soft_mask=None))
    return refined


def _depth_lookup(depth: DepthFrames) -> Dict[int, DepthMap]:
    if isinstance(depth, Mapping):
        return dict(depth)
    return dict(enumerate(depth))


def run_labeler_pipeline(detections: FrameDetections, depth: DepthFrames, dgm: DgmParams,
                         assoc: AssocParams, sequence_id: str = "",
                         frame_count: Optional[int] = None) -> SequenceAnnotation:
    depth_by_frame = _depth_lookup(depth)
    grouped = group_by_frame(detections)

    refined_frames = {}
    for frame, dets in grouped:
        if frame not in depth_by_frame:
            raise FrameRangeMismatchError(f"no depth map for frame {frame}")
        refined_frames[frame] = refine_frame(dets, depth_by_frame[frame], dgm)

    if depth_by_frame:
        height, width = next(iter(depth_by_frame.values())).shape
    else:
        height, width = 0, 0
    if frame_count is None:
        known = list(depth_by_frame) + [f for f, _ in grouped]
        frame_count = max(known) + 1 if known else 0
    return tracks_to_annotation(associate(refined_frames, assoc), sequence_id, frame_count, height, width)


def tracks_to_annotation(tracks: Sequence[Track], sequence_id: str, frame_count: int,
                         height: int, width: int) -> SequenceAnnotation:
    objects = defaultdict(list)
    for track in tracks:
        if track.track_id >= config.OBJ_ID_FACTOR:
            raise ValueRangeError(
                f"track id {track.track_id} does not fit the obj_id encoding (< {config.OBJ_ID_FACTOR})"
            )
        for det in track.detections:
            # each object keeps its own detection class
            objects[det.frame].append(AnnotatedObject(track.track_id, det.class_id, det.mask))

    frames = {f: tuple(sorted(objs, key=lambda o: o.obj_id)) for f, objs in sorted(objects.items())}
    ann = SequenceAnnotation(sequence_id, frame_count, height, width, frames, {})
    return ann.validate(sequence_id)


def paste_frame(dets: Sequence[Detection]) -> List[Detection]:
    """Non-overlapping paste of unrefined detection masks, highest score first"""
    if not dets:
        return []
    height, width = dets[0].mask.height, dets[0].mask.width
    items = []
    for j, det in enumerate(dets):
        if (det.mask.height, det.mask.width) != (height, width):
            raise ShapeMismatchError(f"frame {det.frame}: detection masks differ in size")
        items.append(PasteItem(j, det.score, Patch(rle_decode(det.mask).data, 0, 0)))
    pasted = paste_roi(height, width, items)
    out = []
    for j, det in enumerate(dets):
        if pasted[j].area:
            out.append(dataclasses.replace(det, mask=rle_encode(pasted[j]), bbox=mask_to_bbox(pasted[j])))
    return out


def track_annotation(detections: FrameDetections, assoc: AssocParams, sequence_id: str = "",
                     frame_count: Optional[int] = None) -> SequenceAnnotation:
    """Association without depth refinement"""
    grouped = group_by_frame(detections)
    pasted = {frame: paste_frame(dets) for frame, dets in grouped}
    height, width = 0, 0
    for _, dets in grouped:
        if dets:
            height, width = dets[0].mask.height, dets[0].mask.width
            break
    if frame_count is None:
        frame_count = grouped[-1][0] + 1 if grouped else 0
    return tracks_to_annotation(associate(pasted, assoc), sequence_id, frame_count, height, width)


def refine_annotation(ann: SequenceAnnotation, depth: DepthFrames, dgm: DgmParams) -> SequenceAnnotation:
    """
    Depth-refine every mask of an existing annotation inside its own box.
    Contested pixels go to the lower track id; ignore regions are carried over.
    """
    depth_by_frame = _depth_lookup(depth)
    frames = {}
    for frame in sorted(ann.frames):
        if frame not in depth_by_frame:
            raise FrameRangeMismatchError(f"no depth map for frame {frame}")
        depth_map = depth_by_frame[frame]
        items = []
        objs = ann.frames[frame]
        for obj in objs:
            mask = rle_decode(obj.mask)
            if mask.shape != depth_map.shape:
                raise ShapeMismatchError(
                    f"frame {frame}: mask {mask.shape} and depth map {depth_map.shape} differ"
                )
            box = mask_to_bbox(mask)
            if box.is_empty:
                continue
            base = SoftMask(mask.data.astype(np.float64))
            items.append(PasteItem(obj.track_id, 1.0, refine_detection(base, depth_map, box, dgm)))
        pasted = paste_roi(ann.image_height, ann.image_width, items)
        kept = [
            AnnotatedObject(obj.track_id, obj.class_id, rle_encode(pasted[obj.track_id]))
            for obj in objs if obj.track_id in pasted and pasted[obj.track_id].area
        ]
        if kept:
            frames[frame] = tuple(kept)
    refined = dataclasses.replace(ann, frames=frames, ignore=dict(ann.ignore))
    return refined.validate(ann.sequence_id)
