"""
Overlap resolution for submitted predictions.

Applies the paste rule with equal scores: a contested pixel goes to the
object with the lower track id. Objects left without pixels are dropped.
"""
from dataclasses import replace
from typing import Dict, List

from dataset import AnnotatedObject, SequenceAnnotation
from granularity import PasteItem, Patch, paste_roi
from masks import rle_decode, rle_encode


def resolve_overlaps(ann: SequenceAnnotation) -> SequenceAnnotation:
    frames: Dict[int, tuple] = {}
    for frame, objs in ann.frames.items():
        items = [
            PasteItem((obj.track_id, obj.class_id, idx), 1.0, Patch(rle_decode(obj.mask).data, 0, 0))
            for idx, obj in enumerate(objs)
        ]
        pasted = paste_roi(ann.image_height, ann.image_width, items)
        kept: List[AnnotatedObject] = []
        for item, obj in zip(items, objs):
            mask = pasted[item.key]
            if mask.area:
                kept.append(AnnotatedObject(obj.track_id, obj.class_id, rle_encode(mask)))
        if kept:
            frames[frame] = tuple(sorted(kept, key=lambda o: o.obj_id))
    resolved = replace(ann, frames=frames, ignore=dict(ann.ignore))
    return resolved.validate(ann.sequence_id)
