"""
KITTI MOTS text format.

One line per object: "frame obj_id class_id img_height img_width rle_counts"
with obj_id = class_id * 1000 + instance_id. obj_id 10000 marks an ignore region.
"""
import os
from collections import defaultdict
from typing import Dict, Iterable, List, Optional

import config
from masks import RleMask, rle_decode
from utils.atomic import atomic_write_text
from utils.errors import InconsistentDimensionsError, MalformedCountsError, ParseError
from .annotation import AnnotatedObject, IgnoreRegion, SequenceAnnotation


def parse_mots_txt(lines: Iterable[str], sequence_id: str = "",
                   frame_count: Optional[int] = None, split: Optional[str] = None,
                   validate: bool = True) -> SequenceAnnotation:
    """validate=False skips the overlap check so overlapping predictions can be resolved later"""
    objects = defaultdict(list)
    ignore = defaultdict(list)
    dims = None
    last_frame = -1

    for line_number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split(" ")
        if len(fields) != 6:
            raise ParseError(f"expected 6 space-separated fields, got {len(fields)}", line_number)
        try:
            frame, obj_id, class_id, height, width = (int(v) for v in fields[:5])
        except ValueError:
            raise ParseError(f"non-integer field in {line!r}", line_number)
        if frame < 0 or obj_id < 0 or height < 1 or width < 1:
            raise ParseError(f"negative frame/id or empty image size in {line!r}", line_number)

        if dims is None:
            dims = (height, width)
        elif dims != (height, width):
            raise InconsistentDimensionsError(
                f"line {line_number}: image size {height}x{width} differs from {dims[0]}x{dims[1]}"
            )

        mask = RleMask(height, width, fields[5])
        try:
            rle_decode(mask)
        except MalformedCountsError as e:
            raise ParseError(str(e), line_number)

        last_frame = max(last_frame, frame)
        if obj_id == config.IGNORE_OBJ_ID:
            ignore[frame].append(IgnoreRegion(class_id, mask))
            continue
        if obj_id // config.OBJ_ID_FACTOR != class_id:
            raise ParseError(f"obj_id {obj_id} does not belong to class {class_id}", line_number)
        objects[frame].append(AnnotatedObject(obj_id % config.OBJ_ID_FACTOR, class_id, mask))

    height, width = dims if dims else (0, 0)
    inferred = frame_count is None
    if inferred:
        frame_count = last_frame + 1
    elif last_frame >= frame_count:
        raise ParseError(f"frame {last_frame} beyond the stated frame count {frame_count}")
    frames = {f: tuple(sorted(objs, key=lambda o: o.obj_id)) for f, objs in objects.items()}
    ann = SequenceAnnotation(sequence_id, frame_count, height, width, frames,
                             {f: tuple(regions) for f, regions in ignore.items()}, split,
                             frame_count_inferred=inferred)
    return ann.validate(sequence_id) if validate else ann


def write_mots_txt(ann: SequenceAnnotation) -> List[str]:
    """Lines sorted by (frame, obj_id); ignore regions use obj_id 10000"""
    rows = []
    for frame, objs in ann.frames.items():
        for obj in objs:
            rows.append((frame, obj.obj_id, obj.class_id, obj.mask))
    for frame, regions in ann.ignore.items():
        for region in regions:
            rows.append((frame, config.IGNORE_OBJ_ID, region.class_id, region.mask))
    rows.sort(key=lambda r: (r[0], r[1]))
    return [
        f"{frame} {obj_id} {class_id} {mask.height} {mask.width} {mask.counts}"
        for frame, obj_id, class_id, mask in rows
    ]


def load_sequence(path, frame_count: Optional[int] = None, validate: bool = True) -> SequenceAnnotation:
    sequence_id = os.path.splitext(os.path.basename(path))[0]
    with open(path, "r", encoding="utf-8") as f:
        return parse_mots_txt(f, sequence_id=sequence_id, frame_count=frame_count, validate=validate)


def save_sequence(path, ann: SequenceAnnotation):
    lines = write_mots_txt(ann)
    atomic_write_text(path, "".join(line + "\n" for line in lines))


def load_seqmap(path) -> Dict[str, int]:
    """
    KITTI seqmap: "sequence_id split first_frame last_frame" per line.
    Returns sequence id -> frame count (last_frame + 1).
    """
    counts = {}
    with open(path, "r", encoding="utf-8") as f:
        for line_number, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) != 4:
                raise ParseError(f"seqmap: expected 4 fields, got {len(fields)}", line_number)
            try:
                first, last = int(fields[2]), int(fields[3])
            except ValueError:
                raise ParseError(f"seqmap: non-integer frame range in {line!r}", line_number)
            if first < 0 or last < first:
                raise ParseError(f"seqmap: invalid frame range {first}..{last}", line_number)
            counts[fields[0]] = last + 1
    return counts
