"""
Sequence annotation model shared by ground truth and predictions
"""
from dataclasses import dataclass, field, replace
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

import config
from masks import RleMask, rle_decode
from utils.errors import InconsistentDimensionsError, OverlapViolationError, ParseError


@dataclass(frozen=True)
class AnnotatedObject:
    track_id: int
    class_id: int
    mask: RleMask

    @property
    def obj_id(self) -> int:
        return self.class_id * config.OBJ_ID_FACTOR + self.track_id


@dataclass(frozen=True)
class IgnoreRegion:
    class_id: int
    mask: RleMask


@dataclass(frozen=True)
class SequenceAnnotation:
    """
    Per-frame (track id, class, mask) sets of one video sequence.
    Ignore regions are kept apart from the objects and never count as instances.
    frame_count_inferred marks a frame count taken from the last annotated frame
    rather than stated by the source.
    """
    sequence_id: str
    frame_count: int
    image_height: int
    image_width: int
    frames: Dict[int, Tuple[AnnotatedObject, ...]] = field(default_factory=dict)
    ignore: Dict[int, Tuple[IgnoreRegion, ...]] = field(default_factory=dict)
    split: Optional[str] = None
    frame_count_inferred: bool = field(default=False, compare=False)

    def objects(self, frame: int) -> Tuple[AnnotatedObject, ...]:
        return self.frames.get(frame, ())

    def ignore_regions(self, frame: int) -> Tuple[IgnoreRegion, ...]:
        return self.ignore.get(frame, ())

    def iter_objects(self) -> Iterator[Tuple[int, AnnotatedObject]]:
        for frame in sorted(self.frames):
            for obj in self.frames[frame]:
                yield frame, obj

    @property
    def instance_count(self) -> int:
        return sum(len(objs) for objs in self.frames.values())

    def track_ids(self) -> List[int]:
        return sorted({obj.track_id for _, obj in self.iter_objects()})

    def for_class(self, class_id: int) -> "SequenceAnnotation":
        """Same sequence restricted to one class; ignore regions are kept"""
        frames = {}
        for frame, objs in self.frames.items():
            kept = tuple(o for o in objs if o.class_id == class_id)
            if kept:
                frames[frame] = kept
        return replace(self, frames=frames, ignore=dict(self.ignore))

    def validate(self, source: str = ""):
        """Check dimensions, per-frame id uniqueness, class ids and pairwise non-overlap"""
        allowed = set(config.CLASS_NAMES.values())
        for frame in sorted(self.frames):
            objs = self.frames[frame]
            seen = set()
            occupied = None
            owner = {}
            for obj in objs:
                if obj.class_id not in allowed:
                    raise ParseError(f"frame {frame}: unknown class id {obj.class_id}")
                if obj.track_id in seen:
                    raise ParseError(f"frame {frame}: track id {obj.track_id} used twice")
                seen.add(obj.track_id)
                if (obj.mask.height, obj.mask.width) != (self.image_height, self.image_width):
                    raise InconsistentDimensionsError(
                        f"frame {frame}: mask of track {obj.track_id} is "
                        f"{obj.mask.height}x{obj.mask.width}, sequence is "
                        f"{self.image_height}x{self.image_width}"
                    )
                data = rle_decode(obj.mask).data
                if occupied is None:
                    occupied = np.full(data.shape, -1, dtype=np.int64)
                clash = occupied[data]
                clash = clash[clash >= 0]
                if clash.size:
                    raise OverlapViolationError(frame, owner[int(clash[0])], obj.track_id, source)
                occupied[data] = len(owner)
                owner[len(owner)] = obj.track_id
        return self


def empty_annotation(sequence_id: str = "", height: int = 0, width: int = 0,
                     frame_count: int = 0) -> SequenceAnnotation:
    return SequenceAnnotation(sequence_id, frame_count, height, width, {}, {})
