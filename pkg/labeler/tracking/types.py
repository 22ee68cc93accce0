"""
Tracking data types
"""
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from granularity import SoftMask
from masks import BBox, RleMask
from utils.errors import NonFiniteError, SpecValidationError, ValueRangeError


@dataclass(frozen=True)
class Detection:
    frame: int
    bbox: BBox
    class_id: int
    score: float
    mask: RleMask
    embedding: Tuple[float, ...]
    soft_mask: Optional[SoftMask] = None

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise ValueRangeError(f"detection score must lie in [0, 1], got {self.score}")
        embedding = tuple(float(v) for v in self.embedding)
        if not all(math.isfinite(v) for v in embedding):
            raise NonFiniteError("detection embedding contains non-finite values")
        object.__setattr__(self, "embedding", embedding)


@dataclass(frozen=True)
class Track:
    """
    One identity over time. class_id is the class of the first detection; the
    detections share it unless association ran with same_class_only=False.
    """
    track_id: int
    class_id: int
    detections: Tuple[Detection, ...]

    @property
    def frames(self) -> Tuple[int, ...]:
        return tuple(d.frame for d in self.detections)

    @property
    def length(self) -> int:
        return len(self.detections)

    @property
    def class_ids(self) -> Tuple[int, ...]:
        return tuple(sorted({d.class_id for d in self.detections}))


@dataclass(frozen=True)
class AssocParams:
    dist_threshold: float = 0.5
    max_gap: int = 2
    same_class_only: bool = True

    def __post_init__(self):
        if not self.dist_threshold > 0:
            raise SpecValidationError(f"dist_threshold must be positive, got {self.dist_threshold}")
        if int(self.max_gap) != self.max_gap or self.max_gap < 1:
            raise SpecValidationError(f"max_gap must be an integer >= 1, got {self.max_gap}")
