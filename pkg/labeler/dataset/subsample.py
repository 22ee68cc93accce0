"""
Frame subsampling: keep every n-th frame and reindex densely
"""
from dataclasses import replace

from utils.errors import SpecValidationError
from .annotation import SequenceAnnotation


def subsample_every_n(ann: SequenceAnnotation, n: int) -> SequenceAnnotation:
    if int(n) != n or n < 1:
        raise SpecValidationError(f"stride must be a positive integer, got {n}")
    if n == 1:
        return ann

    frames = {f // n: objs for f, objs in ann.frames.items() if f % n == 0}
    ignore = {f // n: regions for f, regions in ann.ignore.items() if f % n == 0}
    frame_count = (ann.frame_count + n - 1) // n
    return replace(ann, frame_count=frame_count, frames=frames, ignore=ignore)
