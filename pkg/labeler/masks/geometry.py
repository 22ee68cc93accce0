"""
Overlap measures and mask <-> box conversions
"""
import numpy as np

from utils.errors import ShapeMismatchError, UndefinedGeometryError
from .types import BBox, BinaryMask


def mask_iou(a: BinaryMask, b: BinaryMask) -> float:
    """|a & b| / |a | b|, 0.0 when both masks are empty"""
    if a.shape != b.shape:
        raise ShapeMismatchError(f"mask shapes differ: {a.shape} vs {b.shape}")
    union = np.count_nonzero(a.data | b.data)
    if union == 0:
        return 0.0
    inter = np.count_nonzero(a.data & b.data)
    return inter / union


def mask_to_bbox(mask: BinaryMask) -> BBox:
    """Tightest half-open box around the foreground; (0,0,0,0) for an empty mask"""
    rows = np.flatnonzero(mask.data.any(axis=1))
    if rows.size == 0:
        return BBox.empty()
    cols = np.flatnonzero(mask.data.any(axis=0))
    return BBox(cols[0], rows[0], cols[-1] + 1, rows[-1] + 1)


def mask_from_bbox(box: BBox, height: int, width: int) -> BinaryMask:
    """Rasterize a box onto a height x width grid, rounding outward"""
    data = np.zeros((height, width), dtype=bool)
    x1 = max(int(np.floor(box.x1)), 0)
    y1 = max(int(np.floor(box.y1)), 0)
    x2 = min(int(np.ceil(box.x2)), width)
    y2 = min(int(np.ceil(box.y2)), height)
    if x2 > x1 and y2 > y1:
        data[y1:y2, x1:x2] = True
    return BinaryMask(data)


def _intersection(a: BBox, b: BBox) -> float:
    iw = min(a.x2, b.x2) - max(a.x1, b.x1)
    ih = min(a.y2, b.y2) - max(a.y1, b.y1)
    if iw <= 0 or ih <= 0:
        return 0.0
    return iw * ih


def box_iou(a: BBox, b: BBox) -> float:
    inter = _intersection(a, b)
    union = a.area + b.area - inter
    if union <= 0:
        return 0.0
    return inter / union


def enclosing_box(a: BBox, b: BBox) -> BBox:
    return BBox(min(a.x1, b.x1), min(a.y1, b.y1), max(a.x2, b.x2), max(a.y2, b.y2))


def box_giou(a: BBox, b: BBox) -> float:
    """IoU minus the share of the enclosing box not covered by the union, in [-1, 1]"""
    if a.area <= 0 and b.area <= 0:
        raise UndefinedGeometryError("GIoU is undefined when both boxes have zero area")
    inter = _intersection(a, b)
    union = a.area + b.area - inter
    enclosing = enclosing_box(a, b).area
    return inter / union - (enclosing - union) / enclosing
