"""Mask package: dense and run-length masks, boxes and their overlap algebra"""
from .types import BinaryMask, RleMask, BBox
from .codec import rle_encode, rle_decode, rle_area, rle_merge, mask_to_runs, runs_to_string, string_to_runs
from .geometry import mask_iou, mask_to_bbox, mask_from_bbox, box_iou, box_giou, enclosing_box

__all__ = [
    'BinaryMask', 'RleMask', 'BBox',
    'rle_encode', 'rle_decode', 'rle_area', 'rle_merge',
    'mask_to_runs', 'runs_to_string', 'string_to_runs',
    'mask_iou', 'mask_to_bbox', 'mask_from_bbox', 'box_iou', 'box_giou', 'enclosing_box',
]
