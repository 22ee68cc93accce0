"""Depth-granularity package: depth-guided refinement of coarse instance masks"""
from .types import DepthMap, SoftMask, DgmParams, Patch, RefinedRoi
from .module import (
    crop_roi, subdivide, normalize_depth, blend, refine_mask, binarize,
    refine_detection, paste_roi, PasteItem,
)
from .pfm import read_pfm, write_pfm

__all__ = [
    'DepthMap', 'SoftMask', 'DgmParams', 'Patch', 'RefinedRoi',
    'crop_roi', 'subdivide', 'normalize_depth', 'blend', 'refine_mask', 'binarize',
    'refine_detection', 'paste_roi', 'PasteItem',
    'read_pfm', 'write_pfm',
]
