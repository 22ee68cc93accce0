"""
Depth-granularity mask refinement.

A coarse soft mask B is cropped to the detection RoI together with the depth
map D, both are split into k x k aligned tiles, every depth tile is min-max
normalized on its own, and each tile of the final mask is sigmoid(B_i * D_i).
Tiles are disjoint, so summing their zero-extended outputs is the same as
writing each tile back at its offset.
"""
from dataclasses import dataclass
from typing import Dict, Hashable, List, Optional, Sequence, Union

import numpy as np
from scipy.special import expit

from masks import BBox, BinaryMask
from utils.errors import EmptyRoiError, ShapeMismatchError
from .types import DepthMap, DgmParams, Patch, RefinedRoi, SoftMask


def crop_roi(grid: Union[DepthMap, SoftMask], box: BBox) -> Patch:
    """Integer-pixel extent of box, rounded outward and clipped to the frame"""
    height, width = grid.shape
    x1 = max(int(np.floor(box.x1)), 0)
    y1 = max(int(np.floor(box.y1)), 0)
    x2 = min(int(np.ceil(box.x2)), width)
    y2 = min(int(np.ceil(box.y2)), height)
    if x2 <= x1 or y2 <= y1:
        raise EmptyRoiError(
            f"box ({box.x1}, {box.y1}, {box.x2}, {box.y2}) has no pixels "
            f"inside the {height}x{width} frame"
        )
    return Patch(grid.values[y1:y2, x1:x2], row=y1, col=x1)


def _split(length: int, k: int) -> List[int]:
    # floor split, remainder goes to the last cell
    sizes = [length // k] * k
    sizes[-1] += length - sum(sizes)
    return sizes


def subdivide(patch: Patch, k: int) -> List[List[Patch]]:
    """
    Tile a patch into a k x k grid (row-major nested list).
    Offsets of the tiles are frame coordinates like the parent's.
    With k larger than a side some tiles are empty.
    """
    height, width = patch.shape
    tiles = []
    top = 0
    for tile_h in _split(height, k):
        row_tiles = []
        left = 0
        for tile_w in _split(width, k):
            row_tiles.append(Patch(
                patch.values[top:top + tile_h, left:left + tile_w],
                row=patch.row + top,
                col=patch.col + left,
            ))
            left += tile_w
        tiles.append(row_tiles)
        top += tile_h
    return tiles


def normalize_depth(sub: Patch) -> Patch:
    """Min-max normalize one depth tile to [0, 1]; a constant tile maps to all ones"""
    if sub.is_empty:
        raise EmptyRoiError("cannot normalize an empty depth tile")
    values = sub.values.astype(np.float64)
    lo = values.min()
    hi = values.max()
    if hi == lo:
        return Patch(np.ones_like(values), sub.row, sub.col)
    return Patch((values - lo) / (hi - lo), sub.row, sub.col)


def blend(base_sub: Patch, depth_sub: Patch) -> Patch:
    """sigmoid(B_i * D_i) elementwise"""
    if base_sub.shape != depth_sub.shape:
        raise ShapeMismatchError(
            f"base tile {base_sub.shape} and depth tile {depth_sub.shape} differ"
        )
    product = base_sub.values.astype(np.float64) * depth_sub.values.astype(np.float64)
    return Patch(expit(product), base_sub.row, base_sub.col)


def refine_mask(base: SoftMask, depth: DepthMap, box: BBox, params: DgmParams) -> RefinedRoi:
    """Refined soft mask M_j over the clipped RoI of one instance"""
    if base.shape != depth.shape:
        raise ShapeMismatchError(f"base mask {base.shape} and depth map {depth.shape} differ")
    base_roi = crop_roi(base, box)
    depth_roi = crop_roi(depth, box)

    refined = np.zeros(base_roi.shape, dtype=np.float64)
    depth_norm = np.zeros(base_roi.shape, dtype=np.float64)
    base_tiles = subdivide(base_roi, params.k)
    depth_tiles = subdivide(depth_roi, params.k)
    for base_row, depth_row in zip(base_tiles, depth_tiles):
        for base_tile, depth_tile in zip(base_row, depth_row):
            if base_tile.is_empty:
                continue
            normalized = normalize_depth(depth_tile)
            blended = blend(base_tile, normalized)
            r = base_tile.row - base_roi.row
            c = base_tile.col - base_roi.col
            h, w = base_tile.shape
            refined[r:r + h, c:c + w] = blended.values
            depth_norm[r:r + h, c:c + w] = normalized.values

    return RefinedRoi(
        mask=Patch(refined, base_roi.row, base_roi.col),
        base=base_roi,
        depth_norm=Patch(depth_norm, base_roi.row, base_roi.col),
    )


def binarize(refined: Patch, base: Optional[Patch], depth_norm: Optional[Patch],
             params: DgmParams) -> Patch:
    """
    Foreground iff B * D >= tau_prod (ties are foreground).
    Without the factors the equivalent test refined >= sigmoid(tau_prod) is used.
    """
    if base is not None and depth_norm is not None:
        if not (refined.shape == base.shape == depth_norm.shape):
            raise ShapeMismatchError(
                f"refined {refined.shape}, base {base.shape} and depth {depth_norm.shape} differ"
            )
        keep = base.values.astype(np.float64) * depth_norm.values >= params.tau_prod
    else:
        keep = refined.values >= expit(params.tau_prod)
    return Patch(keep, refined.row, refined.col)


def refine_detection(base: SoftMask, depth: DepthMap, box: BBox, params: DgmParams) -> Patch:
    refined = refine_mask(base, depth, box, params)
    return binarize(refined.mask, refined.base, refined.depth_norm, params)


@dataclass(frozen=True)
class PasteItem:
    key: Hashable  # track id, or detection index before association
    score: float
    patch: Patch


def paste_roi(height: int, width: int, items: Sequence[PasteItem]) -> Dict[Hashable, BinaryMask]:
    """
    Place binary RoI masks on a height x width frame.
    Pixels claimed by several instances go to the highest score, ties to the lower key.
    """
    owner = np.full((height, width), -1, dtype=np.int64)
    order = sorted(range(len(items)), key=lambda i: (-items[i].score, items[i].key))
    for i in order:
        patch = items[i].patch
        h, w = patch.shape
        if patch.row < 0 or patch.col < 0 or patch.row + h > height or patch.col + w > width:
            raise ShapeMismatchError(
                f"RoI at ({patch.row}, {patch.col}) of size {h}x{w} "
                f"exceeds the {height}x{width} frame"
            )
        window = owner[patch.row:patch.row + h, patch.col:patch.col + w]
        claim = patch.values.astype(bool) & (window < 0)
        window[claim] = i

    return {item.key: BinaryMask(owner == i) for i, item in enumerate(items)}
