"""
Per-frame mask matching for CLEAR-style MOTS evaluation.

A ground-truth and a predicted mask match when their IoU is strictly above 0.5.
Masks inside one set never overlap, so every mask matches at most one partner
and no optimisation is needed.
"""
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from masks import BinaryMask, rle_decode
from utils.errors import OverlapViolationError, ShapeMismatchError

MATCH_IOU = 0.5
IGNORE_OVERLAP = 0.5


@dataclass(frozen=True)
class FrameMatching:
    frame: int
    pairs: Tuple[Tuple[int, int, float], ...]
    unmatched_gt: Tuple[int, ...]
    unmatched_pred: Tuple[int, ...]
    ignored_pred: Tuple[int, ...] = ()

    @property
    def soft_tp(self) -> float:
        return sum(iou for _, _, iou in self.pairs)


def stack_masks(masks: Mapping[int, BinaryMask]) -> Tuple[List[int], Optional[np.ndarray]]:
    """Sorted ids and an (n, H*W) boolean matrix, None when there are no masks"""
    ids = sorted(masks)
    if not ids:
        return ids, None
    shape = masks[ids[0]].shape
    for i in ids:
        if masks[i].shape != shape:
            raise ShapeMismatchError(f"mask of id {i} is {masks[i].shape}, expected {shape}")
    return ids, np.stack([masks[i].data.reshape(-1) for i in ids])


def check_non_overlap(ids: List[int], stack: Optional[np.ndarray], frame: int, source: str = ""):
    if stack is None or len(ids) < 2:
        return
    pixel_owners = stack.sum(axis=0)
    if not np.any(pixel_owners > 1):
        return
    overlap = stack.astype(np.int64) @ stack.T.astype(np.int64)
    np.fill_diagonal(overlap, 0)
    a, b = np.argwhere(overlap > 0)[0]
    raise OverlapViolationError(frame, ids[a], ids[b], source)


def iou_matrix(gt: Optional[np.ndarray], pred: Optional[np.ndarray]) -> np.ndarray:
    if gt is None or pred is None:
        return np.zeros((0 if gt is None else gt.shape[0], 0 if pred is None else pred.shape[0]))
    if gt.shape[1] != pred.shape[1]:
        raise ShapeMismatchError(f"gt masks have {gt.shape[1]} pixels, predictions {pred.shape[1]}")
    g = gt.astype(np.int64)
    p = pred.astype(np.int64)
    inter = g @ p.T
    union = g.sum(axis=1)[:, None] + p.sum(axis=1)[None, :] - inter
    iou = np.zeros(inter.shape, dtype=np.float64)
    np.divide(inter, union, out=iou, where=union > 0)
    return iou


def ignored_predictions(pred_ids: List[int], pred: Optional[np.ndarray],
                        ignore_region: Optional[BinaryMask], candidates) -> List[int]:
    """Candidates whose area lies more than half inside the ignore region"""
    if ignore_region is None or pred is None or ignore_region.area == 0:
        return []
    region = ignore_region.data.reshape(-1)
    if region.shape[0] != pred.shape[1]:
        raise ShapeMismatchError("ignore region and prediction masks differ in size")
    index = {pid: k for k, pid in enumerate(pred_ids)}
    out = []
    for pid in candidates:
        row = pred[index[pid]]
        area = int(row.sum())
        if area > 0 and int(np.count_nonzero(row & region)) / area > IGNORE_OVERLAP:
            out.append(pid)
    return out


def match_frame(gt: Mapping[int, BinaryMask], pred: Mapping[int, BinaryMask], frame: int = 0,
                ignore_region: Optional[BinaryMask] = None, source: str = "") -> FrameMatching:
    gt_ids, gt_stack = stack_masks(gt)
    pred_ids, pred_stack = stack_masks(pred)
    check_non_overlap(gt_ids, gt_stack, frame, f"{source} gt".strip())
    check_non_overlap(pred_ids, pred_stack, frame, f"{source} prediction".strip())

    iou = iou_matrix(gt_stack, pred_stack)
    pairs = []
    matched_pred = set()
    matched_gt = set()
    for r, c in np.argwhere(iou > MATCH_IOU):
        pairs.append((gt_ids[r], pred_ids[c], float(iou[r, c])))
        matched_gt.add(gt_ids[r])
        matched_pred.add(pred_ids[c])

    unmatched_pred = [p for p in pred_ids if p not in matched_pred]
    ignored = ignored_predictions(pred_ids, pred_stack, ignore_region, unmatched_pred)
    return FrameMatching(
        frame=frame,
        pairs=tuple(pairs),
        unmatched_gt=tuple(g for g in gt_ids if g not in matched_gt),
        unmatched_pred=tuple(p for p in unmatched_pred if p not in ignored),
        ignored_pred=tuple(ignored),
    )


def decode_frame(objects) -> Dict[int, BinaryMask]:
    return {obj.track_id: rle_decode(obj.mask) for obj in objects}
