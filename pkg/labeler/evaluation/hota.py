"""
HOTA over mask IoU.

For every alpha on the 0.05 .. 0.95 grid each frame is matched one-to-one with
a Hungarian assignment that first maximises the number of pairs with IoU >= alpha
and then the summed alignment score (global track alignment times IoU).
DetA, AssA and LocA are kept as summable components so results of several
sequences or classes combine exactly.
"""
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from dataset import SequenceAnnotation
from .clear import EvalFrame, drop_ignored, match_frames, prepare_frames
from .matching import iou_matrix, stack_masks

ALPHAS: Tuple[float, ...] = tuple(round(0.05 * i, 2) for i in range(1, 20))


@dataclass(frozen=True)
class HotaResult:
    alphas: Tuple[float, ...]
    tp: Tuple[int, ...]
    fn: Tuple[int, ...]
    fp: Tuple[int, ...]
    ass_sum: Tuple[float, ...]  # sum over TPs of the association IoU of their track pair
    loc_sum: Tuple[float, ...]  # sum over TPs of the mask IoU

    @classmethod
    def empty(cls, alphas: Sequence[float] = ALPHAS) -> "HotaResult":
        n = len(alphas)
        return cls(tuple(alphas), (0,) * n, (0,) * n, (0,) * n, (0.0,) * n, (0.0,) * n)

    @property
    def num_gt(self) -> int:
        return self.tp[0] + self.fn[0]

    def det_a(self, i: int) -> float:
        denom = self.tp[i] + self.fn[i] + self.fp[i]
        return self.tp[i] / denom if denom else 0.0

    def ass_a(self, i: int) -> float:
        return self.ass_sum[i] / self.tp[i] if self.tp[i] else 0.0

    def loc_a(self, i: int) -> float:
        return self.loc_sum[i] / self.tp[i] if self.tp[i] else 0.0

    def hota_alpha(self, i: int) -> float:
        return math.sqrt(self.det_a(i) * self.ass_a(i))

    @property
    def det_a_curve(self) -> List[float]:
        return [self.det_a(i) for i in range(len(self.alphas))]

    @property
    def ass_a_curve(self) -> List[float]:
        return [self.ass_a(i) for i in range(len(self.alphas))]

    @property
    def loc_a_curve(self) -> List[float]:
        return [self.loc_a(i) for i in range(len(self.alphas))]

    @property
    def hota_curve(self) -> List[float]:
        return [self.hota_alpha(i) for i in range(len(self.alphas))]

    @property
    def hota(self) -> Optional[float]:
        if self.num_gt == 0:
            return None
        return math.fsum(self.hota_curve) / len(self.alphas)

    def _mean(self, curve: List[float]) -> Optional[float]:
        if self.num_gt == 0:
            return None
        return math.fsum(curve) / len(self.alphas)

    @property
    def det_a_mean(self) -> Optional[float]:
        return self._mean(self.det_a_curve)

    @property
    def ass_a_mean(self) -> Optional[float]:
        return self._mean(self.ass_a_curve)

    @property
    def loc_a_mean(self) -> Optional[float]:
        return self._mean(self.loc_a_curve)

    def merge(self, other: "HotaResult") -> "HotaResult":
        if self.alphas != other.alphas:
            raise ValueError("cannot merge HOTA results over different alpha grids")
        return HotaResult(
            self.alphas,
            tuple(a + b for a, b in zip(self.tp, other.tp)),
            tuple(a + b for a, b in zip(self.fn, other.fn)),
            tuple(a + b for a, b in zip(self.fp, other.fp)),
            tuple(a + b for a, b in zip(self.ass_sum, other.ass_sum)),
            tuple(a + b for a, b in zip(self.loc_sum, other.loc_sum)),
        )

    def to_dict(self) -> dict:
        return {
            "hota": self.hota,
            "deta": self.det_a_mean,
            "assa": self.ass_a_mean,
            "loca": self.loc_a_mean,
            "alphas": list(self.alphas),
            "hota_alpha": self.hota_curve,
            "deta_alpha": self.det_a_curve,
            "assa_alpha": self.ass_a_curve,
            "loca_alpha": self.loc_a_curve,
        }


def _global_alignment(frames: List[Tuple[List[int], List[int], np.ndarray]]) -> Dict[Tuple[int, int], float]:
    """Soft track-level overlap of every (gt id, pred id) pair over the whole sequence"""
    gt_count = defaultdict(int)
    pred_count = defaultdict(int)
    potential = defaultdict(float)
    for gt_ids, pred_ids, iou in frames:
        for g in gt_ids:
            gt_count[g] += 1
        for p in pred_ids:
            pred_count[p] += 1
        if iou.size == 0:
            continue
        denom = iou.sum(axis=0)[None, :] + iou.sum(axis=1)[:, None] - iou
        sim = np.zeros_like(iou)
        np.divide(iou, denom, out=sim, where=denom > np.finfo(np.float64).eps)
        for r, c in np.argwhere(sim > 0):
            potential[(gt_ids[r], pred_ids[c])] += float(sim[r, c])
    return {
        (g, p): v / (gt_count[g] + pred_count[p] - v)
        for (g, p), v in potential.items()
    }


def accumulate_hota(frames: List[EvalFrame], alphas: Sequence[float] = ALPHAS) -> HotaResult:
    prepared = []
    gt_count = defaultdict(int)
    pred_count = defaultdict(int)
    for ef in frames:
        gt_ids, gt_stack = stack_masks(ef.gt)
        pred_ids, pred_stack = stack_masks(ef.pred)
        prepared.append((gt_ids, pred_ids, iou_matrix(gt_stack, pred_stack)))
        for g in gt_ids:
            gt_count[g] += 1
        for p in pred_ids:
            pred_count[p] += 1
    alignment = _global_alignment(prepared)

    n = len(alphas)
    tp, fn, fp = [0] * n, [0] * n, [0] * n
    loc = [[] for _ in range(n)]
    match_counts = [defaultdict(int) for _ in range(n)]

    for gt_ids, pred_ids, iou in prepared:
        if not gt_ids or not pred_ids:
            for i in range(n):
                fn[i] += len(gt_ids)
                fp[i] += len(pred_ids)
            continue
        score = np.array([[alignment.get((g, p), 0.0) for p in pred_ids] for g in gt_ids]) * iou
        bonus = min(len(gt_ids), len(pred_ids)) + 1
        for i, alpha in enumerate(alphas):
            valid = iou >= alpha
            weight = np.where(valid, bonus + score, 0.0)
            rows, cols = linear_sum_assignment(weight, maximize=True)
            keep = valid[rows, cols]
            rows, cols = rows[keep], cols[keep]
            tp[i] += len(rows)
            fn[i] += len(gt_ids) - len(rows)
            fp[i] += len(pred_ids) - len(rows)
            for r, c in zip(rows, cols):
                loc[i].append(float(iou[r, c]))
                match_counts[i][(gt_ids[r], pred_ids[c])] += 1

    ass_sum = []
    for i in range(n):
        terms = []
        for (g, p), matches in match_counts[i].items():
            ass_iou = matches / (gt_count[g] + pred_count[p] - matches)
            terms.extend([ass_iou] * matches)
        ass_sum.append(math.fsum(terms))

    return HotaResult(tuple(alphas), tuple(tp), tuple(fn), tuple(fp), tuple(ass_sum),
                      tuple(math.fsum(v) for v in loc))


def compute_hota(gt: SequenceAnnotation, pred: SequenceAnnotation, class_id: int,
                 use_ignore: bool = True) -> HotaResult:
    frames = prepare_frames(gt, pred, class_id, use_ignore)
    frames = drop_ignored(frames, match_frames(frames, gt.sequence_id))
    return accumulate_hota(frames)
