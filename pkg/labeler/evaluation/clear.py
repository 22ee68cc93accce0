"""
CLEAR-style MOTS metrics: sMOTSA, MOTSA and ID switches over mask matches
"""
import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional

from dataset import SequenceAnnotation
from masks import BinaryMask, rle_decode, rle_merge
from utils.errors import FrameRangeMismatchError
from .matching import FrameMatching, decode_frame, match_frame


@dataclass(frozen=True)
class MotsMetrics:
    """
    Raw counts plus the ratios derived from them.
    Ratios are None when there is no ground truth to normalise by.
    """
    class_id: Optional[int]
    tp: int = 0
    fp: int = 0
    fn: int = 0
    ids: int = 0
    soft_tp: float = 0.0
    ignored: int = 0
    hota: Optional[float] = None
    per_class: Dict[int, "MotsMetrics"] = field(default_factory=dict)

    @property
    def num_gt(self) -> int:
        return self.tp + self.fn

    @property
    def motsa(self) -> Optional[float]:
        if self.num_gt == 0:
            return None
        return (self.tp - self.fp - self.ids) / self.num_gt

    @property
    def smotsa(self) -> Optional[float]:
        if self.num_gt == 0:
            return None
        return (self.soft_tp - self.fp - self.ids) / self.num_gt

    def merge(self, other: "MotsMetrics") -> "MotsMetrics":
        """Sum counts; HOTA is recombined separately from its components"""
        return MotsMetrics(
            class_id=self.class_id if self.class_id == other.class_id else None,
            tp=self.tp + other.tp,
            fp=self.fp + other.fp,
            fn=self.fn + other.fn,
            ids=self.ids + other.ids,
            soft_tp=math.fsum([self.soft_tp, other.soft_tp]),
            ignored=self.ignored + other.ignored,
        )

    def with_hota(self, hota: Optional[float]) -> "MotsMetrics":
        return replace(self, hota=hota)

    def to_dict(self) -> dict:
        return {
            "smotsa": self.smotsa,
            "motsa": self.motsa,
            "hota": self.hota,
            "ids": self.ids,
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "soft_tp": self.soft_tp,
        }


@dataclass(frozen=True)
class EvalFrame:
    frame: int
    gt: Dict[int, BinaryMask]
    pred: Dict[int, BinaryMask]
    ignore_region: Optional[BinaryMask] = None


def evaluation_range(gt: SequenceAnnotation, pred: SequenceAnnotation) -> int:
    """
    Number of frames scored. A ground-truth count inferred from its last annotated
    frame says nothing about trailing object-free frames, so it stretches to cover
    the prediction.
    """
    if gt.frame_count_inferred:
        return max(gt.frame_count, pred.frame_count)
    return gt.frame_count


def check_frame_range(gt: SequenceAnnotation, pred: SequenceAnnotation):
    frame_count = evaluation_range(gt, pred)
    beyond = [f for f in pred.frames if f >= frame_count]
    if beyond:
        raise FrameRangeMismatchError(
            f"sequence {gt.sequence_id or '?'}: prediction frame {min(beyond)} "
            f"outside ground-truth range 0..{frame_count - 1}"
        )
    if pred.frames and gt.frames and \
            (pred.image_height, pred.image_width) != (gt.image_height, gt.image_width):
        raise FrameRangeMismatchError(
            f"sequence {gt.sequence_id or '?'}: prediction is {pred.image_height}x{pred.image_width}, "
            f"ground truth is {gt.image_height}x{gt.image_width}"
        )


def prepare_frames(gt: SequenceAnnotation, pred: SequenceAnnotation, class_id: int,
                   use_ignore: bool = True) -> List[EvalFrame]:
    """Decoded per-frame masks of one class over the ground-truth frame range"""
    check_frame_range(gt, pred)
    gt_c = gt.for_class(class_id)
    pred_c = pred.for_class(class_id)
    frames = []
    for f in range(evaluation_range(gt, pred)):
        region = None
        regions = gt.ignore_regions(f)
        if use_ignore and regions:
            region = rle_decode(rle_merge([r.mask for r in regions], gt.image_height, gt.image_width))
        frames.append(EvalFrame(f, decode_frame(gt_c.objects(f)), decode_frame(pred_c.objects(f)), region))
    return frames


def match_frames(frames: List[EvalFrame], source: str = "") -> List[FrameMatching]:
    return [match_frame(ef.gt, ef.pred, ef.frame, ef.ignore_region, source) for ef in frames]


def drop_ignored(frames: List[EvalFrame], matchings: List[FrameMatching]) -> List[EvalFrame]:
    """Frames with predictions on ignore regions removed"""
    out = []
    for ef, m in zip(frames, matchings):
        if m.ignored_pred:
            kept = {pid: mask for pid, mask in ef.pred.items() if pid not in m.ignored_pred}
            ef = EvalFrame(ef.frame, ef.gt, kept, ef.ignore_region)
        out.append(ef)
    return out


def accumulate_clear(matchings: List[FrameMatching], class_id: Optional[int] = None) -> MotsMetrics:
    tp = fp = fn = ids = ignored = 0
    ious = []
    last_match = {}
    for m in matchings:
        tp += len(m.pairs)
        fn += len(m.unmatched_gt)
        fp += len(m.unmatched_pred)
        ignored += len(m.ignored_pred)
        for gt_id, pred_id, iou in m.pairs:
            ious.append(iou)
            previous = last_match.get(gt_id)
            if previous is not None and previous != pred_id:
                ids += 1
            last_match[gt_id] = pred_id
    return MotsMetrics(class_id, tp, fp, fn, ids, math.fsum(ious), ignored)


def compute_mots_metrics(gt: SequenceAnnotation, pred: SequenceAnnotation, class_id: int,
                         use_ignore: bool = True) -> MotsMetrics:
    frames = prepare_frames(gt, pred, class_id, use_ignore)
    return accumulate_clear(match_frames(frames, gt.sequence_id), class_id)
