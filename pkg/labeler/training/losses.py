"""
Training objective: logarithmic GIoU box loss, the standard component losses,
and their unweighted sum.
"""
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

import config
from masks import BBox, BinaryMask, box_giou
from granularity import SoftMask
from utils.errors import (
    EmptyInputError, InvalidDistributionError, NonFiniteError, ShapeMismatchError, SpecValidationError,
)

GIOU_FLOOR = 1e-12
BCE_EPS = 1e-7
COMPONENTS = ("box", "cls", "mask", "track", "depth")


@dataclass(frozen=True)
class LossBreakdown:
    box: float
    cls: float
    mask: float
    track: float
    depth: float
    total: float

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in COMPONENTS + ("total",)}


@dataclass(frozen=True)
class EmbeddingPair:
    anchor: tuple
    other: tuple
    same_identity: bool

    def __post_init__(self):
        object.__setattr__(self, "anchor", tuple(float(v) for v in self.anchor))
        object.__setattr__(self, "other", tuple(float(v) for v in self.other))
        if len(self.anchor) != len(self.other):
            raise ShapeMismatchError(
                f"embedding lengths differ: {len(self.anchor)} vs {len(self.other)}"
            )


# ==================== BOX LOSS ====================

def giou_loss(pred: BBox, target: BBox) -> float:
    """-ln((1 + GIoU) / 2); the argument is floored at 1e-12 so GIoU = -1 stays finite"""
    giou = box_giou(pred, target)
    return -math.log(max((1.0 + giou) / 2.0, GIOU_FLOOR))


def plain_giou_loss(pred: BBox, target: BBox) -> float:
    return 1.0 - box_giou(pred, target)


def giou_loss_grad(pred: BBox, target: BBox) -> np.ndarray:
    """
    Analytic gradient of giou_loss w.r.t. (x1, y1, x2, y2) of pred.

    GIoU = I/U + U/C - 1 with U = A_p + A_t - I, so
    dG = dI/U + dU (1/C - I/U^2) - dC U/C^2 and dL/dG = -1/(1 + GIoU).
    Kinks (coinciding edges) take the one-sided derivative of the branch chosen by max/min.
    """
    px1, py1, px2, py2 = pred.as_list()
    tx1, ty1, tx2, ty2 = target.as_list()
    pw, ph = px2 - px1, py2 - py1

    iw = min(px2, tx2) - max(px1, tx1)
    ih = min(py2, ty2) - max(py1, ty1)
    overlap = iw > 0 and ih > 0
    inter = iw * ih if overlap else 0.0
    union = pw * ph + target.area - inter
    cw = max(px2, tx2) - min(px1, tx1)
    ch = max(py2, ty2) - min(py1, ty1)
    enclosing = cw * ch

    d_area = np.array([-ph, -pw, ph, pw])
    d_inter = np.zeros(4)
    if overlap:
        d_inter[0] = -ih if px1 > tx1 else 0.0
        d_inter[1] = -iw if py1 > ty1 else 0.0
        d_inter[2] = ih if px2 < tx2 else 0.0
        d_inter[3] = iw if py2 < ty2 else 0.0
    d_enclosing = np.array([
        -ch if px1 < tx1 else 0.0,
        -cw if py1 < ty1 else 0.0,
        ch if px2 > tx2 else 0.0,
        cw if py2 > ty2 else 0.0,
    ])
    d_union = d_area - d_inter

    giou = inter / union + union / enclosing - 1.0
    d_giou = (d_inter / union
              + d_union * (1.0 / enclosing - inter / union ** 2)
              - d_enclosing * union / enclosing ** 2)
    return -d_giou / (1.0 + giou)


# ==================== COMPONENT LOSSES ====================

def cls_loss(scores: Sequence[float], true_index: int) -> float:
    """Cross-entropy of a predicted class distribution"""
    probs = np.asarray(scores, dtype=np.float64)
    if probs.ndim != 1 or probs.size == 0:
        raise InvalidDistributionError("class scores must be a non-empty vector")
    if np.any(probs < 0) or not np.all(np.isfinite(probs)) or abs(probs.sum() - 1.0) > 1e-6:
        raise InvalidDistributionError(f"class scores do not form a distribution (sum {probs.sum()})")
    if not 0 <= true_index < probs.size:
        raise InvalidDistributionError(f"class index {true_index} out of range for {probs.size} classes")
    return -math.log(max(probs[true_index], GIOU_FLOOR))


def mask_loss(pred: SoftMask, target: BinaryMask) -> float:
    """Mean per-pixel binary cross-entropy, predictions clamped to [1e-7, 1 - 1e-7]"""
    if pred.shape != target.shape:
        raise ShapeMismatchError(f"prediction {pred.shape} and target {target.shape} differ")
    p = np.clip(pred.values, BCE_EPS, 1.0 - BCE_EPS)
    t = target.data.astype(np.float64)
    return float(np.mean(-(t * np.log(p) + (1.0 - t) * np.log(1.0 - p))))


def track_loss(pairs: Sequence[EmbeddingPair], margin: float = config.TRACK_MARGIN) -> float:
    """Mean hinge over embedding distances: pull same identities together, push others past margin"""
    if not pairs:
        raise EmptyInputError("track loss needs at least one embedding pair")
    if margin <= 0:
        raise SpecValidationError(f"margin must be positive, got {margin}")
    terms = []
    for pair in pairs:
        dist = float(np.linalg.norm(np.subtract(pair.anchor, pair.other)))
        if pair.same_identity:
            terms.append(max(0.0, dist))
        else:
            terms.append(max(0.0, margin - dist))
    return float(np.mean(terms))


# ==================== AGGREGATE ====================

def total_loss(box: float, cls: float, mask: float, track: float, depth: float = 0.0,
               weights: Optional[Sequence[float]] = None) -> LossBreakdown:
    """
    Sum of the five components. The depth term is supplied from outside.
    Weights default to LOSS_WEIGHTS (all ones); breakdown fields hold the weighted terms so total is their sum.
    """
    values = [box, cls, mask, track, depth]
    for name, value in zip(COMPONENTS, values):
        if not math.isfinite(value) or value < 0:
            raise NonFiniteError(f"loss component {name} must be finite and non-negative, got {value}")
    if weights is None:
        weights = config.LOSS_WEIGHTS
    if len(weights) != len(COMPONENTS):
        raise SpecValidationError(f"expected {len(COMPONENTS)} loss weights, got {len(weights)}")
    weighted = [float(w) * float(v) for w, v in zip(weights, values)]
    return LossBreakdown(*weighted, total=math.fsum(weighted))
