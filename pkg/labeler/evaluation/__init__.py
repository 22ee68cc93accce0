"""Evaluation package: sMOTSA, MOTSA, IDS and HOTA over mask tracks"""
from .matching import FrameMatching, match_frame, iou_matrix, decode_frame
from .clear import MotsMetrics, EvalFrame, prepare_frames, accumulate_clear, compute_mots_metrics
from .hota import ALPHAS, HotaResult, accumulate_hota, compute_hota
from .overlaps import resolve_overlaps
from .report import (
    ClassReport, MetricsReport, resolve_classes, pair_sequences, evaluate_sequence, evaluate,
)

__all__ = [
    'FrameMatching', 'match_frame', 'iou_matrix', 'decode_frame',
    'MotsMetrics', 'EvalFrame', 'prepare_frames', 'accumulate_clear', 'compute_mots_metrics',
    'ALPHAS', 'HotaResult', 'accumulate_hota', 'compute_hota',
    'resolve_overlaps',
    'ClassReport', 'MetricsReport', 'resolve_classes', 'pair_sequences', 'evaluate_sequence', 'evaluate',
]
