"""Dataset package: MOTS text annotations, subsampling and statistics"""
from .annotation import AnnotatedObject, IgnoreRegion, SequenceAnnotation, empty_annotation
from .mots_txt import parse_mots_txt, write_mots_txt, load_sequence, save_sequence, load_seqmap
from .subsample import subsample_every_n
from .stats import (
    Histogram, SequenceStats, StatsReport,
    sequence_stats, dataset_stats, report_from_partial, format_count, format_summary_table,
)

__all__ = [
    'AnnotatedObject', 'IgnoreRegion', 'SequenceAnnotation', 'empty_annotation',
    'parse_mots_txt', 'write_mots_txt', 'load_sequence', 'save_sequence', 'load_seqmap',
    'subsample_every_n',
    'Histogram', 'SequenceStats', 'StatsReport',
    'sequence_stats', 'dataset_stats', 'report_from_partial', 'format_count', 'format_summary_table',
]
