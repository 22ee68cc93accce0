"""Temporal package: flow warping and multi-frame feature aggregation"""
from .features import FeatureMap, FlowField, warp, aggregate, aggregate_sequence
from .flo import read_flo, write_flo

__all__ = [
    'FeatureMap', 'FlowField', 'warp', 'aggregate', 'aggregate_sequence',
    'read_flo', 'write_flo',
]
