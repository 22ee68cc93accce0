"""
Flow-guided feature warping and temporal aggregation.

Flow is backward: flow(p) is the offset from pixel p of the current frame to
where that content sits in the source frame, so warping samples the source at
p + flow(p). Samples that fall outside the grid are clamped to the edge.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.ndimage import map_coordinates

from utils.errors import NonFiniteError, ShapeMismatchError, TemporalRangeError


@dataclass(frozen=True, eq=False)
class FeatureMap:
    """Channel-major (channels, height, width) feature grid"""
    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, copy=True)
        if arr.ndim == 2:
            arr = arr[np.newaxis]
        if arr.ndim != 3 or arr.shape[0] < 1:
            raise ShapeMismatchError(f"feature map must be (C, H, W) with C >= 1, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError("feature map contains non-finite values")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def channels(self) -> int:
        return int(self.values.shape[0])

    @property
    def spatial_shape(self) -> Tuple[int, int]:
        return int(self.values.shape[1]), int(self.values.shape[2])


@dataclass(frozen=True, eq=False)
class FlowField:
    """Per-pixel displacement (dx along columns, dy along rows) in pixels"""
    dx: np.ndarray
    dy: np.ndarray

    def __post_init__(self):
        dx = np.array(self.dx, dtype=np.float64, copy=True)
        dy = np.array(self.dy, dtype=np.float64, copy=True)
        if dx.ndim != 2 or dx.shape != dy.shape:
            raise ShapeMismatchError(f"flow components must be equal 2-D grids, got {dx.shape} and {dy.shape}")
        if not (np.all(np.isfinite(dx)) and np.all(np.isfinite(dy))):
            raise NonFiniteError("flow field contains non-finite values")
        dx.flags.writeable = False
        dy.flags.writeable = False
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "dy", dy)

    @classmethod
    def zeros(cls, height: int, width: int) -> "FlowField":
        return cls(np.zeros((height, width)), np.zeros((height, width)))

    @property
    def shape(self) -> Tuple[int, int]:
        return int(self.dx.shape[0]), int(self.dx.shape[1])


def warp(source: FeatureMap, flow: FlowField) -> FeatureMap:
    """Bilinear backward warp of every channel, edge-clamped"""
    if source.spatial_shape != flow.shape:
        raise ShapeMismatchError(
            f"feature map {source.spatial_shape} and flow {flow.shape} differ"
        )
    height, width = flow.shape
    rows, cols = np.meshgrid(np.arange(height, dtype=np.float64),
                             np.arange(width, dtype=np.float64), indexing="ij")
    coords = np.stack([rows + flow.dy, cols + flow.dx])
    warped = np.stack([
        map_coordinates(channel, coords, order=1, mode="nearest")
        for channel in source.values
    ])
    return FeatureMap(warped)


def aggregate(current: FeatureMap, warped: Sequence[FeatureMap],
              weights: Optional[Sequence[float]] = None, temporal_range: int = 3) -> FeatureMap:
    """
    Mean of the current map and the maps warped into it.
    Computed as a running (weighted) mean so identical inputs come back unchanged.
    """
    if len(warped) > temporal_range - 1:
        raise TemporalRangeError(
            f"{len(warped)} warped maps exceed temporal range {temporal_range}"
        )
    maps: List[FeatureMap] = [current, *warped]
    for fm in warped:
        if fm.values.shape != current.values.shape:
            raise ShapeMismatchError(
                f"feature map {fm.values.shape} differs from current {current.values.shape}"
            )
    if weights is None:
        weights = [1.0] * len(maps)
    if len(weights) != len(maps) or any(w <= 0 for w in weights):
        raise ShapeMismatchError(f"need {len(maps)} positive weights, got {list(weights)}")

    mean = maps[0].values.copy()
    seen = float(weights[0])
    for fm, w in zip(maps[1:], weights[1:]):
        seen += float(w)
        mean += (float(w) / seen) * (fm.values - mean)
    return FeatureMap(mean)


def aggregate_sequence(features: Sequence[FeatureMap], flows: Sequence[FlowField],
                       temporal_range: int = 3) -> List[FeatureMap]:
    """
    Aggregate every frame with up to temporal_range - 1 preceding frames.
    flows[t] aligns frame t - 1 into frame t; older frames are warped along the chain.
    """
    if len(features) != len(flows):
        raise ShapeMismatchError(f"{len(features)} feature maps but {len(flows)} flow fields")
    out = []
    for t, current in enumerate(features):
        warped = []
        for back in range(1, temporal_range):
            src = t - back
            if src < 0:
                break
            moved = features[src]
            for step in range(src + 1, t + 1):
                moved = warp(moved, flows[step])
            warped.append(moved)
        out.append(aggregate(current, warped, temporal_range=temporal_range))
    return out
