"""
Value types of the depth-granularity module
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from utils.errors import NonFiniteError, ShapeMismatchError, SpecValidationError, ValueRangeError


def _frozen_grid(values, name) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    if arr.ndim != 2:
        raise ShapeMismatchError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains non-finite values")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class DepthMap:
    """Relative disparity-like depth, larger values are nearer to the camera"""
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_grid(self.values, "depth map"))

    @property
    def shape(self) -> Tuple[int, int]:
        return int(self.values.shape[0]), int(self.values.shape[1])

    @property
    def height(self) -> int:
        return self.shape[0]

    @property
    def width(self) -> int:
        return self.shape[1]


@dataclass(frozen=True, eq=False)
class SoftMask:
    """Per-pixel foreground probability in [0, 1]"""
    values: np.ndarray

    def __post_init__(self):
        arr = _frozen_grid(self.values, "soft mask")
        if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
            raise ValueRangeError("soft mask values must lie in [0, 1]")
        object.__setattr__(self, "values", arr)

    @property
    def shape(self) -> Tuple[int, int]:
        return int(self.values.shape[0]), int(self.values.shape[1])

    @property
    def height(self) -> int:
        return self.shape[0]

    @property
    def width(self) -> int:
        return self.shape[1]


@dataclass(frozen=True)
class DgmParams:
    k: int = 2
    tau_prod: float = 0.25

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise SpecValidationError(f"grid order k must be a positive integer, got {self.k}")
        if not 0.0 < self.tau_prod < 1.0:
            raise SpecValidationError(f"tau_prod must lie in (0, 1), got {self.tau_prod}")


@dataclass(frozen=True, eq=False)
class Patch:
    """A rectangular window of a frame-sized grid and its top-left offset in the frame"""
    values: np.ndarray
    row: int
    col: int

    def __post_init__(self):
        arr = np.array(self.values, copy=True)
        if arr.ndim != 2:
            raise ShapeMismatchError(f"patch must be 2-D, got shape {arr.shape}")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def shape(self) -> Tuple[int, int]:
        return int(self.values.shape[0]), int(self.values.shape[1])

    @property
    def is_empty(self) -> bool:
        return self.values.size == 0


@dataclass(frozen=True)
class RefinedRoi:
    """Output of refine_mask: M_j plus the factors it was blended from"""
    mask: Patch
    base: Patch
    depth_norm: Patch

    @property
    def row(self) -> int:
        return self.mask.row

    @property
    def col(self) -> int:
        return self.mask.col

    @property
    def shape(self) -> Tuple[int, int]:
        return self.mask.shape
