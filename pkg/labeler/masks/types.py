"""
Mask and box value types.

All types are immutable after construction; array payloads are marked read-only.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from utils.errors import ShapeMismatchError, UndefinedGeometryError


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """Dense instance mask, row-major (height, width) boolean grid"""
    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=bool, copy=True)
        if arr.ndim != 2:
            raise ShapeMismatchError(f"binary mask must be 2-D, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ShapeMismatchError(f"binary mask must be at least 1x1, got {arr.shape}")
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @classmethod
    def zeros(cls, height: int, width: int) -> "BinaryMask":
        return cls(np.zeros((height, width), dtype=bool))

    @classmethod
    def from_flat(cls, height: int, width: int, values) -> "BinaryMask":
        """Build from a row-major sequence of height*width values"""
        flat = np.asarray(values, dtype=bool).ravel()
        if flat.size != height * width:
            raise ShapeMismatchError(
                f"expected {height * width} values for {height}x{width}, got {flat.size}"
            )
        return cls(flat.reshape(height, width))

    @property
    def height(self) -> int:
        return int(self.data.shape[0])

    @property
    def width(self) -> int:
        return int(self.data.shape[1])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.height, self.width

    @property
    def area(self) -> int:
        return int(np.count_nonzero(self.data))

    def to_array(self) -> np.ndarray:
        return np.array(self.data, copy=True)

    def __eq__(self, other):
        if not isinstance(other, BinaryMask):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    __hash__ = None

    def __repr__(self):
        return f"<BinaryMask({self.height}x{self.width}, area={self.area})>"


@dataclass(frozen=True)
class RleMask:
    """Compressed run-length mask in the column-major MOTS text format"""
    height: int
    width: int
    counts: str

    def to_dict(self) -> dict:
        return {"height": self.height, "width": self.width, "counts": self.counts}

    @classmethod
    def from_dict(cls, payload: dict) -> "RleMask":
        return cls(int(payload["height"]), int(payload["width"]), str(payload["counts"]))


@dataclass(frozen=True)
class BBox:
    """Axis-aligned half-open box [x1, x2) x [y1, y2) in pixel coordinates"""
    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self):
        for name in ("x1", "y1", "x2", "y2"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.x2 < self.x1 or self.y2 < self.y1:
            raise UndefinedGeometryError(
                f"box corners out of order: ({self.x1}, {self.y1}, {self.x2}, {self.y2})"
            )

    @classmethod
    def empty(cls) -> "BBox":
        return cls(0.0, 0.0, 0.0, 0.0)

    @property
    def width(self) -> float:
        return self.x2 - self.x1

    @property
    def height(self) -> float:
        return self.y2 - self.y1

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def is_empty(self) -> bool:
        return self.area == 0.0

    def as_list(self):
        return [self.x1, self.y1, self.x2, self.y2]
