"""
Middlebury .flo reader / writer.

Layout: float32 tag 202021.25 ("PIEH"), int32 width, int32 height, then
height * width interleaved (dx, dy) float32 pairs in row-major order.
"""
import numpy as np

from utils.errors import FileFormatError
from .features import FlowField

FLO_TAG = 202021.25


def read_flo(path) -> FlowField:
    with open(path, "rb") as f:
        tag = np.fromfile(f, dtype="<f4", count=1)
        if tag.size != 1 or tag[0] != np.float32(FLO_TAG):
            raise FileFormatError(f"{path}: missing PIEH tag")
        dims = np.fromfile(f, dtype="<i4", count=2)
        if dims.size != 2 or dims[0] < 1 or dims[1] < 1:
            raise FileFormatError(f"{path}: invalid flow dimensions")
        width, height = int(dims[0]), int(dims[1])
        data = np.fromfile(f, dtype="<f4")
    if data.size != width * height * 2:
        raise FileFormatError(f"{path}: expected {width * height * 2} floats, found {data.size}")
    data = data.reshape(height, width, 2).astype(np.float64)
    if not np.all(np.isfinite(data)):
        raise FileFormatError(f"{path}: flow values must be finite")
    return FlowField(data[..., 0], data[..., 1])


def write_flo(path, flow: FlowField):
    height, width = flow.shape
    with open(path, "wb") as f:
        np.array([FLO_TAG], dtype="<f4").tofile(f)
        np.array([width, height], dtype="<i4").tofile(f)
        np.stack([flow.dx, flow.dy], axis=-1).astype("<f4").tofile(f)
