"""
Portable float map (PFM) reader and writer for depth maps
"""
import re

import numpy as np

from utils.errors import FileFormatError
from .types import DepthMap


def read_pfm(path) -> DepthMap:
    """
    Load a single-channel PFM file.
    Rows are stored bottom-up on disk; the returned map is top-down row-major.
    """
    with open(path, "rb") as f:
        header = f.readline().strip()
        if header != b"Pf":
            raise FileFormatError(f"{path}: expected single-channel 'Pf' header, got {header!r}")

        dims = f.readline().decode("ascii", errors="replace").strip()
        match = re.fullmatch(r"(\d+)\s+(\d+)", dims)
        if not match:
            raise FileFormatError(f"{path}: malformed dimensions line {dims!r}")
        width, height = int(match.group(1)), int(match.group(2))

        try:
            scale = float(f.readline().strip())
        except ValueError:
            raise FileFormatError(f"{path}: malformed scale line")
        endian = "<" if scale < 0 else ">"

        data = np.frombuffer(f.read(), dtype=endian + "f4")

    if data.size != width * height:
        raise FileFormatError(f"{path}: expected {width * height} floats, found {data.size}")
    grid = np.flipud(data.reshape(height, width)).astype(np.float64)
    if not np.all(np.isfinite(grid)):
        raise FileFormatError(f"{path}: depth values must be finite")
    return DepthMap(grid)


def write_pfm(path, depth: DepthMap):
    """Write little-endian single-channel PFM"""
    height, width = depth.shape
    with open(path, "wb") as f:
        f.write(b"Pf\n")
        f.write(f"{width} {height}\n".encode("ascii"))
        f.write(b"-1.0\n")
        f.write(np.flipud(depth.values).astype("<f4").tobytes())
