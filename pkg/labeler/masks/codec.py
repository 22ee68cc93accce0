"""
Run-length codec for instance masks.

Runs are counted in column-major pixel order and alternate background /
foreground starting with background. The counts string is the compressed
text form used by MOTS annotation files:

  - from the fourth run on, the difference to the run two places earlier is stored
  - each value is written low-order first in 5-bit chunks, bit 0x20 marks "more
    chunks follow", bit 0x10 of the last chunk is the sign
  - each 6-bit chunk becomes the character chr(48 + chunk)
"""
from typing import List, Sequence

import numpy as np

from utils.errors import MalformedCountsError, ShapeMismatchError
from .types import BinaryMask, RleMask


def mask_to_runs(mask: np.ndarray) -> List[int]:
    """Column-major run lengths of a 2-D boolean array, starting with background"""
    flat = np.asarray(mask, dtype=np.int8).ravel(order="F")
    padded = np.concatenate(([-1], flat, [-1]))
    borders = np.flatnonzero(np.diff(padded))
    runs = np.diff(borders).tolist()
    if flat.size and flat[0]:
        runs.insert(0, 0)
    return [int(r) for r in runs]


def runs_to_mask(runs: Sequence[int], height: int, width: int) -> np.ndarray:
    """Inverse of mask_to_runs, returns a row-major (height, width) boolean array"""
    values = np.zeros(len(runs), dtype=bool)
    values[1::2] = True
    flat = np.repeat(values, np.asarray(runs, dtype=np.int64))
    return flat.reshape((height, width), order="F")


def runs_to_string(runs: Sequence[int]) -> str:
    chars = []
    for i, count in enumerate(runs):
        x = int(count)
        if i > 2:
            x -= int(runs[i - 2])
        more = True
        while more:
            c = x & 0x1F
            x >>= 5
            more = (x != -1) if (c & 0x10) else (x != 0)
            if more:
                c |= 0x20
            chars.append(chr(c + 48))
    return "".join(chars)


def string_to_runs(counts: str) -> List[int]:
    runs: List[int] = []
    p = 0
    n = len(counts)
    while p < n:
        x = 0
        k = 0
        more = True
        while more:
            if p >= n:
                raise MalformedCountsError(f"counts string ends inside a value: {counts!r}")
            c = ord(counts[p]) - 48
            if c < 0 or c > 0x3F:
                raise MalformedCountsError(
                    f"invalid character {counts[p]!r} at offset {p} in counts string"
                )
            x |= (c & 0x1F) << (5 * k)
            more = bool(c & 0x20)
            p += 1
            k += 1
            if not more and (c & 0x10):
                x |= -1 << (5 * k)
        if len(runs) > 2:
            x += runs[-2]
        runs.append(x)
    return runs


def rle_encode(mask: BinaryMask) -> RleMask:
    """Compress a dense mask; rle_decode(rle_encode(m)) == m bit for bit"""
    runs = mask_to_runs(mask.data)
    return RleMask(mask.height, mask.width, runs_to_string(runs))


def rle_decode(rle: RleMask) -> BinaryMask:
    """Expand a compressed mask to a dense row-major mask"""
    if rle.height < 1 or rle.width < 1:
        raise MalformedCountsError(f"invalid mask size {rle.height}x{rle.width}")
    runs = string_to_runs(rle.counts)
    for count in runs:
        if count < 0:
            raise MalformedCountsError(f"negative run length {count} in {rle.counts!r}")
    total = sum(runs)
    if total != rle.height * rle.width:
        raise MalformedCountsError(
            f"runs sum to {total}, expected {rle.height * rle.width} "
            f"for a {rle.height}x{rle.width} mask"
        )
    return BinaryMask(runs_to_mask(runs, rle.height, rle.width))


def rle_area(rle: RleMask) -> int:
    """Foreground pixel count without expanding the mask"""
    runs = string_to_runs(rle.counts)
    return int(sum(runs[1::2]))


def rle_merge(rles: Sequence[RleMask], height: int, width: int) -> RleMask:
    """Union of several compressed masks of one frame"""
    merged = np.zeros((height, width), dtype=bool)
    for rle in rles:
        if (rle.height, rle.width) != (height, width):
            raise ShapeMismatchError(
                f"cannot merge {rle.height}x{rle.width} mask into {height}x{width}"
            )
        merged |= rle_decode(rle).data
    return rle_encode(BinaryMask(merged))
