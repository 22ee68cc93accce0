import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from masks import BBox, BinaryMask, box_giou, box_iou, enclosing_box, mask_from_bbox, mask_iou, mask_to_bbox
from utils.errors import ShapeMismatchError, UndefinedGeometryError


def boxes(max_coord=50):
    return st.tuples(
        st.integers(0, max_coord), st.integers(0, max_coord),
        st.integers(1, max_coord), st.integers(1, max_coord),
    ).map(lambda t: BBox(t[0], t[1], t[0] + t[2], t[1] + t[3]))


pairs_of_masks = st.integers(1, 12).flatmap(
    lambda h: st.integers(1, 12).flatmap(
        lambda w: st.tuples(arrays(bool, (h, w)), arrays(bool, (h, w)))
    )
)


# ==================== MASK IOU ====================

def test_mask_iou_examples():
    a = BinaryMask(np.array([[1, 1], [0, 0]], dtype=bool))
    b = BinaryMask(np.array([[1, 0], [1, 0]], dtype=bool))
    assert mask_iou(a, b) == pytest.approx(1 / 3)
    assert mask_iou(a, a) == 1.0
    assert mask_iou(a, BinaryMask(~a.data)) == 0.0
    assert mask_iou(BinaryMask.zeros(2, 2), BinaryMask.zeros(2, 2)) == 0.0


def test_mask_iou_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        mask_iou(BinaryMask.zeros(2, 2), BinaryMask.zeros(2, 3))


@given(pairs_of_masks)
def test_mask_iou_symmetric_and_bounded(pair):
    a, b = BinaryMask(pair[0]), BinaryMask(pair[1])
    iou = mask_iou(a, b)
    assert iou == mask_iou(b, a)
    assert 0.0 <= iou <= 1.0
    if a.area:
        assert mask_iou(a, a) == 1.0


@given(pairs_of_masks, st.data())
def test_shared_pixel_never_lowers_iou(pair, data):
    a, b = pair
    r = data.draw(st.integers(0, a.shape[0] - 1))
    c = data.draw(st.integers(0, a.shape[1] - 1))
    before = mask_iou(BinaryMask(a), BinaryMask(b))
    a2, b2 = a.copy(), b.copy()
    a2[r, c] = True
    b2[r, c] = True
    assert mask_iou(BinaryMask(a2), BinaryMask(b2)) >= before - 1e-15


# ==================== MASK <-> BOX ====================

def test_mask_to_bbox_examples():
    m = np.zeros((6, 6), dtype=bool)
    m[2:5, 1:4] = True
    assert mask_to_bbox(BinaryMask(m)) == BBox(1, 2, 4, 5)

    single = np.zeros((3, 3), dtype=bool)
    single[0, 0] = True
    assert mask_to_bbox(BinaryMask(single)) == BBox(0, 0, 1, 1)
    assert mask_to_bbox(BinaryMask.zeros(3, 3)) == BBox.empty()


@given(arrays(bool, st.tuples(st.integers(1, 16), st.integers(1, 16))))
def test_mask_to_bbox_is_tight(mask):
    assume(mask.any())
    box = mask_to_bbox(BinaryMask(mask))
    rows, cols = np.nonzero(mask)
    assert box.x1 == cols.min() and box.x2 == cols.max() + 1
    assert box.y1 == rows.min() and box.y2 == rows.max() + 1
    inside = mask_from_bbox(box, *mask.shape).data
    assert np.all(inside[mask])


def test_mask_from_bbox_rounds_outward_and_clips():
    m = mask_from_bbox(BBox(0.5, 0.5, 2.2, 9.0), 4, 4)
    expected = np.zeros((4, 4), dtype=bool)
    expected[0:4, 0:3] = True
    assert np.array_equal(m.data, expected)


# ==================== BOX IOU / GIOU ====================

def test_box_iou_examples():
    assert box_iou(BBox(0, 0, 2, 2), BBox(0, 0, 2, 2)) == 1.0
    assert box_iou(BBox(0, 0, 2, 2), BBox(1, 1, 3, 3)) == pytest.approx(1 / 7)
    assert box_iou(BBox(0, 0, 1, 1), BBox(5, 5, 6, 6)) == 0.0
    assert box_iou(BBox.empty(), BBox.empty()) == 0.0


def test_box_giou_examples():
    assert box_giou(BBox(0, 0, 2, 2), BBox(0, 0, 2, 2)) == 1.0
    assert box_giou(BBox(0, 0, 2, 2), BBox(1, 1, 3, 3)) == pytest.approx(1 / 7 - 2 / 9, abs=1e-12)
    assert box_giou(BBox(0, 0, 1, 1), BBox(2, 0, 3, 1)) == pytest.approx(-1 / 3, abs=1e-12)


def test_box_giou_matches_rasterization():
    a, b = BBox(0, 0, 2, 2), BBox(1, 1, 3, 3)
    ma = mask_from_bbox(a, 3, 3).data
    mb = mask_from_bbox(b, 3, 3).data
    union = np.count_nonzero(ma | mb)
    inter = np.count_nonzero(ma & mb)
    enclosing = mask_from_bbox(enclosing_box(a, b), 3, 3).data.sum()
    assert box_giou(a, b) == pytest.approx(inter / union - (enclosing - union) / enclosing, abs=1e-12)


def test_box_giou_undefined_for_two_empty_boxes():
    with pytest.raises(UndefinedGeometryError):
        box_giou(BBox(1, 1, 1, 1), BBox.empty())


def test_box_rejects_unordered_corners():
    with pytest.raises(UndefinedGeometryError):
        BBox(3, 0, 1, 1)


@given(boxes(), boxes())
def test_giou_bounded_by_iou(a, b):
    giou = box_giou(a, b)
    iou = box_iou(a, b)
    assert -1.0 <= giou <= iou + 1e-12
    union = a.area + b.area - iou * (a.area + b.area) / (1 + iou)
    if math.isclose(enclosing_box(a, b).area, union, rel_tol=1e-12):
        assert giou == pytest.approx(iou, abs=1e-12)


def test_giou_approaches_minus_one_with_distance():
    a = BBox(0, 0, 1, 1)
    values = [box_giou(a, BBox(d, 0, d + 1, 1)) for d in (2, 10, 100, 10000)]
    assert values == sorted(values, reverse=True)
    assert values[-1] < -0.999
