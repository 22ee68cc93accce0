import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import expit

from granularity import (
    DepthMap, DgmParams, PasteItem, Patch, SoftMask, binarize, blend, crop_roi, normalize_depth,
    paste_roi, read_pfm, refine_detection, refine_mask, subdivide, write_pfm,
)
from masks import BBox
from utils.errors import EmptyRoiError, FileFormatError, ShapeMismatchError, SpecValidationError, ValueRangeError


def _patch(values, row=0, col=0):
    return Patch(np.asarray(values, dtype=np.float64), row, col)


# ==================== CROP / SUBDIVIDE ====================

def test_crop_full_image_is_identity():
    depth = DepthMap(np.arange(16.0).reshape(4, 4))
    patch = crop_roi(depth, BBox(0, 0, 4, 4))
    assert np.array_equal(patch.values, depth.values)
    assert (patch.row, patch.col) == (0, 0)


def test_crop_interior():
    depth = DepthMap(np.arange(16.0).reshape(4, 4))
    patch = crop_roi(depth, BBox(1, 1, 3, 3))
    assert np.array_equal(patch.values, [[5, 6], [9, 10]])
    assert (patch.row, patch.col) == (1, 1)


def test_crop_outside_image_raises():
    with pytest.raises(EmptyRoiError):
        crop_roi(DepthMap(np.zeros((4, 4))), BBox(10, 10, 12, 12))


def test_subdivide_examples():
    tiles = subdivide(_patch(np.zeros((4, 4))), 2)
    assert [[t.shape for t in row] for row in tiles] == [[(2, 2), (2, 2)], [(2, 2), (2, 2)]]

    single = subdivide(_patch(np.ones((3, 5)), 2, 7), 1)
    assert single[0][0].shape == (3, 5) and (single[0][0].row, single[0][0].col) == (2, 7)

    tiles = subdivide(_patch(np.zeros((5, 4))), 2)
    assert [row[0].shape[0] for row in tiles] == [2, 3]
    assert [t.shape[1] for t in tiles[0]] == [2, 2]


@given(st.integers(1, 20), st.integers(1, 20), st.integers(1, 6))
def test_subdivide_partitions_patch(h, w, k):
    values = np.arange(h * w, dtype=np.float64).reshape(h, w)
    tiles = subdivide(Patch(values, 3, 4), k)
    covered = np.zeros((h, w), dtype=int)
    for row in tiles:
        for t in row:
            if t.is_empty:
                continue
            r, c = t.row - 3, t.col - 4
            th, tw = t.shape
            covered[r:r + th, c:c + tw] += 1
            assert np.array_equal(values[r:r + th, c:c + tw], t.values)
    assert np.all(covered == 1)


# ==================== NORMALIZE / BLEND ====================

def test_normalize_examples():
    assert np.allclose(normalize_depth(_patch([[1, 3, 5]])).values, [[0, 0.5, 1]])
    assert np.array_equal(normalize_depth(_patch([[2, 2, 2]])).values, [[1, 1, 1]])
    assert np.array_equal(normalize_depth(_patch([[10, 0]])).values, [[1, 0]])


def test_normalize_empty_raises():
    with pytest.raises(EmptyRoiError):
        normalize_depth(_patch(np.zeros((0, 3))))


def test_normalize_randomized_properties():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        h, w = rng.integers(1, 33, size=2)
        values = rng.normal(size=(h, w)) * rng.uniform(0.1, 100)
        out = normalize_depth(_patch(values)).values
        assert out.min() >= 0.0 and out.max() <= 1.0
        if values.max() > values.min():
            assert out.min() == 0.0 and out.max() == 1.0
            gain, offset = rng.uniform(0.5, 20), rng.uniform(-50, 50)
            scaled = normalize_depth(_patch(gain * values + offset)).values
            assert np.allclose(scaled, out, atol=1e-9)


def test_blend_examples():
    out = blend(_patch([[1.0, 0.0]]), _patch([[1.0, 1.0]])).values
    assert out[0, 0] == pytest.approx(0.7311, abs=1e-4)
    assert out[0, 1] == 0.5
    assert blend(_patch([[0.8]]), _patch([[0.5]])).values[0, 0] == pytest.approx(0.5987, abs=1e-4)
    assert np.all(blend(_patch(np.full((3, 3), 0.7)), _patch(np.zeros((3, 3)))).values == 0.5)


def test_blend_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        blend(_patch(np.zeros((2, 2))), _patch(np.zeros((2, 3))))


# ==================== REFINE ====================

def test_refine_constant_depth_is_sigmoid_of_base():
    rng = np.random.default_rng(3)
    for _ in range(1000):
        h, w = rng.integers(1, 33, size=2)
        base = rng.uniform(size=(h, w))
        depth = np.full((h, w), rng.uniform(-5, 5))
        k = int(rng.integers(1, 4))
        refined = refine_mask(SoftMask(base), DepthMap(depth), BBox(0, 0, w, h), DgmParams(k=k))
        assert np.max(np.abs(refined.mask.values - expit(base))) <= 1e-12


def test_refine_k1_example():
    refined = refine_mask(SoftMask([[0.8, 0.8]]), DepthMap([[5.0, 0.0]]), BBox(0, 0, 2, 1), DgmParams(k=1))
    assert refined.mask.values[0, 0] == pytest.approx(0.6900, abs=1e-4)
    assert refined.mask.values[0, 1] == 0.5
    assert np.array_equal(refined.depth_norm.values, [[1.0, 0.0]])


def test_refine_output_range_and_shape():
    rng = np.random.default_rng(5)
    for _ in range(200):
        h, w = rng.integers(2, 20, size=2)
        base = SoftMask(rng.uniform(size=(h, w)))
        depth = DepthMap(rng.normal(size=(h, w)))
        x1, y1 = rng.integers(0, w - 1), rng.integers(0, h - 1)
        box = BBox(x1, y1, rng.integers(x1 + 1, w + 3), rng.integers(y1 + 1, h + 3))
        refined = refine_mask(base, depth, box, DgmParams())
        assert refined.shape == crop_roi(base, box).shape
        assert refined.mask.values.min() >= 0.5
        assert refined.mask.values.max() <= expit(1.0) + 1e-15


def test_refine_is_monotone_in_base_and_depth():
    rng = np.random.default_rng(9)
    for _ in range(1000):
        h, w = rng.integers(1, 33, size=2)
        base = rng.uniform(size=(h, w))
        depth = rng.normal(size=(h, w))
        box = BBox(0, 0, w, h)
        params = DgmParams(k=2)
        before = refine_mask(SoftMask(base), DepthMap(depth), box, params)

        r, c = rng.integers(0, h), rng.integers(0, w)
        raised = base.copy()
        raised[r, c] = min(1.0, raised[r, c] + rng.uniform(0, 0.5))
        after = refine_mask(SoftMask(raised), DepthMap(depth), box, params)
        assert after.mask.values[r, c] >= before.mask.values[r, c]

        # a nearer pixel never loses normalized depth within its own tile
        nearer = depth.copy()
        nearer[r, c] += rng.uniform(0, 2)
        after_depth = refine_mask(SoftMask(base), DepthMap(nearer), box, params)
        assert after_depth.depth_norm.values[r, c] >= before.depth_norm.values[r, c] - 1e-12
        assert after_depth.mask.values[r, c] >= before.mask.values[r, c] - 1e-12


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_blend_monotone_in_normalized_depth(b, d, db, dd):
    lo = blend(_patch([[b]]), _patch([[d]])).values[0, 0]
    hi = blend(_patch([[min(1.0, b + db)]]), _patch([[min(1.0, d + dd)]])).values[0, 0]
    assert hi >= lo


def test_refine_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        refine_mask(SoftMask(np.zeros((2, 2))), DepthMap(np.zeros((3, 3))), BBox(0, 0, 2, 2), DgmParams())


# ==================== BINARIZE / PASTE ====================

def test_binarize_threshold_examples():
    params = DgmParams()
    base = _patch([[0.9, 0.9, 0.5]])
    depth = _patch([[0.9, 0.1, 0.5]])
    refined = blend(base, depth)
    keep = binarize(refined, base, depth, params).values
    assert keep.tolist() == [[True, False, True]]


def test_binarize_without_factors_uses_sigmoid_threshold():
    params = DgmParams(tau_prod=0.25)
    refined = _patch([[expit(0.3), expit(0.2)]])
    assert binarize(refined, None, None, params).values.tolist() == [[True, False]]


def test_constant_depth_binarize_thresholds_base():
    base = np.array([[0.1, 0.25, 0.3], [0.9, 0.0, 0.26]])
    out = refine_detection(SoftMask(base), DepthMap(np.full((2, 3), 4.0)), BBox(0, 0, 3, 2), DgmParams())
    assert np.array_equal(out.values, base >= 0.25)


def test_dgm_params_validation():
    with pytest.raises(SpecValidationError):
        DgmParams(k=0)
    with pytest.raises(SpecValidationError):
        DgmParams(tau_prod=1.0)


def test_soft_mask_range():
    with pytest.raises(ValueRangeError):
        SoftMask([[1.5]])


def test_paste_single_and_contested():
    a = np.ones((2, 2), dtype=bool)
    single = paste_roi(4, 4, [PasteItem(1, 0.5, Patch(a, 1, 1))])
    expected = np.zeros((4, 4), dtype=bool)
    expected[1:3, 1:3] = True
    assert np.array_equal(single[1].data, expected)

    out = paste_roi(3, 3, [PasteItem(7, 0.6, Patch(np.ones((2, 2), bool), 0, 0)),
                           PasteItem(3, 0.9, Patch(np.ones((2, 2), bool), 1, 1))])
    assert out[3].data[1, 1] and not out[7].data[1, 1]
    assert out[7].area == 3 and out[3].area == 4


def test_paste_tie_goes_to_lower_id():
    out = paste_roi(2, 2, [PasteItem(7, 0.5, Patch(np.ones((2, 2), bool), 0, 0)),
                           PasteItem(3, 0.5, Patch(np.ones((2, 2), bool), 0, 0))])
    assert out[3].area == 4 and out[7].area == 0


def test_paste_outside_canvas_raises():
    with pytest.raises(ShapeMismatchError):
        paste_roi(2, 2, [PasteItem(1, 1.0, Patch(np.ones((2, 2), bool), 1, 1))])


# ==================== PFM ====================

def test_pfm_round_trip(tmp_path):
    values = np.arange(12, dtype=np.float32).reshape(3, 4) / 7.0
    path = tmp_path / "d.pfm"
    write_pfm(str(path), DepthMap(values))
    loaded = read_pfm(str(path))
    assert np.array_equal(loaded.values, values.astype(np.float64))


def test_pfm_rows_are_bottom_up(tmp_path):
    path = tmp_path / "d.pfm"
    data = np.array([[1, 2], [3, 4]], dtype="<f4")
    path.write_bytes(b"Pf\n2 2\n-1.0\n" + data[::-1].tobytes())
    assert read_pfm(str(path)).values.tolist() == [[1, 2], [3, 4]]


def test_pfm_rejects_color_header(tmp_path):
    path = tmp_path / "d.pfm"
    path.write_bytes(b"PF\n1 1\n-1.0\n" + np.zeros(3, dtype="<f4").tobytes())
    with pytest.raises(FileFormatError):
        read_pfm(str(path))
