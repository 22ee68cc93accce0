import math

import numpy as np
import pytest

from evaluation import ALPHAS, HotaResult, compute_hota, evaluate
from reference import reference_hota
from scenes import make_annotation, random_micro_sequence, rect


def test_alpha_grid():
    assert len(ALPHAS) == 19
    assert ALPHAS[0] == 0.05 and ALPHAS[9] == 0.5 and ALPHAS[-1] == 0.95


def test_perfect_prediction():
    frames = [{1: rect(0, 4, 0, 4), 2: rect(6, 12, 6, 12)} for _ in range(3)]
    gt = make_annotation(frames)
    result = compute_hota(gt, gt, 1)
    assert result.hota == 1.0
    assert result.det_a_curve == [1.0] * 19 and result.ass_a_curve == [1.0] * 19
    assert result.loc_a_mean == 1.0


def test_empty_prediction():
    gt = make_annotation([{1: rect(0, 4, 0, 4)}, {1: rect(0, 4, 1, 5)}])
    result = compute_hota(gt, make_annotation([{}, {}]), 1)
    assert result.hota == 0.0
    assert result.fn == (2,) * 19


def test_no_ground_truth_is_undefined():
    result = compute_hota(make_annotation([{}]), make_annotation([{3: rect(0, 2, 0, 2)}]), 1)
    assert result.hota is None and result.fp == (1,) * 19


def test_split_track():
    box = rect(2, 8, 2, 8)
    gt = make_annotation([{1: box}, {1: box}])
    pred = make_annotation([{4: box}, {9: box}])
    result = compute_hota(gt, pred, 1)
    assert result.det_a_curve == [1.0] * 19
    assert result.ass_a_curve == [0.5] * 19
    assert result.hota == pytest.approx(math.sqrt(0.5), abs=1e-9)

    renamed = make_annotation([{9: box}, {4: box}])
    assert compute_hota(gt, renamed, 1).hota == result.hota


def test_fixture_matches_exhaustive_reference():
    a, b = rect(0, 6, 0, 6), rect(8, 14, 8, 14)
    a_loose, b_loose = rect(0, 6, 0, 5), rect(8, 13, 8, 14)
    gt_frames = [{1: a, 2: b}, {1: a, 2: b}, {1: a, 2: b}, {1: a}]
    pred_frames = [{5: a_loose, 6: b}, {5: a, 6: b_loose}, {6: a, 7: b}, {5: a_loose}]
    result = compute_hota(make_annotation(gt_frames), make_annotation(pred_frames), 1)
    expected = reference_hota(gt_frames, pred_frames, ALPHAS)
    for i, (tp, fn, fp, ass_a, loc_a) in enumerate(expected):
        assert (result.tp[i], result.fn[i], result.fp[i]) == (tp, fn, fp)
        assert result.ass_a(i) == pytest.approx(ass_a, abs=1e-12)
        assert result.loc_a(i) == pytest.approx(loc_a, abs=1e-12)


def test_detection_counts_match_reference_on_random_sequences():
    rng = np.random.default_rng(99)
    for _ in range(150):
        gt_frames, pred_frames, _ = random_micro_sequence(rng, max_objects=3, spurious=1, with_ignore=False)
        result = compute_hota(make_annotation(gt_frames), make_annotation(pred_frames), 1)
        expected = reference_hota(gt_frames, pred_frames, ALPHAS)
        assert [(result.tp[i], result.fn[i], result.fp[i]) for i in range(19)] == [e[:3] for e in expected]


def test_decomposition_identity_on_random_sequences():
    rng = np.random.default_rng(100)
    for _ in range(200):
        gt_frames, pred_frames, ignore = random_micro_sequence(rng)
        result = compute_hota(make_annotation(gt_frames, ignore=ignore), make_annotation(pred_frames), 1)
        for i in range(len(ALPHAS)):
            assert result.hota_alpha(i) == math.sqrt(result.det_a(i) * result.ass_a(i))
            assert 0.0 <= result.hota_alpha(i) <= 1.0
        if result.hota is not None:
            assert 0.0 <= result.hota <= 1.0
        # detection counts never grow with a stricter threshold
        assert list(result.tp) == sorted(result.tp, reverse=True)


def test_renaming_predictions_leaves_hota_unchanged():
    rng = np.random.default_rng(101)
    for _ in range(250):
        gt_frames, pred_frames, ignore = random_micro_sequence(rng)
        renamed = [{100 - i: m for i, m in f.items()} for f in pred_frames]
        gt = make_annotation(gt_frames, ignore=ignore)
        before = compute_hota(gt, make_annotation(pred_frames), 1)
        after = compute_hota(gt, make_annotation(renamed), 1)
        assert (before.tp, before.fn, before.fp) == (after.tp, after.fn, after.fp)
        if before.hota is None:
            assert after.hota is None
        else:
            assert after.hota == pytest.approx(before.hota, abs=1e-12)


def test_dropping_a_true_positive_can_raise_hota():
    # one prediction track covering two ground-truth tracks; the last frame drags association down
    box = rect(2, 8, 2, 8)
    gt = make_annotation([{1: box}, {1: box}, {2: box}])
    full = compute_hota(gt, make_annotation([{7: box}, {7: box}, {7: box}]), 1)
    assert full.hota == pytest.approx(math.sqrt(5 / 9), abs=1e-12)

    dropped = compute_hota(gt, make_annotation([{7: box}, {7: box}, {}]), 1)
    assert dropped.tp == (2,) * 19 and dropped.fn == (1,) * 19
    assert dropped.hota == pytest.approx(math.sqrt(2 / 3), abs=1e-12)
    assert dropped.hota > full.hota


def test_ignored_predictions_leave_hota_untouched():
    box = rect(0, 4, 0, 4)
    gt = make_annotation([{1: box}], ignore={0: rect(10, 16, 10, 16)})
    pred = make_annotation([{1: box, 2: rect(11, 15, 11, 15)}])
    assert compute_hota(gt, pred, 1).hota == 1.0
    assert compute_hota(gt, pred, 1, use_ignore=False).fp == (1,) * 19


def test_merged_sequences_combine_components():
    box = rect(2, 8, 2, 8)
    first = make_annotation([{1: box}, {1: box}], sequence_id="a")
    second = make_annotation([{1: box}], sequence_id="b")
    split = make_annotation([{4: box}, {9: box}], sequence_id="a")
    merged = compute_hota(first, split, 1).merge(compute_hota(second, second, 1))
    report = evaluate([first, second], [split, second], classes=["car"])
    car = report.by_name("car").hota
    assert car == merged
    # three TPs, association 0.5, 0.5 and 1.0
    assert car.ass_a(0) == pytest.approx(2 / 3, abs=1e-12)


def test_merge_rejects_different_grids():
    with pytest.raises(ValueError):
        HotaResult.empty().merge(HotaResult.empty((0.5,)))
