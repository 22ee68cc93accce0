import numpy as np
import pytest

import config
from dataset import AnnotatedObject, SequenceAnnotation, parse_mots_txt, write_mots_txt
from evaluation import compute_mots_metrics, evaluate, match_frame, pair_sequences, resolve_classes
from masks import BinaryMask, rle_encode
from reference import reference_clear
from scenes import SIZE, make_annotation, random_label_map, random_micro_sequence, rect, split_label_map
from utils.errors import FrameRangeMismatchError, OverlapViolationError, UnknownClassError


# ==================== MATCHING ====================

def test_iou_of_exactly_half_does_not_match():
    gt = {1: BinaryMask(rect(0, 2, 0, 2))}
    pred = {7: BinaryMask(rect(0, 1, 0, 2))}
    m = match_frame(gt, pred)
    assert m.pairs == () and m.unmatched_gt == (1,) and m.unmatched_pred == (7,)


def test_overlapping_masks_are_rejected():
    gt = {1: BinaryMask(rect(0, 4, 0, 4)), 2: BinaryMask(rect(3, 6, 3, 6))}
    with pytest.raises(OverlapViolationError) as exc:
        match_frame(gt, {}, frame=4)
    assert exc.value.frame == 4
    assert set(exc.value.ids) == {1, 2}


def test_ignore_region_absorbs_unmatched_prediction():
    gt = {1: BinaryMask(rect(0, 4, 0, 4))}
    pred = {1: BinaryMask(rect(0, 4, 0, 4)), 2: BinaryMask(rect(10, 12, 10, 12))}
    m = match_frame(gt, pred, ignore_region=BinaryMask(rect(9, 16, 9, 16)))
    assert m.unmatched_pred == () and m.ignored_pred == (2,)


# ==================== CLEAR METRICS ====================

def test_perfect_prediction():
    frames = [{1: rect(0, 4, 0, 4), 2: rect(8, 12, 8, 12)} for _ in range(3)]
    gt = make_annotation(frames)
    m = compute_mots_metrics(gt, gt, 1)
    assert m.smotsa == 1.0 and m.motsa == 1.0 and m.ids == 0


def test_hand_worked_accounting():
    gt = make_annotation([{1: rect(0, 2, 0, 5), 2: rect(8, 12, 8, 12)}])
    pred = make_annotation([{1: rect(0, 2, 0, 4), 9: rect(14, 16, 0, 3)}])
    m = compute_mots_metrics(gt, pred, 1)
    assert (m.tp, m.fp, m.fn, m.ids) == (1, 1, 1, 0)
    assert m.motsa == 0.0
    assert m.smotsa == pytest.approx(-0.1, abs=1e-12)


def test_id_switch_counted_once():
    box = rect(2, 8, 2, 8)
    gt = make_annotation([{}, {1: box}, {1: box}, {1: box}])
    pred = make_annotation([{}, {5: box}, {5: box}, {6: box}])
    m = compute_mots_metrics(gt, pred, 1)
    assert m.ids == 1 and m.tp == 3
    assert m.motsa == pytest.approx(2 / 3)


def test_switch_back_counts_again():
    box = rect(2, 8, 2, 8)
    gt = make_annotation([{1: box}] * 3)
    pred = make_annotation([{5: box}, {6: box}, {5: box}])
    assert compute_mots_metrics(gt, pred, 1).ids == 2

    # dropping the middle match removes both switches
    dropped = compute_mots_metrics(gt, make_annotation([{5: box}, {}, {5: box}]), 1)
    assert dropped.ids == 0 and dropped.motsa == pytest.approx(2 / 3)
    assert compute_mots_metrics(gt, pred, 1).motsa == pytest.approx(1 / 3)


def test_no_ground_truth_gives_undefined_ratios():
    gt = make_annotation([{}, {}])
    pred = make_annotation([{3: rect(0, 2, 0, 2)}, {}])
    m = compute_mots_metrics(gt, pred, 1)
    assert m.fp == 1 and m.motsa is None and m.smotsa is None


def test_prediction_beyond_ground_truth_range():
    gt = make_annotation([{1: rect(0, 2, 0, 2)}])
    pred = make_annotation([{}, {1: rect(0, 2, 0, 2)}])
    with pytest.raises(FrameRangeMismatchError):
        compute_mots_metrics(gt, pred, 1)


def test_trailing_false_positive_after_last_annotated_frame():
    box = rect(0, 2, 0, 2)
    gt = parse_mots_txt(write_mots_txt(make_annotation([{1: box}])), sequence_id="s")
    pred = parse_mots_txt(write_mots_txt(make_annotation([{1: box}, {1: box}])), sequence_id="s")
    assert gt.frame_count == 1 and gt.frame_count_inferred
    car = evaluate(gt, pred, classes=["car"]).by_name("car").metrics
    assert (car.tp, car.fp, car.fn) == (1, 1, 0)

    stated = parse_mots_txt(write_mots_txt(make_annotation([{1: box}])), sequence_id="s", frame_count=1)
    with pytest.raises(FrameRangeMismatchError):
        evaluate(stated, pred)


def test_ignored_predictions_are_not_false_positives():
    gt = make_annotation([{1: rect(0, 4, 0, 4)}], ignore={0: rect(10, 16, 10, 16)})
    pred = make_annotation([{1: rect(0, 4, 0, 4), 2: rect(11, 14, 11, 14)}])
    m = compute_mots_metrics(gt, pred, 1)
    assert (m.tp, m.fp, m.ignored) == (1, 0, 1)
    m = compute_mots_metrics(gt, pred, 1, use_ignore=False)
    assert (m.tp, m.fp, m.ignored) == (1, 1, 0)


def test_clear_metrics_match_reference_on_random_sequences():
    rng = np.random.default_rng(2024)
    for _ in range(500):
        gt_frames, pred_frames, ignore = random_micro_sequence(rng)
        expected = reference_clear(gt_frames, pred_frames, [ignore.get(f) for f in range(len(gt_frames))])
        m = compute_mots_metrics(make_annotation(gt_frames, ignore=ignore), make_annotation(pred_frames), 1)
        assert (m.tp, m.fp, m.fn, m.ids) == (expected["tp"], expected["fp"], expected["fn"], expected["ids"])
        assert m.soft_tp == pytest.approx(expected["soft_tp"], abs=1e-9)
        assert m.ids <= m.tp


def test_renaming_predictions_leaves_clear_metrics_unchanged():
    rng = np.random.default_rng(7)
    for _ in range(100):
        gt_frames, pred_frames, _ = random_micro_sequence(rng, with_ignore=False)
        ids = sorted({i for f in pred_frames for i in f})
        renamed_ids = dict(zip(ids, rng.permutation(len(ids)) * 3 + 10))
        renamed = [{int(renamed_ids[i]): m for i, m in f.items()} for f in pred_frames]
        gt = make_annotation(gt_frames)
        before = compute_mots_metrics(gt, make_annotation(pred_frames), 1)
        after = compute_mots_metrics(gt, make_annotation(renamed), 1)
        assert (before.tp, before.fp, before.fn, before.ids) == (after.tp, after.fp, after.fn, after.ids)
        assert before.smotsa == after.smotsa


def test_consistent_ids_never_switch():
    rng = np.random.default_rng(8)
    for _ in range(100):
        n_frames = int(rng.integers(1, 6))
        frames = []
        for _ in range(n_frames):
            label = random_label_map(rng, 4)
            frames.append(split_label_map(label))
        pred = [{tid + 100: m for tid, m in f.items()} for f in frames]
        assert compute_mots_metrics(make_annotation(frames), make_annotation(pred), 1).ids == 0


# ==================== REPORT ====================

def _scene():
    cars = [{1: rect(0, 4, 0, 4), 2: rect(8, 12, 8, 12)} for _ in range(2)]
    return make_annotation(cars)


def test_report_perfect_in_percent():
    gt = _scene()
    report = evaluate(gt, gt, classes=["car"])
    text = report.to_text(percent=True)
    assert "100.00" in text
    assert report.aggregate.metrics.hota == 1.0


def test_report_structure():
    gt = _scene()
    data = evaluate(gt, gt).to_dict()
    assert set(data) == {"car", "pedestrian", "aggregate", "meta"}
    assert set(data["car"]) == {"smotsa", "motsa", "hota", "ids", "tp", "fp", "fn", "soft_tp"}
    assert data["pedestrian"]["motsa"] is None and data["pedestrian"]["hota"] is None
    assert data["meta"] == {"tool": config.TOOL_NAME, "version": config.TOOL_VERSION}


def test_report_text_marks_missing_classes():
    gt = _scene()
    lines = evaluate(gt, gt).to_text().splitlines()
    pedestrian = next(line for line in lines if line.startswith("pedestrian"))
    assert "n/a" in pedestrian


def test_resolve_overlaps_flag():
    gt = make_annotation([{1: rect(0, 4, 0, 4)}])
    overlapping = SequenceAnnotation("s", 1, SIZE, SIZE, {0: (
        AnnotatedObject(1, 1, rle_encode(BinaryMask(rect(0, 4, 0, 4)))),
        AnnotatedObject(2, 1, rle_encode(BinaryMask(rect(2, 6, 2, 6)))),
    )})
    with pytest.raises(OverlapViolationError):
        evaluate(gt, overlapping)
    report = evaluate(gt, overlapping, resolve=True)
    car = report.by_name("car").metrics
    assert (car.tp, car.fp) == (1, 1)


def test_class_selection():
    assert resolve_classes(None) == [("car", 1), ("pedestrian", 2)]
    assert resolve_classes(["Pedestrian", "1", 2]) == [("pedestrian", 2), ("car", 1)]
    with pytest.raises(UnknownClassError):
        resolve_classes(["truck"])
    with pytest.raises(UnknownClassError):
        resolve_classes([5])


def test_pairing_by_sequence_id():
    a = make_annotation([{1: rect(0, 4, 0, 4)}], sequence_id="a")
    b = make_annotation([{1: rect(0, 4, 0, 4)}], sequence_id="b")
    pairs = pair_sequences([a, b], [b])
    assert [(g.sequence_id, p.sequence_id) for g, p in pairs] == [("a", "a"), ("b", "b")]
    assert pairs[0][1].instance_count == 0

    report = evaluate([a, b], [b], classes=[1])
    car = report.by_name("car").metrics
    assert (car.tp, car.fn) == (1, 1)

    with pytest.raises(FrameRangeMismatchError):
        pair_sequences([a], [a, make_annotation([], sequence_id="zzz")])


def test_parallel_evaluation_matches_serial():
    rng = np.random.default_rng(3)
    gts, preds = [], []
    for k in range(4):
        gt_frames, pred_frames, ignore = random_micro_sequence(rng)
        gts.append(make_annotation(gt_frames, ignore=ignore, sequence_id=f"s{k}"))
        preds.append(make_annotation(pred_frames, sequence_id=f"s{k}"))
    assert evaluate(gts, preds, jobs=3).to_dict() == evaluate(gts, preds, jobs=1).to_dict()
