import uuid

import pytest

from dataset import save_sequence
from database import get_class_results, get_run, init_db, iteration_progress, list_runs, record_evaluation
from evaluation import evaluate
from main import main
from scenes import make_annotation, rect


@pytest.fixture(scope="module", autouse=True)
def ledger():
    init_db(quiet=True)


@pytest.fixture
def label():
    return f"campaign-{uuid.uuid4().hex[:8]}"


def _report(miss=False):
    gt = make_annotation([{1: rect(0, 4, 0, 4), 2: rect(8, 12, 8, 12)}] * 2)
    pred = make_annotation([{1: rect(0, 4, 0, 4)}] * 2) if miss else gt
    return evaluate(gt, pred)


def test_record_and_read_back(label):
    report = _report()
    run_id = record_evaluation(report, "gt/", "pred/", label=label, iteration=1)
    run = get_run(run_id)
    assert run.label == label and run.iteration == 1 and run.gt_path == "gt/"
    results = {r.class_name: r for r in get_class_results(run_id)}
    assert set(results) == {"car", "pedestrian", "aggregate"}
    assert results["car"].hota == 1.0 and results["car"].tp == 4
    assert results["pedestrian"].smotsa is None


def test_list_runs_newest_first(label):
    first = record_evaluation(_report(), "gt", "a", label=label)
    second = record_evaluation(_report(miss=True), "gt", "b", label=label)
    runs = list_runs(label=label)
    assert [r.id for r in runs] == [second, first]
    assert [r.id for r in list_runs(limit=1, label=label)] == [second]


def test_iteration_progress_keeps_latest_run(label):
    record_evaluation(_report(miss=True), "gt", "p1", label=label, iteration=1)
    latest = record_evaluation(_report(), "gt", "p1b", label=label, iteration=1)
    record_evaluation(_report(miss=True), "gt", "p2", label=label, iteration=2)
    record_evaluation(_report(), "gt", "untracked", label=label)
    progress = iteration_progress(label)
    assert [row["iteration"] for row in progress] == [1, 2]
    assert progress[0]["run_id"] == latest and progress[0]["smotsa"] == 1.0
    assert progress[1]["motsa"] == pytest.approx(0.5)


def test_history_command(tmp_path, label, capsys):
    gt = tmp_path / "gt.txt"
    save_sequence(str(gt), make_annotation([{1: rect(0, 4, 0, 4)}], sequence_id="gt"))
    assert main(["eval", "--gt", str(gt), "--pred", str(gt), "--record", "--label", label,
                 "--iteration", "3", "--quiet"]) == 0
    capsys.readouterr()
    assert main(["history", "--label", label]) == 0
    out = capsys.readouterr().out
    assert label in out and "sMOTSA=1.0000" in out
    assert "iteration 3:" in out

    assert main(["history", "--label", "no-such-campaign"]) == 0
    assert "[SKIP]" in capsys.readouterr().out
