from dataset import dataset_stats, save_sequence
from evaluation import evaluate
from main import main
from scenes import make_annotation, rect
from utils.pdf_generator import generate_metrics_pdf, generate_stats_pdf


def _annotation():
    return make_annotation([{1: rect(0, 4, 0, 4)}, {1: rect(1, 5, 0, 4), 2: rect(8, 12, 8, 12)}])


def test_metrics_pdf(tmp_path):
    gt = _annotation()
    path = tmp_path / "metrics.pdf"
    assert generate_metrics_pdf(evaluate(gt, gt), str(path)) == str(path)
    assert path.read_bytes().startswith(b"%PDF")


def test_stats_pdf(tmp_path):
    report = dataset_stats([_annotation()], bins=4)
    path = tmp_path / "stats.pdf"
    generate_stats_pdf([("toy", report)], str(path))
    assert path.read_bytes().startswith(b"%PDF")
    assert [p.name for p in tmp_path.iterdir()] == ["stats.pdf"]


def test_cli_pdf_flags(tmp_path):
    gt = tmp_path / "gt.txt"
    save_sequence(str(gt), _annotation())
    assert main(["eval", "--gt", str(gt), "--pred", str(gt), "--pdf", str(tmp_path / "e.pdf"), "--quiet"]) == 0
    assert main(["stats", "--gt", str(gt), "--pdf", str(tmp_path / "s.pdf"), "--quiet"]) == 0
    assert (tmp_path / "e.pdf").read_bytes()[:4] == b"%PDF"
    assert (tmp_path / "s.pdf").read_bytes()[:4] == b"%PDF"
