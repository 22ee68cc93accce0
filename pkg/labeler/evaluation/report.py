"""
Per-class and aggregate evaluation report
"""
import json
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import config
from dataset import SequenceAnnotation, empty_annotation
from utils.errors import FrameRangeMismatchError, UnknownClassError
from utils.workers import run_pool
from .clear import MotsMetrics, accumulate_clear, drop_ignored, match_frames, prepare_frames
from .hota import HotaResult, accumulate_hota
from .overlaps import resolve_overlaps

AnnotationSet = Union[SequenceAnnotation, Sequence[SequenceAnnotation]]


@dataclass(frozen=True)
class ClassReport:
    name: str
    metrics: MotsMetrics
    hota: HotaResult

    def to_dict(self) -> dict:
        return self.metrics.with_hota(self.hota.hota).to_dict()


@dataclass(frozen=True)
class MetricsReport:
    classes: Tuple[ClassReport, ...]
    aggregate: ClassReport
    sequences: Tuple[str, ...] = ()

    def by_name(self, name: str) -> ClassReport:
        for c in self.classes:
            if c.name == name:
                return c
        if name == "aggregate":
            return self.aggregate
        raise UnknownClassError(f"class {name!r} is not in this report")

    def to_dict(self) -> dict:
        out = {c.name: c.to_dict() for c in self.classes}
        out["aggregate"] = self.aggregate.to_dict()
        out["meta"] = {"tool": config.TOOL_NAME, "version": config.TOOL_VERSION}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def hota_detail(self) -> dict:
        out = {c.name: c.hota.to_dict() for c in self.classes}
        out["aggregate"] = self.aggregate.hota.to_dict()
        return out

    def to_text(self, percent: bool = False) -> str:
        def ratio(v: Optional[float]) -> str:
            if v is None:
                return "n/a"
            return f"{v * 100:.2f}" if percent else f"{v:.4f}"

        header = f"{'class':<12}{'sMOTSA':>9}{'MOTSA':>9}{'HOTA':>9}{'IDS':>6}{'TP':>7}{'FP':>7}{'FN':>7}"
        lines = [header, "-" * len(header)]
        for c in (*self.classes, self.aggregate):
            m = c.metrics
            lines.append(
                f"{c.name:<12}{ratio(m.smotsa):>9}{ratio(m.motsa):>9}{ratio(c.hota.hota):>9}"
                f"{m.ids:>6}{m.tp:>7}{m.fp:>7}{m.fn:>7}"
            )
        return "\n".join(lines)


def resolve_classes(classes: Optional[Iterable[Union[str, int]]]) -> List[Tuple[str, int]]:
    """Class names or ids to (name, id) pairs; None selects every known class"""
    if classes is None:
        return sorted(config.CLASS_NAMES.items(), key=lambda kv: kv[1])
    out = []
    for c in classes:
        if isinstance(c, str) and c.strip().isdigit():
            c = int(c)
        if isinstance(c, int):
            if c not in config.CLASS_LABELS:
                raise UnknownClassError(f"unknown class id {c}")
            pair = (config.CLASS_LABELS[c], c)
        else:
            name = c.strip().lower()
            if name not in config.CLASS_NAMES:
                raise UnknownClassError(
                    f"unknown class {c!r}; known classes: {', '.join(config.CLASS_NAMES)}"
                )
            pair = (name, config.CLASS_NAMES[name])
        if pair not in out:
            out.append(pair)
    if not out:
        raise UnknownClassError("no classes selected")
    return out


def pair_sequences(gt: AnnotationSet, pred: AnnotationSet) -> List[Tuple[SequenceAnnotation, SequenceAnnotation]]:
    """
    Match prediction sequences to ground truth by sequence id.
    A single sequence on each side is paired regardless of its name;
    ground truth without a prediction is evaluated against an empty one.
    """
    gts = [gt] if isinstance(gt, SequenceAnnotation) else list(gt)
    preds = [pred] if isinstance(pred, SequenceAnnotation) else list(pred)
    if len(gts) == 1 and len(preds) == 1:
        return [(gts[0], preds[0])]

    by_id = {p.sequence_id: p for p in preds}
    known = {g.sequence_id for g in gts}
    stray = sorted(set(by_id) - known)
    if stray:
        raise FrameRangeMismatchError(f"predictions for unknown sequences: {', '.join(stray)}")
    return [
        (g, by_id.get(g.sequence_id) or empty_annotation(g.sequence_id, g.image_height,
                                                         g.image_width, g.frame_count))
        for g in gts
    ]


def evaluate_sequence(gt: SequenceAnnotation, pred: SequenceAnnotation, class_id: int,
                      use_ignore: bool = True) -> Tuple[MotsMetrics, HotaResult]:
    frames = prepare_frames(gt, pred, class_id, use_ignore)
    matchings = match_frames(frames, gt.sequence_id)
    metrics = accumulate_clear(matchings, class_id)
    hota = accumulate_hota(drop_ignored(frames, matchings))
    return metrics, hota


def evaluate(gt: AnnotationSet, pred: AnnotationSet, classes=None, resolve: bool = False,
             use_ignore: bool = True, jobs: int = 1) -> MetricsReport:
    selected = resolve_classes(classes)
    pairs = pair_sequences(gt, pred)
    if resolve:
        pairs = [(g, resolve_overlaps(p)) for g, p in pairs]

    def work(pair):
        g, p = pair
        return [evaluate_sequence(g, p, class_id, use_ignore) for _, class_id in selected]

    results = run_pool(work, pairs, jobs)

    class_reports = []
    for k, (name, class_id) in enumerate(selected):
        metrics = MotsMetrics(class_id)
        hota = HotaResult.empty()
        for per_sequence in results:
            m, h = per_sequence[k]
            metrics = metrics.merge(m)
            hota = hota.merge(h)
        class_reports.append(ClassReport(name, metrics.with_hota(hota.hota), hota))

    agg_metrics = MotsMetrics(None)
    agg_hota = HotaResult.empty()
    for c in class_reports:
        agg_metrics = agg_metrics.merge(c.metrics)
        agg_hota = agg_hota.merge(c.hota)
    per_class: Dict[int, MotsMetrics] = {c.metrics.class_id: c.metrics for c in class_reports}
    aggregate = ClassReport(
        "aggregate",
        MotsMetrics(None, agg_metrics.tp, agg_metrics.fp, agg_metrics.fn, agg_metrics.ids,
                    agg_metrics.soft_tp, agg_metrics.ignored, agg_hota.hota, per_class),
        agg_hota,
    )
    return MetricsReport(tuple(class_reports), aggregate, tuple(g.sequence_id for g, _ in pairs))
