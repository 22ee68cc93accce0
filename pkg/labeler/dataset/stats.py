"""
Annotation statistics: clip/frame/identity/instance totals and the
instance-size and track-length distributions
"""
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

import config
from masks import mask_to_bbox, rle_decode
from utils.errors import EmptyInputError, SpecValidationError
from utils.workers import run_pool
from .annotation import SequenceAnnotation


@dataclass(frozen=True)
class Histogram:
    edges: Tuple[float, ...]
    counts: Tuple[int, ...]

    @classmethod
    def from_samples(cls, samples: Sequence[float], bins: int) -> "Histogram":
        """Uniform bins over the observed range"""
        counts, edges = np.histogram(np.asarray(samples, dtype=np.float64), bins=bins)
        return cls(tuple(float(e) for e in edges), tuple(int(c) for c in counts))

    @property
    def total(self) -> int:
        return sum(self.counts)

    def to_dict(self) -> dict:
        return {"edges": list(self.edges), "counts": list(self.counts)}


@dataclass(frozen=True)
class SequenceStats:
    """Partial statistics of one or more sequences; merge is associative"""
    video_clips: int = 0
    total_frames: int = 0
    identities: int = 0
    instances: int = 0
    size_samples: Tuple[float, ...] = field(default_factory=tuple)
    length_samples: Tuple[int, ...] = field(default_factory=tuple)

    def merge(self, other: "SequenceStats") -> "SequenceStats":
        return SequenceStats(
            self.video_clips + other.video_clips,
            self.total_frames + other.total_frames,
            self.identities + other.identities,
            self.instances + other.instances,
            self.size_samples + other.size_samples,
            self.length_samples + other.length_samples,
        )


@dataclass(frozen=True)
class StatsReport:
    video_clips: int
    total_frames: int
    identities: int
    instances: int
    size_histogram: Histogram
    track_length_histogram: Histogram

    @property
    def instances_per_frame(self) -> Optional[float]:
        if self.total_frames == 0:
            return None
        return self.instances / self.total_frames

    def to_dict(self) -> dict:
        return {
            "video_clips": self.video_clips,
            "total_frames": self.total_frames,
            "identities": self.identities,
            "instances": self.instances,
            "instances_per_frame": self.instances_per_frame,
            "size_histogram": self.size_histogram.to_dict(),
            "track_length_histogram": self.track_length_histogram.to_dict(),
        }


def instance_size(ann_mask) -> float:
    """sqrt(w * h) of the mask-guided box"""
    box = mask_to_bbox(rle_decode(ann_mask))
    return math.sqrt(box.width * box.height)


def sequence_stats(ann: SequenceAnnotation) -> SequenceStats:
    first_seen = {}
    last_seen = {}
    sizes = []
    for frame, obj in ann.iter_objects():
        first_seen.setdefault(obj.track_id, frame)
        last_seen[obj.track_id] = frame
        sizes.append(instance_size(obj.mask))
    lengths = tuple(last_seen[t] - first_seen[t] + 1 for t in sorted(first_seen))
    return SequenceStats(1, ann.frame_count, len(first_seen), len(sizes), tuple(sizes), lengths)


def report_from_partial(partial: SequenceStats, bins: int = config.HISTOGRAM_BINS) -> StatsReport:
    if bins < 1:
        raise SpecValidationError(f"histogram needs at least one bin, got {bins}")
    return StatsReport(
        partial.video_clips,
        partial.total_frames,
        partial.identities,
        partial.instances,
        Histogram.from_samples(partial.size_samples, bins),
        Histogram.from_samples(partial.length_samples, bins),
    )


def dataset_stats(anns: Sequence[SequenceAnnotation], bins: int = config.HISTOGRAM_BINS,
                  jobs: int = 1) -> StatsReport:
    if not anns:
        raise EmptyInputError("dataset statistics need at least one sequence")
    partials = run_pool(sequence_stats, list(anns), jobs)
    merged = SequenceStats()
    for partial in partials:
        merged = merged.merge(partial)
    return report_from_partial(merged, bins)


# ==================== TABLE LAYOUT ====================

SUMMARY_COLUMNS = ("Dataset", "Clips", "Frames", "Identities", "Instances", "Ins./Fr.")


def format_count(n: int) -> str:
    """749 -> '749', 6300 -> '6.3K', 8008 -> '8K', 38280 -> '38K'"""
    if n < 1000:
        return str(n)
    if n < 10000:
        text = f"{n / 1000:.1f}"
        if text.endswith(".0"):
            text = text[:-2]
        return text + "K"
    return f"{round(n / 1000)}K"


def summary_row(name: str, report: StatsReport) -> List[str]:
    ratio = report.instances_per_frame
    return [
        name,
        format_count(report.video_clips),
        format_count(report.total_frames),
        format_count(report.identities),
        format_count(report.instances),
        "n/a" if ratio is None else f"{ratio:.2f}",
    ]


def format_summary_table(rows: Sequence[Tuple[str, StatsReport]]) -> str:
    cells = [list(SUMMARY_COLUMNS)] + [summary_row(name, report) for name, report in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(SUMMARY_COLUMNS))]
    lines = []
    for idx, row in enumerate(cells):
        lines.append("  ".join(
            cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i]) for i, cell in enumerate(row)
        ).rstrip())
        if idx == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)
