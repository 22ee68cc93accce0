"""
Greedy embedding-distance association.

Per frame, candidate (track, detection) pairs are ranked by
(distance, track_id, detection index) and accepted while neither side is
taken. Unmatched detections open new tracks in descending-score order.
"""
from collections import defaultdict
from typing import Dict, List, Mapping, Sequence, Tuple, Union

import numpy as np

from utils.errors import InconsistentEmbeddingError
from .types import AssocParams, Detection, Track

FrameDetections = Union[Mapping[int, Sequence[Detection]], Sequence[Sequence[Detection]]]


def group_by_frame(frames: FrameDetections) -> List[Tuple[int, List[Detection]]]:
    """(frame, detections) in ascending frame order; input order kept within a frame"""
    groups: Dict[int, List[Detection]] = defaultdict(list)
    chunks = frames.values() if isinstance(frames, Mapping) else frames
    for chunk in chunks:
        for det in chunk:
            groups[det.frame].append(det)
    return sorted(groups.items())


class _OpenTrack:
    __slots__ = ("track_id", "class_id", "detections", "last_embedding")

    def __init__(self, track_id: int, det: Detection):
        self.track_id = track_id
        self.class_id = det.class_id
        self.detections = [det]
        self.last_embedding = np.asarray(det.embedding, dtype=np.float64)

    @property
    def last_frame(self) -> int:
        return self.detections[-1].frame

    def extend(self, det: Detection):
        self.detections.append(det)
        self.last_embedding = np.asarray(det.embedding, dtype=np.float64)

    def freeze(self) -> Track:
        return Track(self.track_id, self.class_id, tuple(self.detections))


def associate(frames: FrameDetections, params: AssocParams) -> List[Track]:
    tracks: List[_OpenTrack] = []
    next_id = 1
    dim = None

    for frame, dets in group_by_frame(frames):
        for det in dets:
            if dim is None:
                dim = len(det.embedding)
            elif len(det.embedding) != dim:
                raise InconsistentEmbeddingError(
                    f"frame {frame}: embedding length {len(det.embedding)}, expected {dim}"
                )

        candidates = []
        for track in tracks:
            if frame - track.last_frame > params.max_gap:
                continue
            for j, det in enumerate(dets):
                if params.same_class_only and det.class_id != track.class_id:
                    continue
                dist = float(np.linalg.norm(np.asarray(det.embedding) - track.last_embedding))
                if dist <= params.dist_threshold:
                    candidates.append((dist, track.track_id, j, track))
        candidates.sort(key=lambda c: (c[0], c[1], c[2]))

        used_tracks = set()
        used_dets = set()
        for _, track_id, j, track in candidates:
            if track_id in used_tracks or j in used_dets:
                continue
            track.extend(dets[j])
            used_tracks.add(track_id)
            used_dets.add(j)

        fresh = sorted((j for j in range(len(dets)) if j not in used_dets),
                       key=lambda j: (-dets[j].score, j))
        for j in fresh:
            tracks.append(_OpenTrack(next_id, dets[j]))
            next_id += 1

    return [t.freeze() for t in tracks]
