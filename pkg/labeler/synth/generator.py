"""
Synthetic MOTS scenes with exact ground truth.

Objects are axis-aligned rectangles or ellipses moving with constant integer
velocities. Each object owns a strict depth layer (nearer = larger value);
visibility follows painter's order. By default objects travel in disjoint
horizontal lanes so silhouettes never touch; with occlusion enabled they move
freely and nearer objects hide farther ones.
"""
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy import ndimage

from dataset import AnnotatedObject, SequenceAnnotation
from granularity import DepthMap, SoftMask
from masks import BinaryMask, mask_to_bbox, rle_encode
from temporal import FlowField
from tracking import Detection
from utils.errors import SpecValidationError

SHAPES = ("rect", "ellipse")
DEPTH_MODES = ("layered", "constant")
SOFT_INSIDE = 0.95
SOFT_OUTSIDE = 0.05
LAYER_BASE = 10.0
MIN_SIZE = 3


@dataclass(frozen=True)
class SynthSpec:
    seed: int = 0
    frames: int = 5
    objects: int = 2
    height: int = 48
    width: int = 64
    noise: int = 0
    depth_mode: str = "layered"
    occlusion: bool = False
    embedding_dim: int = 8
    embedding_jitter: float = 0.01
    max_speed: int = 2

    def __post_init__(self):
        if self.frames < 1:
            raise SpecValidationError(f"frames must be >= 1, got {self.frames}")
        if self.objects < 1:
            raise SpecValidationError(f"objects must be >= 1, got {self.objects}")
        if self.noise < 0:
            raise SpecValidationError(f"noise radius must be >= 0, got {self.noise}")
        if self.depth_mode not in DEPTH_MODES:
            raise SpecValidationError(f"depth_mode must be one of {DEPTH_MODES}, got {self.depth_mode!r}")
        if self.embedding_dim < 1 or self.embedding_jitter < 0 or self.max_speed < 0:
            raise SpecValidationError("embedding_dim must be >= 1; jitter and max_speed must be >= 0")
        margin = self.noise + 1
        lane = self.height // self.objects if not self.occlusion else self.height
        if lane - 2 * margin < MIN_SIZE or self.width - 2 * margin < MIN_SIZE + 1:
            raise SpecValidationError(
                f"{self.height}x{self.width} frame is too small for {self.objects} objects "
                f"with noise radius {self.noise}"
            )


@dataclass(frozen=True)
class SynthObject:
    track_id: int
    class_id: int
    shape: str
    row: int
    col: int
    height: int
    width: int
    vx: int
    vy: int
    layer: float
    score: float

    def position(self, t: int) -> Tuple[int, int]:
        return self.row + self.vy * t, self.col + self.vx * t

    def silhouette(self, t: int, frame_height: int, frame_width: int) -> np.ndarray:
        row, col = self.position(t)
        out = np.zeros((frame_height, frame_width), dtype=bool)
        if self.shape == "rect":
            out[row:row + self.height, col:col + self.width] = True
            return out
        rr, cc = np.mgrid[0:self.height, 0:self.width]
        cy, cx = (self.height - 1) / 2.0, (self.width - 1) / 2.0
        ry, rx = self.height / 2.0, self.width / 2.0
        inside = ((rr - cy) / ry) ** 2 + ((cc - cx) / rx) ** 2 <= 1.0
        out[row:row + self.height, col:col + self.width] = inside
        return out


@dataclass(frozen=True)
class SynthScene:
    spec: SynthSpec
    objects: Tuple[SynthObject, ...]
    ground_truth: SequenceAnnotation
    depth: Tuple[DepthMap, ...]
    flow: Tuple[FlowField, ...]
    detections: Tuple[Tuple[Detection, ...], ...]
    detection_objects: Tuple[Tuple[int, ...], ...] = field(default=())  # track id behind each detection


def _place(rng, extent: int, size: int, speed: int, frames: int, margin: int) -> Tuple[int, int]:
    """Start offset and velocity keeping [start, start + size) inside the margins for all frames"""
    travel = frames - 1
    v = int(rng.integers(-speed, speed + 1)) if speed else 0
    while True:
        lo = margin + max(0, -v * travel)
        hi = extent - margin - size - max(0, v * travel)
        if hi >= lo:
            return int(rng.integers(lo, hi + 1)), v
        v -= int(np.sign(v))


def _make_objects(spec: SynthSpec, rng) -> List[SynthObject]:
    margin = spec.noise + 1
    ranks = rng.permutation(spec.objects)
    objects = []
    for i in range(spec.objects):
        class_id = int(rng.integers(1, 3))
        shape = SHAPES[int(rng.integers(0, len(SHAPES)))]
        if spec.occlusion:
            band_top, band = 0, spec.height
        else:
            band = spec.height // spec.objects
            band_top = i * band
        h = int(rng.integers(MIN_SIZE, max(MIN_SIZE, band - 2 * margin) + 1))
        w = int(rng.integers(MIN_SIZE, max(MIN_SIZE, (spec.width - 2 * margin) // 3) + 1))
        col, vx = _place(rng, spec.width, w, spec.max_speed, spec.frames, margin)
        if spec.occlusion:
            row, vy = _place(rng, spec.height, h, spec.max_speed, spec.frames, margin)
        else:
            row = band_top + margin + int(rng.integers(0, band - 2 * margin - h + 1))
            vy = 0
        objects.append(SynthObject(
            track_id=i + 1,
            class_id=class_id,
            shape=shape,
            row=row, col=col, height=h, width=w,
            vx=vx, vy=vy,
            layer=LAYER_BASE + float(ranks[i]),
            score=float(rng.uniform(0.5, 1.0)),
        ))
    return objects


def degrade(mask: np.ndarray, radius: int, rng) -> np.ndarray:
    """Dilate or erode by `radius`; erosion that would empty the mask dilates instead"""
    if radius == 0:
        return mask.copy()
    structure = ndimage.generate_binary_structure(2, 2)
    if rng.random() < 0.5:
        eroded = ndimage.binary_erosion(mask, structure=structure, iterations=radius)
        if eroded.any():
            return eroded
    return ndimage.binary_dilation(mask, structure=structure, iterations=radius)


def synth_generate(spec: SynthSpec) -> SynthScene:
    rng = np.random.default_rng(spec.seed)
    objects = _make_objects(spec, rng)
    dim = max(spec.objects, spec.embedding_dim)
    h, w = spec.height, spec.width
    painter = sorted(objects, key=lambda o: o.layer)

    gt_frames = {}
    depth_maps = []
    flows = []
    detections = []
    detection_objects = []
    for t in range(spec.frames):
        owner = np.zeros((h, w), dtype=np.int64)
        for obj in painter:
            owner[obj.silhouette(t, h, w)] = obj.track_id

        depth = np.zeros((h, w))
        dx = np.zeros((h, w))
        dy = np.zeros((h, w))
        frame_objs = []
        frame_dets = []
        frame_det_objs = []
        for obj in objects:
            visible = owner == obj.track_id
            if not visible.any():
                continue
            depth[visible] = obj.layer
            if t > 0:
                dx[visible] = -obj.vx
                dy[visible] = -obj.vy
            frame_objs.append(AnnotatedObject(obj.track_id, obj.class_id, rle_encode(BinaryMask(visible))))

            coarse = degrade(visible, spec.noise, rng)
            embedding = np.zeros(dim)
            embedding[obj.track_id - 1] = 1.0
            embedding += rng.normal(0.0, spec.embedding_jitter, size=dim)
            coarse_mask = BinaryMask(coarse)
            frame_dets.append(Detection(
                frame=t,
                bbox=mask_to_bbox(coarse_mask),
                class_id=obj.class_id,
                score=obj.score,
                mask=rle_encode(coarse_mask),
                embedding=tuple(float(v) for v in embedding),
                soft_mask=SoftMask(np.where(coarse, SOFT_INSIDE, SOFT_OUTSIDE)),
            ))
            frame_det_objs.append(obj.track_id)

        if spec.depth_mode == "constant":
            depth[:] = 1.0
        if frame_objs:
            gt_frames[t] = tuple(sorted(frame_objs, key=lambda o: o.obj_id))
        depth_maps.append(DepthMap(depth))
        flows.append(FlowField(dx, dy))
        detections.append(tuple(frame_dets))
        detection_objects.append(tuple(frame_det_objs))

    ground_truth = SequenceAnnotation(f"synth-{spec.seed:04d}", spec.frames, h, w, gt_frames, {})
    return SynthScene(spec, tuple(objects), ground_truth.validate(), tuple(depth_maps), tuple(flows),
                      tuple(detections), tuple(detection_objects))
