"""
Fixture directory writer for synthetic scenes.

Layout:
    gt.txt                  ground truth in MOTS text format
    detections.json         detection interchange file
    depth/%06d.pfm          per-frame depth maps
    flow/%06d.flo           per-frame backward flow
    soft/%06d_%02d.npy      coarse soft masks referenced from detections.json
"""
import os
from typing import Dict

import numpy as np

from dataset import save_sequence
from granularity import write_pfm
from temporal import write_flo
from tracking import save_detections
from utils.atomic import atomic_write, atomic_write_dir
from .generator import SynthScene

GT_FILE = "gt.txt"
DETECTIONS_FILE = "detections.json"
DEPTH_DIR = "depth"
FLOW_DIR = "flow"
SOFT_DIR = "soft"


def _save_npy(path: str, values: np.ndarray):
    def writer(tmp):
        with open(tmp, "wb") as f:
            np.save(f, values, allow_pickle=False)
    atomic_write(path, writer)


def _write_layout(scene: SynthScene, root: str):
    for sub in (DEPTH_DIR, FLOW_DIR, SOFT_DIR):
        os.makedirs(os.path.join(root, sub), exist_ok=True)

    for t, depth in enumerate(scene.depth):
        atomic_write(os.path.join(root, DEPTH_DIR, f"{t:06d}.pfm"), lambda tmp, d=depth: write_pfm(tmp, d))
    for t, flow in enumerate(scene.flow):
        atomic_write(os.path.join(root, FLOW_DIR, f"{t:06d}.flo"), lambda tmp, fl=flow: write_flo(tmp, fl))

    soft_paths = {}
    for t, dets in enumerate(scene.detections):
        for j, det in enumerate(dets):
            if det.soft_mask is None:
                continue
            rel = f"{SOFT_DIR}/{t:06d}_{j:02d}.npy"
            _save_npy(os.path.join(root, rel), det.soft_mask.values)
            soft_paths[(t, j)] = rel

    save_sequence(os.path.join(root, GT_FILE), scene.ground_truth)
    save_detections(os.path.join(root, DETECTIONS_FILE), scene.ground_truth.sequence_id,
                    scene.detections, soft_paths)


def write_fixture(scene: SynthScene, out_dir) -> Dict[str, str]:
    """Write the whole layout under out_dir; the directory appears only once complete"""
    out_dir = os.path.normpath(os.fspath(out_dir))
    atomic_write_dir(out_dir, lambda staging: _write_layout(scene, staging))
    return {
        "gt": os.path.join(out_dir, GT_FILE),
        "detections": os.path.join(out_dir, DETECTIONS_FILE),
        "depth": os.path.join(out_dir, DEPTH_DIR),
        "flow": os.path.join(out_dir, FLOW_DIR),
    }
