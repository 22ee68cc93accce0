"""
Path resolution and loading of sequence annotations and per-frame files
"""
import glob
import os
from typing import Dict, List, Optional

import numpy as np

from dataset import SequenceAnnotation, load_sequence
from granularity import DepthMap, read_pfm
from temporal import FeatureMap, FlowField, read_flo
from .errors import FileFormatError, UsageError


class SequenceStore:
    """
    Resolves --gt / --pred / --depth style arguments.
    A sequence argument is either one MOTS text file or a directory of them;
    a frame directory holds one file per frame, ordered by file name.
    """

    SEQUENCE_EXT = ".txt"

    @staticmethod
    def resolve_sequence_files(path: str) -> List[str]:
        if os.path.isdir(path):
            files = sorted(glob.glob(os.path.join(path, f"*{SequenceStore.SEQUENCE_EXT}")))
            if not files:
                raise UsageError(f"{path}: directory holds no {SequenceStore.SEQUENCE_EXT} sequence files")
            return files
        if not os.path.isfile(path):
            raise UsageError(f"{path}: no such file or directory")
        return [path]

    @staticmethod
    def load_sequences(path: str, validate: bool = True, quiet: bool = False,
                       frame_counts: Optional[Dict[str, int]] = None) -> List[SequenceAnnotation]:
        """frame_counts (from a seqmap) fixes the frame count of the sequences it names"""
        anns = []
        for file in SequenceStore.resolve_sequence_files(path):
            if os.path.getsize(file) == 0 and not quiet:
                print(f"[STORE] Empty sequence file: {file}")
            sequence_id = os.path.splitext(os.path.basename(file))[0]
            frame_count = (frame_counts or {}).get(sequence_id)
            anns.append(load_sequence(file, frame_count=frame_count, validate=validate))
        return anns

    @staticmethod
    def frame_files(directory: str, ext: str) -> List[str]:
        if not os.path.isdir(directory):
            raise UsageError(f"{directory}: not a directory")
        files = sorted(glob.glob(os.path.join(directory, f"*{ext}")))
        if not files:
            raise UsageError(f"{directory}: no {ext} files found")
        return files

    @staticmethod
    def load_depth_dir(directory: str) -> List[DepthMap]:
        return [read_pfm(p) for p in SequenceStore.frame_files(directory, ".pfm")]

    @staticmethod
    def load_flow_dir(directory: str) -> List[FlowField]:
        return [read_flo(p) for p in SequenceStore.frame_files(directory, ".flo")]

    @staticmethod
    def load_feature_dir(directory: str) -> List[FeatureMap]:
        maps = []
        for p in SequenceStore.frame_files(directory, ".npy"):
            try:
                values = np.load(p, allow_pickle=False)
            except (OSError, ValueError) as e:
                raise FileFormatError(f"{p}: cannot read feature map ({e})")
            maps.append(FeatureMap(values))
        return maps
