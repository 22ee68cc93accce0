"""Synth package: seeded synthetic scenes with exact ground truth"""
from .generator import SynthSpec, SynthObject, SynthScene, synth_generate, degrade
from .fixtures import write_fixture, GT_FILE, DETECTIONS_FILE, DEPTH_DIR, FLOW_DIR

__all__ = [
    'SynthSpec', 'SynthObject', 'SynthScene', 'synth_generate', 'degrade',
    'write_fixture', 'GT_FILE', 'DETECTIONS_FILE', 'DEPTH_DIR', 'FLOW_DIR',
]
