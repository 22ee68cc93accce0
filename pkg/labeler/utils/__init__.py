"""Utils package initialization"""
from .errors import LabelerError, UsageError, InputFormatError, InvariantViolation
from .atomic import atomic_write, atomic_write_bytes, atomic_write_dir, atomic_write_text, atomic_write_json
from .workers import run_pool

__all__ = [
    'LabelerError', 'UsageError', 'InputFormatError', 'InvariantViolation',
    'atomic_write', 'atomic_write_bytes', 'atomic_write_dir', 'atomic_write_text', 'atomic_write_json',
    'run_pool',
]
