"""
Write-then-rename helpers. Output files either appear complete or not at all.
"""
import json
import os
import shutil
from pathlib import Path
from typing import Callable


def _tmp_path(path) -> str:
    return f"{os.fspath(path)}.tmp.{os.getpid()}"


def atomic_write(path, writer: Callable[[str], None]):
    """
    Call writer(tmp_path) and move the result into place.
    The temporary file is removed if the writer fails.
    """
    path = os.fspath(path)
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    tmp = _tmp_path(path)
    try:
        writer(tmp)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.remove(tmp)


def atomic_write_dir(path, writer: Callable[[str], None]):
    """
    Call writer(tmp_dir) on an empty staging directory and move it into place.
    A directory already at path is swapped out only after the writer succeeded.
    """
    path = os.path.normpath(os.fspath(path))
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    tmp = _tmp_path(path)
    old = f"{path}.old.{os.getpid()}"
    shutil.rmtree(tmp, ignore_errors=True)
    os.makedirs(tmp)
    try:
        writer(tmp)
        if os.path.isdir(path):
            os.replace(path, old)
            try:
                os.replace(tmp, path)
            except OSError:
                os.replace(old, path)
                raise
        else:
            os.replace(tmp, path)
    finally:
        shutil.rmtree(tmp, ignore_errors=True)
        shutil.rmtree(old, ignore_errors=True)


def atomic_write_bytes(path, data: bytes):
    atomic_write(path, lambda tmp: Path(tmp).write_bytes(data))


def atomic_write_text(path, text: str):
    atomic_write_bytes(path, text.encode("utf-8"))


def atomic_write_json(path, payload):
    atomic_write_text(path, json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
