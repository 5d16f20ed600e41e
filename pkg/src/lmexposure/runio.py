"""Atomic output writing, content digests, and run manifests."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Mapping


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write via a temp file in the target directory plus rename.

    A failed write never leaves a partial file at the destination.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except FileNotFoundError:
            pass
        raise


# p-values stay unrounded: 4 decimals would flatten anything below 5e-5 to 0.
_NEVER_ROUND = {"p_value"}


def round_floats(value, digits: int = 4):
    """Recursively round floats for presentation-layer JSON exports."""
    if isinstance(value, float):
        return round(value, digits)
    if isinstance(value, dict):
        return {
            k: v if k in _NEVER_ROUND else round_floats(v, digits)
            for k, v in value.items()
        }
    if isinstance(value, (list, tuple)):
        return [round_floats(v, digits) for v in value]
    return value


def dump_json(payload, full_precision: bool = False) -> str:
    if not full_precision:
        payload = round_floats(payload)
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_manifest(
    manifest_path: str | Path,
    command: str,
    parameters: Mapping[str, object],
    inputs: Mapping[str, str | Path],
    outputs: Mapping[str, str | Path],
) -> None:
    """Record what a run consumed and produced, with content digests."""
    manifest = {
        "command": command,
        "parameters": dict(parameters),
        "inputs": {name: sha256_file(p) for name, p in sorted(inputs.items())},
        "outputs": {name: sha256_file(p) for name, p in sorted(outputs.items())},
    }
    atomic_write_text(manifest_path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
