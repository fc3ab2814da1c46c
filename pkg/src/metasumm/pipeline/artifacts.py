"""Stage manifests: record exactly which inputs and config produced an artifact.

Manifests sit next to their artifact as <name>.manifest.json. They include
wall time, so reproducibility comparisons cover artifacts and reports but
not manifests.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from ..errors import DataError
from ..io import atomic_write_text, dumps_json


def config_hash(config: dict) -> str:
    return hashlib.sha256(dumps_json(config).encode("utf-8")).hexdigest()[:16]


def manifest_path(artifact: str | Path) -> Path:
    return Path(str(artifact) + ".manifest.json")


def write_manifest(
    artifact: str | Path,
    stage: str,
    inputs: dict[str, str | Path],
    config: dict,
    seed: int | None,
    wall_time_s: float,
) -> Path:
    from ..io import sha256_file

    payload = {
        "stage": stage,
        "artifact": Path(artifact).name,
        "inputs": {
            name: {"path": str(p), "sha256": sha256_file(p)} for name, p in inputs.items()
        },
        "config": config,
        "config_hash": config_hash(config),
        "seed": seed,
        "wall_time_s": round(wall_time_s, 3),
    }
    path = manifest_path(artifact)
    atomic_write_text(path, json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
    return path


def read_manifest(artifact: str | Path) -> dict:
    path = manifest_path(artifact)
    if not path.exists():
        raise DataError(f"no manifest found at {path}")
    return json.loads(path.read_text(encoding="utf-8"))


def require_artifact(path: str | Path, what: str, produced_by: str) -> Path:
    path = Path(path)
    if not path.exists():
        raise DataError(f"{what} not found at {path}; run `metasumm {produced_by}` first")
    return path
