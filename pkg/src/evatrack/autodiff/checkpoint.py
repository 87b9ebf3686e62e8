"""Versioned JSON checkpoints: parameter name -> shape + row-major values.

Serialization is canonical (sorted keys, no whitespace), so a fixed model
always produces identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .tensor import Tensor

FORMAT_VERSION = 1


def checkpoint_bytes(params: dict[str, Tensor], meta: dict | None = None) -> bytes:
    doc = {
        "format_version": FORMAT_VERSION,
        "meta": meta or {},
        "params": {
            name: {"shape": list(p.shape), "values": p.data.ravel().tolist()}
            for name, p in params.items()
        },
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()


def save_checkpoint(path, params: dict[str, Tensor], meta: dict | None = None) -> None:
    Path(path).write_bytes(checkpoint_bytes(params, meta))


def load_checkpoint(path) -> tuple[dict[str, Tensor], dict]:
    doc = json.loads(Path(path).read_text())
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported checkpoint format_version {version!r}")
    params = {
        name: Tensor(np.asarray(rec["values"]).reshape(rec["shape"]),
                     requires_grad=True)
        for name, rec in doc["params"].items()
    }
    return params, doc.get("meta", {})
