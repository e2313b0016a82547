"""Versioned model and feature-space files.

Model files carry a digest of the feature space they were trained
over, not the vocabulary itself; loading requires the matching space
(usually from its sidecar file) and fails loudly on any mismatch.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from ..corpus import atomic_write
from ..errors import ModelFormatError
from ..features import FeatureMethod, FeatureSpace
from . import MODEL_CLASSES

FORMAT_VERSION = 1


def space_digest(space: FeatureSpace) -> str:
    h = hashlib.sha256()
    h.update(space.method.name.encode())
    for token in space.vocabulary:
        h.update(b"\x00")
        h.update(token.encode("utf-8"))
    return h.hexdigest()


def save_space(space: FeatureSpace, path) -> None:
    doc = {"method": space.method.kind, "vocabulary": list(space.vocabulary)}
    if space.method.n is not None:
        doc["n"] = space.method.n
    atomic_write(path, lambda f: json.dump(doc, f, ensure_ascii=False))


def load_space(path) -> FeatureSpace:
    try:
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
        method = FeatureMethod(doc["method"], doc.get("n"))
        vocabulary = tuple(doc["vocabulary"])
    except (OSError, json.JSONDecodeError, KeyError, TypeError,
            ValueError) as exc:
        raise ModelFormatError(f"bad feature-space file {path}: {exc}") from exc
    return FeatureSpace(method=method, vocabulary=vocabulary,
                        index={tok: i for i, tok in enumerate(vocabulary)})


def save_model(model, path) -> None:
    doc = {
        "format_version": FORMAT_VERSION,
        "model_type": model.model_type,
        "space_digest": space_digest(model.space),
        "space_size": len(model.space),
        "parameters": model.to_payload(),
    }
    atomic_write(path, lambda f: json.dump(doc, f))


def load_model(path, space: FeatureSpace):
    """Load a model file and bind it to its feature space."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
    except OSError as exc:
        raise ModelFormatError(f"cannot read model file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelFormatError(
            f"model file {path} is corrupt: {exc}") from exc
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelFormatError(
            f"model file {path} has format_version {version!r}, "
            f"this build reads {FORMAT_VERSION}")
    if doc.get("space_digest") != space_digest(space):
        raise ModelFormatError(
            f"model file {path} was trained over a different feature space")
    cls = MODEL_CLASSES.get(doc.get("model_type"))
    if cls is None:
        raise ModelFormatError(
            f"model file {path} names unknown type {doc.get('model_type')!r}")
    try:
        return cls.from_payload(doc["parameters"], space)
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(
            f"model file {path} parameters are malformed: {exc}") from exc
