"""Locate bundled data files (glossary, stopword lists).

The MISINFO_DATA_DIR environment variable overrides the packaged defaults,
so deployments can swap fixtures without reinstalling.
"""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

ENV_DATA_DIR = "MISINFO_DATA_DIR"

GLOSSARY_FILE = "glossary.default"
STOPWORDS_ENGLISH_FILE = "stopwords.english"
STOPWORDS_TRIVIAL_FILE = "stopwords.trivial"
SEPARABLE_FILE = "separable.tokens"


def data_path(name: str) -> Path:
    """Resolve a bundled data file, honoring MISINFO_DATA_DIR."""
    override = os.environ.get(ENV_DATA_DIR)
    if override:
        candidate = Path(override) / name
        if candidate.exists():
            return candidate
    packaged = resources.files("misinfo.data") / name
    return Path(str(packaged))


def default_glossary_path() -> Path:
    return data_path(GLOSSARY_FILE)


def default_stopword_paths() -> tuple[Path, Path]:
    return data_path(STOPWORDS_ENGLISH_FILE), data_path(STOPWORDS_TRIVIAL_FILE)


def separable_fixture_path() -> Path:
    """Tiny hand-built linearly separable token set for optimizer checks."""
    return data_path(SEPARABLE_FILE)
