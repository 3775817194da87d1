"""A small content-addressed result cache.

Keys are sha256 hashes of a canonical JSON payload describing the
computation; values are JSON documents.  The cache is an optimization
only: corrupt or missing entries are silently recomputed.  Writes go
through a temporary file and an atomic rename so concurrent readers
never see partial data.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

__all__ = ["cache_dir", "cache_key", "cache_get", "cache_put"]

_ENV_VAR = "SWALEX_CACHE_DIR"


def cache_dir() -> Path:
    env = os.environ.get(_ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "swalex"


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def cache_key(payload) -> str:
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


def cache_get(key: str):
    path = cache_dir() / f"{key}.json"
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, ValueError):
        return None


def cache_put(key: str, value) -> None:
    d = cache_dir()
    try:
        d.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(value, fh, sort_keys=True, separators=(",", ":"))
            os.replace(tmp, d / f"{key}.json")
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
    except OSError:
        pass  # caching is best effort
