"""Content-addressed cache for exact length sequences.

Entries are keyed by the hash of (instance digest, operation, parameters);
the degree range is not part of the key, so a shorter request reuses the
stored prefix and a longer one recomputes and replaces the entry. Writes are
atomic (temp file + rename); corrupt entries are discarded with a warning.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any

log = logging.getLogger("epsmult.cache")

CACHE_FORMAT = "1"


class SequenceCache:
    def __init__(self, root: str | Path | None):
        self.root = Path(root) if root is not None else None
        if self.root is not None:
            self.root.mkdir(parents=True, exist_ok=True)

    @property
    def enabled(self) -> bool:
        return self.root is not None

    @staticmethod
    def key(material: dict[str, Any]) -> str:
        blob = json.dumps(material, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def _path(self, digest: str) -> Path:
        assert self.root is not None
        return self.root / f"{digest}.json"

    def lookup(self, material: dict[str, Any], n_max: int) -> list[int] | None:
        if self.root is None:
            return None
        digest = self.key(material)
        path = self._path(digest)
        if not path.exists():
            return None
        try:
            entry = json.loads(path.read_text(encoding="utf-8"))
            if entry["format"] != CACHE_FORMAT or entry["key"] != material:
                raise ValueError("key mismatch")
            values = entry["values"]
            if not isinstance(values, list) or not all(isinstance(v, int) for v in values):
                raise ValueError("values must be integers")
        except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
            log.warning("discarding corrupt cache entry %s (%s)", path.name, exc)
            try:
                path.unlink()
            except OSError:
                pass
            return None
        if len(values) - 1 < n_max:
            return None
        return values[: n_max + 1]

    def store(self, material: dict[str, Any], values: list[int]) -> None:
        if self.root is None:
            return
        digest = self.key(material)
        path = self._path(digest)
        existing = self.lookup(material, 0)
        if existing is not None:
            current = json.loads(path.read_text(encoding="utf-8"))["values"]
            if len(current) >= len(values):
                return  # keep the longer prefix
        payload = {"format": CACHE_FORMAT, "key": material, "values": list(values)}
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                json.dump(payload, handle, sort_keys=True, separators=(",", ":"))
            os.replace(tmp, path)
        except OSError:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
