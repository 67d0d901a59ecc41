"""On-disk cache of high-precision values, keyed by (function, argument digest, digits)."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

CACHE_ENV = "RRSEXTIC_CACHE_DIR"


def cache_dir_from_env() -> Path | None:
    value = os.environ.get(CACHE_ENV)
    return Path(value) if value else None


class ValueCache:
    """Stores decimal strings; an entry serves any request at or below its digits."""

    def __init__(self, root: os.PathLike | str):
        self.root = Path(root)
        self.hits = 0
        self.misses = 0

    def _path(self, fn: str, args: dict) -> Path:
        blob = json.dumps({"fn": fn, "args": args}, sort_keys=True)
        digest = hashlib.sha256(blob.encode()).hexdigest()[:32]
        return self.root / f"{fn}-{digest}.json"

    def get(self, fn: str, args: dict, digits: int) -> dict | None:
        path = self._path(fn, args)
        try:
            data = json.loads(path.read_text())
        except (OSError, ValueError):
            self.misses += 1
            return None
        # more digits requested than stored: the entry is stale
        if data.get("digits", 0) < digits or data.get("args") != args:
            self.misses += 1
            return None
        self.hits += 1
        return data["values"]

    def put(self, fn: str, args: dict, digits: int, values: dict) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        path = self._path(fn, args)
        payload = json.dumps({"fn": fn, "args": args, "digits": digits, "values": values},
                             sort_keys=True)
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(payload)
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
