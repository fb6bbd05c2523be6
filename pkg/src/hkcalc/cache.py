"""Append-only JSON-lines cache of exact colengths."""
from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

from . import ENGINE_VERSION

log = logging.getLogger(__name__)

CACHE_FILE = "colengths.jsonl"


def sample_key(problem_key: tuple, e: int) -> str:
    payload = json.dumps([problem_key, e])
    return hashlib.sha256(payload.encode()).hexdigest()


class ColengthCache:
    """One JSON object per line: ``{"key", "colength", "version"}``.

    Readers skip malformed lines (e.g. a torn trailing write) and entries from
    other engine versions.  Write failures only log a warning.
    """

    def __init__(self, directory: str | os.PathLike, version: str = ENGINE_VERSION):
        self.dir = Path(directory)
        self.path = self.dir / CACHE_FILE
        self.version = version
        self._mem: dict[str, int] | None = None
        self.hits = 0
        self.writable = True

    def _load(self) -> dict[str, int]:
        if self._mem is None:
            self._mem = {}
            try:
                with open(self.path, encoding="utf-8") as fh:
                    for line in fh:
                        try:
                            rec = json.loads(line)
                            if rec.get("version") == self.version:
                                self._mem[rec["key"]] = int(rec["colength"])
                        except (ValueError, KeyError, TypeError, AttributeError):
                            continue
            except FileNotFoundError:
                pass
            except OSError as exc:
                log.warning("cache unreadable (%s); continuing uncached", exc)
        return self._mem

    def get(self, key: str) -> int | None:
        v = self._load().get(key)
        if v is not None:
            self.hits += 1
        return v

    def put(self, key: str, colength: int) -> None:
        mem = self._load()
        if mem.get(key) == colength:
            return
        mem[key] = colength
        if not self.writable:
            return
        line = json.dumps({"key": key, "colength": colength, "version": self.version}) + "\n"
        try:
            self.dir.mkdir(parents=True, exist_ok=True)
            # a single O_APPEND write keeps concurrent writers line-atomic
            fd = os.open(self.path, os.O_WRONLY | os.O_APPEND | os.O_CREAT, 0o644)
            try:
                os.write(fd, line.encode())
            finally:
                os.close(fd)
        except OSError as exc:
            self.writable = False
            log.warning("cache not writable (%s); continuing uncached", exc)
