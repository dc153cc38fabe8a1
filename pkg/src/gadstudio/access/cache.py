"""On-disk cache of materialized animations, keyed by animation id.

Layout: ``<root>/index.json`` plus one ``<root>/<animation_id>/`` directory per
entry holding the GAD documents and their ``data/`` blocks.  Index rewrites go
through a temp file and rename so a crash never leaves a half-written index,
and entries are only inserted after their files are fully on disk.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional

from filelock import FileLock


@dataclass(frozen=True)
class CacheEntry:
    animation_id: str
    gad_root: Path
    files: tuple
    created_at: str


class CacheIndex:
    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._index_path = self.root / "index.json"
        self._mutex = threading.Lock()

    def _read(self) -> Dict[str, dict]:
        if not self._index_path.is_file():
            return {}
        try:
            tree = json.loads(self._index_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            return {}
        return tree.get("entries", {})

    def _write(self, entries: Dict[str, dict]) -> None:
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".index-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump({"entries": entries}, fh, indent=2, sort_keys=True)
            os.replace(tmp, self._index_path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)

    def _index_lock(self) -> FileLock:
        return FileLock(str(self.root / "index.lock"))

    def animation_lock(self, animation_id: str) -> FileLock:
        """Single-writer lock for one animation id (cross-process)."""
        return FileLock(str(self.root / f"{animation_id}.lock"))

    def lookup(self, animation_id: str) -> Optional[CacheEntry]:
        """Entry for the id, or None.  Entries whose files have gone missing
        are evicted and treated as a miss."""
        with self._mutex:
            entries = self._read()
            raw = entries.get(animation_id)
            if raw is None:
                return None
            gad_root = self.root / raw["gad_root"]
            files = raw.get("files", [])
            if not gad_root.is_dir() or any(not (gad_root / f).is_file() for f in files):
                with self._index_lock():
                    entries = self._read()
                    entries.pop(animation_id, None)
                    self._write(entries)
                return None
            return CacheEntry(
                animation_id=animation_id,
                gad_root=gad_root,
                files=tuple(files),
                created_at=raw.get("created_at", ""),
            )

    def insert(self, animation_id: str, gad_root: Path, files: List[str]) -> CacheEntry:
        gad_root = Path(gad_root)
        rel = gad_root.relative_to(self.root).as_posix()
        record = {
            "gad_root": rel,
            "files": sorted(files),
            "created_at": datetime.now(timezone.utc).isoformat(),
        }
        with self._mutex, self._index_lock():
            entries = self._read()
            entries[animation_id] = record
            self._write(entries)
        return CacheEntry(
            animation_id=animation_id,
            gad_root=gad_root,
            files=tuple(record["files"]),
            created_at=record["created_at"],
        )

    def ids(self) -> List[str]:
        with self._mutex:
            return sorted(self._read().keys())
