"""Persistent L-polynomial cache: JSONL with a CRC32 column per line.

Write-once per key (q, gamma, F coefficient labels).  Corrupt lines are
detected by checksum, reported and skipped; correctness never depends on the
cache (a miss just recomputes).  The cache directory comes from an explicit
setting or the MODULI_CENSUS_CACHE environment variable.
"""

from __future__ import annotations

import json
import os
import zlib
from pathlib import Path

CACHE_SCHEMA = 1
ENV_VAR = "MODULI_CENSUS_CACHE"


def resolve_cache_dir(explicit: str | None) -> Path | None:
    path = explicit or os.environ.get(ENV_VAR)
    return Path(path) if path else None


def _payload(q: int, gamma: int, labels, coeffs) -> dict:
    return {
        "schema": CACHE_SCHEMA,
        "q": int(q),
        "gamma": int(gamma),
        "F": [int(x) for x in labels],
        "L": [str(c) for c in coeffs],
    }


def _crc(payload: dict) -> int:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return zlib.crc32(blob)


class LPolyCache:
    """Append-only JSONL store of L-polynomial coefficients."""

    def __init__(self, directory: Path):
        self.path = Path(directory) / "lpoly-cache.jsonl"
        self.entries: dict[tuple, list[int]] = {}
        self.corrupt_lines = 0
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    crc = rec.pop("crc")
                    if rec.get("schema") != CACHE_SCHEMA or _crc(rec) != crc:
                        raise ValueError("bad checksum or schema")
                    key = (rec["q"], rec["gamma"], tuple(rec["F"]))
                    self.entries.setdefault(key, [int(c) for c in rec["L"]])
                except (ValueError, KeyError, TypeError):
                    self.corrupt_lines += 1

    def get(self, q: int, gamma: int, labels) -> list[int] | None:
        return self.entries.get((q, gamma, tuple(int(x) for x in labels)))

    def put(self, q: int, gamma: int, labels, coeffs) -> None:
        key = (q, gamma, tuple(int(x) for x in labels))
        if key in self.entries:
            return  # write-once per key
        payload = _payload(q, gamma, labels, coeffs)
        payload_with_crc = dict(payload)
        payload_with_crc["crc"] = _crc(payload)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(payload_with_crc, sort_keys=True, separators=(",", ":")) + "\n")
        self.entries[key] = [int(c) for c in coeffs]
