"""Append-only certificate store: one JSON record per line.

Records are keyed by a content hash of (command, input system, run config),
so re-running an identical invocation is a lookup, not a recomputation.
Timestamps are excluded from the hash.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from typing import Optional

from . import __version__
from .interp import Certificate, certificate_from_dict

STORE_SCHEMA_VERSION = 1


def record_key(command: str, system: dict, config: dict) -> str:
    payload = json.dumps({"command": command, "system": system, "config": config},
                         sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


class CertificateStore:
    def __init__(self, path: str):
        self.path = path
        self._by_key = {}
        if path and os.path.exists(path):
            with open(path) as f:
                for line in f:
                    line = line.strip()
                    if not line:
                        continue
                    rec = json.loads(line)
                    self._by_key[rec["key"]] = rec

    def __len__(self):
        return len(self._by_key)

    def lookup(self, key: str) -> Optional[dict]:
        return self._by_key.get(key)

    def lookup_certificate(self, key: str) -> Optional[Certificate]:
        rec = self._by_key.get(key)
        return certificate_from_dict(rec["certificate"]) if rec else None

    def put(self, command: str, system: dict, config: dict,
            cert: Certificate) -> dict:
        """Append a record unless an identical invocation is already stored."""
        key = record_key(command, system, config)
        existing = self._by_key.get(key)
        if existing is not None:
            return existing
        rec = {
            "schema_version": STORE_SCHEMA_VERSION,
            "key": key,
            "command": command,
            "system": system,
            "config": config,
            "certificate": cert.to_dict(),
            "created_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "tool_version": __version__,
        }
        self._by_key[key] = rec
        if self.path:
            os.makedirs(os.path.dirname(os.path.abspath(self.path)), exist_ok=True)
            with open(self.path, "a") as f:
                f.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")
        return rec
