"""Canonical JSON: sorted keys, compact separators, shortest round-trip
floats. Used everywhere a byte-stable serialization is needed."""

from __future__ import annotations

import json


def canonical_dumps(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def canonical_loads(text: str):
    return json.loads(text)
