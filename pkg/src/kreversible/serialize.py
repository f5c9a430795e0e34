"""Deterministic report emission.

JSON reports use sorted keys and a fixed indent so identical inputs produce
byte-identical output regardless of worker count or resume history; the CSV
schema for extremal records is tree_code, edges, config, tau, period with
edges rendered 1-based as dash pairs joined by semicolons.
"""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable

import json

from .extremal import ExtremalRecord

CSV_COLUMNS = ("tree_code", "edges", "config", "tau", "period")


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)


def edges_to_text(edges: Iterable[tuple[int, int]]) -> str:
    return ";".join(f"{u + 1}-{v + 1}" for u, v in edges)


def records_to_csv(records: Iterable[ExtremalRecord]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(
            [r.tree_code, edges_to_text(r.tree_edges), r.config.to_string(), r.tau, r.period]
        )
    return out.getvalue()
