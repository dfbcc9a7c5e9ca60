"""Uniform operation counters across engines and machine-readable reports.

Counting conventions:

* ``full_traversals`` counts O(T) clock-width passes in the synchronization
  handlers only: one per acquire join, one per release copy (two each for the
  freshness engine, which keeps a second clock), and one per deep copy in the
  ordered-list engine.  Race-check comparisons are not counted here.
* ``entries_saved`` accumulates, at each non-skipped acquire of the
  ordered-list engine, the difference between T and the number of list
  entries actually traversed.
* ``epoch_increments`` counts local-epoch advances (every release for the
  baseline full detector, only sample-consuming releases for the sampling
  engines).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Mapping, Optional

_COUNTER_FIELDS = (
    "events_total",
    "accesses_total",
    "accesses_sampled",
    "acquires_total",
    "acquires_skipped",
    "releases_total",
    "releases_copied",
    "deep_copies",
    "shallow_copies",
    "nodes_visited",
    "full_traversals",
    "entries_saved",
    "race_count",
    "epoch_increments",
)


@dataclass
class RunMetrics:
    events_total: int = 0
    accesses_total: int = 0
    accesses_sampled: int = 0
    acquires_total: int = 0
    acquires_skipped: int = 0
    releases_total: int = 0
    releases_copied: int = 0
    deep_copies: int = 0
    shallow_copies: int = 0
    nodes_visited: int = 0
    full_traversals: int = 0
    entries_saved: int = 0
    race_count: int = 0
    epoch_increments: int = 0
    num_threads: int = 0

    @property
    def skip_ratio(self) -> float:
        if self.acquires_total == 0:
            return 0.0
        return self.acquires_skipped / self.acquires_total

    @property
    def saving_ratio(self) -> float:
        processed = self.acquires_total - self.acquires_skipped
        denom = self.num_threads * processed
        if denom == 0:
            return 0.0
        return self.entries_saved / denom

    def merge(self, other: "RunMetrics") -> "RunMetrics":
        """Additive merge for batch reports."""
        out = RunMetrics(num_threads=max(self.num_threads, other.num_threads))
        for name in _COUNTER_FIELDS:
            setattr(out, name, getattr(self, name) + getattr(other, name))
        return out

    def as_dict(self, labels: Optional[Mapping[str, object]] = None) -> dict:
        row: dict = dict(labels) if labels else {}
        for name in _COUNTER_FIELDS:
            row[name] = getattr(self, name)
        row["skip_ratio"] = self.skip_ratio
        row["saving_ratio"] = self.saving_ratio
        return row


def emit(
    metrics: RunMetrics,
    fmt: str = "json",
    labels: Optional[Mapping[str, object]] = None,
) -> str:
    """Render one metrics record as a JSON object or a CSV row with header."""
    row = metrics.as_dict(labels)
    if fmt == "json":
        return json.dumps(row, sort_keys=False) + "\n"
    if fmt == "csv":
        return emit_csv_rows([row])
    raise ValueError(f"unknown format {fmt!r}")


def emit_csv_rows(rows) -> str:
    """CSV with a mandatory header row; field order follows the first row."""
    rows = list(rows)
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()
