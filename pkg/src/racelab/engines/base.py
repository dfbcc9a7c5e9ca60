"""Shared engine scaffolding: event dispatch, metrics, snapshot callback.

Engines process one validated trace in order, one instance per analysis
stream.  The optional ``on_event`` callback receives
``(event, effective_timestamp)`` at the event's timestamp point: after the
acquire join or access handling, and at releases after the local-time fold
but before the epoch advances.  This is the per-event timestamp the
differential tests compare against the declarative tables.
"""

from __future__ import annotations

from typing import Callable, List, Optional, Sequence

from ..history import SAMPLED_ONLY, AccessHistories, RaceReport
from ..metrics import RunMetrics
from ..trace import Event, OpKind, Trace

SnapshotHook = Callable[[Event, List[int]], None]


class Engine:
    """Base class; subclasses implement the four handlers."""

    name = "base"

    def __init__(
        self,
        num_threads: int,
        num_locks: int,
        num_vars: int,
        *,
        mode: str = SAMPLED_ONLY,
        on_event: Optional[SnapshotHook] = None,
        debug: bool = False,
    ):
        self.num_threads = num_threads
        self.num_locks = num_locks
        self.num_vars = num_vars
        self.mode = mode
        self.on_event = on_event
        self.debug = debug
        self.histories = AccessHistories(num_vars, num_threads, mode)
        self.metrics = RunMetrics(num_threads=num_threads)
        self.reports: List[RaceReport] = []

    # -- handlers ----------------------------------------------------------

    def _acquire(self, ev: Event) -> None:
        raise NotImplementedError

    def _release(self, ev: Event) -> None:
        raise NotImplementedError

    def _access(self, ev: Event) -> List[RaceReport]:
        raise NotImplementedError

    def _effective(self, thread: int) -> List[int]:
        """Thread clock with the own component replaced by the current epoch."""
        raise NotImplementedError

    # -- driver -------------------------------------------------------------

    def process(self, ev: Event) -> List[RaceReport]:
        m = self.metrics
        m.events_total += 1
        new_reports: List[RaceReport] = []
        if ev.kind is OpKind.ACQUIRE:
            m.acquires_total += 1
            self._acquire(ev)
            self._emit(ev)
        elif ev.kind is OpKind.RELEASE:
            m.releases_total += 1
            self._release(ev)  # emits mid-handler, at the timestamp point
        else:
            m.accesses_total += 1
            if ev.marked:
                m.accesses_sampled += 1
            new_reports = self._access(ev)
            self._emit(ev)
        if new_reports:
            self.reports.extend(new_reports)
            m.race_count += len(new_reports)
        return new_reports

    def run(self, tr: Trace) -> List[RaceReport]:
        for ev in tr.events:
            self.process(ev)
        return self.reports

    def racy_set(self) -> set:
        return {(r.event_index, r.kind) for r in self.reports}

    def _emit(self, ev: Event) -> None:
        if self.on_event is not None:
            self.on_event(ev, self._effective(ev.thread))


def check_monotone(old: Sequence[int], new: Sequence[int], what: str) -> None:
    for a, b in zip(old, new):
        if b < a:
            raise AssertionError(f"{what} clock decreased: {old} -> {new}")
