"""Baseline full happens-before detector (no sampling).

Per-thread clocks start at bottom with the own component at 1; every release
copies the thread clock to the lock and then advances the thread's local
component.  Every access is checked and recorded, regardless of marks.
"""

from __future__ import annotations

from typing import List

from ..clocks import bottom, join_into
from ..history import RaceReport
from ..trace import Event
from .base import Engine, check_monotone


class DjitpEngine(Engine):
    name = "djitp"

    def __init__(self, num_threads, num_locks, num_vars, **kwargs):
        super().__init__(num_threads, num_locks, num_vars, **kwargs)
        self.c_threads = [bottom(num_threads) for _ in range(num_threads)]
        for t in range(num_threads):
            self.c_threads[t][t] = 1
        self.c_locks = [bottom(num_threads) for _ in range(num_locks)]

    def _effective(self, thread: int) -> List[int]:
        return list(self.c_threads[thread])

    def _acquire(self, ev: Event) -> None:
        join_into(self.c_threads[ev.thread], self.c_locks[ev.target])
        self.metrics.full_traversals += 1

    def _release(self, ev: Event) -> None:
        ct = self.c_threads[ev.thread]
        if self.debug:
            check_monotone(self.c_locks[ev.target], ct, "lock")
        self.c_locks[ev.target] = list(ct)
        self.metrics.full_traversals += 1
        self.metrics.releases_copied += 1
        self._emit(ev)  # the release's timestamp precedes the local increment
        ct[ev.thread] += 1
        self.metrics.epoch_increments += 1

    def _access(self, ev: Event) -> List[RaceReport]:
        t = ev.thread
        ct = self.c_threads[t]
        # Full detection: treat every access as recorded, ignoring marks.
        return self.histories.check_and_update(
            ev.index, t, ev.target, ev.kind.value == "w", ct, ct[t], marked=True
        )
