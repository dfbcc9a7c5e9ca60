"""Freshness-timestamp engine: skips redundant acquire joins and release copies.

Each thread keeps, next to its sampling clock, a freshness clock whose own
component counts exactly the number of component changes applied to the
sampling clock so far; locks carry both clocks plus the id of the last
releasing thread.  An acquire is skipped when the lock's freshness for the
last releaser does not exceed the acquirer's; a release skips the copy when
the thread's own freshness equals the lock's record of it.
"""

from __future__ import annotations

from typing import List, Optional

from ..clocks import bottom, join_into
from ..history import RaceReport
from ..trace import Event
from .base import Engine, check_monotone


class UclockEngine(Engine):
    name = "uclock"

    def __init__(self, num_threads, num_locks, num_vars, **kwargs):
        super().__init__(num_threads, num_locks, num_vars, **kwargs)
        self.c_threads = [bottom(num_threads) for _ in range(num_threads)]
        self.u_threads = [bottom(num_threads) for _ in range(num_threads)]
        self.c_locks = [bottom(num_threads) for _ in range(num_locks)]
        self.u_locks = [bottom(num_threads) for _ in range(num_locks)]
        self.last_releaser: List[Optional[int]] = [None] * num_locks
        self.epochs = [1] * num_threads
        self.new_sample = [False] * num_threads

    def _effective(self, thread: int) -> List[int]:
        eff = list(self.c_threads[thread])
        eff[thread] = self.epochs[thread]
        return eff

    def _acquire(self, ev: Event) -> None:
        t, lock = ev.thread, ev.target
        lr = self.last_releaser[lock]
        if lr is None:
            self.metrics.acquires_skipped += 1
            return
        ut, ul = self.u_threads[t], self.u_locks[lock]
        if ul[lr] <= ut[lr]:
            self.metrics.acquires_skipped += 1
            return
        join_into(ut, ul)
        ct, cl = self.c_threads[t], self.c_locks[lock]
        old = list(ct) if self.debug else None
        for tstar in range(self.num_threads):
            if cl[tstar] > ct[tstar]:
                ct[tstar] = cl[tstar]
                ut[t] += 1
        self.metrics.full_traversals += 2
        if self.debug:
            check_monotone(old, ct, "thread")

    def _release(self, ev: Event) -> None:
        t, lock = ev.thread, ev.target
        self.last_releaser[lock] = t
        ct, ut = self.c_threads[t], self.u_threads[t]
        if self.new_sample[t]:
            ct[t] = self.epochs[t]
            ut[t] += 1
            self._emit(ev)
            self.epochs[t] += 1
            self.metrics.epoch_increments += 1
            self.new_sample[t] = False
        else:
            self._emit(ev)
        if ut[t] != self.u_locks[lock][t]:
            if self.debug:
                check_monotone(self.c_locks[lock], ct, "lock")
            self.c_locks[lock] = list(ct)
            self.u_locks[lock] = list(ut)
            self.metrics.full_traversals += 2
            self.metrics.releases_copied += 1

    def _access(self, ev: Event) -> List[RaceReport]:
        t = ev.thread
        reports = self.histories.check_and_update(
            ev.index,
            t,
            ev.target,
            ev.kind.value == "w",
            self._effective(t),
            self.epochs[t],
            ev.marked,
        )
        if ev.marked:
            self.new_sample[t] = True
        return reports
