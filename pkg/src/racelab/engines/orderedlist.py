"""Ordered-list engine: lazy copies plus scalar lock freshness.

Thread timestamps live in move-to-front ordered lists.  A release publishes a
shallow (shared, read-only) view to the lock together with the releaser id
and a freshness scalar; an acquire that learns anything new traverses only a
prefix of the lock's list, as long as the freshness gap, and deep-copies its
own list at most once per mutation batch.

With the local-epoch option (default on) a release does not fold the new
local time into the list at all: the value is kept aside as a pending epoch,
published through a per-lock (releaser, epoch) scalar that acquirers merge as
one extra candidate, and folded into the list at the next forced deep copy.
This saves the deep copies that folding into a freshly shared list would
force.
"""

from __future__ import annotations

from typing import List, Optional, Tuple

from ..history import RaceReport
from ..olist import OrderedList, SharedList
from ..trace import Event
from .base import Engine


class OrderedListEngine(Engine):
    name = "orderedlist"

    def __init__(self, num_threads, num_locks, num_vars, *, local_epoch_opt=True, **kwargs):
        super().__init__(num_threads, num_locks, num_vars, **kwargs)
        self.local_epoch_opt = local_epoch_opt
        self.o_threads = [OrderedList(num_threads) for _ in range(num_threads)]
        self.u_threads = [[0] * num_threads for _ in range(num_threads)]
        self.epochs = [1] * num_threads
        self.new_sample = [False] * num_threads
        self.pending_local: List[Optional[int]] = [None] * num_threads
        self.lock_views: List[Optional[SharedList]] = [None] * num_locks
        self.last_releaser: List[Optional[int]] = [None] * num_locks
        self.lock_freshness: List[Optional[int]] = [None] * num_locks
        self.lock_epoch: List[Optional[Tuple[int, int]]] = [None] * num_locks
        self.deep_copies_per_thread = [0] * num_threads

    # -- views -------------------------------------------------------------

    def clock_snapshot(self, thread: int) -> List[int]:
        """The thread's conceptual sampling clock (pending epoch folded in)."""
        snap = self.o_threads[thread].snapshot()
        if self.pending_local[thread] is not None:
            snap[thread] = self.pending_local[thread]
        return snap

    def _effective(self, thread: int) -> List[int]:
        eff = self.o_threads[thread].snapshot()
        eff[thread] = self.epochs[thread]
        return eff

    def _get_merged(self, thread: int, tstar: int) -> int:
        """Component view used by merge guards; consults the pending epoch."""
        if tstar == thread and self.pending_local[thread] is not None:
            return self.pending_local[thread]
        return self.o_threads[thread].get(tstar)

    def _ensure_exclusive(self, thread: int) -> None:
        lst = self.o_threads[thread]
        if not lst.shared:
            return
        fresh = lst.deep_copy()
        lst.refs -= 1
        self.o_threads[thread] = fresh
        self.metrics.deep_copies += 1
        self.metrics.full_traversals += 1
        self.deep_copies_per_thread[thread] += 1
        pending = self.pending_local[thread]
        if pending is not None:
            # Fold point for the disentangled epoch; the freshness bump for
            # this change was already counted at the release that recorded it.
            fresh.set(thread, pending)
            self.pending_local[thread] = None

    # -- handlers ------------------------------------------------------------

    def _acquire(self, ev: Event) -> None:
        t, lock = ev.thread, ev.target
        lr = self.last_releaser[lock]
        freshness = self.lock_freshness[lock]
        ut = self.u_threads[t]
        if freshness is None or freshness <= ut[lr]:
            self.metrics.acquires_skipped += 1
            return
        view = self.lock_views[lock]
        if self.debug:
            # Self hand-offs always fail the guard, so the merged view is
            # never the thread's own list.
            assert lr != t, "self-handoff passed the freshness guard"
            assert view is not None and view.target is not self.o_threads[t]
        d = freshness - ut[lr]
        ut[lr] = freshness
        visited = 0
        for tstar, n in view.prefix(d):
            visited += 1
            if n > self._get_merged(t, tstar):
                self._ensure_exclusive(t)
                self.o_threads[t].set(tstar, n)
                ut[t] += 1
        if self.local_epoch_opt and self.lock_epoch[lock] is not None:
            rel_thread, rel_value = self.lock_epoch[lock]
            if rel_value > self._get_merged(t, rel_thread):
                self._ensure_exclusive(t)
                self.o_threads[t].set(rel_thread, rel_value)
                ut[t] += 1
        self.metrics.nodes_visited += visited
        self.metrics.entries_saved += max(self.num_threads - visited, 0)

    def _release(self, ev: Event) -> None:
        t, lock = ev.thread, ev.target
        if self.new_sample[t]:
            if self.local_epoch_opt:
                self.pending_local[t] = self.epochs[t]
            else:
                self._ensure_exclusive(t)
                self.o_threads[t].set(t, self.epochs[t])
            self.u_threads[t][t] += 1
            self._emit(ev)
            self.epochs[t] += 1
            self.metrics.epoch_increments += 1
            self.new_sample[t] = False
        else:
            self._emit(ev)
        old_view = self.lock_views[lock]
        if old_view is not None:
            old_view.release()
        self.lock_views[lock] = self.o_threads[t].shallow_copy()
        self.metrics.shallow_copies += 1
        self.last_releaser[lock] = t
        self.lock_freshness[lock] = self.u_threads[t][t]
        if self.local_epoch_opt:
            pending = self.pending_local[t]
            own = pending if pending is not None else self.o_threads[t].get(t)
            self.lock_epoch[lock] = (t, own)

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
