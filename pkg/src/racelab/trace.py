"""Event/trace data model, text format, validation, sampling and generation.

Trace file format (UTF-8 text, LF line endings)::

    line   := thread "|" op [ "|*" ]
    thread := non-empty token without "|" or whitespace
    op     := ("acq" | "rel" | "r" | "w") "(" token ")"

``|*`` marks the event as a member of the sample set.  Lines starting with
``#`` and blank lines are ignored.  Example line: ``T1|w(x)|*``.

Thread/lock/variable names in files are free-form tokens; dense integer ids
are assigned by order of first appearance.  Every trace is validated against
the locking discipline: a lock is held by at most one thread, is released only
by its holder, and re-entrant acquires are rejected.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, replace
from enum import Enum
from typing import List, Optional, Sequence, Tuple


class TraceError(ValueError):
    """Base class for trace parsing/validation/generation errors."""


class TraceSyntaxError(TraceError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class LockDisciplineError(TraceError):
    """Reasons: acquire-of-held-lock | release-by-non-holder | release-of-free-lock."""

    def __init__(self, event_index: int, reason: str):
        super().__init__(f"event {event_index}: {reason}")
        self.event_index = event_index
        self.reason = reason


class InfeasibleConfigError(TraceError):
    """The generator cannot satisfy the requested configuration."""


class OpKind(Enum):
    ACQUIRE = "acq"
    RELEASE = "rel"
    READ = "r"
    WRITE = "w"


_SYNC_KINDS = (OpKind.ACQUIRE, OpKind.RELEASE)


@dataclass(frozen=True)
class Event:
    """One trace event.  ``target`` is a dense lock id (acq/rel) or var id (r/w)."""

    index: int  # 1-based position in the trace
    thread: int
    kind: OpKind
    target: int
    marked: bool = False

    @property
    def is_access(self) -> bool:
        return self.kind is OpKind.READ or self.kind is OpKind.WRITE

    @property
    def is_sync(self) -> bool:
        return not self.is_access


@dataclass(frozen=True)
class Trace:
    """A validated, immutable sequence of events.

    Safe to share read-only across concurrent analyses.  Name tables keep the
    original tokens per dense id so serialization round-trips byte-for-byte.
    """

    events: Tuple[Event, ...]
    num_threads: int
    num_locks: int
    num_vars: int
    thread_names: Tuple[str, ...] = ()
    lock_names: Tuple[str, ...] = ()
    var_names: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.thread_names:
            object.__setattr__(
                self, "thread_names", tuple(f"T{i}" for i in range(self.num_threads))
            )
        if not self.lock_names:
            object.__setattr__(
                self, "lock_names", tuple(f"l{i}" for i in range(self.num_locks))
            )
        if not self.var_names:
            object.__setattr__(
                self, "var_names", tuple(f"x{i}" for i in range(self.num_vars))
            )
        validate_events(self.events, self.num_threads, self.num_locks, self.num_vars)

    def __len__(self) -> int:
        return len(self.events)

    @property
    def sampled_indices(self) -> Tuple[int, ...]:
        return tuple(e.index for e in self.events if e.marked)

    @property
    def sample_size(self) -> int:
        return sum(1 for e in self.events if e.marked)


def validate_events(
    events: Sequence[Event], num_threads: int, num_locks: int, num_vars: int
) -> None:
    """Check indices, id ranges, mark placement and the locking discipline."""
    holder: List[Optional[int]] = [None] * num_locks
    for pos, ev in enumerate(events, start=1):
        if ev.index != pos:
            raise TraceError(f"event {pos}: index field is {ev.index}, expected {pos}")
        if not 0 <= ev.thread < num_threads:
            raise TraceError(f"event {pos}: thread id {ev.thread} out of range")
        limit = num_vars if ev.is_access else num_locks
        if not 0 <= ev.target < limit:
            raise TraceError(f"event {pos}: target id {ev.target} out of range")
        if ev.marked and not ev.is_access:
            raise TraceError(f"event {pos}: mark on non-access event")
        if ev.kind is OpKind.ACQUIRE:
            if holder[ev.target] is not None:
                raise LockDisciplineError(pos, "acquire-of-held-lock")
            holder[ev.target] = ev.thread
        elif ev.kind is OpKind.RELEASE:
            if holder[ev.target] is None:
                raise LockDisciplineError(pos, "release-of-free-lock")
            if holder[ev.target] != ev.thread:
                raise LockDisciplineError(pos, "release-by-non-holder")
            holder[ev.target] = None


_LINE_RE = re.compile(
    r"^(?P<thread>[^|\s]+)\|(?P<op>acq|rel|r|w)\((?P<obj>[^()|\s]+)\)(?P<mark>\|\*)?$"
)


class _DenseIds:
    def __init__(self):
        self.by_name = {}
        self.names: List[str] = []

    def get(self, name: str) -> int:
        idx = self.by_name.get(name)
        if idx is None:
            idx = len(self.names)
            self.by_name[name] = idx
            self.names.append(name)
        return idx


def parse_trace(data) -> Trace:
    """Parse the text format into a validated Trace.

    Accepts ``str`` or ``bytes``.  Dense ids are assigned by first appearance,
    independently for threads, locks and variables.
    """
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    threads, locks, variables = _DenseIds(), _DenseIds(), _DenseIds()
    events: List[Event] = []
    for line_no, raw in enumerate(data.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _LINE_RE.match(line)
        if m is None:
            raise TraceSyntaxError(line_no, f"cannot parse {line!r}")
        kind = OpKind(m.group("op"))
        tid = threads.get(m.group("thread"))
        if kind in _SYNC_KINDS:
            target = locks.get(m.group("obj"))
        else:
            target = variables.get(m.group("obj"))
        marked = m.group("mark") is not None
        if marked and kind in _SYNC_KINDS:
            raise TraceSyntaxError(line_no, "mark on non-access event")
        events.append(Event(len(events) + 1, tid, kind, target, marked))
    return Trace(
        events=tuple(events),
        num_threads=len(threads.names),
        num_locks=len(locks.names),
        num_vars=len(variables.names),
        thread_names=tuple(threads.names),
        lock_names=tuple(locks.names),
        var_names=tuple(variables.names),
    )


def serialize_trace(tr: Trace) -> str:
    """Render a trace back to the text format; inverse of parse_trace."""
    lines = []
    for ev in tr.events:
        name = tr.var_names[ev.target] if ev.is_access else tr.lock_names[ev.target]
        line = f"{tr.thread_names[ev.thread]}|{ev.kind.value}({name})"
        if ev.marked:
            line += "|*"
        lines.append(line)
    return "\n".join(lines) + ("\n" if lines else "")


def load_trace(path) -> Trace:
    with open(path, "rb") as fh:
        return parse_trace(fh.read())


def dump_trace(tr: Trace, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_trace(tr))


# --- sampling -------------------------------------------------------------

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """splitmix64 finalizer; the documented mark-decision mix function."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def bernoulli_hit(seed: int, event_index: int, rate: float) -> bool:
    """Reproducible mark decision for one event.

    The decision depends only on (seed, event index): take
    ``mix64(seed + index * GOLDEN)`` (64-bit wrap-around, GOLDEN =
    0x9E3779B97F4A7C15) and compare against ``floor(rate * 2**64)``.
    """
    z = mix64((seed + event_index * _GOLDEN) & _MASK64)
    return z < int(rate * (1 << 64))


@dataclass(frozen=True)
class SamplingPolicy:
    """How the sample set is chosen: none, premarked, or Bernoulli(rate)."""

    mode: str  # "none" | "premarked" | "bernoulli"
    rate: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("none", "premarked", "bernoulli"):
            raise ValueError(f"unknown sampling mode {self.mode!r}")
        if not 0.0 <= self.rate <= 1.0:
            raise ValueError("rate must lie in [0, 1]")

    @classmethod
    def none(cls) -> "SamplingPolicy":
        return cls("none")

    @classmethod
    def premarked(cls) -> "SamplingPolicy":
        return cls("premarked")

    @classmethod
    def bernoulli(cls, rate: float, seed: int) -> "SamplingPolicy":
        return cls("bernoulli", rate, seed)


def apply_sampling(tr: Trace, policy: SamplingPolicy) -> Trace:
    """Return a copy of ``tr`` whose marks follow ``policy``.

    Synchronization events are never marked.  ``premarked`` keeps the existing
    marks, ``none`` clears all marks, ``bernoulli`` re-decides each access
    event independently from (seed, event index).
    """
    if policy.mode == "premarked":
        return tr
    events = []
    for ev in tr.events:
        if ev.is_access and policy.mode == "bernoulli":
            marked = bernoulli_hit(policy.seed, ev.index, policy.rate)
        else:
            marked = False
        events.append(replace(ev, marked=marked) if marked != ev.marked else ev)
    return replace(tr, events=tuple(events))


# --- synthetic trace generation -------------------------------------------


@dataclass(frozen=True)
class GenConfig:
    """Knobs for the synthetic generator.

    ``p_sync`` is the probability that an idle thread starts a critical
    section instead of issuing a bare access; ``contention`` is the
    probability that a new critical section tries to reuse the most recently
    released lock; ``accesses_per_cs`` is the mean number of accesses inside
    a critical section (geometric).
    """

    threads: int
    locks: int
    vars: int
    events: int
    p_sync: float = 0.3
    contention: float = 0.0
    accesses_per_cs: float = 2.0

    def __post_init__(self):
        for name in ("threads", "locks", "vars", "events"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        for name in ("p_sync", "contention"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.accesses_per_cs < 0:
            raise ValueError("accesses_per_cs must be non-negative")


_NEST_PROB = 0.15
_MAX_DEPTH = 3


def generate_trace(cfg: GenConfig, seed: int) -> Trace:
    """Generate a valid trace; deterministic in (cfg, seed).

    Lock discipline holds by construction: each thread tracks the stack of
    locks it holds and all open critical sections are closed before the event
    budget runs out.  Raises InfeasibleConfigError when that is impossible
    (an odd event budget with p_sync >= 1, which admits no access padding).
    """
    if cfg.p_sync >= 1.0 and cfg.events % 2 == 1:
        raise InfeasibleConfigError(
            "events too small to close open critical sections: "
            "odd event budget with p_sync = 1"
        )
    rng = random.Random(seed)
    p_close = 1.0 / (1.0 + cfg.accesses_per_cs)
    held: List[List[int]] = [[] for _ in range(cfg.threads)]  # per-thread lock stack
    lock_free = [True] * cfg.locks
    lock_used = [False] * cfg.locks
    last_released: Optional[int] = None
    open_total = 0
    events: List[Event] = []

    def emit(thread: int, kind: OpKind, target: int) -> None:
        events.append(Event(len(events) + 1, thread, kind, target, False))

    def pick_lock() -> Optional[int]:
        # Contention first, then never-acquired locks, then any free lock.
        if (
            last_released is not None
            and lock_free[last_released]
            and rng.random() < cfg.contention
        ):
            return last_released
        fresh = [l for l in range(cfg.locks) if lock_free[l] and not lock_used[l]]
        if fresh:
            return rng.choice(fresh)
        free = [l for l in range(cfg.locks) if lock_free[l]]
        return rng.choice(free) if free else None

    while len(events) < cfg.events:
        remaining = cfg.events - len(events)
        if remaining <= open_total:
            # Out of slack: close open critical sections, innermost first.
            thread = rng.choice([t for t in range(cfg.threads) if held[t]])
            lock = held[thread].pop()
            emit(thread, OpKind.RELEASE, lock)
            lock_free[lock] = True
            last_released = lock
            open_total -= 1
            continue
        thread = rng.randrange(cfg.threads)
        depth = len(held[thread])
        if depth > 0:
            if rng.random() < p_close:
                lock = held[thread].pop()
                emit(thread, OpKind.RELEASE, lock)
                lock_free[lock] = True
                last_released = lock
                open_total -= 1
            elif (
                depth < _MAX_DEPTH
                and remaining - 1 > open_total
                and rng.random() < _NEST_PROB * cfg.p_sync
                and (lock := pick_lock()) is not None
            ):
                emit(thread, OpKind.ACQUIRE, lock)
                held[thread].append(lock)
                lock_free[lock] = False
                lock_used[lock] = True
                open_total += 1
            elif cfg.p_sync >= 1.0:
                lock = held[thread].pop()
                emit(thread, OpKind.RELEASE, lock)
                lock_free[lock] = True
                last_released = lock
                open_total -= 1
            else:
                kind = OpKind.WRITE if rng.random() < 0.5 else OpKind.READ
                emit(thread, kind, rng.randrange(cfg.vars))
        else:
            start = rng.random() < cfg.p_sync
            lock = pick_lock() if start else None
            if start and lock is not None and remaining - 1 > open_total:
                emit(thread, OpKind.ACQUIRE, lock)
                held[thread].append(lock)
                lock_free[lock] = False
                lock_used[lock] = True
                open_total += 1
            elif cfg.p_sync >= 1.0:
                continue  # all-sync config and no lock available right now
            else:
                kind = OpKind.WRITE if rng.random() < 0.5 else OpKind.READ
                emit(thread, kind, rng.randrange(cfg.vars))

    return _relabel_by_first_appearance(events)


def _relabel_by_first_appearance(events: Sequence[Event]) -> Trace:
    """Renumber thread/lock/var ids densely by first appearance.

    Keeps the dense-id invariant that parse_trace establishes, so generated
    traces round-trip through the text format event-for-event; ids that never
    appear are dropped.
    """
    threads: dict = {}
    locks: dict = {}
    variables: dict = {}
    out: List[Event] = []
    for ev in events:
        tid = threads.setdefault(ev.thread, len(threads))
        table = variables if ev.is_access else locks
        target = table.setdefault(ev.target, len(table))
        out.append(Event(ev.index, tid, ev.kind, target, ev.marked))
    return Trace(
        events=tuple(out),
        num_threads=max(len(threads), 1),
        num_locks=len(locks),
        num_vars=len(variables),
    )
