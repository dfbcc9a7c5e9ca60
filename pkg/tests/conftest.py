"""Shared fixtures: golden traces and random-config helpers."""

from __future__ import annotations

import random

import pytest

from racelab.trace import GenConfig, SamplingPolicy, apply_sampling, generate_trace, parse_trace

# The 18-event two-thread handoff execution used throughout the golden tests.
# Sample marks sit on events 5, 15 and 16.  Thread ids: T1 -> 0, T2 -> 1;
# lock ids by first appearance: l4 -> 0, l3 -> 1, l2 -> 2, l1 -> 3.
LADDER_TEXT = """\
T1|acq(l4)
T1|acq(l3)
T1|acq(l2)
T1|acq(l1)
T1|w(x)|*
T1|rel(l1)
T1|w(x)
T2|acq(l1)
T2|w(x)
T1|rel(l2)
T1|w(x)
T2|acq(l2)
T1|rel(l3)
T2|acq(l3)
T1|w(x)|*
T1|w(x)|*
T1|rel(l4)
T2|acq(l4)
"""

L4, L3, L2, L1 = 0, 1, 2, 3  # dense lock ids in LADDER_TEXT


@pytest.fixture(scope="session")
def ladder_trace():
    return parse_trace(LADDER_TEXT)


@pytest.fixture(scope="session")
def ladder_all_marked(ladder_trace):
    return apply_sampling(ladder_trace, SamplingPolicy.bernoulli(1.0, 0))


def handoff_trace(k: int = 100):
    """One sampled access followed by k redundant lock handoffs between two threads."""
    lines = ["T1|acq(l)", "T1|w(x)|*", "T1|rel(l)"]
    for _ in range(k):
        lines += ["T2|acq(l)", "T2|rel(l)", "T1|acq(l)", "T1|rel(l)"]
    return parse_trace("\n".join(lines))


def random_config(rng: random.Random, max_events: int = 160) -> GenConfig:
    return GenConfig(
        threads=rng.randint(1, 8),
        locks=rng.randint(1, 8),
        vars=rng.randint(1, 8),
        events=rng.randint(10, max_events),
        p_sync=rng.choice([0.1, 0.3, 0.5, 0.7]),
        contention=rng.random(),
        accesses_per_cs=rng.choice([0.5, 1.0, 2.0, 4.0]),
    )


def random_traces(seed: int, count: int, max_events: int = 160):
    """Deterministic stream of (trace, rate) pairs for differential tests."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        tr = generate_trace(random_config(rng, max_events), seed * 10_000 + i)
        rate = rng.choice([0.0, 0.05, 0.2, 0.5, 1.0])
        out.append((apply_sampling(tr, SamplingPolicy.bernoulli(rate, i)), rate))
    return out
