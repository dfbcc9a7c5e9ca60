from conftest import handoff_trace, random_traces
from racelab import oracle
from racelab.engines import create_engine
from racelab.olist import OrderedList
from racelab.trace import Event, OpKind, SamplingPolicy, Trace, apply_sampling, parse_trace


def dims(threads, locks, variables):
    return Trace(events=(), num_threads=threads, num_locks=locks, num_vars=variables)


def test_ladder_skip_decisions_match_uclock(ladder_trace):
    results = {}
    for token in ("uclock", "orderedlist"):
        e = create_engine(token, ladder_trace, debug=True)
        skipped = {}
        for ev in ladder_trace.events:
            before = e.metrics.acquires_skipped
            e.process(ev)
            if ev.kind is OpKind.ACQUIRE:
                skipped[ev.index] = e.metrics.acquires_skipped > before
        results[token] = (skipped, e)
    assert results["uclock"][0] == results["orderedlist"][0]
    skipped, engine = results["orderedlist"]
    assert skipped[12] and skipped[14] and not skipped[8] and not skipped[18]
    assert engine.o_threads[1].snapshot() == [2, 0]


def test_freshness_gap_one_merge_visits_one_node():
    # Lock list published by t0, head entry (t0 : 9); freshness gap 15-14 = 1
    # so exactly the head is visited and exactly one set lands on t1's list.
    e = create_engine("orderedlist", dims(6, 1, 1))
    donor = OrderedList(6)
    for tid, val in [(4, 1), (2, 3), (1, 6), (0, 9)]:  # head order: t0, t1, t2, t4
        donor.set(tid, val)
    own = e.o_threads[1]
    for tid, val in [(4, 1), (2, 3), (0, 8), (1, 18)]:
        own.set(tid, val)
    e.u_threads[1] = [14, 22, 3, 0, 1, 0]
    e.lock_views[0] = donor.shallow_copy()
    e.last_releaser[0] = 0
    e.lock_freshness[0] = 15
    e.process(Event(1, 1, OpKind.ACQUIRE, 0))
    assert e.metrics.nodes_visited == 1
    assert e.o_threads[1].get(0) == 9
    assert e.u_threads[1][0] == 15
    assert e.u_threads[1][1] == 23
    assert e.metrics.entries_saved == 5  # six threads, one entry traversed


def test_release_without_sample_on_shared_list_is_free():
    tr = parse_trace("T1|acq(l)\nT1|rel(l)\nT1|acq(l)\nT1|rel(l)")
    e = create_engine("orderedlist", tr, debug=True)
    e.run(tr)
    assert e.metrics.nodes_visited == 0
    assert e.metrics.deep_copies == 0
    assert e.metrics.shallow_copies == 2
    assert e.metrics.acquires_skipped == 2  # self hand-off always skips


def test_handoff_trace_skips_and_lazy_copies():
    tr = handoff_trace(100)
    for opt in (True, False):
        e = create_engine("orderedlist", tr, local_epoch_opt=opt, debug=True)
        e.run(tr)
        assert e.metrics.skip_ratio >= 0.95
        assert e.metrics.shallow_copies == e.metrics.releases_total


def test_equivalence_with_sampling_engine_both_opt_settings():
    for marked, _ in random_traces(seed=61, count=120):
        ref = create_engine("sampling", marked)
        snaps_ref = []
        ref.on_event = lambda ev, eff: snaps_ref.append(eff)
        ref.run(marked)
        for opt in (True, False):
            e = create_engine("orderedlist", marked, local_epoch_opt=opt, debug=True)
            snaps = []
            e.on_event = lambda ev, eff: snaps.append(eff)
            e.run(marked)
            assert e.racy_set() == ref.racy_set() == oracle.racy_events(marked)
            assert snaps == snaps_ref
            for t in range(marked.num_threads):
                assert e.clock_snapshot(t) == ref.c_threads[t]


def test_local_epoch_opt_never_costs_deep_copies():
    for marked, _ in random_traces(seed=62, count=100):
        on = create_engine("orderedlist", marked, local_epoch_opt=True)
        off = create_engine("orderedlist", marked, local_epoch_opt=False)
        on.run(marked)
        off.run(marked)
        assert on.metrics.deep_copies <= off.metrics.deep_copies


def test_copy_and_traversal_budgets():
    for marked, _ in random_traces(seed=63, count=100):
        s, t = marked.sample_size, marked.num_threads
        for opt in (True, False):
            e = create_engine("orderedlist", marked, local_epoch_opt=opt)
            e.run(marked)
            assert e.metrics.deep_copies <= s * t + t
            assert max(e.deep_copies_per_thread, default=0) <= s + 1
            assert e.metrics.nodes_visited <= s * t * t


def test_instance_optimality_budget():
    for marked, _ in random_traces(seed=64, count=100):
        t = marked.num_threads
        vtwork = oracle.clock_work(marked)
        for opt in (True, False):
            e = create_engine("orderedlist", marked, local_epoch_opt=opt)
            e.run(marked)
            m = e.metrics
            assert m.deep_copies * t + m.nodes_visited <= 8 * (vtwork * t + t)


def test_empty_sample_set_never_merges(ladder_trace):
    tr = apply_sampling(ladder_trace, SamplingPolicy.none())
    e = create_engine("orderedlist", tr, debug=True)
    e.run(tr)
    assert e.metrics.acquires_skipped == e.metrics.acquires_total
    assert e.metrics.deep_copies == 0
    assert all(o.snapshot() == [0, 0] for o in e.o_threads)
