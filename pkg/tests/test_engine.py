"""Engine contract tests: merging, metrics, convergence, fault paths."""

import json
import random

import pytest

from mrsim.engine import (EngineFault, merge_sorted_dedup, result_to_json, run,
                          step)
from mrsim.graph import Graph, gen_path, gen_random
from mrsim.schemes import AlternatingHGTM, HashMin, HashToMin


def test_merge_sorted_dedup_examples():
    assert merge_sorted_dedup([]) == ()
    assert merge_sorted_dedup([()]) == ()
    assert merge_sorted_dedup([(1, 2, 3)]) == (1, 2, 3)
    assert merge_sorted_dedup([(1, 2), (1, 2), (1, 2)]) == (1, 2)
    assert merge_sorted_dedup([(1, 3), (2, 3), (1, 2)]) == (1, 2, 3)
    assert merge_sorted_dedup([(), (5,), (0, 9)]) == (0, 5, 9)
    assert merge_sorted_dedup([[4, 7], (4,)]) == (4, 7)


def test_merge_sorted_dedup_matches_set_union():
    rng = random.Random(11)
    for _ in range(300):
        seqs = []
        for _ in range(rng.randrange(0, 5)):
            m = rng.randrange(0, 6)
            seqs.append(tuple(sorted(rng.sample(range(30), m))))
        want = tuple(sorted(set(x for s in seqs for x in s)))
        assert merge_sorted_dedup(seqs) == want


def test_merge_sorted_dedup_rejects_unsorted_input():
    with pytest.raises(EngineFault):
        merge_sorted_dedup([(2, 1)])
    with pytest.raises(EngineFault):
        merge_sorted_dedup([(5,), (9, 0)])


class _BadKeyScheme:
    name = "bad-key"
    check_every = 1

    def init_state(self, g):
        return [(v,) for v in range(g.n)]

    def hash(self, rnd, v, st, g):
        return [(g.n, st)] if v == 0 else []

    def merge(self, rnd, v, payloads, prev):
        return merge_sorted_dedup(payloads)

    def export(self, g, state):
        return []


class _EmptyPayloadScheme(_BadKeyScheme):
    name = "empty-payload"

    def hash(self, rnd, v, st, g):
        return [(v, ())] if v == 0 else []


def test_step_rejects_key_out_of_range():
    g = gen_path(3)
    with pytest.raises(EngineFault, match="outside"):
        run(g, _BadKeyScheme(), 5)


def test_step_rejects_empty_payload():
    g = gen_path(3)
    with pytest.raises(EngineFault, match="empty payload"):
        run(g, _EmptyPayloadScheme(), 5)


def test_run_rejects_bad_max_rounds_and_state_length():
    g = gen_path(3)
    with pytest.raises(EngineFault):
        run(g, HashMin(), 0)
    with pytest.raises(EngineFault):
        run(g, HashMin(), 5, initial_state=[(0,), (1,)])


class _SilentScheme:
    """Only node 0 speaks; everyone else receives nothing."""

    name = "silent"
    check_every = 1

    def init_state(self, g):
        return [(v,) for v in range(g.n)]

    def hash(self, rnd, v, st, g):
        return [(0, (0,))] if v == 0 else []

    def merge(self, rnd, v, payloads, prev):
        return merge_sorted_dedup(payloads)

    def export(self, g, state):
        return []


def test_nodes_keep_nothing_implicitly():
    # A merge built purely from payloads wipes any node the hash skipped;
    # the engine must not smuggle the previous state back in.
    g = gen_path(3)
    state, _ = step(g, _SilentScheme(), _SilentScheme().init_state(g), 1)
    assert state == [(0,), (), ()]


def test_snapshots_one_per_round_plus_initial():
    g = gen_path(5)
    res = run(g, HashToMin(), 50, record=True)
    assert res.converged
    assert len(res.snapshots) == res.rounds + 1
    assert res.snapshots[0] == ((0, 1), (0, 1, 2), (1, 2, 3), (2, 3, 4),
                                (3, 4))
    assert res.snapshots[-1] == res.final
    plain = run(g, HashToMin(), 50)
    assert plain.snapshots is None


def test_initial_state_override_is_used():
    g = gen_path(4)
    res = run(g, HashMin(), 50, initial_state=[(0,), (0,), (0,), (0,)],
              record=True)
    assert res.snapshots[0] == ((0,), (0,), (0,), (0,))
    assert res.rounds == 1


def test_unconverged_run_reports_no_components():
    g = gen_path(64)
    res = run(g, HashMin(), 5)
    assert not res.converged
    assert res.rounds == 5
    assert res.components is None
    assert len(res.per_round) == 5


def test_convergence_checked_on_super_step_boundaries():
    res = run(gen_path(2), AlternatingHGTM(), 100)
    assert res.converged
    assert res.rounds % 3 == 0


class _CountingScheme:
    """Delegating wrapper that tallies traffic independently of the engine."""

    def __init__(self, inner):
        self.inner = inner
        self.name = inner.name
        self.check_every = inner.check_every
        self.rounds = {}

    def _rec(self, rnd):
        return self.rounds.setdefault(
            rnd, {"messages": 0, "volume": 0, "per_key": {}, "state": 0})

    def init_state(self, g):
        return self.inner.init_state(g)

    def hash(self, rnd, v, st, g):
        out = self.inner.hash(rnd, v, st, g)
        rec = self._rec(rnd)
        for key, payload in out:
            rec["messages"] += 1
            rec["volume"] += len(payload)
            rec["per_key"][key] = rec["per_key"].get(key, 0) + len(payload)
        return out

    def merge(self, rnd, v, payloads, prev):
        out = self.inner.merge(rnd, v, payloads, prev)
        self._rec(rnd)["state"] += len(out)
        return out

    def export(self, g, state):
        return self.inner.export(g, state)


def test_metrics_match_independent_tally():
    g = gen_random(60, 0.05, seed=3)
    wrapped = _CountingScheme(HashToMin())
    res = run(g, wrapped, 100)
    assert res.converged
    for m in res.per_round:
        rec = wrapped.rounds[m.round]
        assert m.messages == rec["messages"]
        assert m.node_id_volume == rec["volume"]
        assert m.max_reducer_in == max(rec["per_key"].values(), default=0)
        assert m.total_state == rec["state"]


def test_result_to_json_is_deterministic_and_compact():
    g = gen_random(40, 0.08, seed=9)
    a = result_to_json(run(g, HashToMin(), 100), seed=9)
    b = result_to_json(run(g, HashToMin(), 100), seed=9)
    assert a == b
    assert " " not in a
    doc = json.loads(a)
    assert doc["seed"] == 9
    assert doc["converged"] is True
    assert doc["rounds"] == len(doc["per_round"])
    keys = ["round", "messages", "node_id_volume", "max_reducer_in",
            "total_state"]
    assert all(list(m) == keys for m in doc["per_round"])
    flat = sorted(v for comp in doc["components"] for v in comp)
    assert flat == list(range(g.n))


def test_result_to_json_null_fields():
    g = gen_path(64)
    doc = json.loads(result_to_json(run(g, HashMin(), 3)))
    assert doc["seed"] is None
    assert doc["components"] is None
    assert doc["converged"] is False
