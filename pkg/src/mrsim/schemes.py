"""Connected-component hashing schemes for the round engine.

Every node state is a strictly increasing tuple of node ids (a "cluster").
Each scheme provides init_state, hash (emit (key, payload) messages), merge,
and export (read components off a converged state).
"""

from bisect import bisect_left, bisect_right
from dataclasses import replace
from math import inf

from . import engine
from .engine import merge_sorted_dedup
from .graph import Graph


def _closed_neighborhoods(g):
    state = []
    for v in range(g.n):
        a = g.adj[v]
        i = bisect_left(a, v)
        state.append(a[:i] + (v,) + a[i:])
    return state


def _export_min_labeled(g, state):
    """Clusters whose minimum is their holder; the terminal shape of the
    min-propagating schemes."""
    out = [st for v, st in enumerate(state) if st and st[0] == v]
    out.sort()
    return out


class HashMin:
    """Label propagation: each node keeps the least id it has heard of and
    tells its static neighbors every round."""

    name = "hash-min"
    check_every = 1

    def init_state(self, g):
        return [(v,) for v in range(g.n)]

    def hash(self, rnd, v, st, g):
        if not st:
            return []
        lab = (st[0],)
        out = [(v, st)]
        for u in g.adj[v]:
            out.append((u, lab))
        return out

    def merge(self, rnd, v, payloads, prev):
        if not payloads:
            return prev
        return (min(p[0] for p in payloads),)

    def export(self, g, state):
        groups = {}
        for v, st in enumerate(state):
            groups.setdefault(st[0], []).append(v)
        return sorted(tuple(sorted(grp)) for grp in groups.values())


class HashToAll:
    """Full gossip: send the whole cluster to every member; cluster radius
    doubles each round."""

    name = "hash-to-all"
    check_every = 1

    def init_state(self, g):
        return _closed_neighborhoods(g)

    def hash(self, rnd, v, st, g):
        return [(u, st) for u in st]

    def merge(self, rnd, v, payloads, prev):
        return merge_sorted_dedup(payloads)

    def export(self, g, state):
        return sorted(dict.fromkeys(st for st in state if st))


class HashToMin:
    """Send the cluster to its minimum and the minimum to the rest."""

    name = "hash-to-min"
    check_every = 1

    def init_state(self, g):
        return _closed_neighborhoods(g)

    def hash(self, rnd, v, st, g):
        if not st:
            return []
        m = st[0]
        out = [(m, st)]
        single = (m,)
        for u in st[1:]:
            out.append((u, single))
        return out

    def merge(self, rnd, v, payloads, prev):
        return merge_sorted_dedup(payloads)

    def export(self, g, state):
        return _export_min_labeled(g, state)


class AlternatingHGTM:
    """Three-round schedule: two label rounds over edges and cluster
    pointers, then one round shipping each node's greater-than-self cluster
    tail to the cluster minimum. Convergence is judged on whole super-steps."""

    name = "hgtm-alt"
    check_every = 3

    def init_state(self, g):
        return [(v,) for v in range(g.n)]

    def hash(self, rnd, v, st, g):
        if not st:
            return []
        m = st[0]
        if rnd % 3 != 0:
            # Label rounds ship only single minima; shipping whole states
            # would break the per-round volume cap of 2(|V|+|E|). A node held
            # elsewhere also forwards to the largest id it knows, its old
            # cluster minimum. Without that hop a minimum more than two edges
            # from its cluster boundary never hears of a smaller one and the
            # run stalls on a fragmented fixpoint.
            single = (m,)
            out = [(v, single)]
            for u in g.adj[v]:
                out.append((u, single))
            i = bisect_left(st, v)
            if (i == len(st) or st[i] != v) and st[-1] != m:
                out.append((st[-1], single))
            return out
        i = bisect_left(st, v)
        gt = st[i:]
        if not gt:
            return []
        single = (m,)
        out = [(m, gt)]
        for u in gt:
            out.append((u, single))
        return out

    def merge(self, rnd, v, payloads, prev):
        if rnd % 3 != 0:
            if not payloads:
                return prev
            m = min(p[0] for p in payloads)
            if not prev:
                return (m,)
            i = bisect_left(prev, m)
            if i < len(prev) and prev[i] == m:
                return prev
            return prev[:i] + (m,) + prev[i:]
        return merge_sorted_dedup(payloads)

    def export(self, g, state):
        return _export_min_labeled(g, state)


class LbHashToMin:
    """Hash-to-min with a reducer load cap: a cluster larger than tau ships
    only its members at most v to the cluster minimum, keeping the rest on v
    as a new intermediate cluster. A second phase stitches the resulting
    sub-clusters together over a contracted graph."""

    check_every = 1

    def __init__(self, tau=inf):
        if tau != inf:
            if int(tau) != tau or tau < 1:
                raise ValueError("tau must be a positive integer or inf")
            tau = int(tau)
        self.tau = tau
        self.name = "hash-to-min-lb"

    def init_state(self, g):
        return _closed_neighborhoods(g)

    def hash(self, rnd, v, st, g):
        if not st:
            return []
        m = st[0]
        if len(st) <= self.tau:
            out = [(m, st)]
            single = (m,)
            for u in st[1:]:
                out.append((u, single))
            return out
        j = bisect_right(st, v)
        low = st[:j]
        high = st[j:]
        out = []
        if low:
            out.append((m, low))
            single = (m,)
            for u in low:
                if u != m:
                    out.append((u, single))
        if high:
            out.append((v, high))
            single = (v,)
            for u in high:
                out.append((u, single))
        return out

    def merge(self, rnd, v, payloads, prev):
        return merge_sorted_dedup(payloads)

    def export(self, g, state):
        return _export_min_labeled(g, state)

    def finalize(self, g, result, max_rounds):
        """Phase 2: contract phase-1 clusters to single nodes, run plain
        hash-to-min on the contraction, and expand back."""
        labels = [st[0] if st else v for v, st in enumerate(result.final)]
        distinct = sorted(set(labels))
        rank = {lab: i for i, lab in enumerate(distinct)}
        cedges = set()
        for u, v in g.edges():
            lu, lv = rank[labels[u]], rank[labels[v]]
            if lu != lv:
                cedges.add((lu, lv) if lu < lv else (lv, lu))
        cg = Graph(len(distinct), sorted(cedges))
        phase2 = engine.run(cg, HashToMin(), max_rounds)
        members = {}
        for v, lab in enumerate(labels):
            members.setdefault(lab, []).append(v)
        components = None
        if phase2.converged and phase2.components is not None:
            components = []
            for comp in phase2.components:
                nodes = []
                for ci in comp:
                    nodes.extend(members[distinct[ci]])
                components.append(tuple(sorted(nodes)))
            components.sort()
        shifted = [replace(m, round=m.round + result.rounds)
                   for m in phase2.per_round]
        return replace(
            result,
            rounds=result.rounds + phase2.rounds,
            converged=result.converged and phase2.converged,
            per_round=result.per_round + shifted,
            components=components,
            phase_split=result.rounds,
        )


_BUILDERS = {
    "hash-min": HashMin,
    "hash-to-all": HashToAll,
    "hash-to-min": HashToMin,
    "hgtm-alt": AlternatingHGTM,
    "hash-to-min-lb": LbHashToMin,
}

SCHEME_NAMES = tuple(_BUILDERS)


def make_scheme(name, tau=None):
    """Build a scheme by selector name; tau applies to hash-to-min-lb only."""
    if name not in _BUILDERS:
        raise ValueError("unknown scheme %r (choose from %s)"
                         % (name, ", ".join(SCHEME_NAMES)))
    if name == "hash-to-min-lb":
        return LbHashToMin(inf if tau is None else tau)
    if tau is not None:
        raise ValueError("tau only applies to hash-to-min-lb")
    return _BUILDERS[name]()
