"""Distributed single-linkage clustering on the round engine.

Clusters grow by blind union rounds (hash-to-all or hash-to-min emissions on
closed neighborhoods), a distributed stop check runs after every round, and a
final split-repair pass undoes merges the last rounds overshot.

Cluster analysis (split, cores, maximal core decomposition) runs on the
single-linkage merge tree of the cluster's induced subgraph: removing the
heaviest tree edge is the same as stepping down one merge, and a merge is
"mutually nearest" exactly when neither side has an edge leaving the whole
cluster lighter than the merge weight (any lighter edge staying inside would
have merged earlier). That turns the recursive definitions into one linear
walk per cluster.
"""

from dataclasses import dataclass
from math import inf

from . import engine
from .graph import GraphError
from .schemes import HashToAll, HashToMin


class StopPredicate:
    """Monotone per-cluster stop rule: once true it stays true as the cluster
    grows along the merge tree."""

    def __init__(self, kind, param=None):
        if kind == "dist":
            if not (isinstance(param, (int, float)) and 0.0 < param <= 1.0):
                raise GraphError("distance threshold must be in (0, 1]")
            param = float(param)
        elif kind == "size":
            if not (isinstance(param, int) and param >= 1):
                raise GraphError("size threshold must be an integer >= 1")
        elif kind == "never":
            param = None
        else:
            raise GraphError("unknown stop predicate %r" % kind)
        self.kind = kind
        self.param = param

    @classmethod
    def parse(cls, text):
        """Parse 'dist:0.35', 'size:100', or 'never'."""
        if text == "never":
            return cls("never")
        kind, sep, arg = text.partition(":")
        if not sep or kind not in ("dist", "size"):
            raise GraphError("bad stop spec %r (want dist:x, size:n, never)" % text)
        try:
            param = float(arg) if kind == "dist" else int(arg)
        except ValueError:
            raise GraphError("bad stop parameter in %r" % text) from None
        return cls(kind, param)

    def stopped(self, size, max_internal_edge):
        if self.kind == "never":
            return False
        if self.kind == "size":
            return size > self.param
        return max_internal_edge > self.param

    def local(self, g, c, cache=None):
        """Stop_local on one cluster (max merge-tree edge for dist)."""
        c = tuple(c)
        if len(c) <= 1:
            return self.stopped(len(c), 0.0)
        if self.kind == "size":
            return len(c) > self.param
        if self.kind == "never":
            return False
        a = _analyze(g, c, cache)
        if not a.connected:
            raise GraphError("cluster %r is not connected" % (c,))
        return a.topw[a.root] > self.param

    def key(self):
        return (self.kind, self.param)

    def __str__(self):
        if self.kind == "never":
            return "never"
        if self.kind == "dist":
            return "dist:%g" % self.param
        return "size:%d" % self.param


def distance_threshold(theta):
    return StopPredicate("dist", theta)


def size_threshold(s):
    return StopPredicate("size", s)


def never_stop():
    return StopPredicate("never")


class _Analysis:
    """Merge tree of one cluster: leaves 0..k-1 are the members in id order,
    internal nodes follow in merge (ascending weight) order."""

    __slots__ = ("members", "size", "topw", "ok", "left", "right", "root",
                 "connected", "_sets")

    def __init__(self, members):
        self.members = members
        k = len(members)
        self.size = [1] * k
        self.topw = [0.0] * k
        self.ok = [True] * k
        self.left = [-1] * k
        self.right = [-1] * k
        self.root = 0
        self.connected = k == 1
        self._sets = None

    def node_members(self, t):
        """Sorted member ids under merge-tree node t (cached per tree)."""
        if self._sets is None:
            self._sets = {}
        got = self._sets.get(t)
        if got is None:
            out = []
            stack = [t]
            while stack:
                x = stack.pop()
                if self.left[x] < 0:
                    out.append(self.members[x])
                else:
                    stack.append(self.left[x])
                    stack.append(self.right[x])
            out.sort()
            got = tuple(out)
            self._sets[t] = got
        return got


def _analyze(g, c, cache=None):
    if cache is not None:
        hit = cache.get(c)
        if hit is not None:
            return hit
    if g.weights is None:
        raise GraphError("cluster analysis needs edge weights")
    if len(c) == 0:
        raise GraphError("empty cluster")
    k = len(c)
    idx = {v: i for i, v in enumerate(c)}
    ext = [inf] * k
    edges = []
    for i, u in enumerate(c):
        for v in g.adj[u]:
            w = g.weight(u, v)
            j = idx.get(v)
            if j is None:
                if w < ext[i]:
                    ext[i] = w
            elif i < j:
                edges.append((w, i, j))
    edges.sort()
    a = _Analysis(c)
    min_ext = ext
    uf = list(range(k))

    def find(x):
        r = x
        while uf[r] != r:
            r = uf[r]
        while uf[x] != r:
            uf[x], x = r, uf[x]
        return r

    node_of = list(range(k))
    nxt = k
    for w, i, j in edges:
        ri, rj = find(i), find(j)
        if ri == rj:
            continue
        ta, tb = node_of[ri], node_of[rj]
        a.size.append(a.size[ta] + a.size[tb])
        a.topw.append(w)
        a.ok.append(a.ok[ta] and a.ok[tb]
                    and min_ext[ta] > w and min_ext[tb] > w)
        a.left.append(ta)
        a.right.append(tb)
        min_ext.append(min_ext[ta] if min_ext[ta] < min_ext[tb] else min_ext[tb])
        uf[ri] = rj
        node_of[rj] = nxt
        nxt += 1
    a.connected = nxt == 2 * k - 1 or k == 1
    a.root = nxt - 1 if k > 1 else 0
    if cache is not None:
        cache[c] = a
    return a


def _require_connected(a, c):
    if not a.connected:
        raise GraphError("cluster %r is not connected" % (c,))


def cluster_distance(g, a, b):
    """Lightest edge between two disjoint clusters, inf if none."""
    if g.weights is None:
        raise GraphError("cluster distance needs edge weights")
    sa, sb = set(a), set(b)
    if not sa or not sb:
        raise GraphError("clusters must be nonempty")
    if sa & sb:
        raise GraphError("clusters overlap")
    if len(sa) > len(sb):
        sa, sb = sb, sa
    best = inf
    for u in sa:
        for v in g.adj[u]:
            if v in sb:
                w = g.weight(u, v)
                if w < best:
                    best = w
    return best


def split(g, c):
    """Remove the heaviest merge-tree edge: the top two sub-merges."""
    c = tuple(sorted(c))
    if len(c) < 2:
        raise GraphError("cannot split a cluster of size %d" % len(c))
    a = _analyze(g, c)
    _require_connected(a, c)
    lo = a.node_members(a.left[a.root])
    hi = a.node_members(a.right[a.root])
    return (lo, hi) if lo[0] < hi[0] else (hi, lo)


def is_core(g, c, cache=None):
    """True when every recursive split is a pair of mutually nearest halves."""
    c = tuple(sorted(c))
    a = _analyze(g, c, cache)
    _require_connected(a, c)
    return a.ok[a.root]


def mcd(g, c, cache=None):
    """Minimal core decomposition: the maximal merge-tree nodes that are
    cores, a partition of the cluster."""
    c = tuple(sorted(c))
    a = _analyze(g, c, cache)
    _require_connected(a, c)
    out = []
    stack = [a.root]
    while stack:
        t = stack.pop()
        if a.ok[t]:
            out.append(a.node_members(t))
        else:
            stack.append(a.left[t])
            stack.append(a.right[t])
    out.sort()
    return out


def split_repair(g, c, pred, cache=None):
    """Highest merge-tree nodes that are cores and not stopped: keeps every
    valid core, recursively splits the rest."""
    c = tuple(sorted(c))
    a = _analyze(g, c, cache)
    _require_connected(a, c)
    out = []
    stack = [a.root]
    while stack:
        t = stack.pop()
        if a.ok[t] and not pred.stopped(a.size[t], a.topw[t]):
            out.append(a.node_members(t))
        else:
            stack.append(a.left[t])
            stack.append(a.right[t])
    out.sort()
    return out


def _best_core(best, core):
    for v in core:
        cur = best.get(v)
        if cur is None or (len(core), -core[0]) > (len(cur), -cur[0]):
            best[v] = core
    return best


def _connected_pieces(g, c, cache=None):
    """Connected components of the induced subgraph, as sorted tuples.
    Min-propagating growth can leave a node holding ids of two far-apart
    minima, so grown states are decomposed before core analysis."""
    a = _analyze(g, c, cache)
    if a.connected:
        return (c,)
    seen = [False] * len(a.size)
    roots = []
    for t in range(len(a.size) - 1, -1, -1):
        if seen[t]:
            continue
        roots.append(t)
        stack = [t]
        while stack:
            x = stack.pop()
            seen[x] = True
            if a.left[x] >= 0:
                stack.append(a.left[x])
                stack.append(a.right[x])
    return tuple(a.node_members(t) for t in roots)


def stop_round(g, clusters, pred, cache=None):
    """Global stop: decompose every cluster into cores, hand each node its
    largest core (ties to the smaller minimum id), and require Stop_local on
    all of them."""
    best = {}
    for c in dict.fromkeys(tuple(c) for c in clusters):
        for piece in _connected_pieces(g, c, cache):
            for core in mcd(g, piece, cache):
                _best_core(best, core)
    if len(best) != g.n:
        raise GraphError("cluster collection does not cover every node")
    if pred.kind == "never":
        return False
    for core in best.values():
        if not pred.local(g, core, cache):
            return False
    return True


@dataclass
class SlcResult:
    algo: str
    stop: str
    rounds: int
    converged: bool
    stopped: bool
    per_round: list
    clusters: list


_SLC_SCHEMES = {"hash-to-all": HashToAll, "hash-to-min": HashToMin}


def run_slc(g, algo, pred, max_rounds, cache=None):
    """Grow, stop, repair. Returns the final clustering as a partition."""
    if g.weights is None:
        raise GraphError("single-linkage clustering needs edge weights")
    if algo not in _SLC_SCHEMES:
        raise GraphError("unknown growth scheme %r (choose from %s)"
                         % (algo, ", ".join(sorted(_SLC_SCHEMES))))
    if max_rounds < 1:
        raise GraphError("max_rounds must be at least 1")
    if cache is None:
        cache = {}
    scheme = _SLC_SCHEMES[algo]()
    state = scheme.init_state(g)
    per_round = []
    rounds = 0
    stopped = False
    converged = False
    for rnd in range(1, max_rounds + 1):
        new_state, metrics = engine.step(g, scheme, state, rnd)
        rounds = rnd
        per_round.append(metrics)
        fixpoint = new_state == state
        state = new_state
        if stop_round(g, (st for st in state if st), pred, cache):
            stopped = True
            converged = True
            break
        if fixpoint:
            converged = True
            break
    pieces = {}
    for c in dict.fromkeys(st for st in state if st):
        for part in _connected_pieces(g, c, cache):
            for piece in split_repair(g, part, pred, cache):
                pieces[piece] = None
    best = {}
    for piece in pieces:
        _best_core(best, piece)
    if len(best) != g.n:
        raise GraphError("repair did not cover every node")
    chosen = dict.fromkeys(best[v] for v in range(g.n))
    if sum(len(p) for p in chosen) != g.n:
        raise GraphError("repair did not produce a partition")
    clusters = sorted(chosen)
    return SlcResult(algo=algo, stop=str(pred), rounds=rounds,
                     converged=converged, stopped=stopped,
                     per_round=per_round, clusters=clusters)
