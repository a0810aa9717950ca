"""
Time-varying directed communication graphs.

An edge ``(j, i)`` means agent ``j`` can send to agent ``i``. Every node
always carries a self-loop, so each sender splits its mass evenly among
itself and its ``d_j`` out-neighbors and the resulting weight matrices are
column-stochastic.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components


@dataclass(frozen=True)
class GraphSnapshot:
    agent_count: int
    edges: frozenset

    def __post_init__(self):
        m = int(self.agent_count)
        if m < 1:
            raise ValueError(f"agent_count must be >= 1, got {m}")
        edges = set()
        for j, i in self.edges:
            j, i = int(j), int(i)
            if not (0 <= j < m and 0 <= i < m):
                raise ValueError(f"edge ({j}, {i}) out of range for {m} agents")
            edges.add((j, i))
        edges.update((j, j) for j in range(m))
        object.__setattr__(self, "agent_count", m)
        object.__setattr__(self, "edges", frozenset(edges))

    @classmethod
    def from_edges(cls, agent_count, edges=()):
        return cls(agent_count, frozenset(map(tuple, edges)))

    @property
    def out_degree(self):
        """Out-degree of every node, not counting its self-loop."""
        d = np.zeros(self.agent_count, dtype=np.int64)
        for j, i in self.edges:
            if i != j:
                d[j] += 1
        return d

    def in_neighbors(self, i):
        return sorted(j for j, k in self.edges if k == i)

    def adjacency(self):
        """Boolean matrix with ``adj[i, j]`` set when ``j`` sends to ``i``."""
        adj = np.zeros((self.agent_count, self.agent_count), dtype=bool)
        for j, i in self.edges:
            adj[i, j] = True
        return adj

    def to_edge_list(self):
        """One ``"j i"`` line per edge, self-loops included, sorted."""
        return "".join(f"{j} {i}\n" for j, i in sorted(self.edges))


def weight_matrix(g):
    """
    Column-stochastic mixing matrix of a snapshot.

    ``A[i, j] = 1 / (d_j + 1)`` if ``j`` sends to ``i`` (self-loop
    included) and 0 otherwise.
    """
    adj = g.adjacency()
    return adj / (g.out_degree + 1.0)[None, :]


def is_strongly_connected(adj):
    n_comp, _ = connected_components(csr_matrix(adj), directed=True, connection="strong")
    return n_comp == 1


class GraphSequence:
    """
    A rule mapping each time step ``k >= 0`` to a :class:`GraphSnapshot`.

    Parameters
    ----------
    agent_count : int
    snapshot_fn : callable
        ``snapshot_fn(k)`` returns the snapshot for step `k`. It must be a
        pure function of `k`.
    window : int
        Connectivity window ``B``: every block of `B` consecutive snapshots
        is expected to have a strongly connected union.
    name : str, optional
        Label used in reports.
    """

    def __init__(self, agent_count, snapshot_fn, window=1, name="custom"):
        if window < 1:
            raise ValueError(f"window B must be >= 1, got {window}")
        self.agent_count = int(agent_count)
        self.window = int(window)
        self.name = name
        self._snapshot_fn = snapshot_fn
        self._weights = {}

    def snapshot(self, k):
        return self._snapshot_fn(int(k))

    def weight_matrix(self, k):
        g = self.snapshot(k)
        A = self._weights.get(g.edges)
        if A is None:
            A = weight_matrix(g)
            A.flags.writeable = False
            if len(self._weights) < 4096:
                self._weights[g.edges] = A
        return A

    def __repr__(self):
        return f"GraphSequence({self.name!r}, m={self.agent_count}, B={self.window})"


def check_b_strong_connectivity(seq, horizon):
    """
    True iff every full window ``[kB, (k+1)B - 1]`` within steps
    ``0 .. horizon - 1`` has a strongly connected edge union.
    """
    B = seq.window
    if horizon < B:
        raise ValueError(f"horizon ({horizon}) must be at least the window B={B}")
    m = seq.agent_count
    for start in range(0, horizon - B + 1, B):
        union = np.zeros((m, m), dtype=bool)
        for k in range(start, start + B):
            union |= seq.snapshot(k).adjacency()
        if not is_strongly_connected(union):
            return False
    return True


def delta_bound(agent_count, window):
    """Lower bound ``1 / m^(mB)`` on the accumulated row sums."""
    return float(agent_count) ** (-agent_count * window)


def delta_diagnostic(seq, horizon):
    """
    Smallest entry of ``A_{k:0} 1`` over ``k = 0 .. horizon - 1``.

    This is the finite-horizon proxy for the infimum that lower-bounds the
    push-sum weights. Compare against :func:`delta_bound`.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    y = np.ones(seq.agent_count)
    delta = np.inf
    for k in range(horizon):
        y = seq.weight_matrix(k) @ y
        delta = min(delta, float(y.min()))
    return delta


# -- generators ---------------------------------------------------------------


def static(g, window=1, name="static"):
    """The same snapshot at every step."""
    return GraphSequence(g.agent_count, lambda k: g, window=window, name=name)


def cyclic(snapshots, window=None, name="cyclic"):
    """Repeat `snapshots` in order; the window defaults to the cycle length."""
    snapshots = list(snapshots)
    if not snapshots:
        raise ValueError("cyclic needs at least one snapshot")
    m = snapshots[0].agent_count
    if any(g.agent_count != m for g in snapshots):
        raise ValueError("all snapshots in a cycle must have the same agent count")
    period = len(snapshots)
    return GraphSequence(
        m, lambda k: snapshots[k % period], window=period if window is None else window, name=name
    )


def ring_snapshot(m):
    """Directed ring ``0 -> 1 -> ... -> m-1 -> 0``."""
    return GraphSnapshot.from_edges(m, [(j, (j + 1) % m) for j in range(m)] if m > 1 else [])


def complete_snapshot(m):
    return GraphSnapshot.from_edges(m, [(j, i) for j in range(m) for i in range(m) if i != j])


def star_snapshot(m, center=0):
    """Bidirectional star; the hub has out-degree ``m - 1``, leaves have 1."""
    edges = []
    for leaf in range(m):
        if leaf != center:
            edges += [(center, leaf), (leaf, center)]
    return GraphSnapshot.from_edges(m, edges)


def ring_of_cliques_snapshot(clique_count, clique_size):
    """
    Slow-mixing graph: complete cliques joined in a directed ring by a single
    edge from the first node of each clique to the first node of the next.
    """
    if clique_count < 1 or clique_size < 1:
        raise ValueError("clique_count and clique_size must be >= 1")
    m = clique_count * clique_size
    edges = []
    for c in range(clique_count):
        base = c * clique_size
        members = range(base, base + clique_size)
        edges += [(j, i) for j in members for i in members if i != j]
        if clique_count > 1:
            edges.append((base, ((c + 1) % clique_count) * clique_size))
    return GraphSnapshot.from_edges(m, edges)


def random_b_connected(m, window, seed, extra_edge_prob=0.0):
    """
    Random time-varying sequence that is B-strongly-connected by construction.

    For each window a random directed Hamiltonian cycle is drawn and its
    edges are scattered over the `window` steps of that window; additional
    random edges are added independently with probability
    `extra_edge_prob`. Snapshot ``k`` depends only on ``(seed, k // window)``.
    """
    if m < 2:
        raise ValueError("random_b_connected needs at least two agents")
    if window < 1:
        raise ValueError(f"window B must be >= 1, got {window}")
    if not 0.0 <= extra_edge_prob <= 1.0:
        raise ValueError("extra_edge_prob must lie in [0, 1]")

    @lru_cache(maxsize=64)
    def window_snapshots(w):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(w,)))
        perm = rng.permutation(m)
        per_step = [[] for _ in range(window)]
        for a, b in zip(perm, np.roll(perm, -1)):
            per_step[rng.integers(window)].append((a, b))
        if extra_edge_prob > 0:
            mask = rng.random((window, m, m)) < extra_edge_prob
            for step, j, i in zip(*np.nonzero(mask)):
                if i != j:
                    per_step[step].append((j, i))
        return tuple(GraphSnapshot.from_edges(m, e) for e in per_step)

    return GraphSequence(
        m, lambda k: window_snapshots(k // window)[k % window], window=window, name="random"
    )


GRAPH_TYPES = ("ring", "complete", "star", "ring_of_cliques", "self_loops", "edges", "cyclic", "random")


def graph_from_spec(spec, agent_count, seed=None):
    """
    Build a sequence from a plain mapping such as ``{"type": "ring"}``.

    Recognized types: ``ring``, ``complete``, ``star``, ``ring_of_cliques``
    (``clique_count``, ``clique_size``), ``self_loops``, ``edges`` (a static
    list of ``[j, i]`` pairs), ``cyclic`` (``snapshots``: a list of edge
    lists) and ``random`` (``window``, ``extra_edge_prob``, ``seed``). Static
    types accept an optional ``window``. `seed` is used by ``random`` when
    the mapping carries none.
    """
    kind = spec.get("type")
    m = int(agent_count)
    window = spec.get("window")
    if kind == "ring":
        return static(ring_snapshot(m), window or 1, name="ring")
    if kind == "complete":
        return static(complete_snapshot(m), window or 1, name="complete")
    if kind == "star":
        return static(star_snapshot(m, spec.get("center", 0)), window or 1, name="star")
    if kind == "self_loops":
        return static(GraphSnapshot.from_edges(m), window or 1, name="self_loops")
    if kind == "ring_of_cliques":
        cc, cs = int(spec["clique_count"]), int(spec["clique_size"])
        if cc * cs != m:
            raise ValueError(f"ring_of_cliques has {cc} x {cs} nodes but there are {m} agents")
        return static(ring_of_cliques_snapshot(cc, cs), window or 1, name="ring_of_cliques")
    if kind == "edges":
        return static(GraphSnapshot.from_edges(m, spec["edges"]), window or 1, name="edges")
    if kind == "cyclic":
        snaps = [GraphSnapshot.from_edges(m, e) for e in spec["snapshots"]]
        return cyclic(snaps, window)
    if kind == "random":
        s = spec.get("seed", seed)
        if s is None:
            raise ValueError("random graph needs a seed")
        return random_b_connected(m, int(window or 1), int(s), float(spec.get("extra_edge_prob", 0.0)))
    raise ValueError(f"unknown graph type {kind!r}; expected one of {', '.join(GRAPH_TYPES)}")
