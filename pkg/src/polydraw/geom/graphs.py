"""Finite simple graphs with optional node kinds, labels and edge lengths.

Node ids are strings.  Edges are stored canonically (endpoint with the
smaller node index first), so a Graph compares equal regardless of the
orientation edges were supplied in.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from ..errors import ValidationError


@dataclass(frozen=True)
class Graph:
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    kinds: dict = field(default_factory=dict)    # node id -> kind string
    labels: dict = field(default_factory=dict)   # node id -> display label
    lengths: dict = field(default_factory=dict)  # canonical edge -> desired length
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if len(set(self.nodes)) != len(self.nodes):
            raise ValidationError("duplicate node ids")
        idx = {u: i for i, u in enumerate(self.nodes)}
        canon = []
        seen = set()
        for u, v in self.edges:
            if u not in idx or v not in idx:
                raise ValidationError(f"edge endpoint not a node: {(u, v)}")
            if u == v:
                raise ValidationError(f"loop at {u!r}")
            e = (u, v) if idx[u] < idx[v] else (v, u)
            if e in seen:
                raise ValidationError(f"duplicate edge {e}")
            seen.add(e)
            canon.append(e)
        object.__setattr__(self, "edges", tuple(canon))
        if self.lengths:
            fixed = {}
            for (u, v), l in self.lengths.items():
                e = (u, v) if idx[u] < idx[v] else (v, u)
                if e not in seen:
                    raise ValidationError(f"length given for non-edge {e}")
                fixed[e] = l
            object.__setattr__(self, "lengths", fixed)

    @property
    def n(self) -> int:
        return len(self.nodes)

    def index(self) -> dict[str, int]:
        m = self._cache.get("index")
        if m is None:
            m = {u: i for i, u in enumerate(self.nodes)}
            self._cache["index"] = m
        return m

    def edge_key(self, u: str, v: str) -> tuple[str, str]:
        idx = self.index()
        return (u, v) if idx[u] < idx[v] else (v, u)

    def adjacency(self) -> dict[str, tuple[str, ...]]:
        adj = self._cache.get("adj")
        if adj is None:
            tmp: dict[str, list[str]] = {u: [] for u in self.nodes}
            for u, v in self.edges:
                tmp[u].append(v)
                tmp[v].append(u)
            adj = {u: tuple(ns) for u, ns in tmp.items()}
            self._cache["adj"] = adj
        return adj

    def degree(self, u: str) -> int:
        return len(self.adjacency()[u])

    def kind(self, u: str) -> str:
        return self.kinds.get(u, "generic")

    def label(self, u: str) -> str:
        return self.labels.get(u, u)

    def __repr__(self) -> str:
        return f"Graph(nodes={self.n}, edges={len(self.edges)})"


def graph(nodes: Iterable[str], edges: Iterable[Sequence[str]],
          kinds: Mapping | None = None, labels: Mapping | None = None,
          lengths: Mapping | None = None) -> Graph:
    return Graph(tuple(nodes), tuple((u, v) for u, v in edges),
                 dict(kinds or {}), dict(labels or {}), dict(lengths or {}))


def to_networkx(G: Graph) -> "nx.Graph":
    H = nx.Graph()
    H.add_nodes_from(G.nodes)
    H.add_edges_from(G.edges)
    return H


def is_connected(G: Graph) -> bool:
    if G.n == 0:
        raise ValidationError("connectivity of the empty graph is undefined")
    adj = G.adjacency()
    seen = {G.nodes[0]}
    stack = [G.nodes[0]]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == G.n


def is_isomorphic(G1: Graph, G2: Graph) -> bool:
    return nx.is_isomorphic(to_networkx(G1), to_networkx(G2))


class _FlowNet:
    """Node-split digraph for vertex connectivity queries, capacities clamped at k.

    Node u becomes u_in = 2u and u_out = 2u+1 with an internal arc of
    capacity 1; an edge {u, v} becomes arcs u_out -> v_in and v_out -> u_in
    of capacity k.  max-flow(s_out, t_in) then equals min(k, kappa(s, t))
    for nonadjacent s, t.
    """

    def __init__(self, G: Graph, k: int):
        idx = G.index()
        n = G.n
        rows, cols, caps = [], [], []
        for i in range(n):
            rows.append(2 * i)
            cols.append(2 * i + 1)
            caps.append(1)
        for u, v in G.edges:
            i, j = idx[u], idx[v]
            rows += [2 * i + 1, 2 * j + 1]
            cols += [2 * j, 2 * i]
            caps += [k, k]
        self.mat = csr_matrix((np.array(caps, dtype=np.int32),
                               (np.array(rows), np.array(cols))),
                              shape=(2 * n, 2 * n))
        self.idx = idx

    def kappa_at_least(self, s: str, t: str, k: int) -> bool:
        i, j = self.idx[s], self.idx[t]
        return maximum_flow(self.mat, 2 * i + 1, 2 * j).flow_value >= k


def k_connected(G: Graph, k: int) -> bool:
    """Whether G is k-connected (min vertex cut >= k, |V| > k required).

    Uses the standard reduction to max-flow between a minimum-degree vertex
    and its non-neighbours plus nonadjacent pairs inside its neighbourhood;
    complete graphs short-circuit to True.
    """
    if k < 0:
        raise ValidationError("k must be nonnegative")
    if G.n <= k:
        raise ValidationError(f"k-connectivity needs more than k={k} nodes, got {G.n}")
    if k == 0:
        return True
    if not is_connected(G):
        return False
    if k == 1:
        return True
    adj = G.adjacency()
    if any(len(adj[u]) < k for u in G.nodes):
        return False
    v = min(G.nodes, key=lambda u: len(adj[u]))
    neigh = set(adj[v])
    net = _FlowNet(G, k)
    for w in G.nodes:
        if w != v and w not in neigh:
            if not net.kappa_at_least(v, w, k):
                return False
    nb = sorted(neigh, key=G.index().__getitem__)
    for a in range(len(nb)):
        for b in range(a + 1, len(nb)):
            x, y = nb[a], nb[b]
            if y not in adj[x]:
                if not net.kappa_at_least(x, y, k):
                    return False
    return True


def graph_to_dict(G: Graph) -> dict:
    out = {"nodes": list(G.nodes), "edges": [list(e) for e in G.edges]}
    if G.kinds:
        out["kinds"] = dict(sorted(G.kinds.items()))
    if G.labels:
        out["labels"] = dict(sorted(G.labels.items()))
    if G.lengths:
        out["lengths"] = [[u, v, l] for (u, v), l in sorted(G.lengths.items())]
    return out


def graph_from_dict(data: Mapping) -> Graph:
    lengths = {(u, v): l for u, v, l in data.get("lengths", [])}
    return graph(data["nodes"], data["edges"], kinds=data.get("kinds"),
                 labels=data.get("labels"), lengths=lengths)
