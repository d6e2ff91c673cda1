"""Force-directed graph embedding in R^3.

Every node repels every non-neighbour with an inverse-square force and is
tied to its neighbours by unit-rate springs with a desired rest length:

    f(v) = sum_{w not in N[v]} -delta_rep / |w - v|^3 * (w - v)
         + sum_{w in N(v)}   (1 / l_vw - 1 / |w - v|) * (w - v)

The synchronous update carries a viscosity (momentum) term,

    v_{i+1} = v_i + f(v_i) + delta_visc * (v_i - v_{i-1}),

and the run loop stops once the fluctuation max_v |v_{i+1} - v_i|^2 drops
below the threshold.  An optional node objective adds the vertical force
delta_lin * ((lambda(v) - mean lambda) - (v - mean v)_3) * e_3 which sorts
the drawing's third coordinate by the objective.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .errors import SingularConfiguration, ValidationError
from .geom.graphs import Graph

COINCIDENCE_TOL = 1e-12
JITTER = 1e-6


@dataclass(frozen=True)
class SpringParams:
    """Defaults follow the classical rule; ``step_scale`` multiplies the
    whole force term (1.0 reproduces the plain update).  The plain update
    is only linearly stable while spring stiffness stays below
    2 * (1 + delta_visc); graphs of maximum degree k at rest length l have
    worst-mode stiffness up to 2k / l, so dense graphs or short desired
    lengths need a smaller step_scale (or a larger rest length)."""

    delta_rep: float = 0.01
    delta_visc: float = 0.85
    delta_lin: float = 0.1
    rest_length: float = 1.0
    threshold: float = 1e-6
    max_iters: int = 10000
    seed: int = 0
    step_scale: float = 1.0

    def replace(self, **kw) -> "SpringParams":
        return replace(self, **kw)


@dataclass(frozen=True)
class EmbeddingState:
    """Positions of one synchronous iteration (plus the previous ones for the
    viscosity term); immutable, stepping returns a new state."""

    graph: Graph
    current: np.ndarray            # (n, 3)
    previous: np.ndarray           # (n, 3)
    iteration: int
    lengths: tuple = ()            # desired edge lengths aligned with graph.edges
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def position(self, node: str) -> np.ndarray:
        return self.current[self.graph.index()[node]]

    def positions(self) -> dict[str, tuple[float, float, float]]:
        return {u: tuple(map(float, self.current[i]))
                for i, u in enumerate(self.graph.nodes)}

    def fluctuation(self) -> float:
        return float(np.max(np.sum((self.current - self.previous) ** 2, axis=1)))


def _structure(state: EmbeddingState, params: SpringParams):
    """(adjacency mask, 1/l matrix) cached on the state."""
    key = ("struct", params.rest_length)
    got = state._cache.get(key)
    if got is None:
        G = state.graph
        n = G.n
        idx = G.index()
        adj = np.zeros((n, n), dtype=bool)
        inv_l = np.zeros((n, n))
        lengths = dict(zip(G.edges, state.lengths)) if state.lengths else {}
        for u, v in G.edges:
            i, j = idx[u], idx[v]
            adj[i, j] = adj[j, i] = True
            given = lengths.get((u, v))
            l = params.rest_length if given is None else float(given)
            if l <= 0:
                raise ValidationError(f"nonpositive desired length on edge {(u, v)}")
            inv_l[i, j] = inv_l[j, i] = 1.0 / l
        got = (adj, inv_l)
        state._cache[key] = got
    return got


def _objective_array(state: EmbeddingState, objective) -> np.ndarray | None:
    if objective is None:
        return None
    G = state.graph
    try:
        lam = np.array([float(objective[u]) for u in G.nodes])
    except KeyError as e:
        raise ValidationError(f"objective missing node {e}") from None
    return lam


def forces(state: EmbeddingState, params: SpringParams,
           objective: Mapping[str, float] | None = None) -> np.ndarray:
    """Force vectors for all nodes; raises on coincident interacting pairs."""
    arr = _forces_raw(state, params, _objective_array(state, objective))
    if arr is None:
        raise SingularConfiguration(
            "two nodes coincide; forces are undefined")
    return arr


def force(state: EmbeddingState, params: SpringParams, node: str,
          objective: Mapping[str, float] | None = None) -> np.ndarray:
    """Single-node force (same field as ``forces``)."""
    G = state.graph
    if node not in G.index():
        raise ValidationError(f"unknown node {node!r}")
    return forces(state, params, objective)[G.index()[node]]


def _forces_raw(state: EmbeddingState, params: SpringParams,
                lam: np.ndarray | None) -> np.ndarray | None:
    """None signals a coincident pair (caller decides: error or jitter)."""
    pos = state.current
    n = pos.shape[0]
    adj, inv_l = _structure(state, params)
    diff = pos[None, :, :] - pos[:, None, :]        # diff[i, j] = pos_j - pos_i
    dist = np.sqrt(np.sum(diff * diff, axis=2))
    off = ~np.eye(n, dtype=bool)
    if n > 1 and float(np.min(dist[off])) < COINCIDENCE_TOL:
        return None
    np.fill_diagonal(dist, 1.0)  # never used; avoids divide warnings
    rep_mask = off & ~adj
    coef = np.where(rep_mask, -params.delta_rep / (dist ** 3), 0.0)
    coef += np.where(adj, inv_l - 1.0 / dist, 0.0)
    f = np.einsum("ij,ijk->ik", coef, diff)
    if lam is not None:
        vertical = params.delta_lin * ((lam - lam.mean())
                                       - (pos[:, 2] - pos[:, 2].mean()))
        f[:, 2] += vertical
    return f


def init_state(G: Graph, params: SpringParams,
               lengths: Mapping | None = None) -> EmbeddingState:
    """Seeded start: positions drawn uniformly from the unit sphere."""
    if G.n == 0:
        raise ValidationError("cannot embed the empty graph")
    rng = np.random.default_rng(params.seed)
    raw = rng.normal(size=(G.n, 3))
    norms = np.linalg.norm(raw, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    pos = raw / norms
    lt = _length_tuple(G, lengths)
    return EmbeddingState(G, pos, pos.copy(), 0, lt)


def state_from_positions(G: Graph, positions: Mapping[str, Sequence[float]],
                         lengths: Mapping | None = None) -> EmbeddingState:
    pos = np.array([[float(c) for c in positions[u]] for u in G.nodes])
    if pos.shape != (G.n, 3):
        raise ValidationError("positions must be 3-dimensional")
    return EmbeddingState(G, pos, pos.copy(), 0, _length_tuple(G, lengths))


def _length_tuple(G: Graph, lengths: Mapping | None) -> tuple:
    source = dict(G.lengths)
    if lengths:
        for (u, v), l in dict(lengths).items():
            source[G.edge_key(u, v)] = l
    if not source:
        return ()
    return tuple(float(source[e]) if e in source else None for e in G.edges)


def step(state: EmbeddingState, params: SpringParams,
         objective: Mapping[str, float] | None = None) -> EmbeddingState:
    """One synchronous update; coincident configurations get a seeded jitter
    of magnitude 1e-6 instead of failing (the single-shot force API raises)."""
    lam = _objective_array(state, objective)
    cur = state.current
    f = _forces_raw(state, params, lam)
    if f is None:
        rng = np.random.default_rng([params.seed, state.iteration + 1])
        jitter = rng.normal(size=cur.shape) * JITTER
        bumped = EmbeddingState(state.graph, cur + jitter, state.previous,
                                state.iteration, state.lengths)
        f = _forces_raw(bumped, params, lam)
        if f is None:
            raise SingularConfiguration("coincident nodes persist after jitter")
        cur = bumped.current
    new = cur + params.step_scale * f + params.delta_visc * (cur - state.previous)
    return EmbeddingState(state.graph, new, cur, state.iteration + 1,
                          state.lengths)


def run(G: Graph, params: SpringParams,
        objective: Mapping[str, float] | None = None,
        lengths: Mapping | None = None,
        state: EmbeddingState | None = None) -> tuple[EmbeddingState, bool]:
    """Iterate until the fluctuation drops below the threshold.

    Returns (state, converged); the returned state is the last one BEFORE
    the sub-threshold step, so recomputing one more step from it provably
    stays below the threshold.
    """
    if state is None:
        state = init_state(G, params, lengths)
    prev = state
    for _ in range(params.max_iters):
        nxt = step(prev, params, objective)
        if nxt.fluctuation() < params.threshold:
            return prev, True
        prev = nxt
    return prev, False


def edge_lengths(state: EmbeddingState) -> dict[tuple[str, str], float]:
    idx = state.graph.index()
    out = {}
    for u, v in state.graph.edges:
        out[(u, v)] = float(np.linalg.norm(state.current[idx[u]]
                                           - state.current[idx[v]]))
    return out


def desired_lengths_from_coordinates(G: Graph,
                                     coords: Mapping[str, Sequence],
                                     norm: str = "euclidean") -> dict:
    """Per-edge desired lengths from node coordinates (euclidean or max norm)."""
    if norm not in ("euclidean", "max"):
        raise ValidationError(f"unknown norm {norm!r}")
    out = {}
    for u, v in G.edges:
        du = [float(a) - float(b)
              for a, b in zip(coords[u], coords[v], strict=True)]
        l = (sum(x * x for x in du) ** 0.5 if norm == "euclidean"
             else max(abs(x) for x in du))
        if l <= 0:
            raise ValidationError(f"coincident endpoint coordinates on edge {(u, v)}")
        out[(u, v)] = l
    return out
