"""Acceptance gate: one test per shipped guarantee, with pinned tolerances
and wall-clock budgets.  Run with ``pytest -v tests/test_acceptance.py`` to
get one pass/fail line per criterion."""

import json
import random
import subprocess
import sys
import time
from fractions import Fraction as F

from polydraw import rubber, schlegel as sch, spring
from polydraw import tightspan as ts, tropical as tr, pdgraph as pg
from polydraw.errors import InvalidViewpoint, ValidationError
from polydraw.geom.graphs import graph, is_isomorphic, k_connected
from polydraw.geom.lattice import faces_of_dim, graph_of
from polydraw.geom.polytope import convex_hull, polar
from polydraw.geom.standard import (cross_polytope, cube, cyclic,
                                    klee_minty_cube, permutohedron, simplex)
from polydraw.rational import vdot, vsub


class stopwatch:
    def __init__(self, budget):
        self.budget = budget

    def __enter__(self):
        self.t0 = time.time()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.time() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.budget, (
                f"exceeded budget: {self.elapsed:.1f}s >= {self.budget}s")


def test_accept_01_permutohedron_counts():
    with stopwatch(1.0):
        P = permutohedron(4)
        assert len(P.vertices) == 24
        assert len(P.facets) == 14
        sizes = {len(f) for f in faces_of_dim(P, 2)}
        assert sizes == {4, 6}


def test_accept_02_cyclic_graphs_are_complete():
    with stopwatch(5.0):
        for n in (6, 7, 8):
            G = graph_of(cyclic(4, n))
            assert len(G.nodes) == n
            assert len(G.edges) == n * (n - 1) // 2


def test_accept_03_balinski_connectivity_for_all_families():
    with stopwatch(30.0):
        cases = []
        for d in range(2, 6):
            cases += [simplex(d), cube(d), cross_polytope(d),
                      cyclic(d, d + 3), klee_minty_cube(d)]
        for n in range(3, 7):
            cases.append(permutohedron(n))
        for P in cases:
            assert k_connected(graph_of(P), P.dim), \
                f"{P.dim}-polytope with {len(P.vertices)} vertices"


def exit_facets(P, viewpoint, x, base):
    """Facets met first by the ray from the viewpoint through x, past x."""
    d = vsub(x, viewpoint)
    best, hits = None, []
    for j, (a, b) in enumerate(P.facets):
        if j == base:
            continue
        ad = vdot(a, d)
        if ad <= 0:
            continue
        s = (F(b) - vdot(a, x)) / ad
        if best is None or s < best:
            best, hits = s, [j]
        elif s == best:
            hits.append(j)
    return hits


def test_accept_04_schlegel_identity_and_unique_cell_membership():
    with stopwatch(60.0):
        for P in (permutohedron(5), cube(4)):
            facet = 0
            st = sch.initial_state(P, facet)
            dia = sch.diagram(st)
            base_ids = [i for i in range(P.n_vertices)
                        if (P.incidence[facet] >> i) & 1]
            for i in base_ids:
                assert dia.positions[i] == dia.chart.to_chart(P.vertices[i])
            verts = [P.vertices[i] for i in base_ids]
            rng = random.Random(42)
            for _ in range(5000):
                ws = [F(rng.randint(1, 10 ** 9)) for _ in verts]
                s = sum(ws)
                x = tuple(sum(w * v[i] for w, v in zip(ws, verts)) / s
                          for i in range(P.dim))
                assert len(exit_facets(P, st.viewpoint, x, facet)) == 1


def test_accept_05_zoom_drag_soundness_and_replay():
    with stopwatch(60.0):
        for P in (cross_polytope(3), permutohedron(5)):
            base = 0
            bmask = P.incidence[base]
            on = [i for i in range(P.n_vertices) if (bmask >> i) & 1]
            off = [i for i in range(P.n_vertices) if not (bmask >> i) & 1]
            ch = sch.facet_chart(P, base)
            k = len(ch.basis)
            for t in range(500):
                rng = random.Random(t)
                cmds = []
                for _ in range(2):
                    c = rng.choice(["zoom", "dragf", "dragn"])
                    if c == "zoom":
                        cmds.append(("zoom", F(rng.randint(1, 99), 100)))
                    else:
                        d = tuple(F(rng.randint(-1, 1), 60) for _ in range(k))
                        pool = on if c == "dragf" else off
                        cmds.append((c, rng.choice(pool), d))

                def apply_all(cmds):
                    st = sch.initial_state(P, base)
                    for cmd in cmds:
                        try:
                            if cmd[0] == "zoom":
                                st = sch.set_zoom(st, cmd[1])
                            elif cmd[0] == "dragf":
                                amb = vsub(ch.to_ambient(cmd[2]), ch.origin)
                                st = sch.drag_facet_vertex(st, cmd[1], amb)
                            else:
                                dia = sch.diagram(st)
                                tgt = tuple(x + dx for x, dx in
                                            zip(dia.positions[cmd[1]], cmd[2]))
                                st = sch.drag_nonfacet_vertex(st, cmd[1], tgt)
                        except (InvalidViewpoint, ValidationError):
                            pass  # rejected commands must not corrupt state
                        assert sch.viewpoint_valid(P, st.facet, st.viewpoint)
                    return st

                first, second = apply_all(cmds), apply_all(cmds)
                assert first.viewpoint == second.viewpoint
                assert first.zoom == second.zoom


def test_accept_06_klee_minty_ascending_hamiltonian_path():
    with stopwatch(10.0):
        for d in range(3, 7):
            P = klee_minty_cube(d)
            order = sorted(range(len(P.vertices)),
                           key=lambda i: P.vertices[i][-1])
            assert len(order) == 2 ** d
            last = [P.vertices[i][-1] for i in order]
            assert all(a < b for a, b in zip(last, last[1:]))
            E = {frozenset(map(int, e)) for e in graph_of(P).edges}
            assert all(frozenset((order[i], order[i + 1])) in E
                       for i in range(len(order) - 1))


def test_accept_07_spring_separates_the_ascending_path():
    with stopwatch(90.0):
        P = klee_minty_cube(3)
        G = graph_of(P)
        objective = {str(i): float(v[-1]) for i, v in enumerate(P.vertices)}
        ascending = [(u, v) if objective[u] < objective[v] else (v, u)
                     for u, v in G.edges]
        good = total = 0
        for seed in range(20):
            params = spring.SpringParams(seed=seed, delta_lin=1.0,
                                         step_scale=0.25)
            st, converged = spring.run(G, params, objective=objective)
            if not converged:
                continue
            total += 1
            pos = st.positions()
            good += all(pos[v][2] - pos[u][2] > 0 for u, v in ascending)
        assert total >= 1
        assert good / total >= 0.95, f"{good}/{total} separated"


def test_accept_08_spring_forces_balance():
    with stopwatch(10.0):
        for trial in range(100):
            rng = random.Random(trial)
            n = rng.randint(2, 50)
            nodes = [f"n{i}" for i in range(n)]
            edges = {(nodes[rng.randrange(i)], nodes[i])
                     for i in range(1, n)}
            for _ in range(rng.randint(0, n)):
                i, j = rng.sample(range(n), 2)
                edges.add((nodes[min(i, j)], nodes[max(i, j)]))
            G = graph(nodes, sorted(edges))
            st = spring.init_state(G, spring.SpringParams(seed=trial))
            total = spring.forces(st, spring.SpringParams()).sum(axis=0)
            assert max(abs(float(c)) for c in total) < 1e-9


def icosahedron_graph():
    nodes = (["t", "b"] + [f"u{i}" for i in range(5)]
             + [f"l{i}" for i in range(5)])
    edges = []
    for i in range(5):
        j = (i + 1) % 5
        edges += [("t", f"u{i}"), ("b", f"l{i}"),
                  (f"u{i}", f"u{j}"), (f"l{i}", f"l{j}"),
                  (f"u{i}", f"l{i}"), (f"u{j}", f"l{i}")]
    return graph(nodes, edges)


def strictly_convex_folds(Q):
    """Every vertex off a facet lies strictly inside it: no flat ridges."""
    for j, (a, b) in enumerate(Q.facets):
        mask = Q.incidence[j]
        for i, v in enumerate(Q.vertices):
            if (mask >> i) & 1:
                assert vdot(a, v) == b
            else:
                assert vdot(a, v) < b


def test_accept_09_realization_from_graphs():
    with stopwatch(30.0):
        cases = {"cube": graph_of(cube(3)), "icosahedron": icosahedron_graph()}
        ico, _ = rubber.realize_graph(cases["icosahedron"])
        cases["dodecahedron"] = graph_of(polar(ico))
        for name, G in cases.items():
            Q, node_map = rubber.realize_graph(G)
            assert Q.dim == 3, name
            assert is_isomorphic(graph_of(Q), G), name
            got = {frozenset((node_map[u], node_map[v])) for u, v in G.edges}
            hull = {frozenset(map(int, e)) for e in graph_of(Q).edges}
            assert got == hull, name  # no new hull edges
            strictly_convex_folds(Q)


def orient(a, b, c):
    d = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (d > 0) - (d < 0)


def segments_cross(p, q, r, s):
    def on_seg(a, b, c):
        return (orient(a, b, c) == 0
                and min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
                and min(a[1], b[1]) <= c[1] <= max(a[1], b[1]))

    o1, o2 = orient(p, q, r), orient(p, q, s)
    o3, o4 = orient(r, s, p), orient(r, s, q)
    if o1 != o2 and o3 != o4:
        return True
    return any((on_seg(p, q, r), on_seg(p, q, s),
                on_seg(r, s, p), on_seg(r, s, q)))


def test_accept_10_tutte_embeddings_are_crossing_free():
    with stopwatch(30.0):
        done = 0
        trial = 0
        while done < 20:
            rng = random.Random(1000 + trial)
            trial += 1
            pts = {tuple(F(rng.randint(-9, 9)) for _ in range(3))
                   for _ in range(rng.randint(8, 14))}
            if len(pts) < 4:
                continue
            try:
                Q = convex_hull(sorted(pts))
            except Exception:
                continue
            if Q.dim != 3 or len(Q.vertices) > 30:
                continue
            G = graph_of(Q)
            emb = rubber.tutte_planar(G)
            pos = emb.positions
            E = emb.graph.edges
            for i in range(len(E)):
                for j in range(i + 1, len(E)):
                    u1, v1 = E[i]
                    u2, v2 = E[j]
                    if {u1, v1} & {u2, v2}:
                        continue
                    assert not segments_cross(pos[u1], pos[v1],
                                              pos[u2], pos[v2])
            done += 1


def test_accept_11_chloroplast_metric_span_dimension():
    with stopwatch(120.0):
        from importlib import resources
        text = (resources.files("polydraw") / "data"
                / "algae.metric").read_text()
        m = ts.metric_from_text(text)
        poly, comp, tmap = ts.tight_span(m)
        assert comp.max_dim == 4
        assert sum(v is not None for v in tmap.values()) == 8


def test_accept_12_tree_metrics_are_recognized_and_reconstructed():
    with stopwatch(120.0):
        for trial in range(50):
            rng = random.Random(4000 + trial)
            n = rng.randint(2, 7)
            nodes = [f"x{i}" for i in range(n)]
            edges = {}
            for i in range(1, n):
                j = rng.randrange(i)
                edges[(nodes[j], nodes[i])] = F(rng.randint(1, 9),
                                                rng.randint(1, 3))
            dist = {u: {u: F(0)} for u in nodes}
            for u in nodes:
                frontier = dist[u]
                changed = True
                while changed:
                    changed = False
                    for (a, b), w in edges.items():
                        for x, y in ((a, b), (b, a)):
                            if x in frontier:
                                nd = frontier[x] + w
                                if y not in frontier or nd < frontier[y]:
                                    frontier[y] = nd
                                    changed = True
            m = ts.metric(nodes, [[dist[u][v] for v in nodes] for u in nodes])
            assert ts.is_treelike(m)
            poly, comp, tmap = ts.tight_span(m)
            G = ts.skeleton_graph(m, comp, tmap)
            want = {frozenset((f"t:{u}", f"t:{v}")) for u, v in edges}
            assert {frozenset(e) for e in G.edges} == want


def test_accept_13_tropical_cyclic_vertex_counts():
    with stopwatch(120.0):
        rows = tr.tropical_cyclic(6, 4)
        tc = tr.tropical_complex(rows)
        assert len(tc.pseudo_vertices) == 126
        assert len(tr.tropical_vertices(rows)) == 6


def test_accept_14_tropical_triangle_projections():
    with stopwatch(5.0):
        rows = tr.triangle_example()
        tc = tr.tropical_complex(rows)
        assert tc.complex.max_dim == 2
        assert len(tr.tropical_vertices(rows)) == 3
        gens = tc.generator_indices()
        proj = tr.project_to_R3(tc, "last_n")
        for i, row in enumerate(rows):
            normalized = tuple(x - row[0] for x in row)[1:]
            assert proj[f"g{gens[i]}"] == normalized
        # the y-side of the first generator carries the same normalization
        y_side = tr.project_to_R3(tc, "first_m")
        assert y_side[f"g{gens[0]}"] == (F(-1), F(-1))


def test_accept_15_pd_graph_counts_for_the_16_cell_triangulation():
    with stopwatch(1.0):
        K = pg.cube4_triangulation()
        assert K.f_vector() == (16, 57, 86, 60, 16)
        pd = pg.build_pd_graph(K)
        assert len(pd.graph.nodes) == 32
        c = pd.counts()
        assert c["primal"] == 57
        assert c["artificial"] == 80


CLI_SWEEP = [
    ("construct", "permutohedron", "4"),
    ("construct", "cube", "3", "--graph"),
    ("schlegel", "--construct", "permutohedron 5", "--zoom", "1/3"),
    ("spring", "--construct", "klee-minty 3", "--objective",
     "last-coordinate", "--seed", "7", "--delta-lin", "1.0",
     "--step-scale", "0.25"),
    ("tutte", "--construct", "cube 3"),
    ("realize", "--construct", "cube 3"),
    ("tightspan", "--example", "algae"),
    ("tropical", "--example", "triangle"),
    ("tropical", "--cyclic", "3", "2", "--mode", "spring", "--seed", "3"),
    ("pdgraph", "--example", "tetrahedron", "--seed", "1"),
    ("pdgraph", "--example", "cube4", "--seed", "0"),
]


def test_accept_16_cli_outputs_are_byte_deterministic():
    for args in CLI_SWEEP:
        runs = [subprocess.run([sys.executable, "-m", "polydraw.cli", *args],
                               capture_output=True) for _ in range(2)]
        assert runs[0].returncode == 0, (args, runs[0].stderr[:400])
        assert runs[0].stdout == runs[1].stdout, args
        assert runs[0].stdout.strip(), args
