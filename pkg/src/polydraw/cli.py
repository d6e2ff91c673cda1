"""Command-line interface: construct polytopes, draw scenes, serve sessions.

Every subcommand writes deterministic bytes (JSON scene, SVG, OBJ, or
polytope/graph JSON) to stdout or --out.  Exit code 2 flags invalid input,
1 a computation failure, 0 success.  POLYDRAW_SEED and POLYDRAW_FORMAT
override the built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .errors import (
    AmbiguousFacet,
    DimensionMismatch,
    InvalidMetric,
    NoSuchFace,
    PolydrawError,
    ValidationError,
)

_VALIDATION_ERRORS = (ValidationError, InvalidMetric, DimensionMismatch,
                      NoSuchFace, AmbiguousFacet)

CONSTRUCTIONS = {
    "simplex": 1, "cube": 1, "cross": 1, "permutohedron": 1,
    "klee-minty": 1, "cyclic": 2,
}


def _construct(spec: str):
    from .geom import (cross_polytope, cube, cyclic, klee_minty_cube,
                       permutohedron, simplex)
    parts = spec.split()
    if not parts or parts[0] not in CONSTRUCTIONS:
        raise ValidationError(
            f"unknown construction {spec!r}; choose from "
            + ", ".join(sorted(CONSTRUCTIONS)))
    name, arity = parts[0], CONSTRUCTIONS[parts[0]]
    if len(parts) != 1 + arity:
        raise ValidationError(f"{name} takes {arity} integer argument(s)")
    try:
        args = [int(x) for x in parts[1:]]
    except ValueError:
        raise ValidationError(f"non-integer argument in {spec!r}") from None
    table = {
        "simplex": simplex, "cube": cube, "cross": cross_polytope,
        "permutohedron": permutohedron, "klee-minty": klee_minty_cube,
        "cyclic": cyclic,
    }
    return table[name](*args)


def _load_polytope(ns):
    from .geom.serialize import polytope_from_json
    if getattr(ns, "construct", None):
        return _construct(ns.construct)
    if getattr(ns, "polytope", None):
        with open(ns.polytope) as fh:
            return polytope_from_json(fh.read())
    raise ValidationError("need --construct or --polytope")


def _load_graph(ns):
    from .geom import graph_from_dict
    from .geom.lattice import graph_of
    if getattr(ns, "graph", None):
        with open(ns.graph) as fh:
            return graph_from_dict(json.load(fh)), None
    P = _load_polytope(ns)
    return graph_of(P), P


_SPRING_FLAGS = ("delta_rep", "delta_visc", "delta_lin", "rest_length",
                 "step_scale", "threshold", "max_iters")


def _spring_overrides(ns) -> dict:
    out = {}
    if getattr(ns, "params", None):
        with open(ns.params) as fh:
            out.update(json.load(fh))
    for name in _SPRING_FLAGS:
        v = getattr(ns, name, None)
        if v is not None:
            out[name] = v
    if getattr(ns, "seed", None) is not None:
        out["seed"] = ns.seed
    return out


def _spring_params(ns):
    from .spring import SpringParams
    return SpringParams(**_spring_overrides(ns))


def _optional_params(ns):
    """Explicit parameters if any were given, else None so the drawing
    routines keep their adaptive step choice (seed still honoured)."""
    kw = _spring_overrides(ns)
    seed = kw.pop("seed", 0)
    if kw:
        from .spring import SpringParams
        return SpringParams(seed=seed, **kw), seed
    return None, seed


def _emit(ns, data: bytes) -> None:
    if ns.out:
        with open(ns.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)


def _emit_scene(ns, scene) -> None:
    from .scene import export_scene
    fmt = ns.format or os.environ.get("POLYDRAW_FORMAT") or "json"
    _emit(ns, export_scene(scene, fmt))


def cmd_construct(ns) -> int:
    from .geom.lattice import graph_of
    from .geom.graphs import graph_to_dict
    from .geom.serialize import polytope_to_json
    P = _construct(" ".join(ns.spec))
    if ns.graph:
        out = json.dumps(graph_to_dict(graph_of(P)), indent=1,
                         sort_keys=True) + "\n"
        _emit(ns, out.encode())
    else:
        _emit(ns, polytope_to_json(P).encode())
    return 0


def cmd_schlegel(ns) -> int:
    from . import schlegel as sg
    P = _load_polytope(ns)
    if ns.mark:
        facet = sg.select_facet(P, [int(x) for x in ns.mark.split(",")])
    else:
        facet = ns.facet
    zoom = Fraction(ns.zoom) if ns.zoom else None
    state = sg.initial_state(P, facet, zoom)
    _emit_scene(ns, sg.scene_of(state))
    return 0


def cmd_spring(ns) -> int:
    from . import spring
    from .scene import scene_from_embedding
    G, P = _load_graph(ns)
    params = _spring_params(ns)
    objective = None
    if ns.objective == "last-coordinate":
        if P is None:
            raise ValidationError(
                "last-coordinate objective needs a polytope source")
        objective = {str(i): float(v[-1]) for i, v in enumerate(P.vertices)}
    st, converged = spring.run(G, params, objective=objective)
    meta = {"kind": "spring", "seed": params.seed, "converged": converged,
            "iterations": st.iteration,
            "objective": ns.objective if objective else "none"}
    _emit_scene(ns, scene_from_embedding(G, st.positions(), metadata=meta))
    return 0


def cmd_tutte(ns) -> int:
    from .rubber import tutte_planar
    from .scene import scene_from_embedding
    G, _ = _load_graph(ns)
    outer = ns.outer.split(",") if ns.outer else None
    emb = tutte_planar(G, outer)
    pos = {u: (float(x), float(y)) for u, (x, y) in emb.positions.items()}
    meta = {"kind": "tutte", "outer": list(emb.faces[emb.outer])}
    _emit_scene(ns, scene_from_embedding(G, pos, metadata=meta))
    return 0


def cmd_realize(ns) -> int:
    from .geom.serialize import polytope_to_json
    from .rubber import realize_graph
    from .scene import scene_from_polytope
    G, _ = _load_graph(ns)
    P, mapping = realize_graph(G)
    fmt = ns.format or os.environ.get("POLYDRAW_FORMAT") or "json"
    if fmt == "json":
        _emit(ns, polytope_to_json(P).encode())
    else:
        inv = {str(i): u for u, i in mapping.items()}
        S = scene_from_polytope(P, metadata={"kind": "realization",
                                             "node_map": inv})
        _emit_scene(ns, S)
    return 0


def _packaged_example(name: str) -> str:
    from importlib import resources
    ref = resources.files("polydraw").joinpath(f"data/{name}")
    return ref.read_text()


def cmd_tightspan(ns) -> int:
    from . import tightspan as ts
    if ns.example:
        text = _packaged_example(f"{ns.example}.metric")
    elif ns.metric:
        with open(ns.metric) as fh:
            text = fh.read()
    else:
        raise ValidationError("need --metric or --example")
    m = ts.metric_from_text(text)
    params, seed = _optional_params(ns)
    _emit_scene(ns, ts.visualize_tightspan(m, ns.mode, params, seed=seed))
    return 0


def cmd_tropical(ns) -> int:
    from . import tropical as tr
    if ns.cyclic:
        rows = tr.tropical_cyclic(*ns.cyclic)
    elif ns.example:
        if ns.example != "triangle":
            raise ValidationError("the packaged tropical example is 'triangle'")
        rows = tr.triangle_example()
    elif ns.matrix:
        with open(ns.matrix) as fh:
            text = fh.read().strip()
        if text.startswith("["):
            rows = [[Fraction(str(x)) for x in row] for row in json.loads(text)]
        else:
            rows = [[Fraction(x) for x in line.replace(",", " ").split()]
                    for line in text.splitlines() if line.strip()]
    else:
        raise ValidationError("need --matrix, --cyclic or --example")
    params, seed = _optional_params(ns)
    _emit_scene(ns, tr.visualize_tropical(rows, ns.mode, ns.side, params,
                                          seed=seed))
    return 0


def cmd_pdgraph(ns) -> int:
    from . import pdgraph as pg
    if ns.example:
        builders = {"cube4": pg.cube4_triangulation,
                    "genus2": pg.genus2_solid,
                    "tetrahedron": pg.tetrahedron_boundary}
        if ns.example not in builders:
            raise ValidationError("example must be one of "
                                  + ", ".join(sorted(builders)))
        K = builders[ns.example]()
    elif ns.complex:
        with open(ns.complex) as fh:
            K = pg.complex_from_text(fh.read())
    else:
        raise ValidationError("need --complex or --example")
    pd = pg.build_pd_graph(K)
    lp, ld, la = (float(x) for x in ns.lengths.split(","))
    lengths = pg.pd_lengths(pd, lp, ld, la)
    params, seed = _optional_params(ns)
    _emit_scene(ns, pg.visualize_pd(pd, lengths, params, seed=seed,
                                    hide_artificial=ns.hide_artificial))
    return 0


def cmd_export(ns) -> int:
    from .scene import export_scene, scene_from_json
    with open(ns.scene) as fh:
        S = scene_from_json(fh.read())
    fmt = ns.format or os.environ.get("POLYDRAW_FORMAT") or "json"
    _emit(ns, export_scene(S, fmt))
    return 0


def cmd_serve(ns) -> int:
    import uvicorn
    from . import service, spring
    sessions = {}
    if ns.schlegel:
        P = _construct(ns.schlegel)
        sessions["schlegel"] = service.SchlegelSession(P, ns.facet)
    if ns.spring:
        from .geom.lattice import graph_of
        G = graph_of(_construct(ns.spring))
        params, seed = _optional_params(ns)
        if params is None:
            maxdeg = max((G.degree(u) for u in G.nodes), default=1)
            params = spring.SpringParams(
                seed=seed, step_scale=min(0.2, 3.0 / (2 * maxdeg)))
        sessions["spring"] = service.SpringSession(G, params)
    if not sessions:
        raise ValidationError("need --schlegel and/or --spring")
    host, _, port = ns.listen.rpartition(":")
    app = service.create_app(sessions)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="polydraw", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, scene=True):
        p.add_argument("--out", help="output file (default stdout)")
        if scene:
            p.add_argument("--format", choices=["json", "svg", "obj"],
                           help="scene output format (default json)")

    def source(p):
        p.add_argument("--construct",
                       help="construction spec, e.g. 'cube 3' or 'cyclic 4 8'")
        p.add_argument("--polytope", help="polytope JSON file")

    def springish(p):
        p.add_argument("--seed", type=int,
                       default=_env_int("POLYDRAW_SEED"),
                       help="spring embedder seed")
        p.add_argument("--params", help="JSON file of spring parameters")
        for flag in ("delta-rep", "delta-visc", "delta-lin", "rest-length",
                     "step-scale", "threshold"):
            p.add_argument(f"--{flag}", type=float, default=None,
                           dest=flag.replace("-", "_"))
        p.add_argument("--max-iters", type=int, default=None, dest="max_iters")

    p = sub.add_parser("construct", help="build a standard polytope")
    p.add_argument("spec", nargs="+",
                   help="name and arguments, e.g. permutohedron 4")
    p.add_argument("--graph", action="store_true",
                   help="emit the skeleton graph instead of the polytope")
    common(p, scene=False)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("schlegel", help="Schlegel diagram scene")
    source(p)
    p.add_argument("--facet", type=int, default=0)
    p.add_argument("--mark", help="comma-separated vertex ids selecting the facet")
    p.add_argument("--zoom", help="zoom in (0,1), e.g. 1/2")
    common(p)
    p.set_defaults(func=cmd_schlegel)

    p = sub.add_parser("spring", help="force-directed drawing")
    source(p)
    p.add_argument("--graph", help="graph JSON file")
    p.add_argument("--objective", choices=["none", "last-coordinate"],
                   default="none", help="vertical separation objective")
    springish(p)
    common(p)
    p.set_defaults(func=cmd_spring)

    p = sub.add_parser("tutte", help="rubber-band plane drawing")
    source(p)
    p.add_argument("--graph", help="graph JSON file")
    p.add_argument("--outer", help="comma-separated outer face cycle")
    common(p)
    p.set_defaults(func=cmd_tutte)

    p = sub.add_parser("realize", help="Steinitz realization of a planar graph")
    source(p)
    p.add_argument("--graph", help="graph JSON file")
    common(p)
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("tightspan", help="tight span of a finite metric")
    p.add_argument("--metric", help="metric file (JSON or table)")
    p.add_argument("--example", help="packaged example name (algae)")
    p.add_argument("--mode", choices=["combinatorial", "approximate_metric"],
                   default="approximate_metric")
    springish(p)
    common(p)
    p.set_defaults(func=cmd_tightspan)

    p = sub.add_parser("tropical", help="tropical polytope complex")
    p.add_argument("--matrix", help="matrix file (JSON 2D array or rows)")
    p.add_argument("--cyclic", nargs=2, type=int, metavar=("M", "N"),
                   help="tropical cyclic polytope M(m,n)")
    p.add_argument("--example", help="built-in example (triangle)")
    p.add_argument("--mode", choices=["projection", "spring"],
                   default="projection")
    p.add_argument("--side", choices=["first_m", "last_n"], default="last_n")
    springish(p)
    common(p)
    p.set_defaults(func=cmd_tropical)

    p = sub.add_parser("pdgraph", help="primal-dual graph drawing")
    p.add_argument("--complex", help="complex file (JSON or OFF)")
    p.add_argument("--example", help="built-in complex (cube4, genus2, tetrahedron)")
    p.add_argument("--lengths", default="1,1,0.3",
                   help="primal,dual,artificial desired lengths")
    p.add_argument("--hide-artificial", action="store_true")
    springish(p)
    common(p)
    p.set_defaults(func=cmd_pdgraph)

    p = sub.add_parser("export", help="re-export a scene JSON file")
    p.add_argument("scene", help="scene JSON file")
    common(p)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="run the HTTP drawing service")
    p.add_argument("--listen", default="127.0.0.1:8000")
    p.add_argument("--schlegel", help="construction spec for a Schlegel session")
    p.add_argument("--facet", type=int, default=0)
    p.add_argument("--spring", help="construction spec for a spring session")
    springish(p)
    common(p, scene=False)
    p.set_defaults(func=cmd_serve)

    return top


def _env_int(name: str) -> int | None:
    raw = os.environ.get(name)
    return int(raw) if raw else None


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.func(ns)
    except _VALIDATION_ERRORS as e:
        print(f"polydraw: invalid input: {e}", file=sys.stderr)
        return 2
    except PolydrawError as e:
        print(f"polydraw: computation failed: {e}", file=sys.stderr)
        return 1
    except FileNotFoundError as e:
        print(f"polydraw: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
