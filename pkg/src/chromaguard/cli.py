"""Command-line interface.

Exit codes: 0 success with every claim held; 2 success with claim
violations (or, for ``verify``, an invalid plan); 1 input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import time
from pathlib import Path

from . import __version__
from .geometry import PolygonError, SimplePolygon, cut_edges, is_monotone, reflex_vertices
from .serialize import (
    dumps,
    guard_from_record,
    plan_document,
    polygon_document,
    polygon_from_document,
    read_json,
    to_user,
)

EXIT_OK, EXIT_INPUT, EXIT_CLAIMS = 0, 1, 2


class InputError(Exception):
    pass


def _seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("CHROMA_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise InputError(f"CHROMA_SEED must be an integer, got {env!r}") from exc


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_polygon(path):
    try:
        doc = read_json(path)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read polygon: {exc}") from exc
    try:
        return polygon_from_document(doc)
    except PolygonError as exc:
        raise InputError(f"invalid polygon [{exc.code}]: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise InputError(f"invalid polygon document: {exc}") from exc


def parse_mode(mode: str):
    """'O', 'rect', 'snake' or ('alpha', degrees)."""
    if mode in ("O", "rect", "snake"):
        return mode
    if mode.startswith("alpha:"):
        try:
            a = float(mode.split(":", 1)[1])
        except ValueError as exc:
            raise InputError(f"bad alpha in mode {mode!r}") from exc
        if not 0 < a <= 180:
            raise InputError("alpha must lie in (0, 180]")
        return ("alpha", a)
    raise InputError(f"unknown mode {mode!r}; use alpha:<deg>, O, rect or snake")


def run_pipeline(poly: SimplePolygon, mode, allow_patch=False, semantics="area", timing=False):
    from .guards import guard_alpha, guard_ortho_O, guard_ortho_rect, guard_snake
    if isinstance(mode, tuple):
        return guard_alpha(poly, mode[1], semantics, timing)
    if not poly.orthogonal:
        raise InputError(f"mode {mode} needs an orthogonal polygon")
    if mode == "O":
        return guard_ortho_O(poly, allow_patch, semantics, timing)
    if mode == "rect":
        return guard_ortho_rect(poly, semantics, timing)
    from .decomposition import is_snake
    if not is_snake(poly):
        raise InputError("mode snake needs a snake polygon")
    return guard_snake(poly, semantics, timing)


def _mode_name(mode) -> str:
    if isinstance(mode, tuple):
        a = mode[1]
        return f"alpha:{int(a) if a == int(a) else a}"
    return mode


# ---------------------------------------------------------------------------
# commands


def cmd_check(args) -> int:
    verts, P = _load_polygon(args.file)
    rep = {"valid": True, "n": P.n, "orthogonal": P.orthogonal, "area": to_user_area(P),
           "reflex": [[to_user(x), to_user(y)] for x, y in reflex_vertices(P)]}
    if P.orthogonal:
        from .decomposition import base_edges, is_mount, is_snake
        snake = is_snake(P)
        mount, base = is_mount(P)
        rep.update({
            "x_monotone": is_monotone(P, "x"), "y_monotone": is_monotone(P, "y"),
            "h_cuts": len(cut_edges(P, "h")), "v_cuts": len(cut_edges(P, "v")),
            "snake": bool(snake), "mount": mount,
            "base_edges": [[[to_user(c) for c in a], [to_user(c) for c in b]]
                           for a, b in base_edges(P)],
        })
    _emit(dumps(rep), args.output)
    return EXIT_OK


def to_user_area(P):
    a = P.area / 4
    return int(a) if a.denominator == 1 else float(a)


def cmd_gen(args) -> int:
    from .generators import generate
    try:
        verts = generate(args.family, args.k, _seed(args))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(dumps(polygon_document(verts)), args.output)
    return EXIT_OK


def cmd_guard(args) -> int:
    verts, P = _load_polygon(args.file)
    mode = parse_mode(args.mode)
    plan = run_pipeline(P, mode, args.allow_patch, args.conflict, args.timing)
    doc = plan_document(plan, verts, _mode_name(mode))
    _emit(dumps(doc), args.output)
    return EXIT_OK if plan.all_held else EXIT_CLAIMS


def cmd_verify(args) -> int:
    from .guards import region_for
    from .geometry import refined_grid
    from .verify import conflict_graph, coverage_report, is_proper_coloring
    try:
        plan = read_json(args.plan)
        guards = [guard_from_record(r) for r in plan["guards"]]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read plan: {exc}") from exc
    verts, P = _load_polygon(args.file)
    grid = None
    if guards and all(g.kind == "rect" for g in guards):
        grid = refined_grid(P, [g.position for g in guards])
    for g in guards:
        g.region = region_for(P, g, grid)
    cg = conflict_graph(guards, P, args.conflict)
    proper = is_proper_coloring(cg, [g.color for g in guards])
    cov = coverage_report(guards, P)
    colors = len({g.color for g in guards})
    rep = {
        "proper": proper.ok,
        "violation": list(proper.violation) if proper.violation else None,
        "conflicts": len(cg.edges),
        "colors_used": colors,
        "colors_consistent": colors == plan.get("colors_used", colors),
        "coverage": {"mode": cov.mode, "complete": cov.complete,
                     "uncovered": len(cov.uncovered)},
    }
    _emit(dumps(rep), args.output)
    ok = proper.ok and cov.complete and rep["colors_consistent"]
    return EXIT_OK if ok else EXIT_CLAIMS


def cmd_oracle(args) -> int:
    from .serialize import guard_record
    from .verify import oracle_chromatic_guarding
    verts, P = _load_polygon(args.file)
    model = args.model
    if model.startswith("alpha:"):
        model = ("alpha", float(model.split(":", 1)[1]))
    elif model not in ("full", "rect", "O"):
        raise InputError(f"unknown model {args.model!r}")
    try:
        res = oracle_chromatic_guarding(P, model, max_candidates=args.max_candidates)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rep = {"model": args.model, "value": res.value, "candidates": res.candidates,
           "covering_subsets": res.subsets_checked,
           "witness": [guard_record(g) for g in res.witness]}
    _emit(dumps(rep), args.output)
    return EXIT_OK


def bound_for(mode: str, n: int) -> int:
    lg = math.ceil(math.log2(n)) if n > 1 else 0
    if mode == "O":
        return 4 * (lg + 1)
    if mode == "rect":
        return 5 * (lg + 2)
    if mode == "snake":
        return 2
    return 2


def fit_log(rows) -> tuple:
    """Least-squares a, b in colors ~ a*log2(n) + b."""
    import numpy as np
    if len({r["n"] for r in rows}) < 2:
        return None, None
    x = np.array([math.log2(r["n"]) for r in rows])
    y = np.array([r["colors"] for r in rows], dtype=float)
    a, b = np.polyfit(x, y, 1)
    return float(a), float(b)


def bench_rows(families, sizes, seeds, mode, timing=False):
    from .generators import generate
    from .geometry import validate_polygon
    m = parse_mode(mode)
    rows = []
    for fam in families:
        for k in sizes:
            for s in seeds:
                P = validate_polygon(generate(fam, k, s))
                t0 = time.perf_counter()
                plan = run_pipeline(P, m)
                ms = (time.perf_counter() - t0) * 1000
                b = bound_for(mode, P.n)
                rows.append({"family": fam, "k": k, "seed": s, "n": P.n,
                             "colors": plan.colors_used, "bound": b,
                             "held": plan.all_held and plan.colors_used <= b,
                             "ms": round(ms, 1) if timing else None})
    return rows


def cmd_bench(args) -> int:
    families = args.families.split(",")
    try:
        sizes = [int(v) for v in args.sizes.split(",")]
        seeds = [int(v) for v in args.seeds.split(",")] if args.seeds else [_seed(args)]
    except ValueError as exc:
        raise InputError(f"bad number list: {exc}") from exc
    if args.mode not in ("O", "rect", "snake") and not args.mode.startswith("alpha:"):
        raise InputError(f"unknown mode {args.mode!r}")
    rows = bench_rows(families, sizes, seeds, args.mode, args.timing)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["family", "k", "seed", "n", "colors", "bound", "held", "ms"])
    for r in rows:
        w.writerow([r["family"], r["k"], r["seed"], r["n"], r["colors"], r["bound"],
                    "yes" if r["held"] else "no", "" if r["ms"] is None else r["ms"]])
    a, b = fit_log(rows)
    if a is not None:
        buf.write(f"# fit colors = {a:.4f} * log2(n) + {b:.4f}\n")
    over = sum(1 for r in rows if r["colors"] > r["bound"])
    buf.write(f"# rows {len(rows)}, over bound {over}\n")
    _emit(buf.getvalue(), args.output)
    if args.plot:
        from .render import bench_figure
        bench_figure(rows, args.plot)
    return EXIT_OK if all(r["held"] for r in rows) else EXIT_CLAIMS


def cmd_render(args) -> int:
    from .render import render_svg
    verts, P = _load_polygon(args.file)
    parts = colors = guards = None
    if args.parts:
        if not P.orthogonal:
            raise InputError("partitions need an orthogonal polygon")
        parts, colors = _partition(P, args.parts)
    if args.plan:
        try:
            guards = [guard_from_record(r) for r in read_json(args.plan)["guards"]]
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise InputError(f"cannot read plan: {exc}") from exc
    _emit(render_svg(P, parts, colors, guards), args.output)
    return EXIT_OK


def _partition(P, kind):
    from .decomposition import cutting, five_color_parts, mounts_partition, snake_split
    if kind == "mounts":
        mp = mounts_partition(P)
        cols = five_color_parts(mp)
        return [p.polygon.vertices for p in mp.parts], cols
    if kind in ("h", "v"):
        parts, _ = cutting(P, kind)
        return [p.polygon.vertices for p in parts], {k: k + 1 for k in range(len(parts))}
    if kind == "snake":
        try:
            parts = snake_split(P)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        return [p.polygon.vertices for p in parts], {k: p.parity + 1 for k, p in enumerate(parts)}
    raise InputError(f"unknown partition {kind!r}")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chromaguard",
                                 description="Chromatic guarding of simple and orthogonal polygons.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a polygon and report its structure")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="generate a polygon")
    p.add_argument("family")
    p.add_argument("k", type=int)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("guard", help="place and color guards")
    p.add_argument("file")
    p.add_argument("--mode", required=True, help="alpha:<deg>, O, rect or snake")
    p.add_argument("--allow-patch", action="store_true",
                   help="add extra-colored guards for cells the O pipeline leaves uncovered")
    p.add_argument("--conflict", choices=("area", "point"), default="area")
    p.add_argument("--timing", action="store_true", help="record runtime (breaks byte stability)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_guard)

    p = sub.add_parser("verify", help="re-check a plan against its polygon")
    p.add_argument("plan")
    p.add_argument("file")
    p.add_argument("--conflict", choices=("area", "point"), default="area")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exact chromatic guarding over a small candidate set")
    p.add_argument("file")
    p.add_argument("--model", required=True, help="full, rect, O or alpha:<deg>")
    p.add_argument("--max-candidates", type=int, default=16)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="colors against polygon size as CSV")
    p.add_argument("--families", default="random-ortho")
    p.add_argument("--sizes", default="16,32,64,128")
    p.add_argument("--seeds", default=None, help="comma list; defaults to --seed / CHROMA_SEED")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--mode", default="O")
    p.add_argument("--plot", help="write a matplotlib figure to this path")
    p.add_argument("--timing", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("render", help="draw a polygon, partition and plan as SVG")
    p.add_argument("file")
    p.add_argument("--plan")
    p.add_argument("--parts", nargs="?", const="mounts", choices=("mounts", "h", "v", "snake"))
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
