"""JSON documents for polygons and guard plans (user units, i.e. undoubled)."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .geometry import SCALE, validate_polygon


def to_user(v):
    """Internal coordinate to a JSON value: int, exact float, or a "p/q" string."""
    if isinstance(v, float):
        return v / SCALE
    q = Fraction(v) / SCALE
    if q.denominator == 1:
        return int(q)
    d = q.denominator
    if d & (d - 1) == 0 and abs(q.numerator) < 2 ** 52:
        return float(q)
    return f"{q.numerator}/{q.denominator}"


def from_user(v):
    """JSON value (user units) to an internal coordinate."""
    if isinstance(v, str):
        q = Fraction(v) * SCALE
    elif isinstance(v, float):
        q = Fraction(v) * SCALE
    else:
        return int(v) * SCALE
    return int(q) if q.denominator == 1 else q


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def read_json(path) -> object:
    text = Path(path).read_text() if str(path) != "-" else __import__("sys").stdin.read()
    return json.loads(text)


def polygon_document(vertices) -> dict:
    return {"vertices": [[int(x), int(y)] for x, y in vertices]}


def polygon_from_document(doc):
    """(user vertices, validated polygon); accepts {"vertices": [...]} or a bare list."""
    verts = doc.get("vertices") if isinstance(doc, dict) else doc
    if verts is None:
        raise ValueError("polygon document needs a 'vertices' list")
    return verts, validate_polygon(verts)


def _num(v):
    if v is None:
        return None
    v = float(v)
    return int(v) if v == int(v) else round(v, 9)


def guard_record(g) -> dict:
    rec = {"x": to_user(g.position[0]), "y": to_user(g.position[1]), "kind": g.kind,
           "orientation": _num(g.orientation), "alpha": _num(g.width), "color": g.color,
           "part": g.part, "rule": g.rule}
    if g.start_vector is not None:
        rec["direction"] = [_dir_user(c) for c in g.start_vector]
    return rec


def _dir_user(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return int(c) if isinstance(c, int) else c


def guard_from_record(rec):
    from .guards import Guard
    sv = rec.get("direction")
    if sv is not None:
        sv = tuple(Fraction(c) if isinstance(c, str) else c for c in sv)
    width = rec.get("alpha")
    return Guard((from_user(rec["x"]), from_user(rec["y"])), rec["kind"], int(rec["color"]),
                 orientation=rec.get("orientation"), width=width, part=rec.get("part"),
                 rule=rec.get("rule", ""), start_vector=sv)


def plan_document(plan, vertices, mode: str) -> dict:
    return {
        "polygon": [[int(x), int(y)] for x, y in vertices],
        "mode": mode,
        "guards": [guard_record(g) for g in plan.guards],
        "colors_used": plan.colors_used,
        "claim_report": [{"id": c.id, "anchor": c.anchor, "held": c.held, "detail": c.detail}
                         for c in plan.claims],
        "coverage": {"mode": plan.coverage.mode, "complete": plan.coverage.complete,
                     "uncovered": len(plan.coverage.uncovered),
                     "covered_fraction": round(plan.coverage.covered_fraction, 9)},
        "stats": {k: _stat(v) for k, v in plan.stats.items()},
    }


def _stat(v):
    if isinstance(v, float):
        return round(v, 6)
    return v
