"""Deterministic SVG figures and the optional bench plot."""
from __future__ import annotations

import math
from fractions import Fraction

PALETTE = ("#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4", "#f032e6",
           "#bfef45", "#fabed4", "#469990", "#dcbeff", "#9a6324", "#800000", "#aaffc3")
PX = 20  # pixels per internal unit (half a user unit)
PAD = 20


def color_of(c: int) -> str:
    return PALETTE[(c - 1) % len(PALETTE)]


def _fmt(v) -> str:
    v = float(v)
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Canvas:
    def __init__(self, poly):
        xs = [float(p[0]) for p in poly.vertices]
        ys = [float(p[1]) for p in poly.vertices]
        self.x0, self.y1 = min(xs), max(ys)
        self.w = (max(xs) - self.x0) * PX + 2 * PAD
        self.h = (self.y1 - min(ys)) * PX + 2 * PAD

    def pt(self, p) -> tuple:
        return (float(p[0]) - self.x0) * PX + PAD, (self.y1 - float(p[1])) * PX + PAD

    def path(self, pts) -> str:
        cmds = []
        for k, p in enumerate(pts):
            x, y = self.pt(p)
            cmds.append(f"{'M' if k == 0 else 'L'}{_fmt(x)} {_fmt(y)}")
        return " ".join(cmds) + " Z"


def render_svg(poly, parts=None, part_colors=None, guards=None) -> str:
    """SVG 1.1 document: outline, optional filled parts, optional guards."""
    cv = _Canvas(poly)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(cv.w)}" '
        f'height="{_fmt(cv.h)}" viewBox="0 0 {_fmt(cv.w)} {_fmt(cv.h)}">',
    ]
    if parts:
        out.append('<g id="parts">')
        for k, pp in enumerate(parts):
            c = part_colors.get(k, 1) if part_colors else 1
            out.append(f'<path class="part" d="{cv.path(pp)}" fill="{color_of(c)}" '
                       f'fill-opacity="0.35" stroke="#888" stroke-width="1"/>')
        out.append("</g>")
    out.append(f'<path class="outline" d="{cv.path(poly.vertices)}" fill="none" '
               f'stroke="#000" stroke-width="2"/>')
    if guards:
        out.append('<g id="guards">')
        for g in guards:
            out.append(_guard_glyph(cv, g))
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _guard_glyph(cv, g) -> str:
    x, y = cv.pt(g.position)
    col = color_of(g.color)
    if g.kind == "rect":
        s = 6
        return (f'<rect class="rguard" x="{_fmt(x - s / 2)}" y="{_fmt(y - s / 2)}" width="{s}" '
                f'height="{s}" fill="{col}" stroke="#000" stroke-width="0.5"/>')
    if g.kind == "full":
        return f'<circle class="guard" cx="{_fmt(x)}" cy="{_fmt(y)}" r="4" fill="{col}"/>'
    r = 14
    a0 = math.radians(float(g.orientation))
    a1 = math.radians(float(g.orientation) + float(g.width))
    # screen y grows downward
    sx, sy = x + r * math.cos(a0), y - r * math.sin(a0)
    ex, ey = x + r * math.cos(a1), y - r * math.sin(a1)
    large = 1 if float(g.width) > 180 else 0
    d = (f"M{_fmt(x)} {_fmt(y)} L{_fmt(sx)} {_fmt(sy)} "
         f"A{r} {r} 0 {large} 0 {_fmt(ex)} {_fmt(ey)} Z")
    return (f'<path class="wedge" d="{d}" fill="{col}" fill-opacity="0.6" stroke="{col}" '
            f'stroke-width="1"/>')


def bench_figure(rows, path: str) -> None:
    """Colors against log2 n with the construction bound."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    fams = sorted({r["family"] for r in rows})
    for fam in fams:
        pts = [(math.log2(r["n"]), r["colors"]) for r in rows if r["family"] == fam]
        ax.scatter([p[0] for p in pts], [p[1] for p in pts], s=12, label=fam)
    bpts = sorted({(math.log2(r["n"]), r["bound"]) for r in rows})
    ax.plot([p[0] for p in bpts], [p[1] for p in bpts], "k--", lw=1, label="bound")
    ax.set_xlabel("log2 n")
    ax.set_ylabel("colors")
    ax.legend(fontsize=8)
    fig.tight_layout()
    meta = {"Date": None} if path.endswith(".svg") else {}
    fig.savefig(path, metadata=meta or None)
    plt.close(fig)
