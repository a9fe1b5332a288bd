"""Deterministic SVG pictures of the (r, s)-type walks of a positive braid.

Vertices 1, 2, 3 are columns.  Row k sits between generator k and k+1; the
first row is the start vertex and generators are drawn top to bottom in
word order.  Admissible walks are solid; walks in a cancelling pair are
dashed and share a colour with their partner.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .braid import PositiveBraid
from .paths import Endpoint, distinguished_partner, enumerate_paths, path_weight

__all__ = ["render_paths_svg", "DiagramBudgetExceeded", "DEFAULT_RENDER_BUDGET"]

DEFAULT_RENDER_BUDGET = 200

_COL = 90
_ROW = 40
_LEFT = 80
_TOP = 60
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


class DiagramBudgetExceeded(RuntimeError):
    def __init__(self, count: int, budget: int):
        super().__init__(f"{count} walks exceed the render budget {budget}; use --json for counts only")
        self.count = count
        self.budget = budget


def _x(v: int, offset: float) -> str:
    return f"{_LEFT + (v - 1) * _COL + offset:.1f}"


def _y(k: int) -> str:
    return f"{_TOP + k * _ROW:.1f}"


def render_paths_svg(P: PositiveBraid, r: int, s: Endpoint, budget: int = DEFAULT_RENDER_BUDGET) -> str:
    walks = enumerate_paths(P, r, s)
    if len(walks) > budget:
        raise DiagramBudgetExceeded(len(walks), budget)
    word = P.word
    n = len(walks)
    width = _LEFT * 2 + 2 * _COL + 220
    height = _TOP + max(len(word), 1) * _ROW + 60 + 18 * (n + 3)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{_LEFT}" y="24" font-family="monospace" font-size="14">({r},{escape(str(s))})-type walks of {escape(str(P)) or "identity"}</text>',
    ]
    # axes
    for v in (1, 2, 3):
        out.append(f'<line x1="{_x(v, 0)}" y1="{_y(0)}" x2="{_x(v, 0)}" y2="{_y(len(word))}" stroke="#bbbbbb"/>')
        out.append(f'<text x="{_x(v, -4)}" y="{_TOP - 12}" font-family="monospace" font-size="12">{v}</text>')
    for k, g in enumerate(word, start=1):
        y = f"{_TOP + (k - 0.5) * _ROW:.1f}"
        out.append(f'<text x="12" y="{y}" font-family="monospace" font-size="12">s{g}</text>')
    # pair colours in order of first appearance
    keys = [tuple(x.vertices) for x in walks]
    colour: dict[tuple[int, ...], str] = {}
    kinds: dict[tuple[int, ...], str] = {}
    next_colour = 1
    for x in walks:
        key = tuple(x.vertices)
        if key in colour:
            continue
        partner = distinguished_partner(x)
        if partner is None:
            colour[key] = "#000000"
            continue
        kind, y = partner
        c = _PALETTE[next_colour % len(_PALETTE)]
        next_colour += 1
        colour[key] = c
        kinds[key] = kind
        pk = tuple(y.vertices)
        if pk not in colour:
            colour[pk] = c
            kinds[pk] = kind
    for idx, x in enumerate(walks):
        key = keys[idx]
        offset = (idx - (n - 1) / 2) * 3.0
        pts = " ".join(f"{_x(v, offset)},{_y(k)}" for k, v in enumerate(x.vertices))
        dash = ' stroke-dasharray="6,4"' if key in kinds else ""
        out.append(f'<polyline points="{pts}" fill="none" stroke="{colour[key]}" stroke-width="2"{dash}/>')
    # legend
    ly = _TOP + max(len(word), 1) * _ROW + 40
    out.append(f'<text x="{_LEFT}" y="{ly}" font-family="monospace" font-size="12">solid: admissible; dashed: cancelling pair</text>')
    for idx, x in enumerate(walks):
        key = keys[idx]
        w = path_weight(x)
        tag = kinds.get(key, "admissible")
        text = f"{x}  {'+' if w.sign > 0 else '-'}q^{w.degree}  {tag}"
        out.append(
            f'<text x="{_LEFT}" y="{ly + 18 * (idx + 1)}" font-family="monospace" font-size="12" '
            f'fill="{colour[key]}">{escape(text)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
