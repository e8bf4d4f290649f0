"""ASCII and SVG emitters for decomposition-type diagrams.

Conventions: twists increase left to right, the middle pair is stacked,
black cells are '*' and complementary cells are 'o'.  SVG uses a fixed
40-unit cell spacing with arcs above the row for connections inside the
window and red arcs for the outer distance-(2^n - 1) connections.
"""

from __future__ import annotations

from .mdt import (LOWER, PLAIN, UPPER, Cell, MDTDiagram, cell_str,
                  outer_pairs)

CELL_SPACING = 40


def diagram_ascii(diagram: MDTDiagram) -> str:
    dim_q = diagram.dim_q
    d = dim_q // 2
    cells = set(diagram.cells()) | set(diagram.complementary)
    black = set(diagram.cells())

    def mark(cell: Cell) -> str:
        if cell not in cells:
            return " "
        return "*" if cell in black else "o"

    top = []
    mid = []
    bot = []
    for p in range(dim_q + 1):
        if dim_q % 2 == 0 and p == d:
            top.append(mark((p, UPPER)))
            mid.append(" ")
            bot.append(mark((p, LOWER)))
        else:
            top.append(" ")
            mid.append(mark((p, PLAIN)))
            bot.append(" ")
    lines = []
    if any(c != " " for c in top):
        lines.append(" ".join(top).rstrip())
    lines.append(" ".join(mid).rstrip())
    if any(c != " " for c in bot):
        lines.append(" ".join(bot).rstrip())
    lines = [ln for ln in lines if ln.strip()]

    comps = sorted((sorted(map(cell_str, comp)) for comp in diagram.components),
                   key=lambda c: (c[0], len(c)))
    lines.append("components: " + "  ".join("{" + " ".join(c) + "}"
                                            for c in comps))
    if diagram.complementary:
        lines.append("complementary: "
                     + " ".join(sorted(map(cell_str, diagram.complementary))))
    if diagram.labels:
        for comp, lab in sorted(diagram.labels.items(),
                                key=lambda kv: sorted(map(cell_str, kv[0]))):
            lines.append("  {" + " ".join(sorted(map(cell_str, comp)))
                         + "}: " + lab)
    return "\n".join(lines) + "\n"


def _cell_xy(cell: Cell, dim_q: int) -> tuple[int, int]:
    pos, role = cell
    x = 30 + pos * CELL_SPACING
    y = 80
    if role == UPPER:
        y = 60
    elif role == LOWER:
        y = 100
    return x, y


def diagram_svg(diagram: MDTDiagram, n: int | None = None) -> str:
    """SVG picture; for Chow diagrams pass n to draw the outer
    distance-(2^n - 1) connections as red arcs."""
    dim_q = diagram.dim_q
    width = 60 + dim_q * CELL_SPACING
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="160" viewBox="0 0 {width} 160">']
    outer = set()
    if diagram.flavor == "chow" and n is not None:
        outer = {frozenset(p) for p in outer_pairs(dim_q, n)}

    def arc(a: Cell, b: Cell, color: str):
        (x1, y1), (x2, y2) = _cell_xy(a, dim_q), _cell_xy(b, dim_q)
        ymid = min(y1, y2) - 14 - abs(x2 - x1) // 10
        parts.append(
            f'<path d="M {x1} {y1} Q {(x1 + x2) // 2} {ymid} {x2} {y2}" '
            f'stroke="{color}" fill="none"/>')

    for comp in sorted(diagram.components, key=lambda c: sorted(c)):
        comp_sorted = sorted(comp)
        for a, b in zip(comp_sorted, comp_sorted[1:]):
            if frozenset((a, b)) not in outer:
                arc(a, b, "black")
        for pair in outer:
            if pair <= comp:
                a, b = sorted(pair)
                arc(a, b, "red")
    for cell in sorted(diagram.cells()):
        x, y = _cell_xy(cell, dim_q)
        parts.append(f'<circle cx="{x}" cy="{y}" r="4" fill="black"/>')
    for cell in sorted(diagram.complementary):
        x, y = _cell_xy(cell, dim_q)
        parts.append(f'<circle cx="{x}" cy="{y}" r="4" fill="grey"/>')
    for comp, lab in sorted(diagram.labels.items(),
                            key=lambda kv: sorted(kv[0])):
        x, y = _cell_xy(min(comp), dim_q)
        parts.append(f'<text x="{x}" y="{y + 30}" font-size="10">'
                     f'{lab}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
