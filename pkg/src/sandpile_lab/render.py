"""Text, SVG and PNG pictures of polyominoes and framed path pairs.

ASCII layout: the origin is bottom-left and each text row is one unit of
height, so rows are printed top to bottom.  Lattice column x sits at text
column 2x and the cell to its right at 2x + 1.  A north step from (x, y)
is a '|' at (row y, column 2x); an east step from (x, y) is a '_' at
(row y, column 2x + 1), which lands on the bottom edge of that row.

    '#'  polyomino cell
    '|' '_'  upper (red) path
    ':' '.'  lower (green) path, pair pictures only
    '*'  stable intersection
    'o'  frame anchor

Everything is wrapped in a box border with a one-space margin.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Optional

from .graph_core import SandpileError
from .paths import FramedPair, Point, Polyomino, lattice_points

GLYPHS = {"cell": "#", "up_n": "|", "up_e": "_", "lo_n": ":", "lo_e": ".",
          "stable": "*", "anchor": "o"}


class _Canvas:
    def __init__(self, x0: int, y0: int, width: int, height: int):
        self.x0, self.y0 = x0, y0
        self.width, self.height = width, height
        self.rows = [[" "] * (2 * width + 1) for _ in range(height + 1)]

    def put(self, x2: int, y: int, ch: str) -> None:
        """Place ``ch`` at doubled abscissa ``x2`` (already 2x or 2x+1) and height y."""
        col, row = x2 - 2 * self.x0, y - self.y0
        if 0 <= row < len(self.rows) and 0 <= col < len(self.rows[0]):
            self.rows[row][col] = ch

    def path(self, points: Iterable[Point], letters: str, north: str, east: str) -> None:
        for (x, y), ch in zip(points, letters):
            if ch == "N":
                self.put(2 * x, y, north)
            else:
                self.put(2 * x + 1, y, east)

    def text(self) -> str:
        body = ["".join(r).rstrip().ljust(len(r)) for r in reversed(self.rows)]
        w = len(body[0]) + 2
        top = "+" + "-" * w + "+"
        return "\n".join([top] + ["| " + line + " |" for line in body] + [top]) + "\n"


def polyomino_ascii(p: Polyomino) -> str:
    canvas = _Canvas(0, 0, p.m, p.n)
    cells = p.cells()
    for x, y in cells:
        canvas.put(2 * x + 1, y, GLYPHS["cell"])
        if (x + 1, y) in cells:
            canvas.put(2 * x + 2, y, GLYPHS["cell"])
    canvas.path(lattice_points(p.upper), p.upper, GLYPHS["up_n"], GLYPHS["up_e"])
    return canvas.text()


def _window(fp: FramedPair, periods: int) -> tuple[int, int, int, int]:
    pts = fp.stable_intersections(normalized=False)
    xs = [x for x, _ in pts] + [fp.anchor[0]]
    ys = [y for _, y in pts] + [fp.anchor[1]]
    x0, y0 = min(xs), min(ys)
    return x0, y0, max(xs) - x0 + periods * fp.m, max(ys) - y0 + periods * fp.n


def _walk(period_word: str, start: Point, length: int):
    """Points and letters of a periodic path from ``start`` for ``length`` steps."""
    letters = "".join(period_word[k % len(period_word)] for k in range(length))
    return lattice_points(letters, start), letters


def _rotated(per, index: int) -> str:
    """The period word read starting from step ``index``."""
    k = index % len(per.period)
    return per.period[k:] + per.period[:k]


def _window_paths(fp: FramedPair, x0: int, y0: int, steps: int):
    """(points, letters) for the red and the green path, both entering the window."""
    red = _walk(_rotated(fp.red, fp.red.north_index(y0)),
                (fp.red.north_abscissa(y0), y0), steps)
    green = _walk(_rotated(fp.green, fp.green.east_index(x0)),
                  (x0, fp.green.east_ordinate(x0)), steps)
    return red, green


def pair_ascii(fp: FramedPair, periods: int = 1) -> str:
    """The stretch of the pair covering every stable intersection of one period."""
    x0, y0, w, h = _window(fp, periods)
    canvas = _Canvas(x0, y0, w, h)
    red, green = _window_paths(fp, x0, y0, w + h + 2 * (fp.m + fp.n))
    canvas.path(*green, GLYPHS["lo_n"], GLYPHS["lo_e"])
    canvas.path(*red, GLYPHS["up_n"], GLYPHS["up_e"])
    for x, y in fp.stable_intersections(normalized=False):
        canvas.put(2 * x, y, GLYPHS["stable"])
    canvas.put(2 * fp.anchor[0], fp.anchor[1], GLYPHS["anchor"])
    return canvas.text()


def polyomino_svg(p: Polyomino, scale: int = 20) -> str:
    """SVG with one unit square per cell and the two boundary paths."""
    w, h = p.m * scale, p.n * scale

    def pt(x, y):
        return f"{x * scale},{h - y * scale}"

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
             f'viewBox="0 0 {w} {h}">']
    for x, y in sorted(p.cells()):
        parts.append(f'<rect x="{x * scale}" y="{h - (y + 1) * scale}" width="{scale}" '
                     f'height="{scale}" fill="#cccccc" stroke="#888888"/>')
    for word_, colour in ((p.upper, "red"), (p.lower, "green")):
        pts = " ".join(pt(x, y) for x, y in lattice_points(word_))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{colour}" stroke-width="2"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _figure():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def polyomino_png(p: Polyomino, out: Path, dpi: int = 100) -> Path:
    plt = _figure()
    from matplotlib.patches import Rectangle

    fig, ax = plt.subplots(figsize=(max(2, p.m), max(2, p.n)))
    for x, y in sorted(p.cells()):
        ax.add_patch(Rectangle((x, y), 1, 1, facecolor="0.8", edgecolor="0.5"))
    for word_, colour in ((p.upper, "red"), (p.lower, "green")):
        xs, ys = zip(*lattice_points(word_))
        ax.plot(xs, ys, color=colour, linewidth=2)
    ax.set_aspect("equal")
    ax.set_xlim(-0.5, p.m + 0.5)
    ax.set_ylim(-0.5, p.n + 0.5)
    ax.set_xticks(range(p.m + 1))
    ax.set_yticks(range(p.n + 1))
    ax.grid(True, linewidth=0.3)
    fig.tight_layout()
    fig.savefig(out, dpi=dpi)
    plt.close(fig)
    return Path(out)


def pair_png(fp: FramedPair, out: Path, periods: int = 1, dpi: int = 100) -> Path:
    """Both periodic paths over one window, stable intersections and the anchor."""
    plt = _figure()
    x0, y0, w, h = _window(fp, periods)
    fig, ax = plt.subplots(figsize=(max(3, w / 2), max(3, h / 2)))
    red, green = _window_paths(fp, x0, y0, w + h + 2 * (fp.m + fp.n))
    for (points, _), colour in ((red, "red"), (green, "green")):
        xs, ys = zip(*points)
        ax.plot(xs, ys, color=colour, linewidth=2)
    sx, sy = zip(*fp.stable_intersections(normalized=False))
    ax.scatter(sx, sy, color="black", zorder=3, label="stable intersections")
    ax.scatter([fp.anchor[0]], [fp.anchor[1]], s=120, facecolors="none", edgecolors="blue",
               zorder=4, label="anchor")
    ax.set_aspect("equal")
    ax.set_xlim(x0 - 0.5, x0 + w + 0.5)
    ax.set_ylim(y0 - 0.5, y0 + h + 0.5)
    ax.grid(True, linewidth=0.3)
    ax.legend(loc="upper left", fontsize="small")
    fig.tight_layout()
    fig.savefig(out, dpi=dpi)
    plt.close(fig)
    return Path(out)


def render(obj, fmt: str = "ascii", out: Optional[Path] = None) -> str:
    """Dispatch on object type and format; PNG requires ``out`` and returns its path."""
    if fmt not in ("ascii", "svg", "png"):
        raise SandpileError(f"unknown format {fmt!r}")
    if fmt == "png":
        if out is None:
            raise SandpileError("png output needs a file path")
        fn = polyomino_png if isinstance(obj, Polyomino) else pair_png
        return str(fn(obj, out))
    if isinstance(obj, Polyomino):
        return polyomino_ascii(obj) if fmt == "ascii" else polyomino_svg(obj)
    if fmt == "ascii":
        return pair_ascii(obj)
    raise SandpileError(f"format {fmt!r} is not available for framed pairs")
