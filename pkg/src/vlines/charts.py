"""
Charts of a page: t-s along the x-axis, s up the y-axis, the dimension of E_r^{s,t} in each cell.
"""

import io
import logging
from enum import Enum
from typing import Dict, Optional, Tuple

import matplotlib

matplotlib.use("Agg")

from matplotlib.backends.backend_svg import FigureCanvasSVG  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from .couples import Page  # noqa: E402
from .errors import UnknownFormatError  # noqa: E402
from .lines import LineSpec  # noqa: E402

logger = logging.getLogger(__name__)

SVG_HASH_SALT = "vlines"


class ChartFormat(str, Enum):
    TEXT = "text"
    SVG = "svg"
    CSV = "csv"


def emit_chart(page: Page, format: str, line: Optional[LineSpec] = None) -> bytes:  # noqa: A002
    try:
        chart_format = ChartFormat(format)
    except ValueError:
        raise UnknownFormatError(f"unknown chart format {format!r}; use one of text, svg, csv") from None
    if chart_format is ChartFormat.CSV:
        return _csv(page.module.dims)
    if chart_format is ChartFormat.TEXT:
        return _text(page.r, page.module.dims)
    return _svg(page.r, page.module.dims, line)


def _csv(dims: Dict[Tuple[int, int], int]) -> bytes:
    rows = ["s,t,dim"] + [f"{s},{t},{dim}" for (s, t), dim in sorted(dims.items())]
    return ("\n".join(rows) + "\n").encode()


def _text(r: int, dims: Dict[Tuple[int, int], int]) -> bytes:
    if not dims:
        return f"E_{r} = 0\n".encode()
    cells = {(t - s, s): dim for (s, t), dim in dims.items()}
    xs = range(min(x for x, _ in cells), max(x for x, _ in cells) + 1)
    ys = range(max(y for _, y in cells), min(y for _, y in cells) - 1, -1)
    width = max(len(str(v)) for v in list(cells.values()) + list(xs) + list(ys))
    label = max(len(str(y)) for y in ys)

    lines = [f"E_{r}"]
    for y in ys:
        row = " ".join(str(cells[(x, y)]).rjust(width) if (x, y) in cells else ".".rjust(width) for x in xs)
        lines.append(f"{str(y).rjust(label)} | {row}")
    lines.append(" " * label + " +-" + "-" * (len(xs) * (width + 1) - 1))
    lines.append(" " * (label + 3) + " ".join(str(x).rjust(width) for x in xs))
    return ("\n".join(lines) + "\n").encode()


def _svg(r: int, dims: Dict[Tuple[int, int], int], line: Optional[LineSpec]) -> bytes:
    cells = {(t - s, s): dim for (s, t), dim in dims.items()}
    xs = [x for x, _ in cells] or [0]
    ys = [y for _, y in cells] or [0]
    x_lo, x_hi = min(xs) - 1, max(xs) + 1
    y_lo, y_hi = min(min(ys), 0) - 1, max(ys) + 1

    fig = Figure(figsize=(max(3, (x_hi - x_lo) * 0.6), max(3, (y_hi - y_lo) * 0.6)))
    FigureCanvasSVG(fig)
    ax = fig.add_subplot(1, 1, 1)
    for (x, y), dim in sorted(cells.items()):
        ax.scatter([x], [y], color="black", s=30)
        if dim > 1:
            ax.annotate(str(dim), (x, y), xytext=(4, 4), textcoords="offset points", fontsize=8)
    if line is not None and line.b is not None:
        # s = m(t-s) + b across the visible window
        ax.plot(
            [x_lo, x_hi],
            [float(line.m * x_lo + line.b), float(line.m * x_hi + line.b)],
            linestyle="--" if line.strict else "-",
            color="tab:red",
            label=str(line),
        )
        ax.legend(loc="upper right", fontsize=7)
    ax.set_xlim(x_lo, x_hi)
    ax.set_ylim(y_lo, y_hi)
    ax.set_xticks(range(x_lo, x_hi + 1))
    ax.set_yticks(range(y_lo, y_hi + 1))
    ax.grid(True, linewidth=0.3)
    ax.set_xlabel("t - s")
    ax.set_ylabel("s")
    ax.set_title(f"E_{r}")

    buffer = io.BytesIO()
    with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "none"}):
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    logger.debug("rendered E_%d chart with %d cells", r, len(cells))
    return buffer.getvalue()
