"""Cumulative-regret chart as a standalone SVG file."""

import logging
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np

from neural_linucb.exceptions import ArtifactError, BanditConfigError
from neural_linucb.harness.models import RegretAggregate

logger = logging.getLogger(__name__)

WIDTH = 800
HEIGHT = 480
MARGIN_LEFT = 80
MARGIN_RIGHT = 180
MARGIN_TOP = 30
MARGIN_BOTTOM = 60
TICKS = 5
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
SVG_NS = "http://www.w3.org/2000/svg"


class _Axes:
    """Maps data coordinates onto the plot area."""

    def __init__(self, x_range: tuple[float, float], y_range: tuple[float, float]) -> None:
        x_lo, x_hi = x_range
        y_lo, y_hi = y_range
        if x_hi <= x_lo:
            x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
        if y_hi <= y_lo:
            pad = max(abs(y_lo), 1.0) * 0.5
            y_lo, y_hi = y_lo - pad, y_hi + pad
        self.x_lo, self.x_hi = x_lo, x_hi
        self.y_lo, self.y_hi = y_lo, y_hi
        self.left = MARGIN_LEFT
        self.right = WIDTH - MARGIN_RIGHT
        self.top = MARGIN_TOP
        self.bottom = HEIGHT - MARGIN_BOTTOM

    def x(self, value: np.ndarray | float) -> np.ndarray:
        span = self.x_hi - self.x_lo
        return self.left + (np.asarray(value, dtype=float) - self.x_lo) / span * (
            self.right - self.left
        )

    def y(self, value: np.ndarray | float) -> np.ndarray:
        span = self.y_hi - self.y_lo
        return self.bottom - (np.asarray(value, dtype=float) - self.y_lo) / span * (
            self.bottom - self.top
        )


def _points(xs: np.ndarray, ys: np.ndarray) -> str:
    return " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys, strict=True))


def _text(parent: ET.Element, x: float, y: float, label: str, **attrs: str) -> ET.Element:
    el = ET.SubElement(
        parent,
        "text",
        {"x": f"{x:.2f}", "y": f"{y:.2f}", "font-family": "sans-serif", "font-size": "12", **attrs},
    )
    el.text = label
    return el


def _draw_axes(svg: ET.Element, axes: _Axes) -> None:
    frame = ET.SubElement(svg, "g", {"class": "axes", "stroke": "#333", "stroke-width": "1"})
    ET.SubElement(
        frame,
        "line",
        {
            "x1": str(axes.left),
            "y1": str(axes.bottom),
            "x2": str(axes.right),
            "y2": str(axes.bottom),
        },
    )
    ET.SubElement(
        frame,
        "line",
        {"x1": str(axes.left), "y1": str(axes.top), "x2": str(axes.left), "y2": str(axes.bottom)},
    )
    for value in np.linspace(axes.x_lo, axes.x_hi, TICKS):
        _text(
            svg, float(axes.x(value)), axes.bottom + 18, f"{value:.0f}", **{"text-anchor": "middle"}
        )
    for value in np.linspace(axes.y_lo, axes.y_hi, TICKS):
        _text(
            svg, axes.left - 8, float(axes.y(value)) + 4, f"{value:.3g}", **{"text-anchor": "end"}
        )
    _text(
        svg, (axes.left + axes.right) / 2, HEIGHT - 15, "round", **{"text-anchor": "middle"}
    )
    _text(
        svg,
        20,
        (axes.top + axes.bottom) / 2,
        "cumulative regret",
        **{
            "text-anchor": "middle",
            "transform": f"rotate(-90 20 {(axes.top + axes.bottom) / 2:.2f})",
        },
    )


def render_svg(aggregates: list[RegretAggregate], title: str | None = None) -> ET.Element:
    """One mean line and a shaded one-std band per aggregate, with a legend."""
    if not aggregates:
        raise BanditConfigError("nothing to plot: no aggregates given")
    if any(len(aggregate) == 0 for aggregate in aggregates):
        raise BanditConfigError("nothing to plot: an aggregate has no rows")

    lows = [(a.frame["mean"] - a.frame["std"]).min() for a in aggregates]
    highs = [(a.frame["mean"] + a.frame["std"]).max() for a in aggregates]
    axes = _Axes(
        (
            float(min(a.frame["t"].min() for a in aggregates)),
            float(max(a.frame["t"].max() for a in aggregates)),
        ),
        (float(min(lows)), float(max(highs))),
    )

    svg = ET.Element(
        "svg",
        {
            "xmlns": SVG_NS,
            "width": str(WIDTH),
            "height": str(HEIGHT),
            "viewBox": f"0 0 {WIDTH} {HEIGHT}",
        },
    )
    hashes = dict.fromkeys(aggregate.config_hash for aggregate in aggregates)
    ET.SubElement(svg, "desc").text = "config_hash=" + ",".join(hashes)
    ET.SubElement(svg, "rect", {"width": str(WIDTH), "height": str(HEIGHT), "fill": "white"})
    if title:
        _text(svg, axes.left, 18, title, **{"font-size": "14"})
    _draw_axes(svg, axes)

    legend = ET.SubElement(svg, "g", {"class": "legend"})
    for i, aggregate in enumerate(aggregates):
        color = PALETTE[i % len(PALETTE)]
        frame = aggregate.frame
        xs = axes.x(frame["t"].to_numpy())
        mean = frame["mean"].to_numpy()
        std = frame["std"].to_numpy()
        series = ET.SubElement(
            svg,
            "g",
            {
                "class": "series",
                "data-algorithm": aggregate.algorithm,
                "data-config-hash": aggregate.config_hash,
            },
        )
        band = np.concatenate([axes.y(mean + std), axes.y(mean - std)[::-1]])
        ET.SubElement(
            series,
            "polygon",
            {
                "points": _points(np.concatenate([xs, xs[::-1]]), band),
                "fill": color,
                "fill-opacity": "0.2",
                "stroke": "none",
            },
        )
        ET.SubElement(
            series,
            "polyline",
            {
                "points": _points(xs, axes.y(mean)),
                "fill": "none",
                "stroke": color,
                "stroke-width": "2",
            },
        )
        y = axes.top + 10 + 20 * i
        ET.SubElement(
            legend,
            "line",
            {
                "x1": str(axes.right + 15),
                "y1": str(y),
                "x2": str(axes.right + 40),
                "y2": str(y),
                "stroke": color,
                "stroke-width": "2",
            },
        )
        _text(legend, axes.right + 46, y + 4, aggregate.algorithm)
    return svg


def emit_svg(aggregates: list[RegretAggregate], path: Path | str, title: str | None = None) -> Path:
    path = Path(path)
    tree = ET.ElementTree(render_svg(aggregates, title))
    ET.indent(tree)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tree.write(path, encoding="utf-8", xml_declaration=True)
    except OSError as e:
        raise ArtifactError(f"cannot write {path}: {e.strerror or e}", path=path) from e
    logger.debug("wrote %s (%d series)", path, len(aggregates))
    return path
