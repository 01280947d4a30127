"""Static SVG figures: residual scatter, null histogram, residual boxplot.

The documents are built element by element so their bytes are deterministic
and their structure is testable: threshold lines carry class
"threshold-line", ordinary observations "data-point", flagged observations
"outlier-point".
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

import numpy as np

from .detection import DetectionReport
from .simulation import EmpiricalNullDistribution

WIDTH, HEIGHT = 640, 420
MARGIN = {"left": 56, "right": 16, "top": 24, "bottom": 40}


def _root(title: str) -> ET.Element:
    svg = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "width": str(WIDTH),
        "height": str(HEIGHT),
        "viewBox": f"0 0 {WIDTH} {HEIGHT}",
    })
    ET.SubElement(svg, "rect", {
        "class": "background", "x": "0", "y": "0",
        "width": str(WIDTH), "height": str(HEIGHT), "fill": "white",
    })
    text = ET.SubElement(svg, "text", {
        "class": "title", "x": str(WIDTH / 2), "y": "16",
        "text-anchor": "middle", "font-size": "13", "font-family": "sans-serif",
    })
    text.text = title
    return svg


def _plot_area():
    x0, x1 = MARGIN["left"], WIDTH - MARGIN["right"]
    y0, y1 = MARGIN["top"], HEIGHT - MARGIN["bottom"]
    return x0, x1, y0, y1


def _coord(value: float) -> str:
    return f"{value:.4f}"


def _line(svg, cls, x1, y1, x2, y2, stroke, dash=None, width="1"):
    attrs = {
        "class": cls,
        "x1": _coord(x1), "y1": _coord(y1),
        "x2": _coord(x2), "y2": _coord(y2),
        "stroke": stroke, "stroke-width": width,
    }
    if dash:
        attrs["stroke-dasharray"] = dash
    ET.SubElement(svg, "line", attrs)


def _label(svg, x, y, content, anchor="middle", size="11"):
    text = ET.SubElement(svg, "text", {
        "class": "label", "x": _coord(x), "y": _coord(y),
        "text-anchor": anchor, "font-size": size, "font-family": "sans-serif",
    })
    text.text = content


def _to_bytes(svg: ET.Element) -> bytes:
    return ET.tostring(svg, encoding="utf-8", xml_declaration=True)


def render_residual_plot(report: DetectionReport) -> bytes:
    """Index-versus-residual scatter with the +/- threshold lines.

    The y-scale is symmetric around zero, so the two threshold lines sit at
    mirrored pixel offsets from the zero axis.  Flagged points are drawn as
    distinct "outlier-point" circles.
    """
    values = report.residuals.values
    n = len(values)
    c = report.threshold
    x0, x1, y0, y1 = _plot_area()
    ylim = 1.1 * max(float(np.max(np.abs(values))), c, 1e-9)
    y_center = (y0 + y1) / 2.0
    y_scale = (y1 - y0) / (2.0 * ylim)

    def px(i):
        return x0 + (i + 0.5) * (x1 - x0) / n

    def py(v):
        return y_center - v * y_scale

    svg = _root(
        f"studentized residuals, threshold at alpha={report.alpha:g} "
        f"(p={report.p_value:.4g})"
    )
    _line(svg, "axis", x0, y1, x1, y1, "black")
    _line(svg, "axis", x0, y0, x0, y1, "black")
    _line(svg, "zero-line", x0, y_center, x1, y_center, "#999999", dash="2,3")
    offset = c * y_scale
    _line(svg, "threshold-line", x0, y_center - offset, x1, y_center - offset,
          "red", dash="6,3")
    _line(svg, "threshold-line", x0, y_center + offset, x1, y_center + offset,
          "red", dash="6,3")
    flagged = set(int(i) for i in report.outlier_indices)
    for i, value in enumerate(values):
        if i in flagged:
            ET.SubElement(svg, "circle", {
                "class": "outlier-point",
                "cx": _coord(px(i)), "cy": _coord(py(value)),
                "r": "4", "fill": "red",
            })
        else:
            ET.SubElement(svg, "circle", {
                "class": "data-point",
                "cx": _coord(px(i)), "cy": _coord(py(value)),
                "r": "2.5", "fill": "black",
            })
    _label(svg, (x0 + x1) / 2, HEIGHT - 10, "observation index")
    _label(svg, x1 - 4, py(c) - 4, f"+{c:.3g}", anchor="end", size="10")
    _label(svg, x1 - 4, py(-c) + 12, f"-{c:.3g}", anchor="end", size="10")
    return _to_bytes(svg)


def render_null_histogram(dist: EmpiricalNullDistribution, bins: int = 50) -> bytes:
    """Histogram of the tabulated null sample of the statistic."""
    samples = dist.sorted_samples
    counts, edges = np.histogram(samples, bins=bins)
    x0, x1, y0, y1 = _plot_area()
    max_count = max(int(counts.max()), 1)
    span = edges[-1] - edges[0] or 1.0

    def px(v):
        return x0 + (v - edges[0]) / span * (x1 - x0)

    svg = _root(f"null distribution of the statistic ({dist.nsim} draws)")
    _line(svg, "axis", x0, y1, x1, y1, "black")
    _line(svg, "axis", x0, y0, x0, y1, "black")
    for count, lo, hi in zip(counts, edges[:-1], edges[1:]):
        if count == 0:
            continue
        height = count / max_count * (y1 - y0)
        ET.SubElement(svg, "rect", {
            "class": "hist-bar",
            "x": _coord(px(lo)), "y": _coord(y1 - height),
            "width": _coord(max(px(hi) - px(lo) - 0.5, 0.5)),
            "height": _coord(height),
            "fill": "#4477aa",
        })
    _label(svg, (x0 + x1) / 2, HEIGHT - 10, "max |studentized residual|")
    return _to_bytes(svg)


def render_residual_boxplot(report: DetectionReport) -> bytes:
    """Boxplot of the studentized residuals (1.5 IQR whiskers)."""
    values = np.sort(report.residuals.values)
    q1, med, q3 = np.percentile(values, [25, 50, 75])
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = values[(values >= lo_fence) & (values <= hi_fence)]
    whisker_lo = float(inside[0]) if inside.size else q1
    whisker_hi = float(inside[-1]) if inside.size else q3
    fliers = values[(values < lo_fence) | (values > hi_fence)]

    x0, x1, y0, y1 = _plot_area()
    ymin = min(float(values[0]), whisker_lo)
    ymax = max(float(values[-1]), whisker_hi)
    pad = 0.05 * max(ymax - ymin, 1e-9)
    ymin, ymax = ymin - pad, ymax + pad

    def py(v):
        return y1 - (v - ymin) / (ymax - ymin) * (y1 - y0)

    cx = (x0 + x1) / 2.0
    half = (x1 - x0) * 0.12
    svg = _root("studentized residuals")
    _line(svg, "axis", x0, y0, x0, y1, "black")
    ET.SubElement(svg, "rect", {
        "class": "box",
        "x": _coord(cx - half), "y": _coord(py(q3)),
        "width": _coord(2 * half), "height": _coord(py(q1) - py(q3)),
        "fill": "none", "stroke": "black",
    })
    _line(svg, "median-line", cx - half, py(med), cx + half, py(med),
          "black", width="2")
    _line(svg, "whisker", cx, py(q3), cx, py(whisker_hi), "black")
    _line(svg, "whisker", cx, py(q1), cx, py(whisker_lo), "black")
    _line(svg, "whisker", cx - half / 2, py(whisker_hi), cx + half / 2,
          py(whisker_hi), "black")
    _line(svg, "whisker", cx - half / 2, py(whisker_lo), cx + half / 2,
          py(whisker_lo), "black")
    for value in fliers:
        ET.SubElement(svg, "circle", {
            "class": "flier",
            "cx": _coord(cx), "cy": _coord(py(float(value))),
            "r": "2.5", "fill": "none", "stroke": "black",
        })
    return _to_bytes(svg)


def render_runtime_plot(sweep_values, medians, fitted, sweep_kind: str) -> bytes:
    """Median runtime against the sweep variable, with the fitted line."""
    x = np.asarray(sweep_values, dtype=np.float64)
    y = np.asarray(medians, dtype=np.float64)
    rate, intercept = fitted
    x0, x1, y0, y1 = _plot_area()
    xmin, xmax = float(x.min()), float(x.max())
    xspan = (xmax - xmin) or 1.0
    fit_y = rate * x + intercept
    ymax = max(float(y.max()), float(fit_y.max()), 1e-12) * 1.08

    def px(v):
        return x0 + (v - xmin) / xspan * (x1 - x0)

    def py(v):
        return y1 - max(v, 0.0) / ymax * (y1 - y0)

    svg = _root(f"median runtime vs {sweep_kind} (rate {rate:.3g} s/unit)")
    _line(svg, "axis", x0, y1, x1, y1, "black")
    _line(svg, "axis", x0, y0, x0, y1, "black")
    _line(svg, "fit-line", px(xmin), py(rate * xmin + intercept),
          px(xmax), py(rate * xmax + intercept), "#cc6644")
    for xv, yv in zip(x, y):
        ET.SubElement(svg, "circle", {
            "class": "bench-point",
            "cx": _coord(px(xv)), "cy": _coord(py(yv)),
            "r": "3.5", "fill": "#4477aa",
        })
    _label(svg, (x0 + x1) / 2, HEIGHT - 10, sweep_kind)
    _label(svg, 14, (y0 + y1) / 2, "seconds", anchor="middle")
    return _to_bytes(svg)
