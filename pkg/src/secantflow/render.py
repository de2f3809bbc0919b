"""Minimal deterministic SVG output for planar curves and secant clouds."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Layer:
    """Polylines (or points when ``dots``) drawn in one style."""

    polylines: list[np.ndarray]
    stroke: str = "black"
    width: float = 1.0
    dots: bool = False
    label: str = ""


def _thin(P: np.ndarray, max_points: int) -> np.ndarray:
    if len(P) <= max_points:
        return P
    idx = np.linspace(0, len(P) - 1, max_points).round().astype(int)
    return P[idx]


def svg_document(layers: list[Layer], bounds=(-1.5, 1.5, -1.5, 1.5), size: int = 600, title: str = "",
                 circle: float | None = 1.0, max_points: int = 4000) -> str:
    """Render layers in the box ``(xmin, xmax, ymin, ymax)``; ``circle`` draws a reference circle."""
    xmin, xmax, ymin, ymax = bounds
    sx = size / (xmax - xmin)
    sy = size / (ymax - ymin)

    def tx(P):
        return np.column_stack([(P[:, 0] - xmin) * sx, (ymax - P[:, 1]) * sy])

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           f'<rect width="{size}" height="{size}" fill="white"/>']
    if title:
        out.append(f'<title>{title}</title>')
    if circle is not None:
        cx, cy = tx(np.array([[0.0, 0.0]]))[0]
        out.append(f'<ellipse cx="{cx:.2f}" cy="{cy:.2f}" rx="{circle * sx:.2f}" ry="{circle * sy:.2f}" '
                   'fill="none" stroke="#bbbbbb" stroke-dasharray="4 3"/>')
    for layer in layers:
        out.append(f'<g stroke="{layer.stroke}" fill="{layer.stroke if layer.dots else "none"}" '
                   f'stroke-width="{layer.width:g}">')
        budget = max(2, max_points // max(1, len(layer.polylines)))
        for P in layer.polylines:
            if len(P) == 0:
                continue
            Q = tx(_thin(np.asarray(P, float)[:, :2], budget))
            if layer.dots:
                out.extend(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{layer.width:g}" stroke="none"/>' for x, y in Q)
            elif len(Q) > 1:
                pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in Q)
                out.append(f'<polyline points="{pts}"/>')
        out.append("</g>")
    legend_y = 18
    for layer in layers:
        if layer.label:
            out.append(f'<text x="8" y="{legend_y}" font-size="13" fill="{layer.stroke}">{layer.label}</text>')
            legend_y += 16
    out.append("</svg>")
    return "\n".join(out) + "\n"


def sphere_view(points: np.ndarray) -> np.ndarray:
    """Orthographic projection of unit vectors seen from the north pole."""
    P = np.asarray(points, float)
    return P[:, :2]
