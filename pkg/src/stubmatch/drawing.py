"""Arc-diagram SVG rendering: points on an axis, semicircular edge arcs.

Output is deterministic for a given input (fixed decimal formatting, no
randomness); the only run-dependent content is a timestamp comment, which
``no_meta`` suppresses. Cycle configurations draw on the unrolled axis.
"""

from __future__ import annotations

from datetime import datetime, timezone

from .matching.base import Matching
from .pointsets import PointConfig

__all__ = ["arc_diagram"]

_PAD = 24.0
_STYLE = (
    "  <style>\n"
    "    .axis { stroke: #555; stroke-width: 1; }\n"
    "    .point { fill: #222; }\n"
    "    .edge { fill: none; stroke: #1f77b4; stroke-width: 1; opacity: 0.75; }\n"
    "    .stub-r { stroke: #d62728; stroke-width: 1.5; }\n"
    "    .stub-l { stroke: #2ca02c; stroke-width: 1.5; }\n"
    "  </style>"
)


def arc_diagram(
    config: PointConfig,
    matching: Matching | None = None,
    width: float = 800.0,
    style: str = "plain",
    no_meta: bool = False,
) -> str:
    """Render a point configuration and its matching as an SVG string.

    style="directed" adds short colored ticks at arc endpoints: red where a
    right-stub was consumed (left end of the edge), green for the left-stub
    end.
    """
    if style not in ("plain", "directed"):
        raise ValueError(f"unknown style {style!r}")
    span = width - 2.0 * _PAD
    height = span / 2.0 + 2.0 * _PAD + 10.0
    y0 = height - _PAD

    def sx(p: float) -> float:
        return _PAD + (p / config.topology.extent) * span

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
    ]
    if not no_meta:
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        parts.append(f"  <!-- generated {stamp} -->")
    parts.append(_STYLE)
    parts.append(
        f'  <line class="axis" x1="{_PAD:.2f}" y1="{y0:.2f}" '
        f'x2="{width - _PAD:.2f}" y2="{y0:.2f}" />'
    )
    xs = [sx(p) for p in config.positions]
    for x in xs:
        parts.append(f'  <circle class="point" cx="{x:.2f}" cy="{y0:.2f}" r="2" />')
    if matching is not None and matching.m:
        for i, j in matching.edges:
            x1, x2 = xs[int(i)], xs[int(j)]
            r = (x2 - x1) / 2.0
            parts.append(
                f'  <path class="edge" d="M {x1:.2f},{y0:.2f} '
                f'A {r:.2f},{r:.2f} 0 0 1 {x2:.2f},{y0:.2f}" />'
            )
            if style == "directed":
                parts.append(
                    f'  <line class="stub-r" x1="{x1:.2f}" y1="{y0:.2f}" '
                    f'x2="{x1:.2f}" y2="{y0 + 6.0:.2f}" />'
                )
                parts.append(
                    f'  <line class="stub-l" x1="{x2:.2f}" y1="{y0:.2f}" '
                    f'x2="{x2:.2f}" y2="{y0 + 6.0:.2f}" />'
                )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
