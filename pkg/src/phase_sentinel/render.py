"""Poincare-disc portraits: orbit sampling, SVG, CSV and report figures."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .compactify import InfinityEquilibrium, boundary_pair, disc_project
from .core import PlanarSystem
from .errors import PhaseSentinelError
from .flow import OrbitTrace, integrate

__all__ = [
    "PortraitOrbit",
    "Portrait",
    "default_seeds",
    "separatrix_seeds",
    "parse_seeds",
    "compute_portrait",
    "decimate",
    "portrait_svg",
    "traces_csv",
    "report_figures",
    "SVG_SIZE",
    "MAX_POINTS",
]

SVG_SIZE = 1000
MAX_POINTS = 5000
_MARGIN = 20.0


@dataclass
class PortraitOrbit:
    seed: tuple[float, float]
    direction: int
    trace: OrbitTrace | None
    note: str = ""


@dataclass
class Portrait:
    orbits: list[PortraitOrbit]
    finite: list[tuple[float, float, str]] = field(default_factory=list)
    boundary: list[InfinityEquilibrium] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)


def default_seeds(n: int = 24, radii: Sequence[float] = (0.5, 2.0, 6.0)) -> list[tuple[float, float]]:
    """n points spread over a few rings, angles offset per ring."""
    out = []
    per = max(1, n // len(radii))
    for k, r in enumerate(radii):
        for i in range(per):
            th = 2 * math.pi * (i + 0.5 * (k % 2)) / per
            out.append((round(r * math.cos(th), 12), round(r * math.sin(th), 12)))
    return out


def separatrix_seeds(
    directions: Sequence[float], radius: float = 0.05, offsets: Sequence[float] = (-0.2, -0.05, 0.0, 0.05, 0.2)
) -> list[tuple[float, float]]:
    """A small fan of seeds around each exceptional direction at the origin."""
    out = []
    for th in directions:
        for d in offsets:
            out.append((round(radius * math.cos(th + d), 12), round(radius * math.sin(th + d), 12)))
    return out


def parse_seeds(text: str | None, n_default: int = 24) -> list[tuple[float, float]]:
    """'N' for N default seeds, or 'x,y;x,y;...' for explicit ones."""
    if text is None or not str(text).strip():
        return default_seeds(n_default)
    text = str(text).strip()
    if ";" not in text and "," not in text:
        n = int(text)
        if n <= 0:
            raise PhaseSentinelError("seed count must be positive")
        return default_seeds(n)
    pts = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        xs = chunk.split(",")
        if len(xs) != 2:
            raise PhaseSentinelError(f"bad seed {chunk!r}")
        pts.append((float(xs[0]), float(xs[1])))
    if not pts:
        raise PhaseSentinelError("no seeds given")
    return pts


def compute_portrait(
    sys: PlanarSystem,
    seeds: Sequence[tuple[float, float]],
    t_max: float = 40.0,
    tol: float = 1e-8,
    r_max: float = 1e3,
    max_steps: int = 20000,
) -> Portrait:
    """Forward and backward orbit from each seed; failures are kept as notes."""
    orbits = []
    for s in seeds:
        for d in (1, -1):
            try:
                tr = integrate(sys, s, (0.0, d * t_max), tol, r_max=r_max, max_steps=max_steps)
                orbits.append(PortraitOrbit(tuple(s), d, tr, str(tr.termination)))
            except PhaseSentinelError as exc:
                orbits.append(PortraitOrbit(tuple(s), d, None, f"{type(exc).__name__}: {exc}"))
    return Portrait(orbits)


def decimate(points: np.ndarray, limit: int = MAX_POINTS) -> np.ndarray:
    if len(points) <= limit:
        return points
    idx = np.linspace(0, len(points) - 1, limit).round().astype(int)
    return points[np.unique(idx)]


def _to_view(p: np.ndarray) -> np.ndarray:
    half = SVG_SIZE / 2.0
    scale = half - _MARGIN
    out = np.empty_like(p)
    out[..., 0] = half + scale * p[..., 0]
    out[..., 1] = half - scale * p[..., 1]
    return out


def _f(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def portrait_svg(portrait: Portrait, title: str = "") -> str:
    """Unit disc on a 1000x1000 viewport; same input gives the same bytes."""
    half = SVG_SIZE / 2.0
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
    ]
    if title:
        lines.append(f"<title>{_esc(title)}</title>")
    if portrait.meta:
        meta = ";".join(f"{k}={portrait.meta[k]}" for k in sorted(portrait.meta))
        lines.append(f"<desc>{_esc(meta)}</desc>")
    lines.append(f'<circle id="disc" cx="{_f(half)}" cy="{_f(half)}" r="{_f(half - _MARGIN)}" fill="none" stroke="black" stroke-width="2"/>')
    lines.append('<g id="orbits" fill="none" stroke="#1f4e9c" stroke-width="1">')
    for k, orb in enumerate(portrait.orbits):
        if orb.trace is None or len(orb.trace.samples) < 2:
            continue
        pts = _to_view(disc_project(decimate(orb.trace.samples[:, 1:3])))
        path = " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)
        lines.append(f'<polyline data-seed="{orb.seed[0]:g},{orb.seed[1]:g}" data-dir="{orb.direction}" points="{path}"/>')
    lines.append("</g>")
    lines.append('<g id="equilibria">')
    for x, y, kind in portrait.finite:
        vx, vy = _to_view(disc_project(np.array([x, y])))
        lines.append(f'<circle class="finite" data-kind="{_esc(kind)}" cx="{_f(vx)}" cy="{_f(vy)}" r="6" fill="black"/>')
    for eq in portrait.boundary:
        kind = getattr(eq.kind, "kind", "") or ""
        for sign, p in zip(("+", "-"), boundary_pair(eq)):
            vx, vy = _to_view(p)
            lines.append(
                f'<circle class="infinity" data-label="I_{eq.label}{sign}" data-kind="{_esc(kind)}" '
                f'cx="{_f(vx)}" cy="{_f(vy)}" r="7" fill="white" stroke="red" stroke-width="2"/>'
            )
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def traces_csv(portrait: Portrait) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["seed_x", "seed_y", "direction", "t", "x", "y", "event", "note"])
    for orb in portrait.orbits:
        if orb.trace is None:
            w.writerow([orb.seed[0], orb.seed[1], orb.direction, "", "", "", "", orb.note])
            continue
        for t, x, y, ev in orb.trace.to_csv_rows():
            w.writerow([orb.seed[0], orb.seed[1], orb.direction, repr(t), repr(x), repr(y), ev, ""])
        w.writerow([orb.seed[0], orb.seed[1], orb.direction, "", "", "", "end", orb.note])
    return buf.getvalue()


def report_figures(portrait: Portrait, out_dir: str, stem: str = "portrait", title: str = "") -> list[str]:
    """Write a disc view and a plane view as PNG; returns the file names."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    files = []
    with plt.rc_context({"font.size": 9, "axes.linewidth": 0.8, "savefig.dpi": 150}):
        fig, axes = plt.subplots(1, 2, figsize=(10, 5))
        ax_d, ax_p = axes
        th = np.linspace(0, 2 * np.pi, 721)
        ax_d.plot(np.cos(th), np.sin(th), color="black", lw=1.2)
        for orb in portrait.orbits:
            if orb.trace is None:
                continue
            xy = decimate(orb.trace.samples[:, 1:3])
            d = disc_project(xy)
            ax_d.plot(d[:, 0], d[:, 1], color="#1f4e9c", lw=0.7)
            ax_p.plot(xy[:, 0], xy[:, 1], color="#1f4e9c", lw=0.7)
        for x, y, _ in portrait.finite:
            p = disc_project(np.array([x, y]))
            ax_d.plot(p[0], p[1], "ko", ms=4)
            ax_p.plot(x, y, "ko", ms=4)
        for eq in portrait.boundary:
            for p in boundary_pair(eq):
                ax_d.plot(p[0], p[1], "o", mfc="white", mec="red", ms=6)
                ax_d.annotate(eq.label, p * 1.06, ha="center", va="center", fontsize=7, color="red")
        ax_d.set_aspect("equal")
        ax_d.set_xlim(-1.15, 1.15)
        ax_d.set_ylim(-1.15, 1.15)
        ax_d.set_axis_off()
        ax_d.set_title("Poincaré disc")
        ax_p.set_xlim(-4, 4)
        ax_p.set_ylim(-4, 4)
        ax_p.set_xlabel("x")
        ax_p.set_ylabel("y")
        ax_p.set_title("plane")
        if title:
            fig.suptitle(title)
        fig.tight_layout()
        name = f"{stem}.png"
        fig.savefig(f"{out_dir}/{name}", metadata={"Software": None})
        plt.close(fig)
        files.append(name)
    return files


def orbit_count(portrait: Portrait) -> int:
    return sum(1 for o in portrait.orbits if o.trace is not None)
