"""Minimal SVG output: a set with an inscribed box/rectangle, and f(t) plots."""
from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .convexset import as_set, chord

BOUNDARY_SEGMENTS = 512
SIZE = 480

HEADER = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    '<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="{vb}">\n'
)


def boundary_points(set_, segments=BOUNDARY_SEGMENTS):
    """Boundary of a 2-D set: polygon vertices, or rays cast from an interior point."""
    s = as_set(set_)
    if s.polygon is not None:
        return s.polygon.vertices.copy()
    c = s.interior
    ang = 2 * np.pi * np.arange(segments) / segments
    D = np.column_stack([np.cos(ang), np.sin(ang)])
    P = np.repeat(c[None], segments, axis=0)
    hi = np.empty(segments)
    for k in range(segments):
        _, h = chord(s, P[k : k + 1], D[k])
        hi[k] = h[0]
    return c + hi[:, None] * D


def _fmt(v):
    return f"{v:.6g}"


class _Frame:
    """Maps world coordinates to SVG user units (y up)."""

    def __init__(self, pts, margin=0.05):
        lo = pts.min(axis=0)
        hi = pts.max(axis=0)
        span = max(float(np.max(hi - lo)), 1e-12)
        self.lo = lo - margin * span
        self.hi = hi + margin * span
        self.scale = SIZE / float(np.max(self.hi - self.lo))
        self.width = (self.hi[0] - self.lo[0]) * self.scale
        self.height = (self.hi[1] - self.lo[1]) * self.scale

    def __call__(self, P):
        P = np.atleast_2d(P)
        x = (P[:, 0] - self.lo[0]) * self.scale
        y = (self.hi[1] - P[:, 1]) * self.scale
        return np.column_stack([x, y])

    def header(self):
        return HEADER.format(
            w=_fmt(self.width), h=_fmt(self.height), vb=f"0 0 {_fmt(self.width)} {_fmt(self.height)}"
        )


def set_figure(set_, corners, title=None):
    """SVG text: the set boundary as one <path>, the rectangle as one <polygon>."""
    B = boundary_points(set_)
    R = np.asarray(corners, dtype=float)
    frame = _Frame(np.vstack([B, R]))
    b = frame(B)
    r = frame(R)
    d = "M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in b) + " Z"
    out = [frame.header()]
    if title:
        out.append(f"<title>{escape(title)}</title>\n")
    out.append(f'<path d="{d}" fill="#eef3fb" stroke="#1f3b73" stroke-width="1.5"/>\n')
    pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in r)
    out.append(f'<polygon points="{pts}" fill="#f4a259" fill-opacity="0.6" stroke="#b3541e" stroke-width="1.5"/>\n')
    out.append("</svg>\n")
    return "".join(out)


def profile_figure(profile, title=None):
    """Line plot of [(t, f(t))] with simple axes."""
    t = np.array([p[0] for p in profile], dtype=float)
    f = np.array([p[1] for p in profile], dtype=float)
    W, H, pad = 520.0, 320.0, 40.0
    fmin, fmax = 0.0, float(f.max()) * 1.05 or 1.0
    X = pad + (t - t.min()) / max(t.max() - t.min(), 1e-12) * (W - 2 * pad)
    Y = H - pad - (f - fmin) / (fmax - fmin) * (H - 2 * pad)
    out = [HEADER.format(w=_fmt(W), h=_fmt(H), vb=f"0 0 {_fmt(W)} {_fmt(H)}")]
    if title:
        out.append(f"<title>{escape(title)}</title>\n")
    out.append(
        f'<path d="M {_fmt(pad)} {_fmt(pad)} L {_fmt(pad)} {_fmt(H - pad)} L {_fmt(W - pad)} {_fmt(H - pad)}" '
        'fill="none" stroke="#444" stroke-width="1"/>\n'
    )
    pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(X, Y))
    out.append(f'<polyline points="{pts}" fill="none" stroke="#1f3b73" stroke-width="1.5"/>\n')
    for tv, lab in ((t.min(), "t = -1"), (t.max(), "t = 1")):
        x = pad + (tv - t.min()) / max(t.max() - t.min(), 1e-12) * (W - 2 * pad)
        out.append(f'<text x="{_fmt(x)}" y="{_fmt(H - pad / 3)}" font-size="12" text-anchor="middle">{lab}</text>\n')
    out.append(
        f'<text x="{_fmt(pad / 4)}" y="{_fmt(pad - 8)}" font-size="12">max f = {fmax / 1.05:.6g}</text>\n'
    )
    out.append("</svg>\n")
    return "".join(out)


def write(path, text):
    with open(path, "w") as fh:
        fh.write(text)
