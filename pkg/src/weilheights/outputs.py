"""Deterministic artifact emission: CSV series, Peyre ledgers, log-log SVG."""
from __future__ import annotations

import csv
import io
import math
import os
from fractions import Fraction

SVG_W, SVG_H, PAD = 480, 360, 40


def series_csv(series) -> str:
    """Columns ``B, count, elapsed_ms``; elapsed is empty unless timing was recorded."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["B", "count", "elapsed_ms"])
    el = list(series.elapsed_ms)
    for i, (B, N) in enumerate(zip(series.ladder, series.counts)):
        w.writerow([B, N, f"{el[i]:.3f}" if i < len(el) else ""])
    return buf.getvalue()


def read_series_csv(text):
    from .enumeration import CountSeries
    rows = list(csv.DictReader(io.StringIO(text)))
    return CountSeries([int(r["B"]) for r in rows], [int(r["count"]) for r in rows])


def fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float) or hasattr(v, "__float__"):
        return f"{float(v):.12g}"
    return str(v)


def ledger_text(title, rows, meta=None) -> str:
    """``key = value`` lines, one factor per line, in the given order."""
    out = [f"# {title}"]
    for k, v in rows:
        out.append(f"{k} = {fmt(v)}")
    for k in sorted(meta or {}):
        out.append(f"meta.{k} = {fmt(meta[k])}")
    return "\n".join(out) + "\n"


def per_prime_csv(per_prime) -> str:
    """Per-prime Euler factors ``lambda^{-1} * density`` (exact) for factor-level diffs."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "q", "density", "lambda", "factor"])
    for p, _, reps in per_prime:
        for r in reps:
            w.writerow([p, r.q, str(r.density), str(r.lam), str(r.factor)])
    return buf.getvalue()


def ledger_diff(rows_a, rows_b):
    """Pairs ``(name_a, value_a, name_b, value_b, ratio)`` aligned by position."""
    out = []
    for (ka, va), (kb, vb) in zip(rows_a, rows_b):
        try:
            ratio = float(va) / float(vb)
        except (TypeError, ZeroDivisionError, ValueError):
            ratio = float("nan")
        out.append((ka, va, kb, vb, ratio))
    return out


def loglog_svg(series, fit=None, title="") -> str:
    """log N against log B as a polyline, with the fitted curve dashed when given."""
    pts = [(math.log(B), math.log(N)) for B, N in zip(series.ladder, series.counts) if B > 0 and N > 0]
    curve = []
    if fit is not None:
        for B in series.ladder:
            if B >= 3:
                y = math.log(fit.c) + fit.a * math.log(B) + (fit.b - 1) * math.log(math.log(B))
                curve.append((math.log(B), y))
    allp = pts + curve
    if not allp:
        allp = [(0.0, 0.0), (1.0, 1.0)]
    xs, ys = [p[0] for p in allp], [p[1] for p in allp]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    x1 = x1 if x1 > x0 else x0 + 1
    y1 = y1 if y1 > y0 else y0 + 1

    def tx(x):
        return PAD + (x - x0) / (x1 - x0) * (SVG_W - 2 * PAD)

    def ty(y):
        return SVG_H - PAD - (y - y0) / (y1 - y0) * (SVG_H - 2 * PAD)

    def poly(ps):
        return " ".join(f"{tx(x):.2f},{ty(y):.2f}" for x, y in ps)

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" '
             f'viewBox="0 0 {SVG_W} {SVG_H}">',
             f'<rect x="0" y="0" width="{SVG_W}" height="{SVG_H}" fill="white"/>',
             f'<line x1="{PAD}" y1="{SVG_H - PAD}" x2="{SVG_W - PAD}" y2="{SVG_H - PAD}" stroke="black"/>',
             f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{SVG_H - PAD}" stroke="black"/>',
             f'<text x="{SVG_W / 2:.0f}" y="{SVG_H - 8}" font-size="12" text-anchor="middle">log B</text>',
             f'<text x="12" y="{SVG_H / 2:.0f}" font-size="12" text-anchor="middle" '
             f'transform="rotate(-90 12 {SVG_H / 2:.0f})">log N</text>']
    if title:
        lines.append(f'<text x="{SVG_W / 2:.0f}" y="20" font-size="13" text-anchor="middle">{title}</text>')
    if pts:
        lines.append(f'<polyline fill="none" stroke="black" stroke-width="1.5" points="{poly(pts)}"/>')
    if curve:
        lines.append(f'<polyline fill="none" stroke="gray" stroke-dasharray="4 3" points="{poly(curve)}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit_outputs(artifacts: dict, out_dir, prefix=""):
    """Write ``{name: text}`` to ``out_dir``; returns the written paths (sorted)."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for name in sorted(artifacts):
        path = os.path.join(out_dir, prefix + name)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(artifacts[name])
        paths.append(path)
    return paths
