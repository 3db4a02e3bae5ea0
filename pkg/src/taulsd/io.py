"""CSV/JSON artifacts with a metadata header, and a tiny SVG ECDF overlay."""

from __future__ import annotations

import csv
import hashlib
import io as _io
import json
from importlib import metadata

import numpy as np

from .spectra import StepECDF


class FormatError(ValueError):
    """Malformed input file; the message carries path and line number."""


def version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def header_meta(config: dict) -> dict:
    return {"version": version(), "config_hash": config_hash(config),
            "seed": config.get("seed"), "config": json.dumps(config, sort_keys=True, default=str)}


def _meta_lines(meta: dict | None) -> str:
    return "".join(f"# {k}: {v}\n" for k, v in (meta or {}).items())


def write_csv(path, columns, rows, meta: dict | None = None) -> None:
    buf = _io.StringIO()
    buf.write(_meta_lines(meta))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    with open(path, "w") as fh:
        fh.write(buf.getvalue())


def write_matrix_csv(path, M, meta: dict | None = None) -> None:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    with open(path, "w") as fh:
        fh.write(_meta_lines(meta))
        for row in M:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def read_meta(path) -> dict:
    meta = {}
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            key, _, val = line[1:].partition(":")
            meta[key.strip()] = val.strip()
    return meta


def read_matrix_csv(path) -> np.ndarray:
    """Numeric CSV, '#' lines skipped; errors name the offending line."""
    rows, width = [], None
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            try:
                vals = [float(tok) for tok in s.split(",")]
            except ValueError:
                raise FormatError(f"{path}:{lineno}: non-numeric entry in {s[:40]!r}") from None
            if width is None:
                width = len(vals)
            elif len(vals) != width:
                raise FormatError(f"{path}:{lineno}: expected {width} fields, got {len(vals)}")
            rows.append(vals)
    if not rows:
        raise FormatError(f"{path}: no data rows")
    return np.array(rows)


def read_labels_csv(path, shape) -> np.ndarray:
    """Rows (k, i, cluster) with 1-based k, i; every cell must be labelled once."""
    lab = np.full(shape, -1, dtype=np.int64)
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#") or s.startswith("k,"):
                continue
            try:
                k, i, c = (int(t) for t in s.split(","))
                lab[k - 1, i - 1] = c
            except (ValueError, IndexError):
                raise FormatError(f"{path}:{lineno}: bad label row {s!r}") from None
    if (lab < 0).any():
        k, i = np.argwhere(lab < 0)[0] + 1
        raise FormatError(f"{path}: cell (k={k}, i={i}) has no label")
    return lab


def write_labels_csv(path, labels, meta: dict | None = None) -> None:
    p, n = labels.shape
    rows = ((k + 1, i + 1, int(labels[k, i])) for k in range(p) for i in range(n))
    write_csv(path, ["k", "i", "cluster"], rows, meta)


def write_json(path, obj, meta: dict | None = None) -> None:
    out = {"meta": meta or {}, **obj}
    with open(path, "w") as fh:
        json.dump(out, fh, indent=2, default=_json_default)
        fh.write("\n")


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    return str(o)


def ecdf_rows(F: StepECDF):
    return list(zip(F.support.tolist(), F.cum.tolist()))


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def svg_ecdf_overlay(path, curves, title: str = "", width: int = 480, height: int = 320) -> None:
    """Static SVG 1.1 chart of step ECDFs; ``curves`` is [(label, StepECDF), ...]."""
    lo = min(float(F.support[0]) for _, F in curves)
    hi = max(float(F.support[-1]) for _, F in curves)
    pad = 0.05 * (hi - lo or 1.0)
    lo, hi = lo - pad, hi + pad
    m = 40

    def sx(x):
        return m + (x - lo) / (hi - lo) * (width - 2 * m)

    def sy(y):
        return height - m - y * (height - 2 * m)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
             f'height="{height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>',
             f'<line x1="{m}" y1="{sy(0)}" x2="{width - m}" y2="{sy(0)}" stroke="black"/>',
             f'<line x1="{m}" y1="{sy(0)}" x2="{m}" y2="{sy(1)}" stroke="black"/>',
             f'<text x="{width / 2}" y="20" text-anchor="middle" font-size="13">{title}</text>',
             f'<text x="{m}" y="{height - 12}" font-size="10">{lo:.3g}</text>',
             f'<text x="{width - m}" y="{height - 12}" font-size="10" text-anchor="end">{hi:.3g}</text>']
    for idx, (label, F) in enumerate(curves):
        pts, y = [f"{sx(lo):.2f},{sy(0):.2f}"], 0.0
        for x, c in zip(F.support, F.cum):
            pts.append(f"{sx(x):.2f},{sy(y):.2f}")
            y = float(c)
            pts.append(f"{sx(x):.2f},{sy(y):.2f}")
        pts.append(f"{sx(hi):.2f},{sy(y):.2f}")
        col = _COLORS[idx % len(_COLORS)]
        parts.append(f'<polyline fill="none" stroke="{col}" stroke-width="1.5" '
                     f'points="{" ".join(pts)}"/>')
        parts.append(f'<text x="{m + 8}" y="{m + 14 * idx}" font-size="11" fill="{col}">{label}</text>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
