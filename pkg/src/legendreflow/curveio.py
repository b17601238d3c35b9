"""CSV / SVG / manifest emission.

Curve sample exchange format: CSV with header ``u,x,y,nu_x,nu_y`` and
optional ``beta,ell`` and ``t`` columns, one row per grid point, full
double precision (shortest round-trip representation).
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

from .curves import LegendreCurve, uniform_grid
from .errors import ValidationError


def _fmt(x):
    return repr(float(x))


def write_curve_csv(path, curve: LegendreCurve, curvature=None, t=None):
    path = Path(path)
    header = ["u", "x", "y", "nu_x", "nu_y"]
    if curvature is not None:
        header += ["beta", "ell"]
    if t is not None:
        header += ["t"]
    u = curve.grid
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for j in range(curve.grid_size):
            row = [_fmt(u[j]),
                   _fmt(curve.positions[j, 0]), _fmt(curve.positions[j, 1]),
                   _fmt(curve.normals[j, 0]), _fmt(curve.normals[j, 1])]
            if curvature is not None:
                row += [_fmt(curvature.beta[j]), _fmt(curvature.ell[j])]
            if t is not None:
                row += [_fmt(t)]
            writer.writerow(row)
    return path


def read_curve_csv(path):
    """Load a curve CSV; returns (LegendreCurve, extras dict).

    extras may hold 'beta', 'ell' arrays and 't' when those columns exist.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: empty curve CSV") from None
        required = ["u", "x", "y", "nu_x", "nu_y"]
        if header[: len(required)] != required:
            raise ValidationError(
                f"{path}: expected columns {required}, got {header[:5]}")
        columns = {name: [] for name in header}
        for row in reader:
            if not row:
                continue
            if len(row) != len(header):
                raise ValidationError(f"{path}: ragged row {row}")
            for name, value in zip(header, row):
                columns[name].append(float(value))
    num = len(columns["u"])
    if num < 3:
        raise ValidationError(f"{path}: need at least 3 samples, got {num}")
    expected_u = uniform_grid(num)
    if np.max(np.abs(np.asarray(columns["u"]) - expected_u)) > 1e-9:
        raise ValidationError(f"{path}: u column is not the uniform periodic grid")
    curve = LegendreCurve(
        positions=np.stack([columns["x"], columns["y"]], axis=-1),
        normals=np.stack([columns["nu_x"], columns["nu_y"]], axis=-1),
    )
    extras = {}
    if "beta" in columns:
        extras["beta"] = np.asarray(columns["beta"])
    if "ell" in columns:
        extras["ell"] = np.asarray(columns["ell"])
    if "t" in columns:
        extras["t"] = columns["t"][0]
    return curve, extras


def render_svg(points, stroke="#1a1a8c", width=640):
    """Closed polyline through the sample points as a standalone SVG 1.1 document.

    viewBox is fitted with a 5% margin and the stroke width scales with the
    bounding box; output bytes are deterministic for fixed input.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != 2 or points.shape[0] < 3:
        raise ValidationError("need at least 3 planar sample points")
    lo = points.min(axis=0)
    hi = points.max(axis=0)
    span = hi - lo
    if np.max(span) <= 0.0:
        raise ValidationError("degenerate bounding box: all samples coincide")
    margin = 0.05 * np.max(span)
    lo = lo - margin
    size = span + 2.0 * margin
    stroke_width = 0.004 * float(np.max(size))
    # SVG y grows downward; flip the vertical axis
    top = lo[1] + size[1]
    coords = " ".join(f"{x:.6f},{lo[1] + (top - y):.6f}" for x, y in points)
    height = int(round(width * size[1] / size[0]))
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" '
        f'viewBox="{lo[0]:.6f} {lo[1]:.6f} {size[0]:.6f} {size[1]:.6f}">\n'
        f'  <polygon points="{coords}" fill="none" stroke="{stroke}" '
        f'stroke-width="{stroke_width:.6f}" stroke-linejoin="round"/>\n'
        "</svg>\n"
    )


def sha256_of(path):
    digest = hashlib.sha256()
    digest.update(Path(path).read_bytes())
    return digest.hexdigest()


def write_manifest(path, config, outputs, version):
    """Manifest JSON: the resolved config, library version, output checksums."""
    manifest = {
        "version": version,
        "config": config,
        "outputs": {str(Path(p).name): sha256_of(p) for p in outputs},
    }
    path = Path(path)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path
