"""Deterministic OBJ, CSV and JSON emitters used by the command line."""

from __future__ import annotations

import json
import os
from importlib import resources
from typing import Iterable, Optional, Sequence

import numpy as np

from .lines import OrientedLine
from .surfaces import SurfaceGrid

FLOAT_FMT = "%.17g"


def _fmt(x: float) -> str:
    return FLOAT_FMT % float(x)


def check_writable(path: str, force: bool) -> None:
    if os.path.exists(path) and not force:
        raise FileExistsError(f"{path} exists; pass --force to overwrite")


def obj_from_grid(grid: SurfaceGrid) -> str:
    """Wavefront OBJ with one vertex/normal per grid node and quad faces.

    Quads keep the parameter grid recoverable; vertex order is row-major
    (y index outer, x index inner), indices are 1-based.
    """
    ny, nx, _ = grid.positions.shape
    out = [f"# parametric grid {nx} x {ny}, model {grid.model.value}"]
    for j in range(ny):
        for i in range(nx):
            p = grid.positions[j, i]
            out.append("v " + " ".join(_fmt(v) for v in p))
    for j in range(ny):
        for i in range(nx):
            n = grid.normals[j, i]
            out.append("vn " + " ".join(_fmt(v) for v in n))
    for j in range(ny - 1):
        for i in range(nx - 1):
            a = j * nx + i + 1
            b = a + 1
            c = a + nx + 1
            d = a + nx
            out.append(f"f {a}//{a} {b}//{b} {c}//{c} {d}//{d}")
    return "\n".join(out) + "\n"


def csv_from_grid(grid: SurfaceGrid) -> str:
    """CSV rows x,y,px,py,pz,nx,ny,nz at full double precision."""
    lines = ["x,y,px,py,pz,nx,ny,nz"]
    ny, nx, _ = grid.positions.shape
    for j in range(ny):
        for i in range(nx):
            row = [grid.xs[i], grid.ys[j], *grid.positions[j, i], *grid.normals[j, i]]
            lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def obj_from_segments(lines_in: Iterable[OrientedLine], box: float = 10.0) -> str:
    """OBJ line elements for oriented lines clipped to [-box, box]^3."""
    out = [f"# oriented lines clipped to the cube of half-width {_fmt(box)}"]
    vertex_count = 0
    elements = []
    for line in lines_in:
        # clip by intersecting the parameter intervals per axis
        lo, hi = -np.inf, np.inf
        for k in range(3):
            d, p = line.direction[k], line.point[k]
            if abs(d) < 1e-15:
                if abs(p) > box:
                    lo, hi = 1.0, 0.0
                continue
            ta, tb = (-box - p) / d, (box - p) / d
            lo, hi = max(lo, min(ta, tb)), min(hi, max(ta, tb))
        if not lo < hi:
            continue
        for t in (lo, hi):
            q = line.at(float(t))
            elements.append("v " + " ".join(_fmt(v) for v in q))
        vertex_count += 2
        elements.append(f"l {vertex_count - 1} {vertex_count}")
    return "\n".join(out + elements) + "\n"


def obj_from_segments_and_patches(lines_in: Iterable[OrientedLine],
                                  patches: Sequence[np.ndarray],
                                  box: float = 10.0) -> str:
    """Clipped line elements plus quad-meshed patches in one OBJ.

    ``patches`` are (ny, nx, 3) position arrays; their vertex indices follow
    the line vertices.
    """
    text = obj_from_segments(lines_in, box)
    parts = [text.rstrip("\n")]
    offset = sum(1 for row in text.splitlines() if row.startswith("v "))
    for patch in patches:
        ny, nx, _ = patch.shape
        for j in range(ny):
            for i in range(nx):
                parts.append("v " + " ".join(_fmt(v) for v in patch[j, i]))
        for j in range(ny - 1):
            for i in range(nx - 1):
                a = offset + j * nx + i + 1
                b, c, d = a + 1, a + nx + 1, a + nx
                parts.append(f"f {a} {b} {c} {d}")
        offset += ny * nx
    return "\n".join(parts) + "\n"


def decay_csv(radii: Sequence[float], sups: Sequence[float]) -> str:
    lines = ["radius,sup_distance"]
    for r, s in zip(radii, sups):
        lines.append(f"{_fmt(r)},{_fmt(s)}")
    return "\n".join(lines) + "\n"


def to_plain(value):
    """Recursively convert numpy scalars/arrays to built-in Python types."""
    if isinstance(value, dict):
        return {k: to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    return value


def dump_json(doc: dict) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(to_plain(doc), sort_keys=True, indent=2) + "\n"


def load_schema(name: str) -> dict:
    """Load a JSON schema shipped with the package."""
    with resources.files("trinoids.schemas").joinpath(name).open("r") as fh:
        return json.load(fh)


def validate_against_schema(doc: dict, schema_name: str) -> None:
    import jsonschema

    jsonschema.validate(to_plain(doc), load_schema(schema_name))


def write_text(path: Optional[str], text: str, force: bool = False) -> None:
    if path is None:
        return
    check_writable(path, force)
    with open(path, "w") as fh:
        fh.write(text)
