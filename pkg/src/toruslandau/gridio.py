"""Serialization of grid fields: CSV, bare matrix, and a JSON sidecar.

All writers format floats with repr (shortest round-trip) and keep dict keys
sorted, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .levels import GridField


def _require_real(field: GridField):
    if np.iscomplexobj(field.values):
        raise ValueError(
            "serialize complex fields as two real ones (values.real / values.imag)")


def write_csv(field: GridField, path) -> Path:
    """One row per y-line, columns along x, comma separated."""
    _require_real(field)
    path = Path(path)
    rows = [",".join(repr(float(v)) for v in row) for row in field.values]
    path.write_text("\n".join(rows) + "\n")
    return path


def write_matrix(field: GridField, path) -> Path:
    """Whitespace-delimited matrix for external plotters."""
    _require_real(field)
    path = Path(path)
    rows = [" ".join(repr(float(v)) for v in row) for row in field.values]
    path.write_text("\n".join(rows) + "\n")
    return path


def write_json_grid(field: GridField, path) -> Path:
    """Whole grid as one JSON document: metadata plus the value rows."""
    _require_real(field)
    path = Path(path)
    payload = {
        "quantity": field.name,
        "nx": field.nx,
        "ny": field.ny,
        "geometry": {
            "L1": field.geometry.L1,
            "L2": field.geometry.L2,
            "N": field.geometry.N,
        },
        "values": [[float(v) for v in row] for row in field.values],
    }
    path.write_text(json.dumps(payload, sort_keys=True) + "\n")
    return path


def write_sidecar(field: GridField, path, extra: dict | None = None) -> Path:
    """JSON sidecar with geometry, resolution and field statistics."""
    vals = field.values
    stats = {
        "min": float(np.min(vals.real)),
        "max": float(np.max(vals.real)),
        "mean": float(np.mean(vals.real)),
    }
    if np.iscomplexobj(vals):
        stats["max_abs"] = float(np.max(np.abs(vals)))
    payload = {
        "quantity": field.name,
        "nx": field.nx,
        "ny": field.ny,
        "geometry": {
            "L1": field.geometry.L1,
            "L2": field.geometry.L2,
            "N": field.geometry.N,
        },
        "statistics": stats,
    }
    if extra:
        payload.update(extra)
    path = Path(path)
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return path
