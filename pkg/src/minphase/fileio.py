"""CSV and JSON readers/writers for signals, boundary data and operators.

Formats
-------
Signal CSV: header ``t,re,im``, one row per sample, equispaced t from 0.
Boundary CSV: header ``y,re,im`` or ``theta,re,im`` preceded by a comment
line ``#domain=half_plane_axis`` or ``#domain=disk_circle``.
Expansion CSV: header ``n,re,im``.
Operator JSON: ``{"form": ..., "alpha": {...}, "xi": {...}, ...}`` with
complex numbers as ``[re, im]`` pairs (see operators.descriptor JSON).

Writers format floats with repr-level precision so identical inputs
produce byte-identical files.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import SerializationError
from .signals import CausalSignal, TimeGrid
from .transforms import BoundaryFunction, FrequencyGrid

EQUISPACING_RTOL = 1e-9


def _fmt(x: float) -> str:
    return repr(float(x))


def write_signal_csv(path, signal: CausalSignal) -> None:
    t = signal.grid.times()
    with open(path, "w") as fh:
        fh.write("t,re,im\n")
        for tk, v in zip(t, signal.values):
            fh.write(f"{_fmt(tk)},{_fmt(v.real)},{_fmt(v.imag)}\n")


def read_signal_csv(path) -> CausalSignal:
    """Parse a signal CSV, verifying the grid is equispaced from zero."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise SerializationError(f"cannot read {path}: {exc}") from exc
    rows = [(i + 1, ln) for i, ln in enumerate(lines)
            if ln.strip() and not ln.startswith("#")]
    if not rows or rows[0][1].strip().lower().replace(" ", "") != "t,re,im":
        raise SerializationError(f"{path}: expected header 't,re,im'")
    t, vals = [], []
    for lineno, ln in rows[1:]:
        parts = ln.split(",")
        if len(parts) != 3:
            raise SerializationError(f"{path}:{lineno}: expected 3 fields")
        try:
            t.append(float(parts[0]))
            vals.append(complex(float(parts[1]), float(parts[2])))
        except ValueError as exc:
            raise SerializationError(f"{path}:{lineno}: {exc}") from exc
    if len(t) < 2:
        raise SerializationError(f"{path}: need at least 2 samples")
    t = np.asarray(t)
    if abs(t[0]) > EQUISPACING_RTOL:
        raise SerializationError(f"{path}: time axis must start at 0")
    dt = t[1] - t[0]
    if dt <= 0:
        raise SerializationError(f"{path}: time axis must increase")
    steps = np.diff(t)
    bad = np.nonzero(np.abs(steps - dt) > EQUISPACING_RTOL * max(1.0, dt))[0]
    if bad.size:
        lineno = rows[1 + int(bad[0]) + 1][0]
        raise SerializationError(
            f"{path}:{lineno}: non-equispaced time step {steps[bad[0]]!r} "
            f"(expected {dt!r})"
        )
    return CausalSignal(TimeGrid(float(dt), len(t)), np.asarray(vals))


def write_boundary_csv(path, F: BoundaryFunction) -> None:
    label = "y" if F.grid.kind == "axis" else "theta"
    with open(path, "w") as fh:
        fh.write(f"#domain={F.domain_tag}\n")
        fh.write(f"{label},re,im\n")
        for x, v in zip(F.grid.nodes, F.values):
            fh.write(f"{_fmt(x)},{_fmt(v.real)},{_fmt(v.imag)}\n")


def read_boundary_csv(path) -> BoundaryFunction:
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise SerializationError(f"cannot read {path}: {exc}") from exc
    domain = None
    for ln in lines:
        if ln.startswith("#domain="):
            domain = ln.split("=", 1)[1].strip()
            break
    if domain not in ("half_plane_axis", "disk_circle"):
        raise SerializationError(f"{path}: missing or unknown #domain= line")
    kind = "axis" if domain == "half_plane_axis" else "circle"
    nodes, vals = [], []
    started = False
    for i, ln in enumerate(lines):
        if ln.startswith("#") or not ln.strip():
            continue
        if not started:
            started = True  # header
            continue
        parts = ln.split(",")
        if len(parts) != 3:
            raise SerializationError(f"{path}:{i + 1}: expected 3 fields")
        nodes.append(float(parts[0]))
        vals.append(complex(float(parts[1]), float(parts[2])))
    return BoundaryFunction(FrequencyGrid(kind, np.asarray(nodes)),
                            np.asarray(vals))


def write_expansion_csv(path, coeffs: np.ndarray) -> None:
    with open(path, "w") as fh:
        fh.write("n,re,im\n")
        for n, c in enumerate(np.asarray(coeffs, dtype=complex)):
            fh.write(f"{n},{_fmt(c.real)},{_fmt(c.imag)}\n")


def write_json(path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SerializationError(f"cannot read JSON {path}: {exc}") from exc
