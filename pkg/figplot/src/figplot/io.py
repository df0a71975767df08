"""Manifest and CSV loading.

Everything here is defensive on purpose: the renderer runs as the last step
of a batch pipeline, and a half-written or hand-edited input should abort
with the offending path (and line, where there is one) rather than produce
a silently wrong figure.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass

import numpy as np

# column contracts of the scenario CSVs, matched verbatim against headers
BOUNDARY_COLUMNS = ("t", "boundary", "gamma_bound", "strike")
ERRORS_COLUMNS = ("k", "d_k", "log10_d_k")
ALPHA_COLUMNS = ("t", "alpha")
REFERENCE_COLUMNS = ("t", "boundary")

MANIFEST_SCHEMA = 1


class InputError(Exception):
    """Missing or malformed manifest/CSV; the message names the path."""


@dataclass(frozen=True)
class Member:
    """One solved sweep member: boundary, pulling level, per-sweep errors."""

    label: str
    t: np.ndarray
    boundary: np.ndarray
    alpha_t: np.ndarray
    alpha: np.ndarray
    sweeps: np.ndarray
    log10_errors: np.ndarray


@dataclass(frozen=True)
class Panel:
    label: str
    members: tuple[Member, ...]
    reference_label: str | None = None
    reference_t: np.ndarray | None = None
    reference_boundary: np.ndarray | None = None


@dataclass(frozen=True)
class FigureSpec:
    """Everything the renderer needs: data, layout, destination."""

    manifest_path: str
    preset: str
    strike: float
    panels: tuple[Panel, ...]
    out_path: str


def _read_columns(path: str, columns: tuple[str, ...]) -> tuple[np.ndarray, ...]:
    """Parse a scenario CSV into one float array per column.

    The header must match the contract exactly; every data field must parse
    as a float ('inf'/'-inf'/'nan' included, the error files use '-inf' for
    a zero step).
    """
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise InputError(f"{path}: cannot read CSV ({exc.strerror})") from exc
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != list(columns):
            found = ",".join(header) if header else ""
            raise InputError(
                f"{path}: expected header {','.join(columns)!r}, found {found!r}"
            )
        data = [[] for _ in columns]
        for fields in reader:
            if len(fields) != len(columns):
                raise InputError(
                    f"{path}:{reader.line_num}: expected {len(columns)} fields,"
                    f" found {len(fields)}"
                )
            for out, field in zip(data, fields):
                try:
                    out.append(float(field))
                except ValueError:
                    raise InputError(
                        f"{path}:{reader.line_num}: not a number: {field!r}"
                    ) from None
    return tuple(np.asarray(col, dtype=float) for col in data)


def _get(mapping, key, kind, where: str, manifest_path: str):
    if not isinstance(mapping, dict) or key not in mapping:
        raise InputError(f"{manifest_path}: {where} needs a {key!r} entry")
    value = mapping[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise InputError(f"{manifest_path}: {where} entry {key!r} has the wrong type")
    return value


def load_figure(manifest_path: str, out_dir: str) -> FigureSpec:
    """Load a scenario manifest and every CSV it references.

    CSV paths in the manifest are relative to the manifest's directory. The
    output image path is ``{preset}.png`` under out_dir, with dashes mapped
    to underscores like the scenario's own file names.
    """
    try:
        with open(manifest_path, encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"{manifest_path}: cannot read manifest ({exc.strerror})") from exc
    try:
        manifest = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"{manifest_path}:{exc.lineno}: {exc.msg}") from exc

    if not isinstance(manifest, dict):
        raise InputError(f"{manifest_path}: manifest must be a JSON object")
    schema = manifest.get("schema")
    if schema != MANIFEST_SCHEMA:
        raise InputError(
            f"{manifest_path}: unsupported manifest schema {schema!r}"
            f" (this renderer reads schema {MANIFEST_SCHEMA})"
        )
    preset = _get(manifest, "preset", str, "manifest", manifest_path)
    strike = float(_get(manifest, "strike", (int, float), "manifest", manifest_path))
    raw_panels = _get(manifest, "panels", list, "manifest", manifest_path)
    if not raw_panels:
        raise InputError(f"{manifest_path}: manifest has no panels")

    base = os.path.dirname(os.path.abspath(manifest_path))
    panels = []
    for p_idx, raw_panel in enumerate(raw_panels):
        where = f"panel {p_idx}"
        label = _get(raw_panel, "label", str, where, manifest_path)
        members = []
        for m_idx, raw_member in enumerate(_get(raw_panel, "members", list, where, manifest_path)):
            m_where = f"{where} member {m_idx}"
            m_label = _get(raw_member, "label", str, m_where, manifest_path)
            t, boundary, _, _ = _read_columns(
                os.path.join(base, _get(raw_member, "boundary_csv", str, m_where, manifest_path)),
                BOUNDARY_COLUMNS,
            )
            sweeps, _, log10_errors = _read_columns(
                os.path.join(base, _get(raw_member, "errors_csv", str, m_where, manifest_path)),
                ERRORS_COLUMNS,
            )
            alpha_t, alpha = _read_columns(
                os.path.join(base, _get(raw_member, "alpha_csv", str, m_where, manifest_path)),
                ALPHA_COLUMNS,
            )
            members.append(Member(m_label, t, boundary, alpha_t, alpha, sweeps, log10_errors))
        reference_label = raw_panel.get("reference_label")
        reference_t = reference_boundary = None
        if raw_panel.get("reference_csv") is not None:
            ref_csv = _get(raw_panel, "reference_csv", str, where, manifest_path)
            reference_t, reference_boundary = _read_columns(
                os.path.join(base, ref_csv), REFERENCE_COLUMNS
            )
            if not isinstance(reference_label, str):
                reference_label = "reference"
        panels.append(
            Panel(label, tuple(members), reference_label, reference_t, reference_boundary)
        )

    out_path = os.path.join(out_dir, preset.replace("-", "_") + ".png")
    return FigureSpec(manifest_path, preset, strike, tuple(panels), out_path)
