"""Parsers for the simulation CLI's published file formats.

The formats are a fixed contract:

* diagnostics CSV: ``t,total_energy,unit_error,tangency_error,momentum_e3``
  (momentum field may be empty)
* trajectory CSV: ``t`` followed by ``q{i}x..q{i}z,w{i}x..w{i}z`` per body
* convergence CSV: ``h,final_error,mean_abs_energy_dev,mean_unit_error``
* summary JSON: object with at least ``mode``, ``version``, ``backend``

All values are read back with float() so the 17-significant-digit text
round-trips to the exact float64 the producer wrote.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np


class ContractError(Exception):
    """An input file is missing or does not match the published format."""


DIAGNOSTICS_HEADER = "t,total_energy,unit_error,tangency_error,momentum_e3"
CONVERGENCE_HEADER = "h,final_error,mean_abs_energy_dev,mean_unit_error"

_TRAJECTORY_COL = re.compile(r"^[qw]\d+[xyz]$")


def _read_lines(path):
    p = Path(path)
    if not p.is_file():
        raise ContractError(f"input file not found: {p}")
    text = p.read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ContractError(f"empty file: {p}")
    return lines


def read_diagnostics(path) -> dict:
    """Diagnostics CSV as a dict of float64 columns.

    The momentum column is NaN where the producer left it empty.
    """
    lines = _read_lines(path)
    if lines[0] != DIAGNOSTICS_HEADER:
        raise ContractError(f"bad diagnostics header in {path}: {lines[0]!r}")
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 5:
            raise ContractError(f"bad diagnostics row in {path}: {line!r}")
        rows.append([float(v) if v != "" else np.nan for v in parts])
    data = np.array(rows, dtype=float).reshape(-1, 5)
    names = DIAGNOSTICS_HEADER.split(",")
    return {name: data[:, k] for k, name in enumerate(names)}


def read_trajectory(path):
    """Trajectory CSV as ``(t, q, w)`` with q, w of shape (steps, n, 3)."""
    lines = _read_lines(path)
    header = lines[0].split(",")
    body_cols = header[1:]
    if header[0] != "t" or len(body_cols) % 6 != 0 or not body_cols \
            or not all(_TRAJECTORY_COL.match(c) for c in body_cols):
        raise ContractError(f"bad trajectory header in {path}: {lines[0]!r}")
    n = len(body_cols) // 6
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 1 + 6 * n:
            raise ContractError(f"bad trajectory row in {path}: {line!r}")
        rows.append([float(v) for v in parts])
    data = np.array(rows, dtype=float).reshape(-1, 1 + 6 * n)
    body = data[:, 1:].reshape(-1, n, 6)
    return data[:, 0], body[:, :, :3], body[:, :, 3:]


def read_convergence(path) -> dict:
    """Convergence-sweep CSV as a dict of float64 columns."""
    lines = _read_lines(path)
    if lines[0] != CONVERGENCE_HEADER:
        raise ContractError(f"bad convergence header in {path}: {lines[0]!r}")
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 4:
            raise ContractError(f"bad convergence row in {path}: {line!r}")
        rows.append([float(v) for v in parts])
    data = np.array(rows, dtype=float).reshape(-1, 4)
    names = CONVERGENCE_HEADER.split(",")
    return {name: data[:, k] for k, name in enumerate(names)}


def read_summary(path) -> dict:
    """Run/sweep summary JSON, checked for the contract's required keys."""
    p = Path(path)
    if not p.is_file():
        raise ContractError(f"input file not found: {p}")
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ContractError(f"bad summary JSON in {p}: {exc}") from None
    if not isinstance(data, dict):
        raise ContractError(f"summary is not an object: {p}")
    missing = {"mode", "version", "backend"} - set(data)
    if missing:
        raise ContractError(f"summary {p} missing keys: {sorted(missing)}")
    return data
