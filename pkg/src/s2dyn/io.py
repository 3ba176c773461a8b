"""CSV serialization of trajectories and diagnostics.

Formats are part of the published CLI contract:

* trajectory: ``t, q1x, q1y, q1z, w1x, w1y, w1z, ..., qnz, wnx, wny, wnz``
* diagnostics: ``t, total_energy, unit_error, tangency_error, momentum_e3``
  (momentum column empty when the model declares no symmetry axis)

Numbers are written with 17 significant digits and '\\n' line endings, so
identical runs produce identical bytes and float64 values round-trip
exactly.
"""

from __future__ import annotations

import numpy as np

from .models import SystemState


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def trajectory_header(n: int) -> str:
    cols = ["t"]
    for i in range(1, n + 1):
        cols += [f"q{i}x", f"q{i}y", f"q{i}z", f"w{i}x", f"w{i}y", f"w{i}z"]
    return ",".join(cols)


def trajectory_row(state: SystemState) -> str:
    fields = [_fmt(state.t)]
    for qi, wi in zip(state.q, state.w):
        fields += [_fmt(v) for v in qi] + [_fmt(v) for v in wi]
    return ",".join(fields)


def read_trajectory(path):
    """Yield SystemState values from a trajectory CSV (no invariant checks)."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        n = (len(header) - 1) // 6
        for line in fh:
            vals = np.array([float(v) for v in line.strip().split(",")])
            body = vals[1:].reshape(n, 6)
            yield SystemState.unchecked(body[:, :3], body[:, 3:], vals[0])


DIAGNOSTICS_HEADER = "t,total_energy,unit_error,tangency_error,momentum_e3"


def diagnostics_row(s) -> str:
    mom = "" if s.momentum_e3 is None else _fmt(s.momentum_e3)
    return ",".join(
        [_fmt(s.t), _fmt(s.total_energy), _fmt(s.unit_error), _fmt(s.tangency_error), mom]
    )


def read_diagnostics(path):
    """Read a diagnostics CSV into a dict of numpy columns."""
    from .diagnostics import DiagnosticSample

    out = []
    with open(path, "r", encoding="utf-8") as fh:
        fh.readline()
        for line in fh:
            t, e, u, g, m = line.strip().split(",")
            out.append(
                DiagnosticSample(
                    float(t), float(e), float(u), float(g),
                    None if m == "" else float(m),
                )
            )
    return out
