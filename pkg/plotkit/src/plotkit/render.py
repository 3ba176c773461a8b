"""Figure rendering.

Each figure kind maps a set of CLI output files onto one matplotlib
figure. ``render`` returns the exact data series it plotted so callers
(and tests) can verify that plotted values equal the file contents; the
inputs are never modified or recomputed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .readers import ContractError, read_convergence, read_diagnostics, \
    read_trajectory  # noqa: E402

FIGURE_KINDS = (
    "trajectory3d",
    "energy_vs_time",
    "unit_error_vs_time",
    "convergence_loglog",
)

# first two series follow the reference styling: solid red, dotted blue
_STYLES = (
    {"color": "tab:red", "linestyle": "solid"},
    {"color": "tab:blue", "linestyle": "dotted"},
    {"color": "tab:green", "linestyle": "dashed"},
    {"color": "tab:purple", "linestyle": "dashdot"},
)


@dataclass(frozen=True)
class Series:
    """One plotted curve: the label and the exact arrays handed to matplotlib."""

    label: str
    data: tuple


@dataclass
class FigureSpec:
    kind: str
    inputs: list
    out: str
    labels: list = field(default_factory=list)
    title: str | None = None

    def validate(self):
        if self.kind not in FIGURE_KINDS:
            raise ContractError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise ContractError("at least one input file is required")
        if self.labels and len(self.labels) != len(self.inputs):
            raise ContractError("label count must match input count")
        if self.kind == "convergence_loglog" and len(self.inputs) != 1:
            raise ContractError("convergence_loglog takes exactly one input")


def _label(spec: FigureSpec, k: int) -> str:
    if spec.labels:
        return spec.labels[k]
    p = Path(spec.inputs[k])
    return p.parent.name or p.stem


def _style(k: int) -> dict:
    return dict(_STYLES[k % len(_STYLES)])


def _render_diagnostic_column(spec, ax, column, ylabel, log_y):
    series = []
    for k, path in enumerate(spec.inputs):
        cols = read_diagnostics(path)
        t, y = cols["t"], cols[column]
        ax.plot(t, y, label=_label(spec, k), **_style(k))
        series.append(Series(_label(spec, k), (t, y)))
    if log_y:
        ax.set_yscale("log")
    ax.set_xlabel("t (s)")
    ax.set_ylabel(ylabel)
    if any(len(s.data[0]) for s in series):
        ax.legend(loc="best")
    return series


def _render_trajectory3d(spec, fig):
    ax = fig.add_subplot(projection="3d")
    series = []
    k = 0
    for j, path in enumerate(spec.inputs):
        _, q, _ = read_trajectory(path)
        for i in range(q.shape[1]):
            label = f"{_label(spec, j)} body {i + 1}"
            x, y, z = q[:, i, 0], q[:, i, 1], q[:, i, 2]
            ax.plot(x, y, z, label=label, linewidth=0.8, **_style(k))
            series.append(Series(label, (x, y, z)))
            k += 1
    ax.set_box_aspect((1.0, 1.0, 1.0))
    for setter in (ax.set_xlim, ax.set_ylim, ax.set_zlim):
        setter(-1.05, 1.05)
    if series:
        ax.legend(loc="upper right", fontsize="small")
    return series


def fitted_slope(cols: dict):
    """Log-log slope of final_error vs h, excluding the reference row.

    Matches the producer's convention: the smallest h is the reference
    the other runs are compared against, so its (zero) error is not part
    of the fit. Returns None when fewer than two rows remain.
    """
    h, err = cols["h"], cols["final_error"]
    keep = (h != h.min()) & (err > 0.0)
    if keep.sum() < 2:
        return None
    return float(np.polyfit(np.log10(h[keep]), np.log10(err[keep]), 1)[0])


def _render_convergence(spec, ax):
    cols = read_convergence(spec.inputs[0])
    keep = cols["final_error"] > 0.0
    h, err = cols["h"][keep], cols["final_error"][keep]
    ax.loglog(h, err, marker="o", **_style(0))
    ax.set_xlabel("h (s)")
    ax.set_ylabel("final state error")
    slope = fitted_slope(cols)
    if slope is not None:
        ax.annotate(f"slope = {slope:.2f}", xy=(0.05, 0.9),
                    xycoords="axes fraction")
    return [Series("final_error", (h, err))], slope


def render(spec: FigureSpec):
    """Draw the figure, write it to ``spec.out``, return the plotted series."""
    spec.validate()
    fig = plt.figure(figsize=(6.0, 4.5))
    try:
        if spec.kind == "trajectory3d":
            series = _render_trajectory3d(spec, fig)
        elif spec.kind == "energy_vs_time":
            series = _render_diagnostic_column(
                spec, fig.add_subplot(), "total_energy", "total energy (J)", False)
        elif spec.kind == "unit_error_vs_time":
            series = _render_diagnostic_column(
                spec, fig.add_subplot(), "unit_error", "unit length error", True)
        else:
            series, _ = _render_convergence(spec, fig.add_subplot())
        if spec.title:
            fig.suptitle(spec.title)
        fig.tight_layout()
        fig.savefig(spec.out, dpi=150)
    finally:
        plt.close(fig)
    return series
