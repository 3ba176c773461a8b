"""Secondary acceptance gate: figures regenerated from real CLI runs.

The simulation CLI is driven as a subprocess; this package sees only its
published output files. Each gate writes one `[PASS]`/`[FAIL]` line via
pytest's terminal writer so it survives output capture.
"""

import json
import subprocess
import sys

import numpy as np
import pytest

from plotkit.cli import main
from plotkit.render import FigureSpec, fitted_slope, render

_writer = print


@pytest.fixture(autouse=True)
def _bind_gate_writer(request):
    global _writer
    tw = request.config.get_terminal_writer()
    _writer = lambda line: tw.line(line)  # noqa: E731


def gate(name, ok, detail):
    _writer(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def run_sim(out_dir, *args):
    proc = subprocess.run(
        [sys.executable, "-m", "s2dyn.cli", "--out-dir", str(out_dir), *args],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return out_dir


@pytest.fixture(scope="module")
def dsp_runs(tmp_path_factory):
    base = tmp_path_factory.mktemp("dsp")
    vi = run_sim(base / "vi", "--preset", "dsp-100s")
    rk = run_sim(base / "rk45", "--preset", "dsp-100s", "--integrator", "rk45")
    return vi, rk


@pytest.fixture(scope="module")
def nbody_sweep(tmp_path_factory):
    out = tmp_path_factory.mktemp("nbody") / "sweep"
    return run_sim(out, "--preset", "nbody3-10s", "--integrator", "vi-explicit",
                   "--sweep", "0.001,0.0005,0.00025")


def load_diag_cols(path):
    # independent parse: momentum field may be empty, so take the first four
    return np.loadtxt(path, delimiter=",", skiprows=1, usecols=(0, 1, 2, 3),
                      ndmin=2)


def test_energy_figure_matches_csv(dsp_runs, tmp_path):
    vi, rk = dsp_runs
    inputs = [str(vi / "diagnostics.csv"), str(rk / "diagnostics.csv")]
    series = render(FigureSpec("energy_vs_time", inputs, str(tmp_path / "e.png"),
                               labels=["vi", "rk45"]))
    worst = 0.0
    exact = True
    for s, path in zip(series, inputs):
        ref = load_diag_cols(path)
        exact = exact and np.array_equal(s.data[0], ref[:, 0]) \
            and np.array_equal(s.data[1], ref[:, 1])
        worst = max(worst, float(np.max(np.abs(s.data[1] - ref[:, 1]))))
    ok = exact and (tmp_path / "e.png").stat().st_size > 0
    gate("plotkit energy figure (dsp vi + rk45)", ok,
         f"series equal CSV bytes-for-value (max diff {worst:.1e}), image written")


def test_unit_error_figure_matches_csv(dsp_runs, tmp_path):
    vi, rk = dsp_runs
    inputs = [str(vi / "diagnostics.csv"), str(rk / "diagnostics.csv")]
    series = render(FigureSpec("unit_error_vs_time", inputs,
                               str(tmp_path / "u.png"), labels=["vi", "rk45"]))
    exact = all(
        np.array_equal(s.data[1], load_diag_cols(p)[:, 2])
        for s, p in zip(series, inputs)
    )
    # the two integrators should be visually distinguishable on this plot
    contrast = float(np.mean(series[1].data[1])) / max(
        float(np.mean(series[0].data[1])), 1e-300)
    ok = exact and contrast > 1e3
    gate("plotkit unit-error figure (dsp vi + rk45)", ok,
         f"series equal CSV, rk45/vi mean ratio {contrast:.1e} (>1e3)")


def test_convergence_figure_annotation(nbody_sweep, tmp_path):
    csv = nbody_sweep / "convergence.csv"
    series = render(FigureSpec("convergence_loglog", [str(csv)],
                               str(tmp_path / "c.png")))
    raw = np.loadtxt(csv, delimiter=",", skiprows=1, ndmin=2)
    slope = fitted_slope({"h": raw[:, 0], "final_error": raw[:, 1]})
    with open(nbody_sweep / "summary.json") as fh:
        reference = json.load(fh)["slope_final_error"]
    exact = np.array_equal(series[0].data[0], raw[raw[:, 1] > 0.0, 0])
    ok = exact and slope is not None and abs(slope - reference) <= 0.2
    gate("plotkit convergence figure (nbody sweep)", ok,
         f"annotated slope {slope:.3f} vs sweep summary {reference:.3f} (+-0.2)")


def test_trajectory_figure_renders(dsp_runs, tmp_path):
    vi, _ = dsp_runs
    out = tmp_path / "t.png"
    code = main(["trajectory3d", "--in", str(vi / "trajectory.csv"),
                 "--label", "vi", "--out", str(out)])
    ok = code == 0 and out.stat().st_size > 0
    gate("plotkit trajectory figure (dsp vi)", ok,
         f"exit {code}, image {out.stat().st_size if out.exists() else 0} bytes")


def test_blank_axes_on_empty_diagnostics(tmp_path):
    empty = tmp_path / "diagnostics.csv"
    empty.write_text("t,total_energy,unit_error,tangency_error,momentum_e3\n")
    out = tmp_path / "blank.png"
    code = main(["energy_vs_time", "--in", str(empty), "--out", str(out)])
    ok = code == 0 and out.stat().st_size > 0
    gate("plotkit blank axes on header-only input", ok, f"exit {code}, image written")
