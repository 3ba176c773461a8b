"""Batch simulation runner.

Loads a scenario (preset name or inline model spec from a JSON config
file), integrates it with the chosen method, and streams trajectory and
diagnostics CSV plus a run-summary JSON into an output directory. Output
bytes are deterministic for a given config on a given platform; only the
wall-time entry of the summary varies.

Exit codes: 0 success, 2 configuration error, 3 numerical failure (with a
machine-readable error.json naming the failing step).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, backend, io, zoo
from .continuous import rk2_project_step, rk2_step, rk4_step, rk45_step
from .diagnostics import drift_statistics, sample
from .errors import ConfigError, NoConvergence, PotentialSingular, S2DynError, \
    SingularMass, StepTooLarge, UnknownPreset
from .geometry import project_tangent, renormalize
from .integrator import SolverConfig, explicit_step, implicit_step
from .models import SystemState

INTEGRATORS = ("vi-implicit", "vi-explicit", "rk2", "rk2-project", "rk4", "rk45")

_MODEL_FACTORIES = {
    "double_spherical_pendulum": zoo.double_spherical_pendulum,
    "nbody_sphere": zoo.nbody_sphere,
    "spring_pendula": zoo.spring_pendula,
    "elastic_rod": zoo.elastic_rod,
    "magnetic_dipole_array": zoo.magnetic_dipole_array,
    "lennard_jones_sphere": zoo.lennard_jones_sphere,
}


@dataclass
class RunConfig:
    """Everything a run needs; mirrors the JSON config document."""

    preset: str | None = None
    model: dict | None = None
    initial: dict | None = None
    integrator: str = "vi-implicit"
    h: float | None = None
    T: float | None = None
    rk_tol: float = 1e-8
    output_every: int = 1
    solver_tol: float = 1e-14
    max_iters: int = 100
    out_dir: str = "out"
    sweep: list[float] | None = None

    def validate(self):
        if self.integrator not in INTEGRATORS:
            raise ConfigError(f"unknown integrator {self.integrator!r}")
        if self.h is not None and self.h <= 0.0:
            raise ConfigError("h must be positive")
        if self.T is not None and self.T < 0.0:
            raise ConfigError("T must be nonnegative")
        if self.output_every < 1:
            raise ConfigError("output_every must be at least 1")
        if (self.preset is None) == (self.model is None):
            raise ConfigError("exactly one of preset or inline model is required")


def _build_scenario(config: RunConfig):
    """Resolve (model, initial state, h, T) from preset or inline spec."""
    if config.preset is not None:
        preset = zoo.load_preset(config.preset)
        model, state = preset.model, preset.initial
        h = config.h if config.h is not None else preset.h
        T = config.T if config.T is not None else preset.T
    else:
        spec = config.model
        kind = spec.get("kind")
        if kind not in _MODEL_FACTORIES:
            raise ConfigError(f"unknown model kind {kind!r}")
        model = _MODEL_FACTORIES[kind](**spec.get("params", {}))
        init = config.initial
        if init is None:
            raise ConfigError("inline model requires an initial state")
        q = np.asarray(init["q"], dtype=float)
        w = np.asarray(init["w"], dtype=float)
        if init.get("clean", False):
            q = renormalize(q)
            w = project_tangent(q, w)
        try:
            state = SystemState(q, w, 0.0)
        except ValueError as exc:
            raise ConfigError(f"invalid initial state: {exc}") from None
        if config.h is None or config.T is None:
            raise ConfigError("inline model requires h and T")
        h, T = config.h, config.T
    if config.integrator == "vi-explicit" and not model.inertia.is_diagonal:
        raise ConfigError("vi-explicit requires diagonal inertia")
    return model, state, float(h), float(T)


def _momentum_axis(model):
    for axis in model.symmetry_axes:
        if np.allclose(axis, [0.0, 0.0, 1.0]):
            return np.array([0.0, 0.0, 1.0])
    return None


class _Run:
    """One integration loop with per-step diagnostics."""

    def __init__(self, config: RunConfig, model, state, h, T):
        self.config = config
        self.model = model
        self.h = h
        self.T = T
        self.axis = _momentum_axis(model)
        self.solver_cfg = SolverConfig(fp_tol=config.solver_tol,
                                       max_iters=config.max_iters)
        self.state = state
        self.samples = [sample(model, state, self.axis)]
        self.states = [state]
        self.reports = []

    def execute(self):
        name = self.config.integrator
        if name == "rk45":
            self._run_adaptive()
        else:
            self._run_fixed(self._fixed_stepper(name))
        return self

    def _fixed_stepper(self, name):
        model, h, cfg = self.model, self.h, self.solver_cfg
        if name == "vi-implicit":
            carry = {"f": None}

            def step(state):
                new, report, f = implicit_step(model, state, h, cfg, f0=carry["f"])
                if cfg.init_strategy == "previous_step":
                    carry["f"] = f
                self.reports.append(report)
                return new

        elif name == "vi-explicit":
            def step(state):
                return explicit_step(model, state, h)

        elif name == "rk2":
            def step(state):
                return rk2_step(model, state, h)

        elif name == "rk2-project":
            def step(state):
                return rk2_project_step(model, state, h)

        elif name == "rk4":
            def step(state):
                return rk4_step(model, state, h)

        else:  # pragma: no cover
            raise ConfigError(f"unknown integrator {name!r}")
        return step

    def _run_fixed(self, step):
        n_steps = int(round(self.T / self.h)) if self.T > 0.0 else 0
        for k in range(n_steps):
            try:
                self.state = step(self.state)
            except (NoConvergence, StepTooLarge, PotentialSingular, SingularMass) as exc:
                raise _NumericalFailure(exc, k) from exc
            self.samples.append(sample(self.model, self.state, self.axis))
            self.states.append(self.state)

    def _run_adaptive(self):
        h_next = self.h
        k = 0
        while self.state.t < self.T - 1e-12:
            h_try = min(h_next, self.T - self.state.t)
            try:
                self.state, h_next = rk45_step(self.model, self.state, h_try,
                                               tol=self.config.rk_tol)
            except (PotentialSingular, SingularMass, S2DynError) as exc:
                raise _NumericalFailure(exc, k) from exc
            self.samples.append(sample(self.model, self.state, self.axis))
            self.states.append(self.state)
            k += 1

    # -- outputs -------------------------------------------------------------

    def _decimated(self, seq):
        last = len(seq) - 1
        for k, item in enumerate(seq):
            if k % self.config.output_every == 0 or k == last:
                yield item

    def write_outputs(self, out_dir: Path, wall_time: float):
        out_dir.mkdir(parents=True, exist_ok=True)
        n = self.model.n
        with open(out_dir / "trajectory.csv", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(io.trajectory_header(n) + "\n")
            for st in self._decimated(self.states):
                fh.write(io.trajectory_row(st) + "\n")
        with open(out_dir / "diagnostics.csv", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(io.DIAGNOSTICS_HEADER + "\n")
            for s in self._decimated(self.samples):
                fh.write(io.diagnostics_row(s) + "\n")
        summary = self.summary(wall_time)
        with open(out_dir / "summary.json", "w", encoding="utf-8", newline="\n") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return summary

    def summary(self, wall_time: float):
        cfg = self.config
        out = {
            "mode": "run",
            "version": __version__,
            "backend": backend.BACKEND,
            "config": {
                "preset": cfg.preset,
                "integrator": cfg.integrator,
                "h": self.h,
                "T": self.T,
                "output_every": cfg.output_every,
                "solver_tol": cfg.solver_tol,
                "max_iters": cfg.max_iters,
                "rk_tol": cfg.rk_tol,
            },
            "n_steps": len(self.samples) - 1,
            "wall_time_s": wall_time,
        }
        if len(self.samples) >= 2:
            drift = drift_statistics(self.samples)
            out["drift"] = {
                "mean_abs_energy_dev": drift.mean_abs_energy_dev,
                "linear_slope": drift.linear_slope,
                "mean_unit_error": drift.mean_unit_error,
            }
            out["extremes"] = {
                "max_unit_error": max(s.unit_error for s in self.samples),
                "max_tangency_error": max(s.tangency_error for s in self.samples),
                "min_total_energy": min(s.total_energy for s in self.samples),
                "max_total_energy": max(s.total_energy for s in self.samples),
            }
        if self.axis is not None and len(self.samples) >= 2:
            j = np.array([s.momentum_e3 for s in self.samples])
            scale = max(1.0, abs(j[0]))
            out["momentum_e3"] = {
                "initial": j[0],
                "max_abs_dev": float(np.max(np.abs(j - j[0]))),
                "relative_drift": float(np.max(np.abs(j - j[0])) / scale),
            }
        if self.reports:
            its = [r.iterations_used for r in self.reports]
            out["solver"] = {
                "mean_iterations": float(np.mean(its)),
                "max_iterations": int(np.max(its)),
                "max_residual": float(np.max([r.residual for r in self.reports])),
            }
        return out


class _NumericalFailure(Exception):
    def __init__(self, cause, step_index):
        self.cause = cause
        self.step_index = step_index
        super().__init__(str(cause))


def run(config: RunConfig):
    """Execute one integration; returns the summary dict."""
    config.validate()
    model, state, h, T = _build_scenario(config)
    out_dir = Path(config.out_dir)
    started = time.perf_counter()
    runner = _Run(config, model, state, h, T).execute()
    return runner.write_outputs(out_dir, time.perf_counter() - started)


def sweep(config: RunConfig, h_list):
    """Convergence study across step sizes against a tightest-h reference."""
    config.validate()
    if len(h_list) < 2:
        raise ConfigError("sweep requires at least two step sizes")
    if config.integrator == "rk45":
        raise ConfigError("sweep requires a fixed-step integrator")
    model, state, _, T = _build_scenario(config)
    out_dir = Path(config.out_dir)
    started = time.perf_counter()

    h_sorted = sorted(set(float(h) for h in h_list), reverse=True)
    runs = {}
    for h in h_sorted:
        runs[h] = _Run(config, model, state, h, T).execute()
    h_ref = h_sorted[-1]
    ref = runs[h_ref].state

    rows = []
    for h in h_sorted:
        final = runs[h].state
        err = max(
            float(np.max(np.abs(final.q - ref.q))),
            float(np.max(np.abs(final.w - ref.w))),
        )
        drift = drift_statistics(runs[h].samples)
        rows.append((h, err, drift.mean_abs_energy_dev, drift.mean_unit_error))

    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "convergence.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("h,final_error,mean_abs_energy_dev,mean_unit_error\n")
        for row in rows:
            fh.write(",".join(format(v, ".17g") for v in row) + "\n")

    fit_rows = [r for r in rows if r[0] != h_ref]
    log_h = np.log10([r[0] for r in fit_rows])
    slope_err = float(np.polyfit(log_h, np.log10([r[1] for r in fit_rows]), 1)[0])
    e_rows = [r for r in rows if r[2] > 0.0]
    slope_energy = float(
        np.polyfit(
            np.log10([r[0] for r in e_rows]), np.log10([r[2] for r in e_rows]), 1
        )[0]
    ) if len(e_rows) >= 2 else None

    summary = {
        "mode": "sweep",
        "version": __version__,
        "backend": backend.BACKEND,
        "config": {
            "preset": config.preset,
            "integrator": config.integrator,
            "T": T,
            "h_list": h_sorted,
            "solver_tol": config.solver_tol,
            "max_iters": config.max_iters,
        },
        "reference_h": h_ref,
        "slope_final_error": slope_err,
        "slope_energy_dev": slope_energy,
        "wall_time_s": time.perf_counter() - started,
    }
    with open(out_dir / "summary.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return summary


# -- command line ------------------------------------------------------------


def _parser():
    p = argparse.ArgumentParser(
        prog="s2dyn",
        description="Simulate mechanical systems on products of two-spheres.",
    )
    p.add_argument("--config", help="JSON config file mirroring RunConfig")
    p.add_argument("--preset", help=f"one of: {', '.join(zoo.PRESET_NAMES)}")
    p.add_argument("--integrator", choices=INTEGRATORS)
    p.add_argument("--h", type=float, help="step size (seconds)")
    p.add_argument("--T", type=float, help="simulation time (seconds)")
    p.add_argument("--out-dir", help="output directory")
    p.add_argument("--solver-tol", type=float, help="fixed-point tolerance")
    p.add_argument("--max-iters", type=int, help="fixed-point iteration budget")
    p.add_argument("--output-every", type=int, help="sample decimation factor")
    p.add_argument("--rk-tol", type=float, help="rk45 error tolerance")
    p.add_argument("--sweep", help="comma-separated step sizes for a convergence sweep")
    return p


def _load_config(args) -> RunConfig:
    data = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
    overrides = {
        "preset": args.preset,
        "integrator": args.integrator,
        "h": args.h,
        "T": args.T,
        "out_dir": args.out_dir,
        "solver_tol": args.solver_tol,
        "max_iters": args.max_iters,
        "output_every": args.output_every,
        "rk_tol": args.rk_tol,
    }
    for key, value in overrides.items():
        if value is not None:
            data[key] = value
    if args.sweep is not None:
        try:
            data["sweep"] = [float(v) for v in args.sweep.split(",") if v]
        except ValueError:
            raise ConfigError(f"bad --sweep list: {args.sweep!r}") from None
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(**data)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        config = _load_config(args)
        config.validate()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        if config.sweep:
            summary = sweep(config, config.sweep)
        else:
            summary = run(config)
    except (ConfigError, UnknownPreset) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except _NumericalFailure as exc:
        out_dir = Path(config.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        payload = {
            "error": type(exc.cause).__name__,
            "message": str(exc.cause),
            "step_index": exc.step_index,
        }
        with open(out_dir / "error.json", "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"numerical failure at step {exc.step_index}: {exc.cause}",
              file=sys.stderr)
        return 3
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
