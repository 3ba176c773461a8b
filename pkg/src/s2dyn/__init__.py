"""Variational and classical integrators on products of two-spheres.

The package simulates point masses constrained to unit spheres (chains of
spherical pendula, interacting particles on a sphere, and similar systems)
with Lie-group variational integrators that keep every configuration on
the sphere to round-off, plus Runge-Kutta baselines for comparison.
"""

__version__ = "0.1.0"

from .continuous import (
    acceleration,
    angular_acceleration,
    assemble_acceleration_form,
    assemble_velocity_form,
    rk2_project_step,
    rk2_step,
    rk4_step,
    rk45_step,
)
from .diagnostics import (
    DiagnosticSample,
    DriftStatistics,
    conjugate_momenta,
    drift_statistics,
    momentum_about_axis,
    sample,
    total_energy,
)
from .errors import (
    ConfigError,
    GaugeViolation,
    NoConvergence,
    NotPositiveDefinite,
    NotSymmetric,
    PotentialSingular,
    S2DynError,
    SingularMass,
    StepTooLarge,
    UnknownPreset,
)
from .geometry import cayley, cayley_rotate, hat, project_tangent, renormalize
from .integrator import (
    CayleySolution,
    DiscreteStepReport,
    SolverConfig,
    diagonal_cayley_closed_form,
    explicit_step,
    implicit_step,
    legendre_minus,
    legendre_plus,
    position_form_step,
    solve_cayley_system,
)
from .models import InertiaSpec, Model, SystemState, check_gradient, kinetic_energy
from .zoo import PRESET_NAMES, PresetScenario, load_preset

__all__ = [
    "__version__",
    "acceleration",
    "angular_acceleration",
    "assemble_acceleration_form",
    "assemble_velocity_form",
    "rk2_step",
    "rk2_project_step",
    "rk4_step",
    "rk45_step",
    "DiagnosticSample",
    "DriftStatistics",
    "conjugate_momenta",
    "drift_statistics",
    "momentum_about_axis",
    "sample",
    "total_energy",
    "S2DynError",
    "ConfigError",
    "GaugeViolation",
    "NoConvergence",
    "NotPositiveDefinite",
    "NotSymmetric",
    "PotentialSingular",
    "SingularMass",
    "StepTooLarge",
    "UnknownPreset",
    "cayley",
    "cayley_rotate",
    "hat",
    "project_tangent",
    "renormalize",
    "CayleySolution",
    "DiscreteStepReport",
    "SolverConfig",
    "diagonal_cayley_closed_form",
    "explicit_step",
    "implicit_step",
    "legendre_minus",
    "legendre_plus",
    "position_form_step",
    "solve_cayley_system",
    "InertiaSpec",
    "Model",
    "SystemState",
    "check_gradient",
    "kinetic_energy",
    "PRESET_NAMES",
    "PresetScenario",
    "load_preset",
]
