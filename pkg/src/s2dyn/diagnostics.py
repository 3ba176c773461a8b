"""Conserved-quantity and constraint-error observers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import Model, SystemState, kinetic_energy


@dataclass(frozen=True)
class DiagnosticSample:
    """One observation row: time, energy, manifold errors, optional momentum."""

    t: float
    total_energy: float
    unit_error: float
    tangency_error: float
    momentum_e3: float | None = None


def total_energy(model: Model, state: SystemState) -> float:
    """Kinetic plus potential energy."""
    return kinetic_energy(model.inertia, state) + model.potential(state.q)


def conjugate_momenta(model: Model, state: SystemState) -> np.ndarray:
    """Momenta p_i = M_ii qdot_i - q_i x (q_i x sum_{j != i} M_ij qdot_j).

    Each p_i is the tangent-plane projection of sum_j M_ij qdot_j, hence
    orthogonal to q_i to round-off.
    """
    M = model.inertia.matrix
    q = state.q
    qdot = state.qdot()
    coupled = M @ qdot - np.diag(M)[:, None] * qdot
    return np.diag(M)[:, None] * qdot - np.cross(q, np.cross(q, coupled))


def momentum_about_axis(model: Model, state: SystemState, axis) -> float:
    """Angular momentum sum_i axis . (q_i x p_i) about a unit axis."""
    p = conjugate_momenta(model, state)
    axis = np.asarray(axis, dtype=float)
    return float(np.sum(np.cross(state.q, p) @ axis))


def sample(model: Model, state: SystemState, momentum_axis=None) -> DiagnosticSample:
    """Observe one state; momentum is recorded only when an axis is given."""
    q, w = state.q, state.w
    unit_error = float(np.max(np.abs(np.einsum("ij,ij->i", q, q) - 1.0)))
    tangency_error = float(np.max(np.abs(np.einsum("ij,ij->i", q, w))))
    mom = None
    if momentum_axis is not None:
        mom = momentum_about_axis(model, state, momentum_axis)
    return DiagnosticSample(state.t, total_energy(model, state), unit_error,
                            tangency_error, mom)


@dataclass(frozen=True)
class DriftStatistics:
    mean_abs_energy_dev: float
    linear_slope: float
    mean_unit_error: float


def drift_statistics(samples) -> DriftStatistics:
    """Summary statistics of a diagnostic series.

    mean_abs_energy_dev is the mean of |E_k - E_0| over all samples;
    linear_slope is the least-squares slope of E_k against t_k.
    """
    samples = list(samples)
    if len(samples) < 2:
        raise ValueError("need at least two samples")
    t = np.array([s.t for s in samples])
    e = np.array([s.total_energy for s in samples])
    u = np.array([s.unit_error for s in samples])
    slope = float(np.polyfit(t, e, 1)[0])
    return DriftStatistics(
        mean_abs_energy_dev=float(np.mean(np.abs(e - e[0]))),
        linear_slope=slope,
        mean_unit_error=float(np.mean(u)),
    )
