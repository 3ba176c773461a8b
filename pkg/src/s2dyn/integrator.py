"""Variational integrators on products of two-spheres.

The implicit velocity-form stepper is the primary API: one step maps
(q_k, w_k) to (q_{k+1}, w_{k+1}) by solving for per-sphere incremental
rotations, applying them as a group action (which preserves unit length
exactly, no reprojection anywhere), and recovering the new angular
velocities from the discrete Legendre transform. The rotations are
parameterized by Cayley vectors f_i gauged orthogonal to q_i.

An explicit stepper exists for diagonal inertia, and the position form
(two configurations in, one out) supports self-starting and testing the
discrete Legendre identities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GaugeViolation, NoConvergence, StepTooLarge
from .continuous import assemble_velocity_form, _solve_blocks
from .geometry import GAUGE_TOL, cayley_rotate, cross_rows, project_tangent
from .models import Model, SystemState


@dataclass(frozen=True)
class SolverConfig:
    """Fixed-point solver parameters.

    fp_tol is the max-norm change of the stacked f iterate required for
    convergence; the implicit-system residual must additionally drop below
    10 * fp_tol. init_strategy "previous_step" warm-starts from the last
    solution when stepping through a trajectory.
    """

    fp_tol: float = 1e-14
    max_iters: int = 100
    init_strategy: str = "previous_step"

    def __post_init__(self):
        if self.fp_tol <= 0.0:
            raise ValueError("fp_tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.init_strategy not in ("zero", "previous_step"):
            raise ValueError(f"unknown init_strategy {self.init_strategy!r}")


@dataclass(frozen=True)
class DiscreteStepReport:
    """Per-step solver accounting."""

    iterations_used: int
    residual: float
    h: float


@dataclass(frozen=True)
class CayleySolution:
    f: np.ndarray
    iterations: int
    residual: float


def _implicit_lhs(M, Mdiag, q, f):
    """Left-hand side of the implicit rotation system evaluated at f.

    Row i: (2 M_ii / (1 + f_i.f_i)) f_i
           - sum_{j != i} (2 M_ij / (1 + f_j.f_j)) q_i x (q_j x f_j + q_j (f_j.f_j))
    """
    s = np.einsum("ij,ij->i", f, f)
    g = 2.0 * (cross_rows(q, f) + q * s[:, None]) / (1.0 + s[:, None])
    coupling = (M @ g) - Mdiag[:, None] * g
    return Mdiag[:, None] * 2.0 * f / (1.0 + s[:, None]) - cross_rows(q, coupling)


def solve_cayley_system(inertia, q, d, cfg: SolverConfig = SolverConfig(), f0=None):
    """Solve the implicit system for the Cayley vectors f_i.

    Each right-hand side d_i must lie in the tangent plane at q_i. The
    iteration is a fixed-point sweep preconditioned by the constant linear
    part of the system (diagonal blocks 2 M_ii I, off-diagonal
    -2 M_ij hat(q_i) hat(q_j)); the nonlinear remainder is O(|f|^2), so a
    handful of sweeps reach round-off. Iterates are projected back into the
    gauge f_i . q_i = 0 after every sweep.

    Returns a CayleySolution; raises NoConvergence when the budget runs out
    and GaugeViolation when an input d_i leaves the tangent plane.
    """
    q = np.asarray(q, dtype=float)
    d = np.asarray(d, dtype=float)
    defect = float(np.max(np.abs(np.einsum("ij,ij->i", q, d)))) if len(q) else 0.0
    if defect > GAUGE_TOL:
        raise GaugeViolation(f"|d . q| = {defect:.3e} exceeds {GAUGE_TOL:.1e}")

    M = inertia.matrix
    Mdiag = inertia.diagonal
    n = inertia.n
    if f0 is None:
        f = np.zeros_like(d)
    else:
        f = project_tangent(q, np.asarray(f0, dtype=float))

    if inertia.is_diagonal:
        A = None
        inv_diag = 1.0 / (2.0 * Mdiag[:, None])
    else:
        A = 2.0 * assemble_velocity_form(inertia, q)

    residual = np.inf
    for it in range(1, cfg.max_iters + 1):
        defect_vec = d - _implicit_lhs(M, Mdiag, q, f)
        if A is None:
            delta = defect_vec * inv_diag
        else:
            delta = _solve_blocks(A, defect_vec)
        f_new = project_tangent(q, f + delta)
        change = float(np.max(np.abs(f_new - f)))
        f = f_new
        if change <= cfg.fp_tol:
            residual = float(np.max(np.abs(_implicit_lhs(M, Mdiag, q, f) - d)))
            if residual <= 10.0 * cfg.fp_tol:
                return CayleySolution(f, it, residual)
    if not np.isfinite(residual) or residual == np.inf:
        residual = float(np.max(np.abs(_implicit_lhs(M, Mdiag, q, f) - d)))
    raise NoConvergence(cfg.max_iters, residual)


def diagonal_cayley_closed_form(inertia, d):
    """Closed-form f_i for uncoupled inertia: tan(asin(|d_i|/M_ii)/2) d_i/|d_i|."""
    if not inertia.is_diagonal:
        raise ValueError("closed form requires diagonal inertia")
    d = np.asarray(d, dtype=float)
    norm = np.linalg.norm(d, axis=1)
    ratio = norm / inertia.diagonal
    if np.any(ratio > 1.0):
        raise StepTooLarge(f"|d|/M_ii = {float(np.max(ratio)):.3e} exceeds 1")
    scale = np.zeros_like(norm)
    nz = norm > 0.0
    scale[nz] = np.tan(0.5 * np.arcsin(ratio[nz])) / norm[nz]
    return d * scale[:, None]


def _velocity_rhs(M, q_new, q_old, grad_new, h):
    """Right-hand side of the discrete Legendre velocity recovery."""
    diff = (M @ (q_new - q_old)) / h
    return cross_rows(q_new, diff) - 0.5 * h * cross_rows(q_new, grad_new)


def _recover_omega(inertia, q_new, rhs):
    if inertia.is_diagonal:
        return rhs / inertia.diagonal[:, None]
    return _solve_blocks(assemble_velocity_form(inertia, q_new), rhs)


def _build_d(inertia, q, w, grad, h):
    """Tangent right-hand sides d_i of the implicit rotation system."""
    M = inertia.matrix
    Mdiag = inertia.diagonal
    c = h * cross_rows(q, w)  # rows q_j x (h w_j)
    s = (M @ c) - Mdiag[:, None] * c
    return Mdiag[:, None] * h * w - cross_rows(q, s) - 0.5 * h * h * cross_rows(q, grad)


def implicit_step(model: Model, state: SystemState, h: float,
                  cfg: SolverConfig = SolverConfig(), f0=None):
    """One implicit variational step (q_k, w_k) -> (q_{k+1}, w_{k+1}).

    Returns (state, report, f) where f is the converged Cayley vector
    stack, usable to warm-start the next step.
    """
    inertia = model.inertia
    q, w = state.q, state.w
    grad = model.potential_gradient(q)
    d = _build_d(inertia, q, w, grad, h)
    sol = solve_cayley_system(inertia, q, d, cfg, f0=f0)
    q_new = cayley_rotate(sol.f, q)
    grad_new = model.potential_gradient(q_new)
    rhs = _velocity_rhs(inertia.matrix, q_new, q, grad_new, h)
    w_new = _recover_omega(inertia, q_new, rhs)
    report = DiscreteStepReport(sol.iterations, sol.residual, h)
    return SystemState(q_new, w_new, state.t + h), report, sol.f


def explicit_step(model: Model, state: SystemState, h: float) -> SystemState:
    """Explicit variational step, valid when inertia is diagonal.

    Raises StepTooLarge when the per-step rotation leaves the chart
    (|h w_i - (h^2 / 2 M_ii) q_i x grad_i| > 1); the step is never clamped,
    which would silently destroy the discrete structure.
    """
    inertia = model.inertia
    if not inertia.is_diagonal:
        raise ValueError("explicit stepper requires diagonal inertia")
    Mdiag = inertia.diagonal[:, None]
    q, w = state.q, state.w
    grad = model.potential_gradient(q)
    torque = cross_rows(q, grad) / Mdiag
    a = h * w - 0.5 * h * h * torque
    aa = np.einsum("ij,ij->i", a, a)
    if np.any(aa > 1.0):
        raise StepTooLarge(
            f"rotation amplitude {float(np.sqrt(np.max(aa))):.3e} exceeds 1; reduce h"
        )
    q_new = cross_rows(a, q) + np.sqrt(1.0 - aa)[:, None] * q
    grad_new = model.potential_gradient(q_new)
    w_new = w - 0.5 * h * torque - 0.5 * (h / Mdiag) * cross_rows(q_new, grad_new)
    return SystemState(q_new, w_new, state.t + h)


def position_form_step(model: Model, q_prev, q_curr, h: float,
                       cfg: SolverConfig = SolverConfig()):
    """Position-form discrete flow (q_{k-1}, q_k) -> q_{k+1}."""
    inertia = model.inertia
    M = inertia.matrix
    q_prev = np.asarray(q_prev, dtype=float)
    q_curr = np.asarray(q_curr, dtype=float)
    grad = model.potential_gradient(q_curr)
    d = cross_rows(q_curr, M @ (q_curr - q_prev)) - h * h * cross_rows(q_curr, grad)
    sol = solve_cayley_system(inertia, q_curr, d, cfg)
    return cayley_rotate(sol.f, q_curr)


def legendre_minus(model: Model, q_k, q_k1, h: float):
    """Recover w_k from the configuration pair (q_k, q_{k+1}).

    Inverts the map realized by implicit_step: the returned w_k steps to
    exactly this q_{k+1}.
    """
    inertia = model.inertia
    q_k = np.asarray(q_k, dtype=float)
    q_k1 = np.asarray(q_k1, dtype=float)
    grad = model.potential_gradient(q_k)
    diff = (inertia.matrix @ (q_k1 - q_k)) / h
    rhs = cross_rows(q_k, diff) + 0.5 * h * cross_rows(q_k, grad)
    return _recover_omega(inertia, q_k, rhs)


def legendre_plus(model: Model, q_km1, q_k, h: float):
    """Recover w_k from the configuration pair (q_{k-1}, q_k).

    Identical to the velocity recovery performed inside implicit_step at
    the arrival configuration.
    """
    inertia = model.inertia
    q_km1 = np.asarray(q_km1, dtype=float)
    q_k = np.asarray(q_k, dtype=float)
    grad = model.potential_gradient(q_k)
    rhs = _velocity_rhs(inertia.matrix, q_k, q_km1, grad, h)
    return _recover_omega(inertia, q_k, rhs)
