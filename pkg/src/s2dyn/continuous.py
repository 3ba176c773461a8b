"""Global continuous Euler-Lagrange equations and Runge-Kutta baselines.

The equations of motion are assembled as dense 3n x 3n block systems.
Two equivalent charts exist: the acceleration form in (q, qdot) and the
velocity form in (q, w). The Runge-Kutta baselines integrate the
velocity-form vector field on flat R^6n and deliberately perform no
reprojection, so manifold drift is observable.
"""

from __future__ import annotations

import numpy as np

from .errors import S2DynError, SingularMass
from .geometry import cross_rows, hat_batch, project_tangent, renormalize
from .models import Model, SystemState

_MAX_REJECTS = 60


def _solve_blocks(A, rhs):
    """Solve the assembled 3n system for (n, 3) right-hand sides."""
    n = rhs.shape[0]
    try:
        x = np.linalg.solve(A, rhs.reshape(3 * n))
    except np.linalg.LinAlgError as exc:
        raise SingularMass(str(exc)) from None
    return x.reshape(n, 3)


def assemble_velocity_form(inertia, q):
    """3n x 3n matrix of the angular-velocity form of the dynamics.

    Block (i, i) is M_ii I3; block (i, j) is -M_ij hat(q_i) hat(q_j).
    The same matrix recovers angular velocities from the discrete
    Legendre transforms.
    """
    M = inertia.matrix
    n = inertia.n
    hq = hat_batch(q)
    A = -np.einsum("ij,iab,jbc->iajc", M, hq, hq).reshape(3 * n, 3 * n)
    for i in range(n):
        A[3 * i : 3 * i + 3, 3 * i : 3 * i + 3] = M[i, i] * np.eye(3)
    return A


def assemble_acceleration_form(inertia, q):
    """3n x 3n matrix of the acceleration form.

    Block (i, i) is M_ii I3; block (i, j) is -M_ij hat(q_i) hat(q_i)
    (both hats at the row index).
    """
    M = inertia.matrix
    n = inertia.n
    hq = hat_batch(q)
    hh = np.einsum("iab,ibc->iac", hq, hq)
    A = np.zeros((n, 3, n, 3))
    for i in range(n):
        for j in range(n):
            A[i, :, j, :] = np.eye(3) * M[i, i] if i == j else -M[i, j] * hh[i]
    return A.reshape(3 * n, 3 * n)


def _omega_dot(model: Model, q, w):
    """Angular accelerations for raw (possibly drifted) arrays."""
    inertia = model.inertia
    M = inertia.matrix
    grad = model.potential_gradient(q)
    ww = np.einsum("ij,ij->i", w, w)
    # row i: sum_{j != i} M_ij (w_j.w_j) q_i x q_j - q_i x grad_i
    s = (M * ww[None, :]) @ q - np.diag(M)[:, None] * ww[:, None] * q
    rhs = cross_rows(q, s) - cross_rows(q, grad)
    if inertia.is_diagonal:
        return rhs / inertia.diagonal[:, None]
    return _solve_blocks(assemble_velocity_form(inertia, q), rhs)


def angular_acceleration(model: Model, state: SystemState):
    """Solve the velocity-form system for dw_i/dt; rows stay tangent to q_i."""
    return _omega_dot(model, state.q, state.w)


def acceleration(model: Model, q, qdot):
    """Solve the acceleration-form system for d2q_i/dt2.

    Requires q_i . qdot_i = 0 within 1e-9. The result satisfies the
    differentiated constraint q_i . qddot_i = -qdot_i . qdot_i.
    """
    q = np.asarray(q, dtype=float)
    qdot = np.asarray(qdot, dtype=float)
    tang = float(np.max(np.abs(np.einsum("ij,ij->i", q, qdot))))
    if tang > 1e-9:
        raise ValueError(f"qdot not tangent: max |q.qdot| = {tang:.3e}")
    inertia = model.inertia
    grad = model.potential_gradient(q)
    vv = np.einsum("ij,ij->i", qdot, qdot)
    rhs = -vv[:, None] * inertia.diagonal[:, None] * q + cross_rows(q, cross_rows(q, grad))
    if inertia.is_diagonal:
        return rhs / inertia.diagonal[:, None]
    return _solve_blocks(assemble_acceleration_form(inertia, q), rhs)


# -- explicit Runge-Kutta baselines on the (q, w) chart ----------------------


def _field(model, q, w):
    return cross_rows(w, q), _omega_dot(model, q, w)


def rk2_step(model: Model, state: SystemState, h: float) -> SystemState:
    """Explicit midpoint step; second order, no reprojection."""
    q, w = state.q, state.w
    k1q, k1w = _field(model, q, w)
    k2q, k2w = _field(model, q + 0.5 * h * k1q, w + 0.5 * h * k1w)
    return SystemState.unchecked(q + h * k2q, w + h * k2w, state.t + h)


def rk2_project_step(model: Model, state: SystemState, h: float) -> SystemState:
    """Midpoint step followed by normalization of q and tangent projection of w.

    This is the reprojection variant whose energy behavior the variational
    integrator is compared against.
    """
    raw = rk2_step(model, state, h)
    q = renormalize(raw.q)
    w = project_tangent(q, raw.w)
    return SystemState.unchecked(q, w, raw.t)


def rk4_step(model: Model, state: SystemState, h: float) -> SystemState:
    """Classical fourth-order step, no reprojection."""
    q, w = state.q, state.w
    k1q, k1w = _field(model, q, w)
    k2q, k2w = _field(model, q + 0.5 * h * k1q, w + 0.5 * h * k1w)
    k3q, k3w = _field(model, q + 0.5 * h * k2q, w + 0.5 * h * k2w)
    k4q, k4w = _field(model, q + h * k3q, w + h * k3w)
    qn = q + (h / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
    wn = w + (h / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
    return SystemState.unchecked(qn, wn, state.t + h)


# Dormand-Prince 5(4) tableau
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)


def rk45_step(model: Model, state: SystemState, h: float, tol: float = 1e-8):
    """One accepted Dormand-Prince 5(4) step.

    Internally shrinks and retries on error-test failure, returning the
    accepted state together with the suggested next step size. The error
    norm uses scale tol * (1 + |y|) componentwise.
    """
    q, w = state.q, state.w
    y = np.concatenate([q.reshape(-1), w.reshape(-1)])
    n = q.shape[0]

    def f(yv):
        qq = yv[: 3 * n].reshape(n, 3)
        wwv = yv[3 * n :].reshape(n, 3)
        dq, dw = _field(model, qq, wwv)
        return np.concatenate([dq.reshape(-1), dw.reshape(-1)])

    sc = tol * (1.0 + np.abs(y))
    for _ in range(_MAX_REJECTS):
        k = np.empty((7, y.size))
        k[0] = f(y)
        for s in range(1, 7):
            acc = y + h * sum(a * k[m] for m, a in enumerate(_DP_A[s]))
            k[s] = f(acc)
        y5 = y + h * (_DP_B5 @ k)
        err = h * (_DP_E @ k)
        err_norm = float(np.max(np.abs(err) / sc))
        if err_norm <= 1.0:
            factor = 5.0 if err_norm == 0.0 else min(5.0, max(0.2, 0.9 * err_norm**-0.2))
            qn = y5[: 3 * n].reshape(n, 3)
            wn = y5[3 * n :].reshape(n, 3)
            return SystemState.unchecked(qn, wn, state.t + h), h * factor
        h *= max(0.1, 0.9 * err_norm**-0.2)
    raise S2DynError(f"rk45 step failed the error test {_MAX_REJECTS} times")
