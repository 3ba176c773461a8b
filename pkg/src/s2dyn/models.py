"""Mechanical-system abstraction: inertia, potential, gradient, and state.

A system of n spheres is described by a symmetric positive definite n x n
inertia matrix M and a potential V(q_1, ..., q_n). Potential gradients are
taken with respect to the ambient R^3 coordinates of each q_i; every
constraint effect is handled later in the equation assembly through
q x (q x .) projections, so model authors never deal with the manifold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotPositiveDefinite, NotSymmetric
from .geometry import check_unit

#: tangency tolerance |q_i . w_i| for state construction
TANGENCY_TOL = 1e-9

_SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class InertiaSpec:
    """Validated inertia matrix for n coupled spheres.

    Attributes:
        matrix: (n, n) symmetric positive definite array, read-only.
        n: sphere count.
        is_diagonal: True when all off-diagonal entries are exactly zero,
            which unlocks the explicit integrator and blockwise solves.
    """

    matrix: np.ndarray
    n: int = field(init=False)
    is_diagonal: bool = field(init=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"inertia matrix must be square, got shape {m.shape}")
        asym = float(np.max(np.abs(m - m.T))) if m.size else 0.0
        if asym > _SYMMETRY_TOL:
            raise NotSymmetric(f"max |M_ij - M_ji| = {asym:.3e}")
        m = 0.5 * (m + m.T)  # kill round-off asymmetry below the tolerance
        try:
            np.linalg.cholesky(m)
        except np.linalg.LinAlgError:
            raise NotPositiveDefinite("Cholesky factorization failed") from None
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "n", m.shape[0])
        off = m - np.diag(np.diag(m))
        object.__setattr__(self, "is_diagonal", not np.any(off))

    @property
    def diagonal(self):
        return np.diag(self.matrix)


def validate_inertia(matrix) -> InertiaSpec:
    """Check symmetry and positive definiteness, returning an InertiaSpec.

    Raises:
        NotSymmetric: max |M_ij - M_ji| > 1e-12.
        NotPositiveDefinite: Cholesky factorization fails.
    """
    return InertiaSpec(np.asarray(matrix, dtype=float))


@dataclass(frozen=True)
class SystemState:
    """Configuration and angular velocity of n spheres at time ``t``.

    ``q`` rows are unit vectors, ``w`` rows are angular velocities with
    q_i . w_i = 0. Arrays are copied and frozen, so states are safe to
    share between threads.
    """

    q: np.ndarray
    w: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        q = np.array(self.q, dtype=float)
        w = np.array(self.w, dtype=float)
        if q.shape != w.shape or q.ndim != 2 or q.shape[1] != 3:
            raise ValueError(f"expected matching (n, 3) arrays, got {q.shape} and {w.shape}")
        check_unit(q)
        tang = float(np.max(np.abs(np.einsum("ij,ij->i", q, w)))) if len(q) else 0.0
        if tang > TANGENCY_TOL:
            raise ValueError(f"angular velocity not tangent: max |q.w| = {tang:.3e}")
        q.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "t", float(self.t))

    @classmethod
    def unchecked(cls, q, w, t=0.0):
        """Build a state without invariant checks.

        Needed by the Runge-Kutta baselines, whose trajectories drift off
        the manifold by design (no reprojection is performed).
        """
        obj = object.__new__(cls)
        q = np.array(q, dtype=float)
        w = np.array(w, dtype=float)
        q.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(obj, "q", q)
        object.__setattr__(obj, "w", w)
        object.__setattr__(obj, "t", float(t))
        return obj

    @property
    def n(self):
        return self.q.shape[0]

    def qdot(self):
        """Velocities dq_i/dt = w_i x q_i, shape (n, 3)."""
        return np.cross(self.w, self.q)


class Model:
    """Base class for mechanical systems on a product of two-spheres.

    Subclasses provide ``potential`` and ``potential_gradient`` (ambient
    R^3 partials). Instances must be immutable after construction so a
    single model can serve concurrent integrations.
    """

    def __init__(self, inertia: InertiaSpec, symmetry_axes=()):
        self._inertia = inertia
        self._symmetry_axes = tuple(np.asarray(a, dtype=float) for a in symmetry_axes)

    @property
    def inertia(self) -> InertiaSpec:
        return self._inertia

    @property
    def n(self) -> int:
        return self._inertia.n

    @property
    def symmetry_axes(self):
        """Axes e for which V is invariant under simultaneous rotation of all q_i."""
        return self._symmetry_axes

    def potential(self, q) -> float:
        raise NotImplementedError

    def potential_gradient(self, q) -> np.ndarray:
        """(n, 3) array of ambient partials dV/dq_i."""
        raise NotImplementedError


def kinetic_energy(inertia: InertiaSpec, state: SystemState) -> float:
    """Quadratic kinetic energy (1/2) sum_ij M_ij qdot_i . qdot_j."""
    qdot = state.qdot()
    return 0.5 * float(np.einsum("ij,ik,jk->", inertia.matrix, qdot, qdot))


def check_gradient(model: Model, q, eps=1e-6) -> float:
    """Central-difference verification of the analytic potential gradient.

    Differences the ambient R^3 coordinates without constraining to the
    sphere, matching the gradient convention. Returns the max over sphere
    indices and components of |FD - analytic| / (1 + |analytic|).
    """
    if not 0.0 < eps <= 1e-3:
        raise ValueError(f"eps must be in (0, 1e-3], got {eps}")
    q = np.asarray(q, dtype=float)
    analytic = model.potential_gradient(q)
    worst = 0.0
    for i in range(q.shape[0]):
        for c in range(3):
            qp = q.copy()
            qm = q.copy()
            qp[i, c] += eps
            qm[i, c] -= eps
            fd = (model.potential(qp) - model.potential(qm)) / (2.0 * eps)
            rel = abs(fd - analytic[i, c]) / (1.0 + abs(analytic[i, c]))
            worst = max(worst, rel)
    return worst
