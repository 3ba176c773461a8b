"""Primitives on R^3, SO(3), and the two-sphere.

Vectors are numpy arrays of shape (3,); batches of sphere points or
tangent vectors are arrays of shape (n, 3). Nothing here renormalizes
silently: points are validated where a unit vector is required, and
``renormalize`` exists only for explicit use in test or preset setup.
"""

from __future__ import annotations

import numpy as np

from .errors import GaugeViolation

#: construction tolerance for |q.q - 1|
UNIT_TOL = 1e-9

#: tolerance on f.q for the Cayley gauge condition
GAUGE_TOL = 1e-9

_EYE3 = np.eye(3)


def hat(a):
    """Skew matrix of ``a`` such that hat(a) @ b == cross(a, b)."""
    a = np.asarray(a, dtype=float)
    return np.array(
        [
            [0.0, -a[2], a[1]],
            [a[2], 0.0, -a[0]],
            [-a[1], a[0], 0.0],
        ]
    )


def hat_batch(q):
    """Skew matrices for each row of ``q``; shape (n, 3, 3)."""
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    out = np.zeros((n, 3, 3))
    out[:, 0, 1] = -q[:, 2]
    out[:, 0, 2] = q[:, 1]
    out[:, 1, 0] = q[:, 2]
    out[:, 1, 2] = -q[:, 0]
    out[:, 2, 0] = -q[:, 1]
    out[:, 2, 1] = q[:, 0]
    return out


def cross_rows(a, b):
    """Row-wise cross product for (..., 3) arrays.

    Same result as np.cross on the last axis, but without its
    axis-normalization overhead, which dominates small-n stepping loops.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = np.empty(np.broadcast_shapes(a.shape, b.shape))
    out[..., 0] = a[..., 1] * b[..., 2] - a[..., 2] * b[..., 1]
    out[..., 1] = a[..., 2] * b[..., 0] - a[..., 0] * b[..., 2]
    out[..., 2] = a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]
    return out


def check_unit(q, tol=UNIT_TOL):
    """Validate that every row of ``q`` has unit norm within ``tol``.

    Raises ValueError instead of fixing the norm; unit length is an
    invariant the integrators must maintain on their own.
    """
    q = np.asarray(q, dtype=float)
    err = np.abs(np.einsum("...i,...i->...", q, q) - 1.0)
    worst = float(np.max(err))
    if not np.isfinite(worst) or worst > tol:
        raise ValueError(f"vector not on the unit sphere: |q.q - 1| = {worst:.3e}")
    return q


def renormalize(q):
    """Rescale rows of ``q`` to unit norm. Setup helper only."""
    q = np.asarray(q, dtype=float)
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def cayley(f):
    """Rotation matrix of the Cayley map (I + hat(f)) (I - hat(f))^-1.

    Total on R^3; the rotation axis is f/|f| and the rotation angle is
    2*atan(|f|).
    """
    f = np.asarray(f, dtype=float)
    ff = float(f @ f)
    return ((1.0 - ff) * _EYE3 + 2.0 * np.outer(f, f) + 2.0 * hat(f)) / (1.0 + ff)


def cayley_rotate(f, q):
    """Apply the Cayley rotation of ``f`` to a unit vector ``q`` with f . q = 0.

    Uses the reduced form ((1 - f.f) q + 2 f x q) / (1 + f.f), which equals
    cayley(f) @ q exactly under the gauge condition and preserves |q| = 1
    without renormalization.

    Raises:
        GaugeViolation: if |f . q| exceeds the gauge tolerance.
    """
    f = np.asarray(f, dtype=float)
    q = np.asarray(q, dtype=float)
    defect = float(np.max(np.abs(np.einsum("...i,...i->...", f, q))))
    if defect > GAUGE_TOL:
        raise GaugeViolation(f"|f . q| = {defect:.3e} exceeds {GAUGE_TOL:.1e}")
    ff = np.einsum("...i,...i->...", f, f)[..., None]
    return ((1.0 - ff) * q + 2.0 * cross_rows(f, q)) / (1.0 + ff)


def project_tangent(q, v):
    """Component of ``v`` orthogonal to ``q``: v - (q . v) q.

    Equals -q x (q x v) for unit q. Idempotent. Works row-wise on
    (n, 3) batches.
    """
    q = np.asarray(q, dtype=float)
    v = np.asarray(v, dtype=float)
    return v - np.einsum("...i,...i->...", q, v)[..., None] * q


def rotation_about(axis, angle):
    """Rotation matrix about a unit ``axis`` by ``angle`` (Rodrigues)."""
    axis = np.asarray(axis, dtype=float)
    k = hat(axis)
    return _EYE3 + np.sin(angle) * k + (1.0 - np.cos(angle)) * (k @ k)
