"""Vectorized numpy fallback for the pairwise-potential kernels.

Same contract as the compiled extension: each function returns
(energy, gradient) with gradient of shape (n, 3), and raises
PotentialSingular near a singular configuration.
"""

import numpy as np

from .errors import PotentialSingular

SPHERE_GRAVITY_SINGULAR = 1e-10
LJ_SINGULAR = 1e-10


def sphere_gravity_energy_grad(q, gamma):
    """Mutual gravity of particles on the sphere.

    Pair energy -gamma (q_i.q_j) / sqrt(1 - (q_i.q_j)^2); singular as the
    particles become parallel or antipodal.
    """
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    dot = q @ q.T
    off = ~np.eye(n, dtype=bool)
    s2 = dot[off] ** 2
    if s2.size and np.max(s2) >= 1.0 - SPHERE_GRAVITY_SINGULAR:
        raise PotentialSingular("bodies nearly parallel or antipodal")
    w = np.zeros((n, n))
    w[off] = (1.0 - dot[off] ** 2) ** -1.5
    energy = -0.5 * gamma * float(np.sum(dot[off] / np.sqrt(1.0 - dot[off] ** 2)))
    grad = -gamma * (w @ q)
    return energy, grad


def lj_energy_grad(q, epsilon, sigma):
    """Lennard-Jones sum over distinct pairs of chord distances."""
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    dot = q @ q.T
    nn = np.einsum("ij,ij->i", q, q)
    r2 = nn[:, None] + nn[None, :] - 2.0 * dot
    iu = np.triu_indices(n, k=1)
    r2u = r2[iu]
    if r2u.size and np.min(r2u) < LJ_SINGULAR**2:
        raise PotentialSingular("molecules nearly coincident")
    s6 = (sigma * sigma / r2u) ** 3
    energy = 4.0 * epsilon * float(np.sum(s6 * s6 - s6))
    # dV/dr2 summed into a symmetric pair-coefficient matrix
    c_pair = 4.0 * epsilon * (-6.0 * s6 * s6 + 3.0 * s6) / r2u
    C = np.zeros((n, n))
    C[iu] = c_pair
    C = C + C.T
    grad = 2.0 * (np.sum(C, axis=1)[:, None] * q - C @ q)
    return energy, grad
