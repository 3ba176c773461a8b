# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pairwise-potential kernels.

Hot O(n^2) inner loops for the sphere-gravity and Lennard-Jones models.
Mirrors the numpy fallback in _pairops_np; the backend module picks one
at import time.
"""

from libc.math cimport sqrt

import numpy as np
cimport numpy as cnp

from .errors import PotentialSingular

cnp.import_array()

DEF SPHERE_GRAVITY_SINGULAR = 1e-10
DEF LJ_SINGULAR = 1e-10


def sphere_gravity_energy_grad(cnp.ndarray[cnp.float64_t, ndim=2] q, double gamma):
    cdef Py_ssize_t n = q.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] grad = np.zeros((n, 3))
    cdef double energy = 0.0
    cdef Py_ssize_t i, j
    cdef double dot, s2, denom, w
    for i in range(n):
        for j in range(i + 1, n):
            dot = q[i, 0] * q[j, 0] + q[i, 1] * q[j, 1] + q[i, 2] * q[j, 2]
            s2 = dot * dot
            if s2 >= 1.0 - SPHERE_GRAVITY_SINGULAR:
                raise PotentialSingular("bodies nearly parallel or antipodal")
            denom = 1.0 - s2
            energy += -gamma * dot / sqrt(denom)
            w = -gamma / (denom * sqrt(denom))
            grad[i, 0] += w * q[j, 0]
            grad[i, 1] += w * q[j, 1]
            grad[i, 2] += w * q[j, 2]
            grad[j, 0] += w * q[i, 0]
            grad[j, 1] += w * q[i, 1]
            grad[j, 2] += w * q[i, 2]
    return energy, grad


def lj_energy_grad(cnp.ndarray[cnp.float64_t, ndim=2] q, double epsilon,
                   double sigma):
    cdef Py_ssize_t n = q.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] grad = np.zeros((n, 3))
    cdef double energy = 0.0
    cdef Py_ssize_t i, j
    cdef double dx, dy, dz, r2, s6, c
    cdef double sig2 = sigma * sigma
    for i in range(n):
        for j in range(i + 1, n):
            dx = q[i, 0] - q[j, 0]
            dy = q[i, 1] - q[j, 1]
            dz = q[i, 2] - q[j, 2]
            r2 = dx * dx + dy * dy + dz * dz
            if r2 < LJ_SINGULAR * LJ_SINGULAR:
                raise PotentialSingular("molecules nearly coincident")
            s6 = (sig2 / r2) ** 3
            energy += 4.0 * epsilon * (s6 * s6 - s6)
            # 2 * dV/d(r^2), the coefficient of (q_i - q_j) in the gradient
            c = 8.0 * epsilon * (-6.0 * s6 * s6 + 3.0 * s6) / r2
            grad[i, 0] += c * dx
            grad[i, 1] += c * dy
            grad[i, 2] += c * dz
            grad[j, 0] -= c * dx
            grad[j, 1] -= c * dy
            grad[j, 2] -= c * dz
    return energy, grad
