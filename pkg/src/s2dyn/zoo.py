"""Example systems: pendula, bodies on a sphere, rods, dipoles, molecules.

Each constructor returns an immutable Model; ``load_preset`` exposes the
benchmark scenarios with their published parameters. Printed initial data
is rounded to four decimals in the sources, so presets renormalize the
configuration vectors and project the angular velocities into the tangent
planes at load time; without this the states would violate the unit-norm
and tangency invariants by about 1e-5.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import PotentialSingular, UnknownPreset
from .geometry import project_tangent, renormalize, rotation_about
from .models import InertiaSpec, Model, SystemState, validate_inertia

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])


class DoubleSphericalPendulum(Model):
    """Two point masses on serial massless links under uniform gravity.

    q_1 points from the pivot to the first mass, q_2 from the first mass
    to the second. The potential is linear in the configuration, so its
    gradient is constant.
    """

    def __init__(self, m1, m2, l1, l2, g=9.81):
        if min(m1, m2, l1, l2) <= 0.0:
            raise ValueError("masses and lengths must be positive")
        M = np.array(
            [
                [(m1 + m2) * l1 * l1, m2 * l1 * l2],
                [m2 * l1 * l2, m2 * l2 * l2],
            ]
        )
        super().__init__(validate_inertia(M), symmetry_axes=(E3,))
        self._coeff = np.array([(m1 + m2) * g * l1, m2 * g * l2])

    def potential(self, q):
        q = np.asarray(q, dtype=float)
        return -float(self._coeff @ (q @ E3))

    def potential_gradient(self, q):
        return -self._coeff[:, None] * E3[None, :]


class NBodySphere(Model):
    """Point masses on one sphere under the sphere analog of gravity."""

    def __init__(self, masses, gamma=1.0):
        masses = np.asarray(masses, dtype=float)
        if np.any(masses <= 0.0):
            raise ValueError("masses must be positive")
        super().__init__(
            validate_inertia(np.diag(masses)), symmetry_axes=(E1, E2, E3)
        )
        self.gamma = float(gamma)

    def potential(self, q):
        q = np.ascontiguousarray(q, dtype=float)
        return backend.sphere_gravity_energy_grad(q, self.gamma)[0]

    def potential_gradient(self, q):
        q = np.ascontiguousarray(q, dtype=float)
        return backend.sphere_gravity_energy_grad(q, self.gamma)[1]

    def energy_and_gradient(self, q):
        q = np.ascontiguousarray(q, dtype=float)
        return backend.sphere_gravity_energy_grad(q, self.gamma)


class SpringPendula(Model):
    """Spherical pendula on a horizontal pivot plane, coupled by springs.

    Springs attach at link midpoints; ``springs`` is a sequence of
    (i, j, kappa, r_ij) with zero-based indices and r_ij the pivot-to-pivot
    vector. Spring rest length is the pivot separation |r_ij|.
    """

    def __init__(self, masses, lengths, springs, g=9.81):
        masses = np.asarray(masses, dtype=float)
        lengths = np.asarray(lengths, dtype=float)
        spec = []
        for i, j, kappa, r in springs:
            if i == j:
                raise ValueError("a spring must connect two distinct pendula")
            if kappa < 0.0:
                raise ValueError("spring constants must be nonnegative")
            spec.append((int(i), int(j), float(kappa), np.asarray(r, dtype=float)))
        super().__init__(validate_inertia(np.diag(masses * lengths**2)))
        self._springs = tuple(spec)
        self._g_coeff = masses * g * lengths  # m_i g l_i
        self._lengths = lengths

    def _spring_terms(self, q):
        for i, j, kappa, r in self._springs:
            u = r + 0.5 * self._lengths[j] * q[j] - 0.5 * self._lengths[i] * q[i]
            dist = float(np.linalg.norm(u))
            if dist < 1e-12:
                raise PotentialSingular(f"spring ({i}, {j}) endpoints coincide")
            yield i, j, kappa, r, u, dist

    def potential(self, q):
        q = np.asarray(q, dtype=float)
        v = -float(self._g_coeff @ (q @ E3))
        for _, _, kappa, r, _, dist in self._spring_terms(q):
            stretch = dist - float(np.linalg.norm(r))
            v += 0.5 * kappa * stretch * stretch
        return v

    def potential_gradient(self, q):
        q = np.asarray(q, dtype=float)
        grad = -self._g_coeff[:, None] * E3[None, :]
        grad = np.array(grad)
        for i, j, kappa, r, u, dist in self._spring_terms(q):
            pull = kappa * (dist - float(np.linalg.norm(r))) / dist * u
            grad[i] -= 0.5 * self._lengths[i] * pull
            grad[j] += 0.5 * self._lengths[j] * pull
        return grad


class ElasticRod(Model):
    """Chain of equal rigid elements with bending springs, clamped at one end.

    Discretizes non-planar pure bending of a rod of total mass ``m_total``
    and length ``l_total`` into n + 1 equal elements; the zeroth element
    is fixed along ``q0``. The inertia matrix is dense: every element
    carries all elements beyond it.
    """

    def __init__(self, n, m_total, l_total, kappa, g=9.81, q0=E1):
        if n < 1:
            raise ValueError("need at least one free element")
        kappa = np.broadcast_to(np.asarray(kappa, dtype=float), (n,)).copy()
        me = m_total / (n + 1)
        le = l_total / (n + 1)
        idx = np.arange(1, n + 1)
        M = np.empty((n, n))
        for i in idx:
            for j in idx:
                if i == j:
                    M[i - 1, j - 1] = (n - i + 1.0 / 3.0) * me * le * le
                else:
                    M[i - 1, j - 1] = 0.5 * (n - max(i, j) + 1) * me * le * le
        super().__init__(validate_inertia(M))
        self._kappa = kappa
        self._q0 = renormalize(np.asarray(q0, dtype=float))
        # gravity coefficient of q_i: g l_e (m_e / 2 + (n - i) m_e)
        self._grav = g * le * me * (0.5 + (n - idx))
        self._n_elem = n

    def potential(self, q):
        q = np.asarray(q, dtype=float)
        v = -float(self._grav @ (q @ E3))
        prev = self._q0
        for i in range(self._n_elem):
            bend = 1.0 - float(prev @ q[i])
            v += 0.5 * self._kappa[i] * bend * bend
            prev = q[i]
        return v

    def potential_gradient(self, q):
        q = np.asarray(q, dtype=float)
        grad = -self._grav[:, None] * E3[None, :]
        grad = np.array(grad)
        prev = self._q0
        for i in range(self._n_elem):
            bend = 1.0 - float(prev @ q[i])
            grad[i] -= self._kappa[i] * bend * prev
            if i > 0:
                grad[i - 1] -= self._kappa[i] * bend * q[i]
            prev = q[i]
        return grad


class MagneticDipoleArray(Model):
    """Rod magnets on frictionless pivots interacting dipole to dipole."""

    MU = 4.0e-7 * np.pi  # vacuum permeability, N / A^2

    def __init__(self, masses, lengths, moments, pivots):
        masses = np.asarray(masses, dtype=float)
        lengths = np.asarray(lengths, dtype=float)
        moments = np.asarray(moments, dtype=float)
        pivots = np.asarray(pivots, dtype=float)
        n = len(masses)
        super().__init__(validate_inertia(np.diag(masses * lengths**2 / 12.0)))
        r = pivots[None, :, :] - pivots[:, None, :]  # r_ij, pivot i to pivot j
        dist = np.linalg.norm(r, axis=2)
        if np.any(dist[~np.eye(n, dtype=bool)] < 1e-12):
            raise PotentialSingular("coincident pivot positions")
        np.fill_diagonal(dist, np.inf)
        self._r = r
        self._coeff = self.MU * np.outer(moments, moments) / (4.0 * np.pi * dist**3)
        self._inv_d2 = 1.0 / dist**2

    def potential(self, q):
        q = np.asarray(q, dtype=float)
        dot = q @ q.T
        proj = np.einsum("ic,ijc->ij", q, self._r)  # q_i . r_ij
        projT = np.einsum("jc,ijc->ij", q, self._r)  # q_j . r_ij
        pair = self._coeff * (dot - 3.0 * self._inv_d2 * proj * projT)
        return 0.5 * float(np.sum(pair))

    def potential_gradient(self, q):
        q = np.asarray(q, dtype=float)
        projT = np.einsum("jc,ijc->ij", q, self._r)
        w = self._coeff
        grad = w @ q - np.einsum("ij,ijc->ic", w * 3.0 * self._inv_d2 * projT, self._r)
        return grad


class LennardJonesSphere(Model):
    """Molecules on one sphere with Lennard-Jones chord-distance forces."""

    def __init__(self, masses, epsilon, sigma):
        masses = np.asarray(masses, dtype=float)
        if epsilon <= 0.0 or sigma <= 0.0:
            raise ValueError("epsilon and sigma must be positive")
        super().__init__(
            validate_inertia(np.diag(masses)), symmetry_axes=(E1, E2, E3)
        )
        self.epsilon = float(epsilon)
        self.sigma = float(sigma)

    def potential(self, q):
        q = np.ascontiguousarray(q, dtype=float)
        return backend.lj_energy_grad(q, self.epsilon, self.sigma)[0]

    def potential_gradient(self, q):
        q = np.ascontiguousarray(q, dtype=float)
        return backend.lj_energy_grad(q, self.epsilon, self.sigma)[1]

    def energy_and_gradient(self, q):
        q = np.ascontiguousarray(q, dtype=float)
        return backend.lj_energy_grad(q, self.epsilon, self.sigma)


# -- constructor functions ---------------------------------------------------


def double_spherical_pendulum(m1=1.0, m2=1.0, l1=9.81, l2=9.81, g=9.81):
    return DoubleSphericalPendulum(m1, m2, l1, l2, g)


def nbody_sphere(masses, gamma=1.0):
    return NBodySphere(masses, gamma)


def spring_pendula(masses, lengths, springs, g=9.81):
    return SpringPendula(masses, lengths, springs, g)


def elastic_rod(n, m_total, l_total, kappa, g=9.81, q0=E1):
    return ElasticRod(n, m_total, l_total, kappa, g, q0)


def magnetic_dipole_array(masses, lengths, moments, pivots):
    return MagneticDipoleArray(masses, lengths, moments, pivots)


def lennard_jones_sphere(masses, epsilon, sigma):
    return LennardJonesSphere(masses, epsilon, sigma)


# -- presets -----------------------------------------------------------------


@dataclass(frozen=True)
class PresetScenario:
    """A named benchmark: model, initial state, step size, duration."""

    name: str
    model: Model
    initial: SystemState
    h: float
    T: float
    notes: str = ""


def _clean_state(q, w):
    """Renormalize rounded configuration data and project velocities."""
    q = renormalize(np.asarray(q, dtype=float))
    w = project_tangent(q, np.asarray(w, dtype=float))
    return SystemState(q, w, 0.0)


def fibonacci_sphere(n):
    """Deterministic near-uniform layout of n points on the sphere."""
    i = np.arange(n, dtype=float)
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    z = 1.0 - (2.0 * i + 1.0) / n
    theta = 2.0 * np.pi * i / phi
    rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.column_stack([rho * np.cos(theta), rho * np.sin(theta), z])


def _dsp_preset():
    model = double_spherical_pendulum()
    state = _clean_state(
        [[0.8660, 0.0, 0.5], [0.0, 0.0, 1.0]],
        [[-0.4330, 0.0, 0.75], [0.0, 1.0, 0.0]],
    )
    return PresetScenario("dsp-100s", model, state, 0.01, 100.0)


def _nbody_preset():
    model = nbody_sphere([1.0, 1.0, 1.0], gamma=1.0)
    state = _clean_state(
        [[0.0, -1.0, 0.0], [0.0, 0.0, 1.0], [-1.0, 0.0, 0.0]],
        [[0.0, 0.0, -1.1], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
    )
    return PresetScenario("nbody3-10s", model, state, 1e-3, 10.0)


def _springs_preset():
    l = 0.1
    springs = [
        (0, 1, 10.0, l * E1),
        (1, 2, 20.0, -l * E2),
        (2, 3, 30.0, -l * E1),
        (3, 0, 40.0, l * E2),
    ]
    model = spring_pendula([0.1] * 4, [l] * 4, springs)
    q = np.array([E3, E3, [0.4698, 0.1710, 0.8660], E3])
    w = np.array([[-10.0, 4.0, 0.0], [0, 0, 0], [0, 0, 0], [0, 0, 0.0]])
    return PresetScenario(
        "springs4",
        model,
        _clean_state(q, w),
        1e-3,
        20.0,
        notes="spring constants assigned to the connection list in its stated order",
    )


def _rod_preset():
    model = elastic_rod(10, 0.055, 1.1, 1000.0)
    q = np.tile(E1, (10, 1))
    w = np.zeros((10, 3))
    w[4] = [0.0, 0.0, 10.0]
    return PresetScenario("rod10-3s", model, _clean_state(q, w), 1e-4, 3.0)


def _dipole_preset():
    n = 16
    l = 0.02
    spacing = 1.2 * l
    grid = np.array([[x, y, 0.0] for y in range(4) for x in range(4)]) * spacing
    model = magnetic_dipole_array([0.05] * n, [l] * n, [0.1] * n, grid)
    q = np.tile(E1, (n, 1))
    q[15] = [0.3536, 0.3536, -0.8660]
    w = np.zeros((n, 3))
    w[0] = [0.0, 0.5, 0.0]
    return PresetScenario(
        "dipole16",
        model,
        _clean_state(q, w),
        1e-3,
        5.0,
        notes="duration and step size are not published for this system; "
        "h=1e-3 and T=5 are this package's choices",
    )


def _lj_preset():
    n = 642
    q = fibonacci_sphere(n)
    # sigma from the mean nearest-neighbor chord distance so that the net
    # force between neighboring molecules is close to zero
    dot = q @ q.T
    np.fill_diagonal(dot, -1.0)
    nn = np.sqrt(2.0 - 2.0 * np.max(dot, axis=1))
    sigma = float(np.mean(nn)) / 2.0 ** (1.0 / 6.0)
    model = lennard_jones_sphere(np.ones(n), 0.01, sigma)
    # two vortices with centers 30 degrees apart; Gaussian angular profiles
    c1 = E3
    c2 = rotation_about(E1, np.deg2rad(30.0)) @ E3
    strength = (4.0, -4.0)
    width = 0.4  # radians
    w = np.zeros((n, 3))
    for c, a in zip((c1, c2), strength):
        ang = np.arccos(np.clip(q @ c, -1.0, 1.0))
        w += a * np.exp(-((ang / width) ** 2))[:, None] * c[None, :]
    w = project_tangent(q, w)
    return PresetScenario(
        "lj642-5s",
        model,
        SystemState(q, w, 0.0),
        0.005,
        5.0,
        notes="initial placement (Fibonacci sphere), sigma "
        f"({sigma:.6f}), and the two-vortex velocity field are this "
        "package's deterministic constructions; the published run "
        "states them only qualitatively",
    )


_PRESETS = {
    "dsp-100s": _dsp_preset,
    "nbody3-10s": _nbody_preset,
    "springs4": _springs_preset,
    "rod10-3s": _rod_preset,
    "dipole16": _dipole_preset,
    "lj642-5s": _lj_preset,
}

PRESET_NAMES = tuple(sorted(_PRESETS))


def load_preset(name: str) -> PresetScenario:
    """Build a preset scenario by name; raises UnknownPreset otherwise."""
    try:
        factory = _PRESETS[name]
    except KeyError:
        raise UnknownPreset(
            f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}"
        ) from None
    return factory()
