import numpy as np
import pytest

from conftest import random_state
from s2dyn.continuous import rk45_step
from s2dyn.diagnostics import (
    DiagnosticSample,
    conjugate_momenta,
    drift_statistics,
    momentum_about_axis,
    sample,
    total_energy,
)
from s2dyn.geometry import rotation_about
from s2dyn.models import SystemState
from s2dyn.zoo import double_spherical_pendulum, load_preset
from test_continuous import SinglePendulum

E1 = np.array([1.0, 0.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])


class TestTotalEnergy:
    def test_rest_state_gives_potential_only(self):
        model = double_spherical_pendulum()
        state = SystemState([E3, E3], np.zeros((2, 3)))
        assert total_energy(model, state) == pytest.approx(model.potential(state.q))

    def test_dense_assembly_oracle(self):
        preset = load_preset("dsp-100s")
        state = preset.initial
        v = state.qdot().reshape(-1)
        M = preset.model.inertia.matrix
        expected = 0.5 * v @ np.kron(M, np.eye(3)) @ v + preset.model.potential(state.q)
        assert abs(total_energy(preset.model, state) - expected) <= 1e-12

    def test_conserved_along_tight_reference_flow(self):
        model = SinglePendulum()
        state = SystemState([E1], [[0.0, 0.0, 0.5]])
        e0 = total_energy(model, state)
        h = 1e-3
        while state.t < 1.0 - 1e-12:
            state, h = rk45_step(model, state, min(h, 1.0 - state.t), tol=1e-12)
        assert abs(total_energy(model, state) - e0) <= 1e-8


class TestConjugateMomenta:
    def test_zero_velocity(self, rng):
        model = double_spherical_pendulum()
        state = random_state(rng, 2, w_scale=0.0)
        assert np.allclose(conjugate_momenta(model, state), 0.0)

    def test_single_sphere_reduction(self):
        model = SinglePendulum(m=2.0, l=1.5)
        state = SystemState([E1], [[0.0, 0.0, 0.7]])
        p = conjugate_momenta(model, state)
        assert np.allclose(p, 2.0 * 1.5 * 1.5 * state.qdot())

    def test_tangent_to_round_off(self, rng):
        model = double_spherical_pendulum()
        for _ in range(10):
            state = random_state(rng, 2)
            p = conjugate_momenta(model, state)
            assert np.max(np.abs(np.einsum("ij,ij->i", state.q, p))) <= 1e-12

    def test_pairing_with_tangent_variations(self, rng):
        # p_i . dq = sum_j M_ij qdot_j . dq for any tangent dq at q_i
        from s2dyn.geometry import project_tangent

        model = double_spherical_pendulum()
        state = random_state(rng, 2)
        p = conjugate_momenta(model, state)
        M = model.inertia.matrix
        qdot = state.qdot()
        for i in range(2):
            dq = project_tangent(state.q[i], rng.normal(size=3))
            lhs = float(p[i] @ dq)
            rhs = float(sum(M[i, j] * (qdot[j] @ dq) for j in range(2)))
            assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(rhs))


class TestMomentumAboutAxis:
    def test_zero_velocity(self, rng):
        model = double_spherical_pendulum()
        state = random_state(rng, 2, w_scale=0.0)
        assert momentum_about_axis(model, state, E3) == 0.0

    def test_noether_along_tight_flow(self):
        model = SinglePendulum()
        state = SystemState([E1], [[0.0, 0.0, 0.5]])
        j0 = momentum_about_axis(model, state, E3)
        h = 1e-3
        while state.t < 1.0 - 1e-12:
            state, h = rk45_step(model, state, min(h, 1.0 - state.t), tol=1e-12)
        assert abs(momentum_about_axis(model, state, E3) - j0) <= 1e-9

    def test_equivariance_under_axis_rotation(self, rng):
        model = double_spherical_pendulum()
        state = random_state(rng, 2)
        j0 = momentum_about_axis(model, state, E3)
        R = rotation_about(E3, 0.83)
        rotated = SystemState.unchecked(state.q @ R.T, state.w @ R.T, 0.0)
        assert abs(momentum_about_axis(model, rotated, E3) - j0) <= 1e-12


class TestDriftStatistics:
    def test_constant_series(self):
        samples = [DiagnosticSample(t, 5.0, 0.0, 0.0) for t in (0.0, 1.0, 2.0)]
        stats = drift_statistics(samples)
        assert stats.mean_abs_energy_dev == 0.0
        assert abs(stats.linear_slope) <= 1e-14

    def test_linear_series_slope(self):
        c = 0.125
        samples = [DiagnosticSample(t, 1.0 + c * t, 0.0, 0.0) for t in np.linspace(0, 3, 7)]
        assert drift_statistics(samples).linear_slope == pytest.approx(c, abs=1e-12)

    def test_requires_two_samples(self):
        with pytest.raises(ValueError):
            drift_statistics([DiagnosticSample(0.0, 1.0, 0.0, 0.0)])


def test_sample_records_momentum_only_when_axis_given(rng):
    model = double_spherical_pendulum()
    state = random_state(rng, 2)
    assert sample(model, state).momentum_e3 is None
    with_axis = sample(model, state, E3)
    assert with_axis.momentum_e3 == pytest.approx(momentum_about_axis(model, state, E3))
    assert with_axis.unit_error >= 0.0
    assert with_axis.tangency_error >= 0.0
