import numpy as np
import pytest
from hypothesis import given, strategies as st

from s2dyn.errors import GaugeViolation
from s2dyn.geometry import (
    cayley,
    cayley_rotate,
    check_unit,
    cross_rows,
    hat,
    hat_batch,
    project_tangent,
    renormalize,
    rotation_about,
)

E1, E2, E3 = np.eye(3)

vec3 = st.lists(
    st.floats(-10.0, 10.0, allow_nan=False, allow_infinity=False),
    min_size=3, max_size=3,
).map(np.array)


def test_hat_basis():
    assert np.allclose(hat(E1) @ E2, E3)


def test_hat_annihilates_self():
    a = np.array([1.0, 2.0, 3.0])
    assert np.allclose(hat(a) @ a, 0.0)


def test_hat_cross_product_value():
    # direct cross-product evaluation
    assert np.allclose(hat([1, 2, 3]) @ np.array([4.0, 5.0, 6.0]), [-3.0, 6.0, -3.0])


@given(vec3, vec3)
def test_hat_matches_cross(a, b):
    assert np.allclose(hat(a) @ b, np.cross(a, b), atol=1e-9)
    assert np.allclose(hat(a) + hat(a).T, 0.0)


def test_hat_batch_matches_hat(rng):
    q = rng.normal(size=(5, 3))
    stacked = hat_batch(q)
    for i in range(5):
        assert np.array_equal(stacked[i], hat(q[i]))


def test_cross_rows_matches_numpy(rng):
    a = rng.normal(size=(7, 3))
    b = rng.normal(size=(7, 3))
    assert np.allclose(cross_rows(a, b), np.cross(a, b), atol=0.0)


def test_check_unit_accepts_and_rejects():
    check_unit(np.array([[1.0, 0.0, 0.0]]))
    with pytest.raises(ValueError):
        check_unit(np.array([[1.0, 1.0, 0.0]]))
    with pytest.raises(ValueError):
        check_unit(np.array([[np.nan, 0.0, 0.0]]))


def test_cayley_zero_is_identity():
    assert np.allclose(cayley(np.zeros(3)), np.eye(3))


def test_cayley_matches_matrix_inverse_oracle():
    # (I + hat f)(I - hat f)^-1 computed by explicit inversion
    f = np.array([0.3, -0.1, 0.2])
    expected = (np.eye(3) + hat(f)) @ np.linalg.inv(np.eye(3) - hat(f))
    assert np.max(np.abs(cayley(f) - expected)) <= 1e-14


def test_cayley_trace_gives_rotation_angle():
    # trace R = 1 + 2 cos(angle), angle = 2 atan |f|
    f = np.array([0.0, 0.0, 1.0])
    angle = 2.0 * np.arctan(1.0)
    assert np.isclose(np.trace(cayley(f)), 1.0 + 2.0 * np.cos(angle))


@given(vec3)
def test_cayley_is_rotation(f):
    R = cayley(f)
    assert np.max(np.abs(R.T @ R - np.eye(3))) <= 1e-12
    assert np.linalg.det(R) > 0.0


def test_cayley_rotate_zero_fixes_q():
    q = renormalize(np.array([1.0, 2.0, 2.0]))
    assert np.allclose(cayley_rotate(np.zeros(3), q), q)


def test_cayley_rotate_quarter_turn():
    # f = e3 rotates e1 to e2: ((1-1) e1 + 2 e3 x e1) / 2
    assert np.allclose(cayley_rotate(E3, E1), E2)


def test_cayley_rotate_matches_full_rotation(rng):
    for _ in range(20):
        q = renormalize(rng.normal(size=3))
        f = project_tangent(q, rng.normal(size=3))
        assert np.max(np.abs(cayley_rotate(f, q) - cayley(f) @ q)) <= 1e-13


def test_cayley_rotate_preserves_unit_norm(rng):
    q = renormalize(rng.normal(size=(50, 3)))
    f = project_tangent(q, 2.0 * rng.normal(size=(50, 3)))
    out = cayley_rotate(f, q)
    assert np.max(np.abs(np.einsum("ij,ij->i", out, out) - 1.0)) <= 1e-14


def test_cayley_rotate_rejects_gauge_violation():
    with pytest.raises(GaugeViolation):
        cayley_rotate(E1, E1)


def test_project_tangent_examples():
    assert np.allclose(project_tangent(E3, E3), 0.0)
    assert np.allclose(project_tangent(E3, np.array([1.0, 1.0, 1.0])), [1.0, 1.0, 0.0])


def test_project_tangent_double_cross_identity(rng):
    for _ in range(20):
        q = renormalize(rng.normal(size=3))
        v = rng.normal(size=3)
        assert np.max(np.abs(project_tangent(q, v) + np.cross(q, np.cross(q, v)))) <= 1e-14


@given(vec3, vec3)
def test_project_tangent_orthogonal_and_idempotent(qraw, v):
    if np.linalg.norm(qraw) < 1e-3:
        return
    q = renormalize(qraw)
    p = project_tangent(q, v)
    assert abs(p @ q) <= 1e-12 * max(1.0, np.linalg.norm(v))
    assert np.max(np.abs(project_tangent(q, p) - p)) <= 1e-13 * max(1.0, np.linalg.norm(v))


def test_rotation_about_matches_cayley_axis_angle():
    axis = renormalize(np.array([1.0, 1.0, 0.0]))
    t = 0.7
    # Cayley vector tan(t/2) axis realizes the same rotation
    assert np.allclose(rotation_about(axis, t), cayley(np.tan(t / 2.0) * axis))
