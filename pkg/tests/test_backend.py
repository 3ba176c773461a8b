import numpy as np
import pytest

from s2dyn import _pairops_np, backend
from s2dyn.errors import PotentialSingular
from s2dyn.geometry import renormalize
from s2dyn.zoo import fibonacci_sphere

fastops = pytest.importorskip("s2dyn._fastops")


def spread_points(rng, n):
    """Well-separated sphere points: jittered near-uniform layout."""
    return renormalize(fibonacci_sphere(n) + 0.01 * rng.normal(size=(n, 3)))


def test_backend_selection_reports_mode():
    assert backend.BACKEND in ("compiled", "numpy")


@pytest.mark.parametrize("gamma", [1.0, 0.3])
def test_gravity_kernels_agree(gamma, rng):
    for n in (2, 5, 40):
        q = spread_points(rng, n)
        e_c, g_c = fastops.sphere_gravity_energy_grad(q, gamma)
        e_n, g_n = _pairops_np.sphere_gravity_energy_grad(q, gamma)
        scale = max(1.0, abs(e_n))
        assert abs(e_c - e_n) <= 1e-11 * scale
        assert np.max(np.abs(g_c - g_n)) <= 1e-11 * max(1.0, np.max(np.abs(g_n)))


def test_lj_kernels_agree(rng):
    for n in (2, 5, 40):
        q = spread_points(rng, n)
        e_c, g_c = fastops.lj_energy_grad(q, 0.01, 0.4)
        e_n, g_n = _pairops_np.lj_energy_grad(q, 0.01, 0.4)
        assert abs(e_c - e_n) <= 1e-11 * max(1.0, abs(e_n))
        assert np.max(np.abs(g_c - g_n)) <= 1e-11 * max(1.0, np.max(np.abs(g_n)))


def test_gravity_singularity_raised_by_both():
    q = np.array([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    with pytest.raises(PotentialSingular):
        fastops.sphere_gravity_energy_grad(q, 1.0)
    with pytest.raises(PotentialSingular):
        _pairops_np.sphere_gravity_energy_grad(q, 1.0)


def test_lj_singularity_raised_by_both():
    q = np.array([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    with pytest.raises(PotentialSingular):
        fastops.lj_energy_grad(q, 0.01, 0.4)
    with pytest.raises(PotentialSingular):
        _pairops_np.lj_energy_grad(q, 0.01, 0.4)


def test_pure_python_env_forces_fallback(tmp_path):
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c", "from s2dyn import backend; print(backend.BACKEND)"],
        capture_output=True, text=True, env={"S2DYN_PURE_PYTHON": "1", "PATH": "/usr/bin:/bin"},
    )
    assert out.stdout.strip() == "numpy"
