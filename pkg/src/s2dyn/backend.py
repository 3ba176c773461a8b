"""Kernel backend selection.

The pairwise-potential kernels exist twice: a Cython extension
(``s2dyn._fastops``) and a vectorized numpy fallback
(``s2dyn._pairops_np``). The compiled one is preferred when importable;
set the environment variable ``S2DYN_PURE_PYTHON=1`` to force the
fallback (used by the backend-agreement tests and the benchmark).
"""

import os

from . import _pairops_np

if os.environ.get("S2DYN_PURE_PYTHON"):
    _impl = _pairops_np
    BACKEND = "numpy"
else:
    try:
        from . import _fastops as _impl

        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - build-environment dependent
        _impl = _pairops_np
        BACKEND = "numpy"


def sphere_gravity_energy_grad(q, gamma):
    return _impl.sphere_gravity_energy_grad(q, gamma)


def lj_energy_grad(q, epsilon, sigma):
    return _impl.lj_energy_grad(q, epsilon, sigma)
