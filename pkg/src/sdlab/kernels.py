"""Backend selection for the numerical kernels.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy implementations in ``_fallback`` are used. Setting the environment
variable ``SDLAB_BACKEND=python`` forces the fallback.
"""
import os

from . import _fallback
from .errors import ConvergenceError

_compiled = None
if os.environ.get("SDLAB_BACKEND", "").lower() != "python":
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

_impl = _compiled if _compiled is not None else _fallback
BACKEND = "cython" if _compiled is not None else "python"


def compiled_available():
    return _compiled is not None


def get_backend(name=None):
    """Return the kernel module for ``name`` ("cython", "python" or None)."""
    if name is None:
        return _impl
    if name == "python":
        return _fallback
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled sdlab._kernels extension is not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def hermite_functions(nmax, x):
    return _impl.hermite_functions(int(nmax), x)


def rk4_shoot(energy, v0, psi0, dpsi0, nsteps):
    if nsteps <= 0 or nsteps % 2:
        raise ValueError("nsteps must be a positive even integer")
    return _impl.rk4_shoot(float(energy), float(v0), float(psi0), float(dpsi0), int(nsteps))


def rdm_upper(samples, weights):
    return _impl.rdm_upper(samples, weights)


def jacobi_eigh(a, tol=1e-15, max_sweeps=60):
    """Hermitian eigendecomposition by cyclic Jacobi; ascending eigenvalues."""
    w, v, sweeps = _impl.jacobi_eigh(a, tol, max_sweeps)
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")
    return w, v
