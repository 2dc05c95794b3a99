import math

import numpy as np
import pytest
from numpy.polynomial.hermite import hermval

from sdlab import kernels
from sdlab.errors import ConvergenceError

BACKENDS = ["python"] + (["cython"] if kernels.compiled_available() else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return kernels.get_backend(request.param)


def random_density(rng, n):
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    a = x @ x.conj().T
    return a / np.trace(a).real


@pytest.mark.parametrize("n", [1, 2, 3, 8, 24])
def test_jacobi_reconstructs(backend, n):
    rng = np.random.default_rng(n)
    a = random_density(rng, n)
    w, v, sweeps = backend.jacobi_eigh(a, 1e-15, 60)
    assert sweeps >= 0
    assert np.all(np.diff(w) >= 0)
    assert np.abs(v @ np.diag(w) @ v.conj().T - a).max() <= 1e-10
    assert np.abs(v.conj().T @ v - np.eye(n)).max() <= 1e-12


def test_jacobi_matches_lapack(backend):
    rng = np.random.default_rng(7)
    a = random_density(rng, 16)
    w, _, _ = backend.jacobi_eigh(a, 1e-15, 60)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(a), atol=1e-13)


def test_jacobi_degenerate_and_diagonal(backend):
    a = np.diag([0.5, 0.25, 0.25, 0.0]).astype(complex)
    w, v, sweeps = backend.jacobi_eigh(a, 1e-15, 60)
    assert sweeps == 0
    np.testing.assert_array_equal(w, [0.0, 0.25, 0.25, 0.5])
    u = np.full((3, 3), 1 / 3, dtype=complex)  # rank one, eigenvalue 1
    w, _, _ = backend.jacobi_eigh(u, 1e-15, 60)
    np.testing.assert_allclose(w, [0, 0, 1], atol=1e-15)


def test_jacobi_nonconvergence_raises(monkeypatch):
    rng = np.random.default_rng(3)
    with pytest.raises(ConvergenceError):
        kernels.jacobi_eigh(random_density(rng, 12), max_sweeps=1)


def test_hermite_functions_against_polynomials(backend):
    x = np.linspace(-10, 10, 41)
    phi = backend.hermite_functions(60, x)
    for n in (0, 1, 2, 5, 17, 40, 60):
        c = np.zeros(n + 1)
        c[n] = 1.0
        # log-space normalization keeps 2^n n! finite
        lognorm = 0.5 * (n * math.log(2) + math.lgamma(n + 1) + 0.5 * math.log(math.pi))
        ref = hermval(x, c) * np.exp(-0.5 * x * x - lognorm)
        np.testing.assert_allclose(phi[n], ref, rtol=1e-9, atol=1e-14)


def test_hermite_finite_at_edges(backend):
    phi = backend.hermite_functions(60, np.array([-10.0, 10.0]))
    assert np.all(np.isfinite(phi))


def test_rk4_free_propagation(backend):
    # V = 0: psi = cos(k x) from (1, 0)
    k = 2.5
    y, dy = backend.rk4_shoot(k * k, 0.0, 1.0, 0.0, 4096)
    assert abs(y - math.cos(k * math.pi)) < 1e-10
    assert abs(dy + k * math.sin(k * math.pi)) < 1e-9


def test_rdm_upper_matches_direct_sum(backend):
    rng = np.random.default_rng(11)
    s = rng.normal(size=(6, 20)) + 1j * rng.normal(size=(6, 20))
    w = rng.random(20)
    rho = backend.rdm_upper(s, w)
    ref = np.einsum("j,aj,bj->ab", w, s, s.conj())
    np.testing.assert_allclose(rho, ref, atol=1e-12)
    assert np.array_equal(rho, rho.conj().T)


@pytest.mark.skipif(not kernels.compiled_available(), reason="extension not built")
def test_backends_agree():
    py, cy = kernels.get_backend("python"), kernels.get_backend("cython")
    rng = np.random.default_rng(5)
    x = rng.uniform(-8, 8, 100)
    np.testing.assert_allclose(cy.hermite_functions(40, x), py.hermite_functions(40, x),
                               rtol=1e-13, atol=1e-300)
    assert cy.rk4_shoot(5.4, 3.0, 1.0, 0.0, 4096) == pytest.approx(
        py.rk4_shoot(5.4, 3.0, 1.0, 0.0, 4096), rel=1e-12)
    s = rng.normal(size=(9, 32)) + 1j * rng.normal(size=(9, 32))
    w = rng.random(32)
    np.testing.assert_allclose(cy.rdm_upper(s, w), py.rdm_upper(s, w), atol=1e-13)
    a = random_density(rng, 10)
    np.testing.assert_allclose(cy.jacobi_eigh(a, 1e-15, 60)[0], py.jacobi_eigh(a, 1e-15, 60)[0],
                               atol=1e-14)


def test_backend_selection():
    assert kernels.BACKEND in ("cython", "python")
    assert kernels.get_backend("python").__name__.endswith("_fallback")
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")
