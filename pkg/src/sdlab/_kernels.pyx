# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Mirrors ``sdlab._fallback`` exactly (same signatures)."""
import numpy as np

cimport numpy as cnp
from libc.math cimport exp, sqrt, fabs, copysign, M_PI

cnp.import_array()


def hermite_functions(int nmax, x):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t m = xv.shape[0]
    out = np.empty((nmax + 1, m), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i
    cdef int n
    cdef double c0 = M_PI ** -0.25
    cdef double xi, a, b
    with nogil:
        for i in range(m):
            xi = xv[i]
            o[0, i] = c0 * exp(-0.5 * xi * xi)
            if nmax >= 1:
                o[1, i] = sqrt(2.0) * xi * o[0, i]
        for n in range(1, nmax):
            a = sqrt(2.0 / (n + 1))
            b = sqrt(n / (n + 1.0))
            for i in range(m):
                o[n + 1, i] = a * xv[i] * o[n, i] - b * o[n - 1, i]
    return out


def rk4_shoot(double energy, double v0, double psi0, double dpsi0, int nsteps):
    cdef double h = M_PI / nsteps
    cdef int half = nsteps // 2
    cdef double y = psi0, dy = dpsi0, q
    cdef double k1y, k1d, k2y, k2d, k3y, k3d, k4y, k4d
    cdef int k
    with nogil:
        for k in range(nsteps):
            q = (v0 if k < half else 0.0) - energy
            k1y = dy
            k1d = q * y
            k2y = dy + 0.5 * h * k1d
            k2d = q * (y + 0.5 * h * k1y)
            k3y = dy + 0.5 * h * k2d
            k3d = q * (y + 0.5 * h * k2y)
            k4y = dy + h * k3d
            k4d = q * (y + h * k3y)
            y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
            dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
    return y, dy


def rdm_upper(samples, weights):
    cdef const double complex[:, ::1] s = np.ascontiguousarray(samples, dtype=np.complex128)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t nb = s.shape[0], nz = s.shape[1]
    rho = np.zeros((nb, nb), dtype=np.complex128)
    cdef double complex[:, ::1] r = rho
    cdef Py_ssize_t y, yp, j
    cdef double acc_re, acc_im, ar, ai, br, bi
    with nogil:
        for y in range(nb):
            for yp in range(y, nb):
                acc_re = 0.0
                acc_im = 0.0
                for j in range(nz):
                    ar = s[y, j].real
                    ai = s[y, j].imag
                    br = s[yp, j].real
                    bi = s[yp, j].imag
                    # a * conj(b)
                    acc_re += w[j] * (ar * br + ai * bi)
                    acc_im += w[j] * (ai * br - ar * bi)
                if yp == y:
                    r[y, y] = acc_re
                else:
                    r[y, yp] = acc_re + 1j * acc_im
                    r[yp, y] = acc_re - 1j * acc_im
    return rho


cdef inline double _cabs(double complex z) nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


def jacobi_eigh(a, double tol=1e-15, int max_sweeps=60):
    arr = np.array(a, dtype=np.complex128, order="C", copy=True)
    cdef double complex[:, ::1] A = arr
    cdef Py_ssize_t n = A.shape[0]
    vec = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] V = vec
    cdef double fro = 0.0, off, skip, g, theta, t, c, s, app, aqq
    cdef double complex ph, sph, sphc, xp, xq
    cdef Py_ssize_t i, j, p, q, k
    cdef int sweep, sweeps = -1
    for i in range(n):
        for j in range(n):
            fro += A[i, j].real * A[i, j].real + A[i, j].imag * A[i, j].imag
    fro = sqrt(fro)
    if n < 2 or fro == 0.0:
        w = np.real(np.diag(arr)).copy()
        order = np.argsort(w, kind="stable")
        return w[order], vec[:, order], 0
    skip = 1e-3 * tol * fro
    with nogil:
        for sweep in range(max_sweeps + 1):
            off = 0.0
            for p in range(n - 1):
                for q in range(p + 1, n):
                    off += A[p, q].real * A[p, q].real + A[p, q].imag * A[p, q].imag
            off = sqrt(off)
            if off <= tol * fro:
                sweeps = sweep
                break
            if sweep == max_sweeps:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    g = _cabs(A[p, q])
                    if g <= skip:
                        continue
                    ph = A[p, q] / g
                    app = A[p, p].real
                    aqq = A[q, q].real
                    theta = (aqq - app) / (2.0 * g)
                    t = copysign(1.0, theta) / (fabs(theta) + sqrt(theta * theta + 1.0))
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    sph = s * ph
                    sphc = sph.conjugate()
                    for k in range(n):
                        xp = A[k, p]
                        xq = A[k, q]
                        A[k, p] = c * xp - sphc * xq
                        A[k, q] = sph * xp + c * xq
                    for k in range(n):
                        xp = A[p, k]
                        xq = A[q, k]
                        A[p, k] = c * xp - sph * xq
                        A[q, k] = sphc * xp + c * xq
                    A[p, p] = app - t * g
                    A[q, q] = aqq + t * g
                    A[p, q] = 0.0
                    A[q, p] = 0.0
                    for k in range(n):
                        xp = V[k, p]
                        xq = V[k, q]
                        V[k, p] = c * xp - sphc * xq
                        V[k, q] = sph * xp + c * xq
    w = np.real(np.diag(arr)).copy()
    order = np.argsort(w, kind="stable")
    return w[order], vec[:, order], sweeps
