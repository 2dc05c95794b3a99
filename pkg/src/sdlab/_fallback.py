"""Pure-Python (numpy) kernels.

Same signatures and semantics as the compiled ``_kernels`` module. Used when
the extension is not built or when ``SDLAB_BACKEND=python``.
"""
import math

import numpy as np

HALF_PI = 0.5 * math.pi


def hermite_functions(nmax, x):
    """Normalized Hermite functions phi_0..phi_nmax at points ``x``.

    Uses the three-term recurrence with the normalization folded in,

        phi_{n+1} = sqrt(2/(n+1)) x phi_n - sqrt(n/(n+1)) phi_{n-1},

    so nothing overflows for n <= 60, |x| <= 10. Sign convention: positive
    leading coefficient (physicists' Hermite polynomials).
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty((nmax + 1, x.size), dtype=np.float64)
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * x * x)
    if nmax >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for n in range(1, nmax):
        out[n + 1] = (math.sqrt(2.0 / (n + 1)) * x * out[n]
                      - math.sqrt(n / (n + 1.0)) * out[n - 1])
    return out


def rk4_shoot(energy, v0, psi0, dpsi0, nsteps):
    """Integrate -psi'' + V psi = E psi over [0, pi] with classical RK4.

    V = v0 on [0, pi/2) and 0 on [pi/2, pi]. ``nsteps`` must be even so a
    step boundary falls on the discontinuity. Returns (psi(pi), psi'(pi)).
    """
    h = math.pi / nsteps
    half = nsteps // 2
    y, dy = float(psi0), float(dpsi0)
    for k in range(nsteps):
        q = (v0 if k < half else 0.0) - energy
        k1y, k1d = dy, q * y
        k2y, k2d = dy + 0.5 * h * k1d, q * (y + 0.5 * h * k1y)
        k3y, k3d = dy + 0.5 * h * k2d, q * (y + 0.5 * h * k2y)
        k4y, k4d = dy + h * k3d, q * (y + h * k3y)
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
    return y, dy


def rdm_upper(samples, weights):
    """rho[y, y'] = sum_j w_j s[y, j] conj(s[y', j]), Hermitian by construction.

    Only the upper triangle is computed; the lower triangle is its mirror
    and the diagonal is real.
    """
    samples = np.ascontiguousarray(samples, dtype=np.complex128)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    nb = samples.shape[0]
    rho = np.zeros((nb, nb), dtype=np.complex128)
    ws = samples * weights
    for y in range(nb):
        rho[y, y:] = samples[y:].conj() @ ws[y]
    iu = np.triu_indices(nb, 1)
    rho[iu[1], iu[0]] = rho[iu].conj()
    rho[np.diag_indices(nb)] = np.real(np.diag(rho))
    return rho


def jacobi_eigh(a, tol=1e-15, max_sweeps=60):
    """Cyclic Jacobi eigensolver for a complex Hermitian matrix.

    Returns ``(w, v, sweeps)`` with ascending eigenvalues ``w``, unitary
    ``v`` (columns are eigenvectors) and the number of sweeps used; ``sweeps``
    is -1 if the off-diagonal norm did not drop below ``tol * ||a||_F``.
    """
    a = np.array(a, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    fro = float(np.linalg.norm(a))
    if n < 2 or fro == 0.0:
        w = np.real(np.diag(a)).copy()
        order = np.argsort(w, kind="stable")
        return w[order], v[:, order], 0
    skip = 1e-3 * tol * fro
    iu = np.triu_indices(n, 1)
    sweeps = -1
    for sweep in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.abs(a[iu]) ** 2)))
        if off <= tol * fro:
            sweeps = sweep
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = abs(apq)
                if g <= skip:
                    continue
                ph = apq / g
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * g)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                sph = s * ph
                # columns: A U
                colp = a[:, p].copy()
                a[:, p] = c * colp - sph.conjugate() * a[:, q]
                a[:, q] = sph * colp + c * a[:, q]
                # rows: U^H (A U)
                rowp = a[p, :].copy()
                a[p, :] = c * rowp - sph * a[q, :]
                a[q, :] = sph.conjugate() * rowp + c * a[q, :]
                a[p, p] = app - t * g
                a[q, q] = aqq + t * g
                a[p, q] = 0.0
                a[q, p] = 0.0
                colp = v[:, p].copy()
                v[:, p] = c * colp - sph.conjugate() * v[:, q]
                v[:, q] = sph * colp + c * v[:, q]
    else:
        off = math.sqrt(float(np.sum(np.abs(a[iu]) ** 2)))
        if off <= tol * fro:
            sweeps = max_sweeps
    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order], sweeps
