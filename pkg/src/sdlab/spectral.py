"""Eigenbases for the three 1D models and projection onto them.

Units: hbar = 1. The ring models use the Hamiltonian ``-d^2/dx^2 + V`` so the
free ring has ``E_n = n^2``; the oscillator uses ``-1/2 d^2/dx^2 + x^2/2`` so
``E_n = n + 1/2``. All eigenfunctions are real and parity-definite, with the
phase fixed by ``psi(0) > 0`` (symmetric) or ``psi'(0) > 0`` (antisymmetric).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import (
    ConfigError,
    ConvergenceError,
    EmptySpectrumError,
    IncompleteBasisError,
    NoSuchStateError,
    NormalizationError,
    UnsupportedOrderError,
)
from .quadrature import composite_rule

FREE = "free"
RING = "ring"
HO = "ho"

HO_MAX_ORDER = 60
HO_DEFAULT_HALF_WIDTH = 6.0

SCAN_STEP = 0.01
BISECT_TOL = 1e-10
BISECT_MAX_ITER = 200
LINEAR_WINDOW = 1e-9
RK4_STEPS = 4096

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class PotentialModel:
    """Which 1D system: free ring, piecewise-constant ring, or oscillator.

    ``v0`` is the barrier height on ``[-pi/2, pi/2)`` (mod 2 pi) for the ring
    models; ``half_width`` is the truncation ``L`` of the oscillator domain
    ``[-L, L]``.
    """

    kind: str
    v0: float = 0.0
    half_width: float = HO_DEFAULT_HALF_WIDTH

    def __post_init__(self):
        if self.kind not in (FREE, RING, HO):
            raise ConfigError(f"unknown model kind {self.kind!r}")
        if self.kind == FREE and self.v0 != 0.0:
            raise ConfigError("free ring has no barrier; use kind='ring' for v0 > 0")
        if not (self.v0 >= 0.0 and math.isfinite(self.v0)):
            raise ConfigError(f"barrier height must be finite and >= 0, got {self.v0}")
        if self.kind == HO and not self.half_width > 0.0:
            raise ConfigError("oscillator half width must be positive")

    @classmethod
    def free_ring(cls):
        return cls(FREE)

    @classmethod
    def piecewise_ring(cls, v0):
        return cls(RING, float(v0))

    @classmethod
    def harmonic(cls, half_width=HO_DEFAULT_HALF_WIDTH):
        return cls(HO, half_width=float(half_width))

    @property
    def is_ring(self):
        return self.kind != HO

    @property
    def kinetic(self):
        """Prefactor of -d^2/dx^2 in the Hamiltonian."""
        return 1.0 if self.is_ring else 0.5

    @property
    def domain(self):
        if self.is_ring:
            return (-math.pi, math.pi)
        return (-self.half_width, self.half_width)

    def potential(self, x):
        x = np.asarray(x, dtype=np.float64)
        if self.kind == HO:
            return 0.5 * x * x
        xw = wrap_ring(x)
        return np.where((xw >= -HALF_PI) & (xw < HALF_PI), self.v0, 0.0)

    def describe(self):
        if self.kind == HO:
            return f"harmonic oscillator, L={self.half_width:g}"
        if self.kind == FREE:
            return "free ring"
        return f"piecewise ring, V0={self.v0:g}"


def wrap_ring(x):
    """Map positions onto [-pi, pi)."""
    return np.mod(np.asarray(x, dtype=np.float64) + math.pi, TWO_PI) - math.pi


# -- ring solutions ---------------------------------------------------------

def _transfer(energy, v, h):
    """Entries of the 2x2 propagator of (psi, psi') across length ``h``.

    Solves psi'' = (v - E) psi. Broadcasts over ``energy`` and ``h``.
    """
    energy = np.asarray(energy, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    d = energy - v
    a = np.sqrt(np.abs(d))
    ah = a * h
    osc = d > LINEAR_WINDOW
    grow = d < -LINEAR_WINDOW
    safe_a = np.where(osc | grow, a, 1.0)
    cos_, sin_ = np.cos(ah), np.sin(ah)
    # hyperbolic branch evaluated only where needed; avoids overflow warnings
    ch = np.where(grow, np.cosh(np.where(grow, ah, 0.0)), 1.0)
    sh = np.where(grow, np.sinh(np.where(grow, ah, 0.0)), 0.0)
    m11 = np.where(osc, cos_, np.where(grow, ch, 1.0))
    m12 = np.where(osc, sin_ / safe_a, np.where(grow, sh / safe_a, h))
    m21 = np.where(osc, -a * sin_, np.where(grow, a * sh, 0.0))
    return m11, m12, m21, m11


def _initial(parity):
    return (1.0, 0.0) if parity == "+" else (0.0, 1.0)


def _half_profile(energy, v0, parity, s):
    """(psi, psi') on s in [0, pi] for the unnormalized half-domain solution."""
    s = np.asarray(s, dtype=np.float64)
    y0, d0 = _initial(parity)
    inside = s < HALF_PI
    m11, m12, m21, m22 = _transfer(energy, v0, np.where(inside, s, HALF_PI))
    y = m11 * y0 + m12 * d0
    dy = m21 * y0 + m22 * d0
    n11, n12, n21, n22 = _transfer(energy, 0.0, np.where(inside, 0.0, s - HALF_PI))
    return n11 * y + n12 * dy, n21 * y + n22 * dy


def shooting_discriminant(v0, energy, parity, method="transfer", nsteps=RK4_STEPS):
    """Boundary mismatch at x = pi for the parity-reduced ring problem.

    Symmetric states start from (psi, psi') = (1, 0) at x = 0 and need
    psi'(pi) = 0; antisymmetric states start from (0, 1) and need psi(pi) = 0.
    ``method="rk4"`` integrates with a fixed RK4 step of pi/nsteps instead of
    the exact transfer matrices.
    """
    if method == "transfer":
        y, dy = _half_profile(energy, v0, parity, math.pi)
    elif method == "rk4":
        y0, d0 = _initial(parity)
        energies = np.atleast_1d(np.asarray(energy, dtype=np.float64))
        res = np.array([kernels.rk4_shoot(e, v0, y0, d0, nsteps) for e in energies])
        y, dy = res[:, 0], res[:, 1]
        if np.ndim(energy) == 0:
            y, dy = y[0], dy[0]
    else:
        raise ValueError(f"unknown method {method!r}")
    return dy if parity == "+" else y


def _bisect(f, lo, hi, flo):
    for _ in range(BISECT_MAX_ITER):
        if hi - lo < BISECT_TOL:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    raise ConvergenceError(
        f"bisection did not reach |dE| < {BISECT_TOL} in {BISECT_MAX_ITER} steps",
        bracket=(lo, hi),
    )


def _parity_roots(v0, parity, e_max, method="transfer"):
    grid = np.arange(0.0, e_max + SCAN_STEP, SCAN_STEP)
    if method == "transfer":
        d = shooting_discriminant(v0, grid, parity)
    else:
        d = shooting_discriminant(v0, grid, parity, method=method)

    def f(e):
        return float(shooting_discriminant(v0, e, parity, method=method))

    roots = []
    for i in range(len(grid) - 1):
        if d[i] == 0.0:
            roots.append(float(grid[i]))
        elif d[i] * d[i + 1] < 0.0:
            roots.append(_bisect(f, float(grid[i]), float(grid[i + 1]), float(d[i])))
    return [r for r in roots if r <= e_max]


class Level(NamedTuple):
    n: int
    parity: str
    energy: float


def _level_key(level):
    return (level.n, 0 if level.parity == "+" else 1)


def ring_spectrum(model, e_max, method="transfer"):
    """All ring eigenvalues up to ``e_max``, sorted by (n, parity).

    ``n`` counts states within a parity class: symmetric states are numbered
    from 0, antisymmetric from 1, so ``n`` is also the free-ring label.
    """
    if not model.is_ring:
        raise ConfigError("ring_spectrum needs a ring model")
    if not e_max > 0:
        raise ConfigError(f"e_max must be positive, got {e_max}")
    if model.v0 == 0.0:
        levels = [Level(0, "+", 0.0)]
        n = 1
        while n * n <= e_max:
            levels += [Level(n, "+", float(n * n)), Level(n, "-", float(n * n))]
            n += 1
    else:
        sym = _parity_roots(model.v0, "+", e_max, method)
        anti = _parity_roots(model.v0, "-", e_max, method)
        levels = [Level(i, "+", e) for i, e in enumerate(sym)]
        levels += [Level(i + 1, "-", e) for i, e in enumerate(anti)]
    if not levels:
        raise EmptySpectrumError(f"no eigenvalue below E_max={e_max} for {model.describe()}")
    return sorted(levels, key=_level_key)


# -- eigenstates ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EigenState:
    """One real stationary state; call it to evaluate psi(x)."""

    model: PotentialModel
    n: int
    parity: str
    energy: float
    scale: float = 1.0

    @property
    def label(self):
        return f"{self.n}{self.parity}"

    def __call__(self, x):
        return self.evaluate(x)[0]

    def derivative(self, x):
        return self.evaluate(x)[1]

    def evaluate(self, x):
        """Return (psi(x), psi'(x)) with the shape of ``x``."""
        x = np.asarray(x, dtype=np.float64)
        if self.model.kind == HO:
            flat = x.ravel()
            phi = kernels.hermite_functions(self.n + 1, flat)
            val = phi[self.n]
            der = -math.sqrt((self.n + 1) / 2.0) * phi[self.n + 1]
            if self.n > 0:
                der = der + math.sqrt(self.n / 2.0) * phi[self.n - 1]
            return (self.scale * val).reshape(x.shape), (self.scale * der).reshape(x.shape)
        xw = wrap_ring(x)
        y, dy = _half_profile(self.energy, self.model.v0, self.parity, np.abs(xw))
        sgn = np.where(xw < 0.0, -1.0, 1.0)
        if self.parity == "-":
            y = sgn * y
        else:
            dy = sgn * dy
        return self.scale * y, self.scale * dy


def ho_eigenstate(n, model=None, max_order=HO_MAX_ORDER):
    """Normalized oscillator eigenfunction u_n with E = n + 1/2."""
    if model is None:
        model = PotentialModel.harmonic()
    if model.kind != HO:
        raise ConfigError("ho_eigenstate needs the oscillator model")
    if not 0 <= n <= max_order:
        raise UnsupportedOrderError(f"oscillator order {n} outside 0..{max_order}")
    # recurrence gives positive leading coefficient; flip to psi(0)>0 / psi'(0)>0
    sign = -1.0 if (n // 2) % 2 else 1.0
    return EigenState(model, int(n), "+" if n % 2 == 0 else "-", n + 0.5, sign)


def ho_basis(n_max, model=None):
    return [ho_eigenstate(n, model) for n in range(n_max + 1)]


def _ring_norm(energy, v0, parity):
    x, w = composite_rule([0.0, HALF_PI, math.pi])
    y, _ = _half_profile(energy, v0, parity, x)
    return math.sqrt(2.0 * float(np.dot(w, y * y)))


def _ring_state(model, level):
    return EigenState(model, level.n, level.parity, level.energy,
                      1.0 / _ring_norm(level.energy, model.v0, level.parity))


def ring_basis(model, e_max):
    """Eigenstates for every level of :func:`ring_spectrum` up to ``e_max``."""
    return [_ring_state(model, lv) for lv in ring_spectrum(model, e_max)]


def ring_eigenstate(model, n, parity):
    if parity not in ("+", "-"):
        raise ConfigError(f"parity must be '+' or '-', got {parity!r}")
    if n < 0 or (n == 0 and parity == "-"):
        raise NoSuchStateError(f"no ring eigenstate ({n}, {parity})")
    # min-max: E_n(V0) <= n^2 + V0
    for lv in ring_spectrum(model, n * n + model.v0 + 1.0):
        if lv.n == n and lv.parity == parity:
            return _ring_state(model, lv)
    raise NoSuchStateError(f"ring eigenstate ({n}, {parity}) not found")


def basis(model, e_max=None, n_max=None):
    """Eigenbasis for ``model``: ring states up to ``e_max`` or HO states up to ``n_max``."""
    if model.is_ring:
        if e_max is None:
            raise ConfigError("ring basis needs e_max")
        return ring_basis(model, e_max)
    if n_max is None:
        raise ConfigError("oscillator basis needs n_max")
    return ho_basis(n_max, model)


def basis_matrix(states, x):
    """Real matrix of shape (len(states), x.size) with psi_j(x_i)."""
    x = np.asarray(x, dtype=np.float64).ravel()
    out = np.empty((len(states), x.size), dtype=np.float64)
    ho_rows = [i for i, s in enumerate(states) if s.model.kind == HO]
    if ho_rows:
        nmax = max(states[i].n for i in ho_rows)
        phi = kernels.hermite_functions(nmax, x)
        for i in ho_rows:
            out[i] = states[i].scale * phi[states[i].n]
    for i, s in enumerate(states):
        if s.model.kind != HO:
            out[i] = s(x)
    return out


# -- plane waves and superpositions ---------------------------------------------

@dataclass(frozen=True)
class PlaneWave:
    """Normalized ring plane wave e^{ikx} / sqrt(2 pi)."""

    k: int

    def __call__(self, x):
        return np.exp(1j * self.k * np.asarray(x, dtype=np.float64)) / math.sqrt(TWO_PI)


def plane_wave(k):
    if int(k) != k:
        raise ConfigError(f"plane waves on the ring need integer k, got {k}")
    return PlaneWave(int(k))


NORM_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class SpectralState:
    """Normalized superposition sum_n c_n psi_n over stored eigenstates.

    ``discarded_weight`` is the squared norm dropped by the threshold ``tau``
    and ``residual`` the norm of what the basis could not represent; both
    refer to the projection that produced the state (zero if built directly).
    """

    states: tuple
    coefficients: np.ndarray
    tau: float = 0.0
    discarded_weight: float = 0.0
    residual: float = 0.0
    kept_weight: float = 1.0
    _energies: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.complex128).copy()
        c.setflags(write=False)
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "coefficients", c)
        if len(self.states) == 0:
            raise ConfigError("a spectral state needs at least one component")
        if c.shape != (len(self.states),):
            raise ConfigError("one coefficient per basis state required")
        models = {s.model for s in self.states}
        if len(models) != 1:
            raise ConfigError("all basis states must belong to one model")
        norm2 = float(np.sum(np.abs(c) ** 2))
        if abs(norm2 - 1.0) > NORM_TOL:
            raise NormalizationError(f"sum |c_n|^2 = {norm2:.9g}, expected 1")
        if np.any(np.abs(c) < self.tau):
            raise ConfigError(f"stored coefficient below threshold tau={self.tau}")
        e = np.array([s.energy for s in self.states], dtype=np.float64)
        e.setflags(write=False)
        object.__setattr__(self, "_energies", e)

    @classmethod
    def from_coefficients(cls, states, coefficients, tau=0.0):
        """Drop |c| < tau, then renormalize."""
        c = np.asarray(coefficients, dtype=np.complex128)
        keep = np.abs(c) >= tau
        if not np.any(keep):
            raise ConfigError("every coefficient falls below the threshold")
        kept = [s for s, k in zip(states, keep) if k]
        ck = c[keep]
        norm = math.sqrt(float(np.sum(np.abs(ck) ** 2)))
        return cls(kept, ck / norm, tau=tau,
                   discarded_weight=float(np.sum(np.abs(c[~keep]) ** 2)) / norm ** 2)

    @property
    def model(self):
        return self.states[0].model

    @property
    def energies(self):
        return self._energies

    def sample(self, x):
        return basis_matrix(self.states, x)


def projection_rule(model):
    """Quadrature nodes covering one period (ring) or the truncated line."""
    lo, hi = model.domain
    if model.is_ring:
        return composite_rule([lo, -HALF_PI, HALF_PI, hi])
    return composite_rule([lo, hi])


def decompose(state, states, tau=1e-4, max_residual=1e-3):
    """Project the evaluator ``state`` onto ``states`` by quadrature.

    Coefficients below ``tau`` are dropped and the rest renormalized.
    Raises :class:`IncompleteBasisError` if the norm of the part of
    ``state`` outside the span exceeds ``max_residual``.
    """
    states = list(states)
    if not states:
        raise ConfigError("empty basis")
    model = states[0].model
    x, w = projection_rule(model)
    f = np.asarray(state(x), dtype=np.complex128)
    norm2 = float(np.dot(w, np.abs(f) ** 2))
    if abs(math.sqrt(norm2) - 1.0) > 1e-4:
        raise NormalizationError(f"input state has norm^2 {norm2:.9g}")
    p = basis_matrix(states, x)
    c = p @ (w * f)
    resid = f - c @ p
    residual = math.sqrt(float(np.dot(w, np.abs(resid) ** 2)))
    if residual > max_residual:
        top = max(s.energy for s in states)
        raise IncompleteBasisError(
            f"projection residual {residual:.3g} exceeds {max_residual:g}; "
            f"raise the basis cutoff (try E_max ~ {2.0 * top + 1.0:.4g})",
            residual=residual,
            suggested_emax=2.0 * top + 1.0,
        )
    keep = np.abs(c) >= tau
    if not np.any(keep):
        raise ConfigError("every coefficient falls below the threshold")
    kept_weight = float(np.sum(np.abs(c[keep]) ** 2))
    return SpectralState(
        [s for s, k in zip(states, keep) if k],
        c[keep] / math.sqrt(kept_weight),
        tau=tau,
        discarded_weight=float(np.sum(np.abs(c[~keep]) ** 2)),
        residual=residual,
        kept_weight=kept_weight,
    )
