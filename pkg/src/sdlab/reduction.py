"""Scale-epsilon reduced density matrices.

Positions are written x = offset + y*eps + z with bin label y and sub-bin
coordinate z in [0, eps). Tracing out z gives

    rho(y, y') = int_0^eps psi(offset + y eps + z) conj(psi(offset + y' eps + z)) dz,

evaluated with composite Gauss-Legendre per bin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError, DegenerateInputError, NormalizationError
from .evolution import EvolvedState, evolve, synthesize
from .quadrature import NODES_PER_PANEL, bin_rule

TWO_PI = 2.0 * math.pi
RING_TOL = 1e-12
STATE_NORM_TOL = 1e-4
SERIES_CUTOFF = 1e-6

RING = "ring"
INTERVAL = "interval"


@dataclass(frozen=True)
class BinGrid:
    """Bins [offset + y eps, offset + (y+1) eps) for y = 0..nbins-1."""

    epsilon: float
    offset: float
    nbins: int
    domain: str
    half_width: float | None = None

    def __post_init__(self):
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ConfigError(f"bin width must be positive, got {self.epsilon}")
        if self.nbins < 1:
            raise ConfigError("need at least one bin")
        if self.domain == RING:
            if abs(self.nbins * self.epsilon - TWO_PI) >= RING_TOL:
                raise ConfigError(
                    f"epsilon={self.epsilon!r} does not divide 2*pi "
                    f"({self.nbins} bins cover {self.nbins * self.epsilon!r})")
        elif self.domain == INTERVAL:
            L = self.half_width
            if L is None or not L > 0:
                raise ConfigError("interval grid needs a positive half width")
            if self.offset > -L + 1e-12 or self.offset + self.nbins * self.epsilon < L - 1e-12:
                raise ConfigError(f"bins do not cover [-{L:g}, {L:g}]")
        else:
            raise ConfigError(f"unknown grid domain {self.domain!r}")

    @classmethod
    def ring(cls, epsilon, offset=0.0):
        epsilon = float(epsilon)
        if not epsilon > 0:
            raise ConfigError(f"bin width must be positive, got {epsilon}")
        return cls(epsilon, float(offset), max(1, round(TWO_PI / epsilon)), RING)

    @classmethod
    def interval(cls, epsilon, half_width, offset=None):
        """Bins covering [-L, L]; by default the lattice is shifted by -eps/2.

        With ``offset=None`` bin edges sit at (m + 1/2) eps, so one bin is
        centred on x = 0 and the grid is mirror symmetric; the covered
        interval is extended outward to the next bin edge.
        """
        epsilon, L = float(epsilon), float(half_width)
        if not epsilon > 0:
            raise ConfigError(f"bin width must be positive, got {epsilon}")
        if offset is None:
            m = max(0, math.ceil((L - 0.5 * epsilon) / epsilon - 1e-12))
            return cls(epsilon, -0.5 * epsilon - m * epsilon, 2 * m + 1, INTERVAL, L)
        offset = float(offset)
        nb = max(1, math.ceil((L - offset) / epsilon - 1e-12))
        return cls(epsilon, offset, nb, INTERVAL, L)

    @classmethod
    def for_model(cls, model, epsilon, offset=None):
        if model.is_ring:
            return cls.ring(epsilon, 0.0 if offset is None else offset)
        return cls.interval(epsilon, model.half_width, offset)

    @property
    def edges(self):
        return self.offset + self.epsilon * np.arange(self.nbins + 1)

    def nodes(self, n=NODES_PER_PANEL):
        """Sample positions, shape (nbins, nz), and sub-bin weights (nz,)."""
        z, w = bin_rule(self.epsilon, n)
        x = self.offset + self.epsilon * np.arange(self.nbins)[:, None] + z[None, :]
        return x, w

    def compatible_with(self, model):
        return (self.domain == RING) == model.is_ring


@dataclass(frozen=True, eq=False)
class ReducedDensityMatrix:
    grid: BinGrid
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.complex128).copy()
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)
        if e.shape != (self.grid.nbins, self.grid.nbins):
            raise ConfigError("matrix shape does not match the bin count")

    @property
    def trace(self):
        return float(np.real(np.trace(self.entries)))

    def is_hermitian(self):
        return bool(np.array_equal(self.entries, self.entries.conj().T))

    def to_dict(self):
        out = {
            "epsilon": self.grid.epsilon,
            "offset": self.grid.offset,
            "domain": self.grid.domain,
            "B": self.grid.nbins,
            "entries": [[float(z.real), float(z.imag)] for z in self.entries.ravel()],
        }
        if self.grid.domain == INTERVAL:
            out["half_width"] = self.grid.half_width
        return out

    @classmethod
    def from_dict(cls, d):
        grid = BinGrid(float(d["epsilon"]), float(d["offset"]), int(d["B"]),
                       d["domain"], d.get("half_width"))
        flat = np.array([complex(re, im) for re, im in d["entries"]])
        return cls(grid, flat.reshape(grid.nbins, grid.nbins))


class ReductionPlan:
    """Samples the basis once on the bin nodes so many times are cheap."""

    def __init__(self, base, grid, n=NODES_PER_PANEL):
        if not grid.compatible_with(base.model):
            raise ConfigError(f"{grid.domain} grid does not match {base.model.describe()}")
        self.base = base
        self.grid = grid
        x, self.weights = grid.nodes(n)
        self._shape = x.shape
        self.samples = base.sample(x.ravel())

    def rdm(self, t):
        state = t if isinstance(t, EvolvedState) else evolve(self.base, t)
        norm = math.sqrt(state.norm2)
        if abs(norm - 1.0) > STATE_NORM_TOL:
            raise NormalizationError(f"state norm {norm:.9g} differs from 1")
        psi = synthesize(state, self.samples).reshape(self._shape)
        return ReducedDensityMatrix(self.grid, kernels.rdm_upper(psi, self.weights))


def reduce(state, grid, n=NODES_PER_PANEL):
    """Scale-epsilon reduced density matrix of ``state`` on ``grid``."""
    if not isinstance(state, EvolvedState):
        state = evolve(state, 0.0)
    return ReductionPlan(state.base, grid, n).rdm(state)


def fine_overlap(dk, epsilon):
    """int_0^eps exp(i dk z) dz."""
    theta = dk * epsilon
    if dk == 0:
        return complex(epsilon)
    if abs(theta) < SERIES_CUTOFF:
        return epsilon * (1.0 + 0.5j * theta - theta * theta / 6.0 - 1j * theta ** 3 / 24.0)
    return (complex(math.cos(theta), math.sin(theta)) - 1.0) / (1j * dk)


def two_plane_wave_rdm(a1, a2, k1, k2, epsilon):
    """Effective 2x2 matrix for a1 e^{i k1 x} + a2 e^{i k2 x} and its eigenvalues.

    Returns ``(matrix, eigenvalues)`` with eigenvalues in descending order.
    """
    if k1 == k2:
        raise DegenerateInputError("two-plane-wave matrix needs k1 != k2")
    p1, p2 = abs(a1) ** 2, abs(a2) ** 2
    if abs(p1 + p2 - 1.0) > 1e-10:
        raise NormalizationError(f"|a1|^2 + |a2|^2 = {p1 + p2!r}")
    i0 = fine_overlap(0, epsilon)
    off = a1 * np.conj(a2) * fine_overlap(k1 - k2, epsilon) / i0
    m = np.array([[p1, off], [np.conj(off), p2]], dtype=np.complex128)
    disc = math.sqrt((p1 - p2) ** 2 + 4.0 * abs(off) ** 2)
    total = p1 + p2
    return m, np.array([0.5 * (total + disc), 0.5 * (total - disc)])
