"""Exact time evolution in the eigenbasis: c_n -> c_n exp(-i E_n t)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OutOfDomainError
from .spectral import SpectralState

DENSITY_POINTS = 1024
DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class EvolvedState:
    base: SpectralState
    t: float

    @property
    def coefficients(self):
        return self.base.coefficients * np.exp(-1j * self.base.energies * self.t)

    @property
    def model(self):
        return self.base.model

    @property
    def norm2(self):
        return float(np.sum(np.abs(self.coefficients) ** 2))


def evolve(state, t):
    if isinstance(state, EvolvedState):
        return EvolvedState(state.base, state.t + float(t))
    return EvolvedState(state, float(t))


def _check_domain(model, x):
    if model.is_ring:
        return
    lo, hi = model.domain
    if np.any(x < lo - DOMAIN_SLACK) or np.any(x > hi + DOMAIN_SLACK):
        raise OutOfDomainError(f"position outside truncated domain [{lo:g}, {hi:g}]")


def synthesize(state, samples):
    """psi values from pre-sampled basis rows (``samples`` from ``base.sample``)."""
    return state.coefficients @ samples


def wave_at(state, x):
    """psi(x, t) = sum_n c_n exp(-i E_n t) psi_n(x); scalar or array ``x``."""
    x = np.asarray(x, dtype=np.float64)
    _check_domain(state.model, x)
    return synthesize(state, state.base.sample(x)).reshape(x.shape)


def density(state, grid):
    return np.abs(wave_at(state, grid)) ** 2


def density_grid(model, n=DENSITY_POINTS):
    """Uniform evaluation grid over the model domain (endpoints included)."""
    lo, hi = model.domain
    return np.linspace(lo, hi, n)
