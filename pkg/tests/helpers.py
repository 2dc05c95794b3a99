"""Shared oracles and state builders for the test suite."""
import math

import numpy as np

from sdlab.spectral import PotentialModel, SpectralState, ring_basis

# one "criterion N: PASS|FAIL ..." line per acceptance test, printed at session end
ACCEPTANCE_LINES = []


def plane_superposition(amps):
    """Sum a_k e^{ikx}/sqrt(2pi) on the free ring, as cos/sin eigenstates."""
    basis = ring_basis(PotentialModel.free_ring(), max(k * k for k in amps) + 0.5)
    coeffs = np.zeros(len(basis), dtype=complex)
    for i, s in enumerate(basis):
        for k, a in amps.items():
            if s.n != abs(k):
                continue
            if k == 0:
                coeffs[i] += a
            elif s.parity == "+":
                coeffs[i] += a / math.sqrt(2)
            else:
                coeffs[i] += 1j * math.copysign(1, k) * a / math.sqrt(2)
    keep = np.abs(coeffs) > 0
    return SpectralState([s for s, m in zip(basis, keep) if m], coeffs[keep])


def riemann_rdm(state, grid, samples=10_000):
    """Midpoint-rule reduced density matrix of an evolved state."""
    h = grid.epsilon / samples
    z = (np.arange(samples) + 0.5) * h
    x = grid.offset + grid.epsilon * np.arange(grid.nbins)[:, None] + z[None, :]
    # bins may overhang the truncated domain, so synthesize from the basis directly
    psi = (state.coefficients @ state.base.sample(x.ravel())).reshape(x.shape)
    return h * psi @ psi.conj().T
