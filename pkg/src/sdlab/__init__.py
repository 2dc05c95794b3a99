"""Scale-epsilon reduced density matrices and entropy for 1D quantum states."""
from .entropy import EntropyCurve, Spectrum, entropy_bits, entropy_curve, entropy_nats, spectrum
from .evolution import EvolvedState, density, evolve, wave_at
from .kernels import BACKEND
from .reduction import BinGrid, ReducedDensityMatrix, fine_overlap, reduce, two_plane_wave_rdm
from .spectral import (
    EigenState,
    PotentialModel,
    SpectralState,
    decompose,
    ho_eigenstate,
    plane_wave,
    ring_basis,
    ring_eigenstate,
    ring_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BinGrid",
    "EigenState",
    "EntropyCurve",
    "EvolvedState",
    "PotentialModel",
    "ReducedDensityMatrix",
    "SpectralState",
    "Spectrum",
    "decompose",
    "density",
    "entropy_bits",
    "entropy_curve",
    "entropy_nats",
    "evolve",
    "fine_overlap",
    "ho_eigenstate",
    "plane_wave",
    "reduce",
    "ring_basis",
    "ring_eigenstate",
    "ring_spectrum",
    "spectrum",
    "two_plane_wave_rdm",
    "wave_at",
]
