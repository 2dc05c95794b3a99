"""Spectra and von Neumann entropy of reduced density matrices."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import NumericalError, PSDViolationError
from .reduction import ReductionPlan

CLIP_TOL = 1e-12
PSD_FLOOR = -1e-9
TRACE_TOL = 1e-6


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of a reduced density matrix, descending, clipped to [0, 1]."""

    eigenvalues: tuple

    def __post_init__(self):
        lam = tuple(float(v) for v in self.eigenvalues)
        object.__setattr__(self, "eigenvalues", lam)
        if any(v < 0.0 or v > 1.0 for v in lam):
            raise NumericalError("spectrum values must be clipped to [0, 1]")
        if abs(sum(lam) - 1.0) > TRACE_TOL:
            raise NumericalError(f"eigenvalues sum to {sum(lam)!r}, expected 1")

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def rank(self):
        return sum(1 for v in self.eigenvalues if v > CLIP_TOL)


def eigh(rdm):
    """Eigenvalues (descending) and eigenvectors of a reduced density matrix."""
    m = rdm.entries if hasattr(rdm, "entries") else np.asarray(rdm)
    w, v = kernels.jacobi_eigh(m)
    return w[::-1], v[:, ::-1]


def spectrum(rdm, psd_floor=PSD_FLOOR):
    w, _ = eigh(rdm)
    if w[-1] < psd_floor:
        raise PSDViolationError(f"eigenvalue {w[-1]:.3e} below PSD floor {psd_floor:g}")
    if w[0] > 1.0 - psd_floor:
        raise PSDViolationError(f"eigenvalue {w[0]!r} exceeds 1")
    return Spectrum(tuple(np.clip(w, 0.0, 1.0)))


def _entropy(s, log):
    lam = np.asarray(s.eigenvalues if isinstance(s, Spectrum) else s, dtype=np.float64)
    lam = lam[lam > CLIP_TOL]
    return float(max(0.0, -np.sum(lam * log(lam))))


def entropy_bits(s):
    """-sum lam log2 lam, with eigenvalues below 1e-12 contributing nothing."""
    return _entropy(s, np.log2)


def entropy_nats(s):
    return _entropy(s, np.log)


@dataclass(frozen=True)
class EntropyCurve:
    times: tuple
    values: tuple
    metadata: dict = field(default_factory=dict)
    unit: str = "bits"

    def to_csv(self):
        lines = [f"t,entropy_{self.unit}"]
        lines += [f"{t:.12g},{s:.12g}" for t, s in zip(self.times, self.values)]
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {"unit": self.unit, "metadata": dict(self.metadata),
                "times": list(self.times), "values": list(self.values)}


def thread_count():
    """Worker count from ``SDLAB_THREADS`` (0 or unset means one per CPU)."""
    raw = os.environ.get("SDLAB_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def entropy_curve(state, grid, times, natural_log=False, threads=None, metadata=None):
    """Scale-epsilon entropy of ``state`` evolved to each of ``times``."""
    plan = ReductionPlan(state, grid)
    measure = entropy_nats if natural_log else entropy_bits
    times = [float(t) for t in times]

    def point(t):
        return measure(spectrum(plan.rdm(t)))

    nthreads = thread_count() if threads is None else max(1, int(threads))
    if nthreads > 1 and len(times) > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            values = list(pool.map(point, times))
    else:
        values = [point(t) for t in times]
    meta = {"model": state.model.describe(), "epsilon": grid.epsilon}
    meta.update(metadata or {})
    return EntropyCurve(tuple(times), tuple(values), meta, "nats" if natural_log else "bits")


def max_entropy_bits(grid):
    return math.log2(grid.nbins)
