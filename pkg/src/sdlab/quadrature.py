"""Composite Gauss-Legendre rules."""
import math
from functools import lru_cache

import numpy as np

NODES_PER_PANEL = 16
MAX_PANEL_WIDTH = math.pi / 8


@lru_cache(maxsize=None)
def gauss_legendre(n):
    """Reference nodes and weights on [-1, 1] (read-only arrays)."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_rule(a, b, n=NODES_PER_PANEL):
    x, w = gauss_legendre(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def composite_rule(breakpoints, n=NODES_PER_PANEL, max_width=MAX_PANEL_WIDTH):
    """Nodes and weights over consecutive ``breakpoints``.

    Each interval between breakpoints is split into equal panels no wider
    than ``max_width``; integrand kinks should sit on breakpoints.
    """
    xs, ws = [], []
    for a, b in zip(breakpoints[:-1], breakpoints[1:]):
        npan = max(1, math.ceil((b - a) / max_width - 1e-9))
        edges = np.linspace(a, b, npan + 1)
        for lo, hi in zip(edges[:-1], edges[1:]):
            x, w = panel_rule(lo, hi, n)
            xs.append(x)
            ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def bin_rule(width, n=NODES_PER_PANEL, max_width=MAX_PANEL_WIDTH):
    """Offsets in [0, width) and weights for integrating across one bin."""
    return composite_rule([0.0, width], n, max_width)
