"""Acceptance criteria, one test each.

Every test records a ``criterion N: PASS|FAIL`` line that is printed in the
terminal summary, whether or not it passes.
"""
import functools
import json
import math

import numpy as np
import pytest

from sdlab import cli, spectral
from sdlab.config import preset
from sdlab.entropy import entropy_bits, entropy_curve, spectrum
from sdlab.evolution import evolve
from sdlab.reduction import BinGrid, ReductionPlan, reduce, two_plane_wave_rdm
from sdlab.spectral import PotentialModel, ring_spectrum

from helpers import ACCEPTANCE_LINES, plane_superposition, riemann_rdm

EQ5 = {"0+": 0.41, "1+": 0.55, "1-": 0.66, "2+": 0.18, "2-": 0.24, "3+": 0.01, "3-": 0.03,
       "4-": 0.02}
EQ5_E = {"0+": 0.52, "1+": 3.27, "1-": 2.01, "2+": 5.41, "2-": 5.84}
EQ6 = {"0+": 0.49, "1+": 0.11, "1-": 0.54, "2+": 0.44, "2-": 0.29, "3+": 0.25, "3-": 0.36,
       "4-": 0.01, "5+": 0.01, "5-": 0.06, "6-": 0.02, "7-": 0.02, "8-": 0.01}
EQ6_E = {"0+": 0.74, "1+": 6.47, "1-": 2.92, "2+": 15.28, "2-": 11.15, "3+": 17.49, "3-": 18.47}


def criterion(number, title):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs)
            except Exception as exc:
                # drop pytest's rewritten-assert echo, keep the message
                msg = " ".join(str(exc).split("\nassert ")[0].split())[:300]
                ACCEPTANCE_LINES.append(f"criterion {number}: FAIL {title}: {msg}")
                raise
            tail = f" ({detail})" if detail else ""
            ACCEPTANCE_LINES.append(f"criterion {number}: PASS {title}{tail}")
        return wrapper
    return deco


def cli_json(argv, capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(argv)
    out, err = capsys.readouterr()
    assert info.value.code == 0, err
    return json.loads(out)


def table(doc):
    energy = {f"{b['n']}{b['parity']}": b["E"] for b in doc["basis"]}
    rows = {f"{c['n']}{c['parity']}": c["norm"] for c in doc["coefficients"]}
    return rows, energy


def compare(rows, energy, amps, energies):
    problems = []
    for label, ref in amps.items():
        got = rows.get(label, 0.0)
        if abs(got - ref) > 0.01:
            problems.append(f"|c_{label}|={got:.4f} vs {ref}")
    for label, ref in energies.items():
        if abs(energy[label] - ref) > 0.01:
            problems.append(f"E_{label}={energy[label]:.4f} vs {ref}")
    return problems


def preset_curve(name):
    cfg = preset(name)
    return cfg.times(), np.array(entropy_curve(cfg.build_state(), cfg.build_grid(), cfg.times()).values)


@criterion(1, "eq5 decomposition")
def test_criterion_1_eq5(capsys):
    rows, energy = table(cli_json(["decompose", "--preset", "eq5"], capsys))
    problems = compare(rows, energy, EQ5, EQ5_E)
    extra = sorted(set(rows) - set(EQ5), key=lambda k: -rows[k])
    if len(rows) != len(EQ5):
        biggest = ", ".join(f"{k}={rows[k]:.4f}" for k in extra[:4])
        problems.append(f"{len(rows)} components above tau=1e-4, expected exactly {len(EQ5)}; "
                        f"largest unlisted: {biggest}")
    assert not problems, "; ".join(problems)
    return "8 components, amplitudes and energies within 0.01"


@criterion(2, "eq6 decomposition")
def test_criterion_2_eq6(capsys):
    rows, energy = table(cli_json(["decompose", "--preset", "eq6"], capsys))
    problems = compare(rows, energy, EQ6, EQ6_E)
    assert not problems, "; ".join(problems)
    return f"13 amplitudes and 7 energies within 0.01; {len(rows)} components kept"


@criterion(3, "free spectrum n^2")
def test_criterion_3_free_spectrum():
    levels = ring_spectrum(PotentialModel.free_ring(), 100.5)
    assert len(levels) == 21
    worst = max(abs(lv.energy - lv.n ** 2) for lv in levels)
    # the same roots from the shooting root finder with zero barrier
    for parity, first in (("+", 0), ("-", 1)):
        roots = spectral._parity_roots(0.0, parity, 100.5)
        assert len(roots) == 11 - first
        worst = max([worst] + [abs(r - n * n) for n, r in enumerate(roots, start=first)])
    assert worst <= 1e-10, f"max error {worst:.3g}"
    return f"max error {worst:.2g}"


@criterion(4, "plane-wave superposition keeps constant entropy")
def test_criterion_4_no_decoherence():
    state = plane_superposition({1: 1 / math.sqrt(2), 2: 1 / math.sqrt(2)})
    values = entropy_curve(state, BinGrid.ring(math.pi / 4), np.linspace(0, 2 * math.pi, 50)).values
    spread = max(values) - min(values)
    assert spread <= 1e-9, f"spread {spread:.3g}"
    return f"S = {values[0]:.9f} bits, spread {spread:.2g}"


@criterion(5, "fig2 periodicity and extremes")
def test_criterion_5_fig2():
    times, s = preset_curve("fig2")
    cfg = preset("fig2")
    half = entropy_curve(cfg.build_state(), cfg.build_grid(), [math.pi / 2]).values[0]
    assert len(times) == 200 and times[-1] == pytest.approx(math.pi)
    assert abs(s[0] - s[-1]) <= 1e-6, f"S(0)={s[0]} S(pi)={s[-1]}"
    assert half >= s.max(), f"S(pi/2)={half} below grid max {s.max()}"
    assert s[0] <= s.min(), f"S(0)={s[0]} above grid min {s.min()}"
    assert s[0] > 0.01
    return f"S(0)={s[0]:.5f}, S(pi/2)={half:.5f}"


@criterion(6, "fig3 starts pure and never returns")
def test_criterion_6_fig3():
    _, s = preset_curve("fig3")
    assert s[0] <= 1e-6, f"S(0)={s[0]:.3g}"
    run = 0
    while run + 1 < len(s) and s[run + 1] > s[run]:
        run += 1
    assert run >= 2, f"increasing run of {run} steps"
    assert s[1:].min() > s[0]
    return f"S(0)={s[0]:.2g}, rises for {run} steps, min over (0, 2pi] {s[1:].min():.4f}"


@criterion(7, "taller barrier decoheres more and faster")
def test_criterion_7_fig4():
    _, s3 = preset_curve("fig3")
    _, s4 = preset_curve("fig4")
    assert s4.max() >= s3.max(), f"max {s4.max()} < {s3.max()}"
    assert s4[1] > s3[1], f"S15(t1)={s4[1]} <= S3(t1)={s3[1]}"
    return f"max {s4.max():.4f} vs {s3.max():.4f}; S(t1) {s4[1]:.4f} vs {s3[1]:.4f}"


@criterion(8, "two-plane-wave effective matrix equals the full matrix")
def test_criterion_8_effective_matrix():
    rng = np.random.default_rng(20240229)
    worst_full = worst_phase = 0.0
    draws = 0
    while draws < 20:
        nbins = int(rng.integers(2, 17))
        k1, k2 = (int(k) for k in rng.integers(-6, 7, size=2))
        # k1 - k2 divisible by B aliases on the bin lattice; see test_reduction
        if k1 == k2 or (k1 - k2) % nbins == 0:
            continue
        draws += 1
        eps = 2 * math.pi / nbins
        p = rng.uniform(0.05, 0.95)
        ph = rng.uniform(0, 2 * math.pi, size=2)
        a1, a2 = math.sqrt(p) * np.exp(1j * ph[0]), math.sqrt(1 - p) * np.exp(1j * ph[1])
        _, lam = two_plane_wave_rdm(a1, a2, k1, k2, eps)
        grid = BinGrid.ring(eps)
        full = np.array(spectrum(reduce(plane_superposition({k1: a1, k2: a2}), grid)).eigenvalues)
        worst_full = max(worst_full, np.abs(full[:2] - lam).max(), np.abs(full[2:]).max(initial=0))
        # fresh random phases on both amplitudes
        q = rng.uniform(0, 2 * math.pi, size=2)
        b1, b2 = a1 * np.exp(1j * q[0]), a2 * np.exp(1j * q[1])
        _, lam2 = two_plane_wave_rdm(b1, b2, k1, k2, eps)
        full2 = np.array(spectrum(reduce(plane_superposition({k1: b1, k2: b2}), grid)).eigenvalues)
        worst_phase = max(worst_phase, np.abs(lam2 - lam).max(), np.abs(full2 - full).max())
    assert worst_full <= 1e-9, f"full vs effective {worst_full:.3g}"
    assert worst_phase <= 1e-12, f"phase sensitivity {worst_phase:.3g}"
    return f"max deviation {worst_full:.2g}, phase sensitivity {worst_phase:.2g}"


@criterion(9, "saturation and vanishing limits")
def test_criterion_9_saturation():
    a = 1 / math.sqrt(2)
    sat = []
    for eps, m in ((math.pi / 4, 1), (math.pi / 4, 3), (0.5, 2), (1.0, 1)):
        dk = m * 2 * math.pi / eps
        _, lam = two_plane_wave_rdm(a, a, 0.0, dk, eps)
        sat.append(entropy_bits(lam))
    _, lam = two_plane_wave_rdm(a, a, 0.0, 1e-4 / (math.pi / 4), math.pi / 4)
    small = entropy_bits(lam)
    assert max(abs(s - 1) for s in sat) <= 1e-9, f"saturated S={sat}"
    assert small <= 1e-6, f"S={small:.3g} at dk*eps=1e-4"
    return f"S={min(sat):.12f} saturated, {small:.2g} at dk*eps=1e-4"


@criterion(10, "reduction matches the Riemann-sum oracle")
def test_criterion_10_riemann():
    worst = 0.0
    for name, times in (("fig2", (0.0, 0.7, 2.3)), ("fig3", (0.0, 1.1, 4.0))):
        cfg = preset(name)
        state, grid = cfg.build_state(), cfg.build_grid()
        for t in times:
            ev = evolve(state, t)
            worst = max(worst, np.abs(reduce(ev, grid).entries - riemann_rdm(ev, grid)).max())
    assert worst <= 1e-7, f"max entry error {worst:.3g}"
    return f"max entry error {worst:.2g}"


@criterion(11, "structural invariants")
def test_criterion_11_invariants():
    checked = 0
    for name in ("eq5", "eq6", "fig2", "fig3", "fig4"):
        cfg = preset(name)
        grid = cfg.build_grid()
        plan = ReductionPlan(cfg.build_state(), grid)
        for t in cfg.times():
            rho = plan.rdm(t)
            assert rho.is_hermitian(), f"{name} t={t}"
            assert abs(rho.trace - 1) <= 1e-6, f"{name} t={t} trace {rho.trace}"
            assert np.linalg.eigvalsh(rho.entries).min() >= -1e-9, f"{name} t={t}"
            spec = spectrum(rho)
            assert abs(sum(spec.eigenvalues) - 1) <= 1e-6
            s = entropy_bits(spec)
            assert 0 <= s <= math.log2(grid.nbins), f"{name} t={t} S={s}"
            checked += 1
    return f"{checked} matrices"


@criterion(12, "finer bins decohere less")
def test_criterion_12_epsilon():
    state = preset("fig3").build_state()
    ev = evolve(state, math.pi / 2)
    fine = entropy_bits(spectrum(reduce(ev, BinGrid.ring(math.pi / 8))))
    coarse = entropy_bits(spectrum(reduce(ev, BinGrid.ring(math.pi / 4))))
    assert fine < coarse, f"S(pi/8)={fine} S(pi/4)={coarse}"
    return f"S(pi/8)={fine:.4f} < S(pi/4)={coarse:.4f}"
