"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N] [--pipeline]

Each kernel runs on inputs of the size the presets use. With --pipeline the
fig2 and fig4 entropy curves are also timed end to end under each backend.
"""
import argparse
import math
import sys
import timeit

import numpy as np

from sdlab import kernels


def cases(rng):
    x = np.linspace(-6.25, 6.25, 25 * 32)
    s = rng.normal(size=(25, 32)) + 1j * rng.normal(size=(25, 32))
    w = rng.random(32)
    a = s @ s.conj().T
    a /= np.trace(a).real
    return {
        "hermite_functions(60, 800 pts)": lambda b: b.hermite_functions(60, x),
        "rk4_shoot(4096 steps)": lambda b: b.rk4_shoot(5.4, 3.0, 1.0, 0.0, 4096),
        "rdm_upper(25 bins x 32 nodes)": lambda b: b.rdm_upper(s, w),
        "jacobi_eigh(25 x 25)": lambda b: b.jacobi_eigh(a, 1e-15, 60),
    }


def best_of(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def bench_kernels(repeat):
    py = kernels.get_backend("python")
    cy = kernels.get_backend("cython")
    print(f"{'kernel':34s} {'python':>11s} {'cython':>11s} {'speedup':>8s}")
    for name, fn in cases(np.random.default_rng(0)).items():
        tp = best_of(lambda: fn(py), repeat)
        tc = best_of(lambda: fn(cy), repeat)
        print(f"{name:34s} {tp * 1e3:9.3f}ms {tc * 1e3:9.3f}ms {tp / tc:7.1f}x")


def bench_pipeline(repeat):
    from sdlab.config import preset
    from sdlab.entropy import entropy_curve

    saved = kernels._impl
    print(f"\n{'curve':34s} {'python':>11s} {'cython':>11s} {'speedup':>8s}")
    for name in ("fig2", "fig4"):
        cfg = preset(name)
        state, grid, times = cfg.build_state(), cfg.build_grid(), cfg.times()
        timings, curves = [], []
        for backend in ("python", "cython"):
            kernels._impl = kernels.get_backend(backend)
            try:
                run = lambda: entropy_curve(state, grid, times, threads=1)
                curves.append(np.array(run().values))
                timings.append(min(timeit.repeat(run, number=1, repeat=repeat)))
            finally:
                kernels._impl = saved
        diff = np.abs(curves[0] - curves[1]).max()
        label = f"{name} ({len(times)} points)"
        print(f"{label:34s} {timings[0] * 1e3:9.1f}ms {timings[1] * 1e3:9.1f}ms "
              f"{timings[0] / timings[1]:7.1f}x   max |dS| {diff:.1e}")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--pipeline", action="store_true", help="also time full entropy curves")
    args = parser.parse_args(argv)
    if not kernels.compiled_available():
        sys.exit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    bench_kernels(args.repeat)
    if args.pipeline:
        bench_pipeline(max(1, args.repeat // 2))


if __name__ == "__main__":
    main()
