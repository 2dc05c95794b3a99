"""``sdlab`` command-line front end.

Subcommands: decompose, entropy-curve, density, rdm. Exit codes: 0 on
success, 2 for configuration errors, 3 for numerical failures.
"""
import argparse
import json
import logging
import sys

import numpy as np

from .config import RunConfig, load_config, load_state_file, parse_expr, preset, PRESETS
from .entropy import entropy_bits, entropy_curve, entropy_nats, spectrum
from .errors import ConfigError, NumericalError
from .evolution import density, density_grid, evolve
from .reduction import reduce
from .spectral import ring_basis

log = logging.getLogger("sdlab")

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

DEFAULT_FORMAT = {"decompose": "json", "entropy-curve": "csv", "density": "csv", "rdm": "json"}


def _expr(text):
    try:
        return parse_expr(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _offset(text):
    return "auto" if text == "auto" else _expr(text)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", choices=sorted(PRESETS), help="start from a named configuration")
    common.add_argument("--config", metavar="FILE", help="JSON config (as written by --dump-config)")
    common.add_argument("--model", choices=["free", "ring", "ho"])
    common.add_argument("--v0", type=_expr, help="barrier height of the ring potential")
    common.add_argument("--epsilon", type=_expr, help="bin width, e.g. pi/4")
    common.add_argument("--offset", type=_offset, help="left edge of bin 0, or 'auto'")
    src = common.add_mutually_exclusive_group()
    src.add_argument("--k", type=int, help="initial plane wave e^{ikx} on the ring")
    src.add_argument("--state", metavar="FILE.json|plane:K",
                     help="coefficient list [{n, parity, re, im}, ...] or plane:K")
    common.add_argument("--t0", type=_expr)
    common.add_argument("--t1", type=_expr)
    common.add_argument("--steps", type=int)
    common.add_argument("--tau", type=_expr, help="drop components with |c| below this")
    common.add_argument("--emax", type=_expr, help="ring basis energy cutoff")
    common.add_argument("--half-width", type=_expr, help="oscillator domain half width L")
    common.add_argument("--points", type=int, help="density grid size")
    common.add_argument("--nats", action="store_true", help="natural-log entropy")
    common.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--dump-config", action="store_true",
                        help="print the resolved config as JSON and exit")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="sdlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("decompose", parents=[common], help="coefficient table of a ring plane wave")
    sub.add_parser("entropy-curve", parents=[common], help="scale-epsilon entropy vs time (CSV)")
    sub.add_parser("density", parents=[common], help="probability densities on a 1024-point grid")
    sub.add_parser("rdm", parents=[common], help="reduced density matrix at time t0 (JSON)")
    return parser


def resolve_config(args):
    cfg = preset(args.preset) if args.preset else RunConfig()
    if args.config:
        cfg = load_config(args.config)
    state = None
    if args.k is not None:
        state = {"kind": "plane", "k": args.k}
    elif args.state:
        if args.state.startswith("plane:"):
            try:
                state = {"kind": "plane", "k": int(args.state[len("plane:"):])}
            except ValueError:
                raise ConfigError(f"bad plane-wave spec {args.state!r}") from None
        else:
            state = load_state_file(args.state)
    cfg = cfg.updated(model=args.model, v0=args.v0, epsilon=args.epsilon, offset=args.offset,
                      state=state, t0=args.t0, t1=args.t1, steps=args.steps, tau=args.tau,
                      emax=args.emax, half_width=args.half_width, points=args.points,
                      format=args.format, out=args.out)
    if args.nats:
        cfg = cfg.updated(natural_log=True)
    if args.model is not None and args.model != "ring" and args.v0 is None:
        # switching a ring preset to another model drops its barrier height
        cfg.v0 = None
    return cfg.validate()


def _csv(header, columns):
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(f"{v:.12g}" for v in row))
    return "\n".join(lines) + "\n"


def cmd_decompose(cfg, fmt):
    if cfg.model == "ho" or cfg.state["kind"] != "plane":
        raise ConfigError("decompose needs --model free|ring and a plane-wave state (--k N)")
    model = cfg.build_model()
    basis = ring_basis(model, cfg.emax)
    state = cfg.build_state()
    scale = np.sqrt(state.kept_weight)
    rows = [
        {"n": s.n, "parity": s.parity, "E": s.energy,
         "re": float(c.real), "im": float(c.imag), "norm": float(abs(c))}
        for s, c in zip(state.states, state.coefficients * scale)
    ]
    rows.sort(key=lambda r: (-r["norm"], r["n"], r["parity"]))
    if fmt == "csv":
        cols = ["n", "parity", "E", "re", "im", "norm"]
        lines = [",".join(cols)]
        for r in rows:
            lines.append(f"{r['n']},{r['parity']},{r['E']:.12g},{r['re']:.12g},"
                         f"{r['im']:.12g},{r['norm']:.12g}")
        return "\n".join(lines) + "\n"
    doc = {
        "model": model.describe(),
        "k": cfg.state["k"],
        "tau": cfg.tau,
        "basis": [{"n": s.n, "parity": s.parity, "E": s.energy} for s in basis],
        "coefficients": [{k: r[k] for k in ("n", "parity", "re", "im", "norm")} for r in rows],
        "discarded_weight": state.discarded_weight,
        "residual": state.residual,
    }
    return json.dumps(doc, indent=2) + "\n"


def cmd_entropy_curve(cfg, fmt):
    curve = entropy_curve(cfg.build_state(), cfg.build_grid(), cfg.times(),
                          natural_log=cfg.natural_log,
                          metadata={"state": cfg.describe_state()})
    if fmt == "json":
        return json.dumps(curve.to_dict(), indent=2) + "\n"
    return curve.to_csv()


def cmd_density(cfg, fmt):
    state = cfg.build_state()
    x = density_grid(state.model, cfg.points)
    times = cfg.times()
    cols = [density(evolve(state, t), x) for t in times]
    if fmt == "json":
        doc = {"x": x.tolist(), "times": times.tolist(), "density": [c.tolist() for c in cols]}
        return json.dumps(doc) + "\n"
    header = ["x"] + [f"density_t{i}" for i in range(len(times))]
    return _csv(header, [x] + cols)


def cmd_rdm(cfg, fmt):
    if fmt != "json":
        raise ConfigError("rdm output is JSON only")
    rho = reduce(evolve(cfg.build_state(), cfg.t0), cfg.build_grid())
    spec = spectrum(rho)
    doc = rho.to_dict()
    doc["t"] = cfg.t0
    doc["spectrum"] = list(spec.eigenvalues)
    doc["entropy_bits"] = entropy_bits(spec)
    if cfg.natural_log:
        doc["entropy_nats"] = entropy_nats(spec)
    return json.dumps(doc) + "\n"


COMMANDS = {
    "decompose": cmd_decompose,
    "entropy-curve": cmd_entropy_curve,
    "density": cmd_density,
    "rdm": cmd_rdm,
}


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = resolve_config(args)
    if args.dump_config:
        sys.stdout.write(cfg.to_json())
        return 0
    fmt = cfg.format or DEFAULT_FORMAT[args.command]
    log.info("running %s on %s", args.command, cfg.build_model().describe())
    text = COMMANDS[args.command](cfg, fmt)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None):
    try:
        code = run(argv)
    except ConfigError as exc:
        print(f"sdlab: configuration error: {exc}", file=sys.stderr)
        code = EXIT_CONFIG
    except NumericalError as exc:
        print(f"sdlab: numerical failure: {exc}", file=sys.stderr)
        code = EXIT_NUMERICAL
    sys.exit(code)


if __name__ == "__main__":
    main()
