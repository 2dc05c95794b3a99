"""Run configuration, presets and the numeric-expression parser."""
from __future__ import annotations

import ast
import json
import math
import operator
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from .errors import ConfigError, SdlabError
from .reduction import BinGrid
from .spectral import (
    HO_MAX_ORDER,
    PotentialModel,
    SpectralState,
    decompose,
    ho_eigenstate,
    plane_wave,
    ring_basis,
    ring_eigenstate,
)

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}
_NAMES = {"pi": math.pi, "e": math.e}


def parse_expr(text):
    """Evaluate a constant expression such as ``pi/4`` or ``1/2``."""
    if isinstance(text, (int, float)):
        return float(text)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        raise ConfigError(f"unsupported expression {text!r}")

    try:
        value = ev(ast.parse(str(text).strip(), mode="eval"))
    except (SyntaxError, ZeroDivisionError, OverflowError) as exc:
        raise ConfigError(f"cannot evaluate {text!r}: {exc}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{text!r} is not finite")
    return value


HO_CAT = {
    "kind": "coefficients",
    "terms": [
        {"n": 1, "parity": "-", "re": 1 / math.sqrt(2), "im": 0.0},
        {"n": 3, "parity": "-", "re": -1 / math.sqrt(2), "im": 0.0},
    ],
}


@dataclass
class RunConfig:
    model: str = "ring"
    v0: float | None = None
    epsilon: float | None = None
    offset: str | float = "auto"
    state: dict = field(default_factory=lambda: {"kind": "plane", "k": 1})
    t0: float = 0.0
    t1: float = 2 * math.pi
    steps: int = 200
    tau: float = 1e-4
    emax: float = 900.0
    half_width: float = 6.0
    points: int = 1024
    natural_log: bool = False
    format: str | None = None
    out: str | None = None

    # -- serialization ----------------------------------------------------

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    def updated(self, **changes):
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    # -- validation and construction ----------------------------------------

    def validate(self):
        if self.model not in ("free", "ring", "ho"):
            raise ConfigError(f"--model must be free, ring or ho, not {self.model!r}")
        if self.model == "ring" and self.v0 is None:
            raise ConfigError("--model ring needs a barrier height: pass --v0")
        if self.model != "ring" and self.v0 not in (None, 0, 0.0):
            raise ConfigError(f"--v0 only applies to --model ring (got model {self.model})")
        if self.v0 is not None and not self.v0 >= 0:
            raise ConfigError(f"--v0 must be >= 0, got {self.v0}")
        if self.epsilon is None:
            raise ConfigError("--epsilon is required")
        if self.steps < 1:
            raise ConfigError("--steps must be >= 1")
        if not self.tau >= 0:
            raise ConfigError("--tau must be >= 0")
        if not self.emax > 0:
            raise ConfigError("--emax must be positive")
        if self.points < 2:
            raise ConfigError("--points must be >= 2")
        if self.format not in (None, "csv", "json"):
            raise ConfigError("--format must be csv or json")
        if self.offset != "auto" and not isinstance(self.offset, (int, float)):
            raise ConfigError("--offset must be 'auto' or a number")
        kind = self.state.get("kind")
        if kind == "plane":
            if self.model == "ho":
                raise ConfigError("plane-wave states live on the ring; use --model free or ring")
            k = self.state.get("k")
            if not isinstance(k, int) or isinstance(k, bool):
                raise ConfigError(f"plane wave needs integer k, got {k!r}")
        elif kind == "coefficients":
            terms = self.state.get("terms") or []
            if not terms:
                raise ConfigError("coefficient list is empty")
            for t in terms:
                if not {"n", "re", "im"} <= set(t):
                    raise ConfigError(f"coefficient entry needs n, re, im: {t!r}")
                n = t["n"]
                if not isinstance(n, int) or n < 0:
                    raise ConfigError(f"bad state index {n!r}")
                if self.model == "ho":
                    if n > HO_MAX_ORDER:
                        raise ConfigError(f"oscillator order {n} above {HO_MAX_ORDER}")
                    want = "+" if n % 2 == 0 else "-"
                    if t.get("parity", want) != want:
                        raise ConfigError(f"oscillator state {n} has parity {want}")
                elif t.get("parity") not in ("+", "-"):
                    raise ConfigError(f"ring coefficient {t!r} needs parity '+' or '-'")
        else:
            raise ConfigError(f"unknown state kind {kind!r}")
        self.build_grid()
        return self

    def build_model(self):
        if self.model == "ho":
            return PotentialModel.harmonic(self.half_width)
        if self.model == "free":
            return PotentialModel.free_ring()
        return PotentialModel.piecewise_ring(self.v0 or 0.0)

    def build_grid(self):
        offset = None if self.offset == "auto" else float(self.offset)
        return BinGrid.for_model(self.build_model(), self.epsilon, offset)

    def build_state(self):
        model = self.build_model()
        if self.state["kind"] == "plane":
            return decompose(plane_wave(self.state["k"]), ring_basis(model, self.emax), self.tau)
        states, coeffs = [], []
        for t in self.state["terms"]:
            if model.is_ring:
                states.append(ring_eigenstate(model, t["n"], t["parity"]))
            else:
                states.append(ho_eigenstate(t["n"], model))
            coeffs.append(complex(t["re"], t["im"]))
        return SpectralState.from_coefficients(states, np.array(coeffs))

    def times(self):
        if self.steps == 1:
            return np.array([self.t0])
        return np.linspace(self.t0, self.t1, self.steps)

    def describe_state(self):
        if self.state["kind"] == "plane":
            return f"plane:{self.state['k']}"
        return " ".join(f"{t['re']:+.6g}{t['im']:+.6g}i*psi_{t['n']}{t.get('parity', '')}"
                        for t in self.state["terms"])


_RING_CURVE = dict(t0=0.0, t1=2 * math.pi, steps=200, epsilon=math.pi / 4,
                   state={"kind": "plane", "k": 1}, emax=900.0)

PRESETS = {
    "eq5": dict(_RING_CURVE, model="ring", v0=3.0, tau=1e-4),
    "eq6": dict(_RING_CURVE, model="ring", v0=15.0, tau=1e-4),
    "fig1": dict(model="ho", epsilon=0.5, state=HO_CAT, t0=0.0, t1=math.pi / 2, steps=2),
    "fig2": dict(model="ho", epsilon=0.5, state=HO_CAT, t0=0.0, t1=math.pi, steps=200),
    # finer truncation than eq5/eq6 so the t=0 entropy reflects the plane wave
    "fig3": dict(_RING_CURVE, model="ring", v0=3.0, tau=1e-5),
    "fig4": dict(_RING_CURVE, model="ring", v0=15.0, tau=1e-5),
}


def preset(name):
    try:
        return RunConfig(**json.loads(json.dumps(PRESETS[name])))
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def load_state_file(path):
    """Read a JSON coefficient list ``[{n, parity, re, im}, ...]``."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read state file {path}: {exc}") from None
    if isinstance(data, dict) and "terms" in data:
        data = data["terms"]
    if not isinstance(data, list):
        raise ConfigError("state file must hold a list of {n, parity, re, im} entries")
    return {"kind": "coefficients", "terms": data}


def load_config(path):
    try:
        with open(path) as fh:
            return RunConfig.from_dict(json.load(fh))
    except (OSError, ValueError, TypeError) as exc:
        if isinstance(exc, SdlabError):
            raise
        raise ConfigError(f"cannot read config {path}: {exc}") from None
