"""Builtin example functions and the structured-text function spec.

Builtins (one per classification case, plus the rotated-parabola family):

    A-simple    iz/(z-i)                    closed-form trajectory
    A-poly      z^2 (i - 1/z)               atom at the origin
    Btheta(t)   z^2 e^{i t},  t in [0, pi]  constant base of modulus 1
    B-log       z^2 int_{-1}^{1} dt/(t-z)
    C           z^2 (1 + int t^2 dt/(t-z))
    D           z^2 int t^2 dt/(t-z)
    E           z^2 int t^4 dt/(t-z)

A function spec is either ``builtin:<name>`` or a JSON document with keys
``factor`` (kind/alpha/beta), ``a_eff``, ``b``, ``fullline`` and ``measure``
(a list of {"type": "poly", "interval": [a, b], "coeffs": [...]} and
{"type": "atom", "at": x, "mass": m} entries).  Complex numbers are
[re, im] pairs.
"""

from __future__ import annotations

import json
import math
import re

from .errors import ConfigError
from .measures import Atom, PolynomialDensityPiece, SpectralMeasure, validate_measure
from .n1 import ZERO_ONLY, ZERO_POLE, POLE_ONLY, FactorR, N1Function
from .nevanlinna import NevanlinnaFunction

_BTHETA_RE = re.compile(r"^Btheta\((?P<arg>[^)]+)\)$")

BUILTIN_NAMES = ("A-simple", "A-poly", "Btheta(<theta>)", "B-log", "C", "D", "E")

_UNIT_INTERVAL = (-1.0, 1.0)


def _piece(coeffs):
    return PolynomialDensityPiece(*_UNIT_INTERVAL, tuple(coeffs))


def _angle(text):
    """Parse a Btheta angle: plain float or simple multiples of pi."""
    text = text.strip()
    m = re.match(r"^(?P<k>\d*)\s*pi\s*(/\s*(?P<d>\d+))?$", text)
    if m:
        k = float(m.group("k") or 1)
        d = float(m.group("d") or 1)
        return k * math.pi / d
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"cannot parse angle {text!r}") from exc


def builtin(name):
    """Construct a builtin N1 function by name."""
    m = _BTHETA_RE.match(name)
    if m:
        theta = _angle(m.group("arg"))
        if not 0.0 <= theta <= math.pi:
            raise ConfigError(f"Btheta angle {theta} outside [0, pi]")
        base = NevanlinnaFunction(math.cos(theta), 0.0, SpectralMeasure(), math.sin(theta) / math.pi)
        return N1Function(FactorR(ZERO_ONLY, alpha=0j), base)
    if name == "A-simple":
        base = NevanlinnaFunction(0.0, 0.0, SpectralMeasure(atoms=(Atom(0.0, 1.0),)), 1.0 / math.pi)
        return N1Function(FactorR(ZERO_POLE, alpha=0j, beta=1j), base)
    if name == "A-poly":
        base = NevanlinnaFunction(0.0, 0.0, SpectralMeasure(atoms=(Atom(0.0, 1.0),)), 1.0 / math.pi)
        return N1Function(FactorR(ZERO_ONLY, alpha=0j), base)
    if name == "B-log":
        base = NevanlinnaFunction(0.0, 0.0, SpectralMeasure(pieces=(_piece([1.0]),)))
        return N1Function(FactorR(ZERO_ONLY, alpha=0j), base)
    if name == "C":
        base = NevanlinnaFunction(1.0, 0.0, SpectralMeasure(pieces=(_piece([0.0, 0.0, 1.0]),)))
        return N1Function(FactorR(ZERO_ONLY, alpha=0j), base)
    if name == "D":
        base = NevanlinnaFunction(0.0, 0.0, SpectralMeasure(pieces=(_piece([0.0, 0.0, 1.0]),)))
        return N1Function(FactorR(ZERO_ONLY, alpha=0j), base)
    if name == "E":
        base = NevanlinnaFunction(0.0, 0.0, SpectralMeasure(pieces=(_piece([0.0, 0.0, 0.0, 0.0, 1.0]),)))
        return N1Function(FactorR(ZERO_ONLY, alpha=0j), base)
    raise ConfigError(f"unknown builtin {name!r}; known: {', '.join(BUILTIN_NAMES)}")


def _complex_from(v, what):
    if isinstance(v, (int, float)):
        return complex(v, 0.0)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ConfigError(f"{what}: expected a number or [re, im] pair, got {v!r}")


def _complex_to(z):
    return [z.real, z.imag]


def function_to_dict(Q):
    """Serialize an N1 function to the JSON-ready spec dictionary."""
    f = Q.factor
    factor = {"kind": f.kind}
    if f.alpha is not None:
        factor["alpha"] = _complex_to(f.alpha)
    if f.beta is not None:
        factor["beta"] = _complex_to(f.beta)
    measure = [
        {"type": "poly", "interval": [p.lo, p.hi], "coeffs": list(p.coeffs)}
        for p in Q.base.measure.pieces
    ] + [{"type": "atom", "at": a.location, "mass": a.mass} for a in Q.base.measure.atoms]
    return {
        "factor": factor,
        "a_eff": Q.base.a_eff,
        "b": Q.base.b,
        "fullline": Q.base.fullline,
        "measure": measure,
    }


def function_from_dict(d):
    """Inverse of function_to_dict, with validation."""
    try:
        fd = d["factor"]
        kind = fd["kind"]
        alpha = _complex_from(fd["alpha"], "factor.alpha") if "alpha" in fd else None
        beta = _complex_from(fd["beta"], "factor.beta") if "beta" in fd else None
        factor = FactorR(kind, alpha=alpha, beta=beta)
        pieces, atoms = [], []
        for entry in d.get("measure", []):
            if entry.get("type") == "poly":
                lo, hi = entry["interval"]
                pieces.append(PolynomialDensityPiece(float(lo), float(hi), tuple(entry["coeffs"])))
            elif entry.get("type") == "atom":
                atoms.append(Atom(float(entry["at"]), float(entry["mass"])))
            else:
                raise ConfigError(f"unknown measure entry {entry!r}")
        measure = SpectralMeasure(tuple(pieces), tuple(atoms))
        base = NevanlinnaFunction(
            float(d.get("a_eff", 0.0)),
            float(d.get("b", 0.0)),
            measure,
            float(d.get("fullline", 0.0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed function spec: {exc}") from exc
    if base.b < 0:
        raise ConfigError("linear coefficient b must be nonnegative")
    if base.fullline < 0:
        raise ConfigError("full-line density must be nonnegative")
    report = validate_measure(measure)
    if not report.ok:
        raise ConfigError("invalid measure: " + "; ".join(msg for _, msg in report.violations))
    return N1Function(factor, base)


def parse_spec(text):
    """Resolve a --spec argument: ``builtin:<name>``, a JSON file path, or
    inline JSON."""
    if text.startswith("builtin:"):
        return builtin(text[len("builtin:"):])
    if text.lstrip().startswith("{"):
        return function_from_dict(json.loads(text))
    try:
        with open(text, encoding="utf-8") as fh:
            return function_from_dict(json.load(fh))
    except OSError as exc:
        raise ConfigError(f"cannot read spec {text!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"spec {text!r} is not valid JSON: {exc}") from exc
