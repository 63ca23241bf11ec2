"""Spectral measures: polynomial densities on compact intervals plus atoms.

This data model covers every builtin example (densities 1/pi, 1, t^2, t^4 and
point masses) while keeping all transforms closed form.  Measures are
immutable; validation returns diagnostics instead of raising.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AmbiguousBoundary

#: local_order result for a point carrying an atom
LOCAL_ATOM = "atom"
#: local_order result for a point outside every density piece
LOCAL_NONE = "no-density"

_ZERO_COEFF_RTOL = 1e-13


@dataclass(frozen=True)
class PolynomialDensityPiece:
    """Density phi(t) = sum c_k t^k on [lo, hi]."""

    lo: float
    hi: float
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def density(self, t):
        """Evaluate phi at t (scalar, complex or ndarray) via Horner."""
        acc = 0.0 if np.isscalar(t) else np.zeros_like(np.asarray(t))
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def shifted_coeffs(self, alpha):
        """Coefficients d_j of phi(alpha + s) = sum d_j s^j (Taylor shift)."""
        d = [0.0] * len(self.coeffs)
        for k, c in enumerate(self.coeffs):
            # binomial expansion of c * (alpha + s)^k
            binom = 1.0
            for j in range(k + 1):
                d[j] += c * binom * alpha ** (k - j)
                binom = binom * (k - j) / (j + 1)
        return tuple(d)

    def contains(self, x, strict=True):
        if strict:
            return self.lo < x < self.hi
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class Atom:
    """Point mass m at a real location."""

    location: float
    mass: float


@dataclass(frozen=True)
class SpectralMeasure:
    """Finitely many density pieces with pairwise-disjoint interiors, plus atoms."""

    pieces: tuple = field(default_factory=tuple)
    atoms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        object.__setattr__(self, "atoms", tuple(self.atoms))

    def interval_mass(self, t1, t2):
        """sigma([t1, t2]) for the stored model (exact)."""
        total = 0.0
        for p in self.pieces:
            a, b = max(p.lo, t1), min(p.hi, t2)
            if a < b:
                for k, c in enumerate(p.coeffs):
                    total += c * (b ** (k + 1) - a ** (k + 1)) / (k + 1)
        for at in self.atoms:
            if t1 <= at.location <= t2:
                total += at.mass
        return total

    def cauchy_integrability(self):
        """The value of int d sigma / (1 + t^2); finite for any valid model."""
        total = 0.0
        for p in self.pieces:
            ts = np.linspace(p.lo, p.hi, 64)
            total += np.trapezoid(p.density(ts) / (1.0 + ts**2), ts)
        for at in self.atoms:
            total += at.mass / (1.0 + at.location**2)
        return float(total)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def ok(self):
        return not self.violations


def _chebyshev_nodes(lo, hi, n):
    k = np.arange(n)
    x = np.cos((2 * k + 1) * np.pi / (2 * n))
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * x


def validate_measure(measure: SpectralMeasure) -> ValidationReport:
    """Collect violations; an empty list means the measure is usable.

    Density nonnegativity is checked by sampling at Chebyshev nodes
    (8*degree + 16 of them) plus the endpoints; this is a practical test,
    not a certificate.
    """
    bad = []
    pieces = measure.pieces
    for i, p in enumerate(pieces):
        if not (math.isfinite(p.lo) and math.isfinite(p.hi)) or not p.lo < p.hi:
            bad.append(("invalid-interval", f"piece {i}: interval [{p.lo}, {p.hi}] is not a finite interval with lo < hi"))
            continue
        if not all(math.isfinite(c) for c in p.coeffs):
            bad.append(("nonfinite-coeff", f"piece {i}: non-finite density coefficient"))
            continue
        nodes = np.concatenate([_chebyshev_nodes(p.lo, p.hi, 8 * max(p.degree, 0) + 16), [p.lo, p.hi]])
        vals = p.density(nodes)
        scale = max(1.0, float(np.max(np.abs(vals))))
        if np.min(vals) < -1e-12 * scale:
            worst = nodes[int(np.argmin(vals))]
            bad.append(("negative-density", f"piece {i}: density negative near t={worst:.6g} (phi={np.min(vals):.3g})"))
    order = sorted(range(len(pieces)), key=lambda i: pieces[i].lo)
    for a, b in zip(order, order[1:]):
        if pieces[a].hi > pieces[b].lo:
            bad.append(("overlapping-pieces", f"pieces {a} and {b} have overlapping interiors"))
    seen = {}
    for i, at in enumerate(measure.atoms):
        if not (math.isfinite(at.location) and math.isfinite(at.mass)):
            bad.append(("nonfinite-atom", f"atom {i}: non-finite location or mass"))
            continue
        if at.mass <= 0:
            bad.append(("nonpositive-mass", f"atom {i} at {at.location:.6g}: nonpositive mass {at.mass:.6g}"))
        if at.location in seen:
            bad.append(("duplicate-atoms", f"atoms {seen[at.location]} and {i} share location {at.location:.6g}"))
        seen[at.location] = i
    if not bad and not math.isfinite(measure.cauchy_integrability()):
        bad.append(("nonintegrable", "int d sigma/(1+t^2) is not finite"))
    return ValidationReport(tuple(bad))


def mass_at(measure: SpectralMeasure, alpha: float) -> float:
    """Atom mass carried at alpha exactly; 0 if no atom sits there."""
    return sum(a.mass for a in measure.atoms if a.location == alpha)


def local_order(measure: SpectralMeasure, alpha: float):
    """Order of vanishing of the density at alpha.

    Returns ``LOCAL_ATOM`` if an atom sits at alpha, the smallest p with a
    nonzero p-th Taylor coefficient if alpha is interior to a piece, or
    ``LOCAL_NONE`` outside every piece closure.  Sitting exactly on a piece
    endpoint raises AmbiguousBoundary: the caller has to refine the model.
    """
    if mass_at(measure, alpha) > 0:
        return LOCAL_ATOM
    for p in measure.pieces:
        if alpha == p.lo or alpha == p.hi:
            raise AmbiguousBoundary(f"alpha={alpha} is an endpoint of piece [{p.lo}, {p.hi}]")
        if p.contains(alpha):
            d = p.shifted_coeffs(alpha)
            scale = sum(abs(c) * max(1.0, abs(alpha)) ** k for k, c in enumerate(p.coeffs))
            for j, dj in enumerate(d):
                if abs(dj) > _ZERO_COEFF_RTOL * max(scale, 1.0):
                    return j
            # density is the zero polynomial on this piece
            return LOCAL_NONE
    return LOCAL_NONE
