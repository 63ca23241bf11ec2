"""Generalized Nevanlinna functions with one negative square.

Q(z) = R(z) * M(z) where R is one of

    (z-a)(z-conj a)/((z-b)(z-conj b)),   (z-a)(z-conj a),   1/((z-b)(z-conj b)),

a (the GZNT) and b (the GPNT) in the closed upper half-plane.  For a real
GZNT the continued evaluation uses the point-mass split

    Q~(z) = R0(z) * ( -m0*(z-a) + (z-a)^2 * M1~(z) ),

which is manifestly holomorphic at a; m0 is the atom mass of the measure at
a and M1 the measure with that atom removed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from ._jets import Jet
from .errors import (
    DomainError,
    NotAZero,
    NoConvergence,
    PoleHit,
    Unclassifiable,
)
from .measures import SpectralMeasure, mass_at
from .nevanlinna import NevanlinnaFunction, eval_M_jet, extension_window

ZERO_POLE = "zero_pole"
ZERO_ONLY = "zero_only"
POLE_ONLY = "pole_only"

_DERIV_NODES = 256


@dataclass(frozen=True)
class FactorR:
    """The rational factor R of the one-negative-square factorization."""

    kind: str
    alpha: complex | None = None
    beta: complex | None = None

    def __post_init__(self):
        if self.kind not in (ZERO_POLE, ZERO_ONLY, POLE_ONLY):
            raise DomainError(f"unknown factor kind {self.kind!r}")
        want_alpha = self.kind in (ZERO_POLE, ZERO_ONLY)
        want_beta = self.kind in (ZERO_POLE, POLE_ONLY)
        if want_alpha != (self.alpha is not None) or want_beta != (self.beta is not None):
            raise DomainError(f"factor kind {self.kind} with alpha={self.alpha}, beta={self.beta}")
        for name, v in (("alpha", self.alpha), ("beta", self.beta)):
            if v is not None:
                v = complex(v)
                if v.imag < 0:
                    raise DomainError(f"{name}={v} must lie in the closed upper half-plane")
                object.__setattr__(self, name, v)


@dataclass(frozen=True)
class N1Function:
    factor: FactorR
    base: NevanlinnaFunction

    def gznt(self):
        return self.factor.alpha if self.factor.alpha is not None else complex(math.inf, 0)

    def gpnt(self):
        return self.factor.beta if self.factor.beta is not None else complex(math.inf, 0)

    def __call__(self, z):
        return eval_Q(self, z)


def _pole_quadratic_jet(beta, z, order):
    """Jet of (z-b)(z-conj b)."""
    zj = Jet.variable(z, order)
    return (zj - beta) * (zj - beta.conjugate())


def _jet_quotient(num, den, order, z):
    """num/den truncated to the requested order.

    An exact zero of the denominator is allowed when the numerator vanishes
    with it (removable singularity, e.g. the continued function at conj(b));
    otherwise it is a PoleHit.  Both jets must carry enough extra orders to
    absorb the cancellation.
    """
    ncs, dcs = list(num.c), list(den.c)
    while dcs and dcs[0] == 0:
        if ncs[0] != 0 or len(dcs) == 1:
            raise PoleHit(f"evaluation at the generalized pole {z}")
        ncs.pop(0)
        dcs.pop(0)
    q = Jet(ncs) / Jet(dcs)
    return Jet(q.c[: order + 1])


def split_point_mass(Q, alpha):
    """(m0, M1): atom mass at alpha and the base function without that atom.

    The reconstruction M(z) = M1(z) + m0/(alpha - z) holds pointwise.
    """
    m0 = mass_at(Q.base.measure, alpha)
    if m0 == 0.0:
        return 0.0, Q.base
    rest = tuple(a for a in Q.base.measure.atoms if a.location != alpha)
    m1 = replace(Q.base, measure=SpectralMeasure(Q.base.measure.pieces, rest))
    return m0, m1


def eval_Q_jet(Q, z, order=0, *, continued):
    """Jet of Q at z; plain two-half-plane product or the continuation."""
    z = complex(z)
    f = Q.factor
    hi = order + 2 if f.kind in (ZERO_POLE, POLE_ONLY) else order
    if continued and f.alpha is not None and f.alpha.imag == 0.0:
        a = f.alpha.real
        m0, m1 = split_point_mass(Q, a)
        zj = Jet.variable(z, hi)
        num = (zj - a) * (-m0) + (zj - a) ** 2 * eval_M_jet(m1, z, hi, continued=True)
    else:
        mjet = eval_M_jet(Q.base, z, hi, continued=continued)
        zj = Jet.variable(z, hi)
        if f.kind == POLE_ONLY:
            num = mjet
        else:
            num = (zj - f.alpha) * (zj - f.alpha.conjugate()) * mjet
    if f.kind in (ZERO_POLE, POLE_ONLY):
        return _jet_quotient(num, _pole_quadratic_jet(f.beta, z, hi), order, z)
    return num


def eval_Q(Q, z):
    """Q(z) off the real axis (symmetric evaluation path below it)."""
    return eval_Q_jet(Q, z, 0, continued=False).f


def eval_Q_extended(Q, z):
    """Continuation of Q|C+ at z (closed upper half-plane, or the strip
    below wherever the measure admits it)."""
    return eval_Q_jet(Q, z, 0, continued=True).f


def q_window(Q, x, designated=None):
    """Extension window of the base measure around real x, honouring the
    designated GZNT atom by default."""
    if designated is None and Q.factor.alpha is not None and Q.factor.alpha.imag == 0.0:
        designated = Q.factor.alpha.real
    return extension_window(Q.base, x, designated)


def analyticity_radius(Q, z0, cap=0.1):
    """Safe radius about z0 for contour derivatives of the continued Q.

    Half the distance to the nearest obstruction: piece endpoints, atom
    locations other than a real GZNT (whose pole cancels), and the GPNT
    pair.  Capped at ``cap``.
    """
    z0 = complex(z0)
    f = Q.factor
    obstructions = []
    for p in Q.base.measure.pieces:
        obstructions.extend((p.lo, p.hi))
    designated = f.alpha.real if (f.alpha is not None and f.alpha.imag == 0.0) else None
    for a in Q.base.measure.atoms:
        if a.location != designated:
            obstructions.append(a.location)
    if f.beta is not None:
        obstructions.extend((f.beta, f.beta.conjugate()))
    if not obstructions:
        return cap
    dist = min(abs(z0 - complex(s)) for s in obstructions)
    if dist == 0.0:
        raise DomainError(f"z0={z0} sits on a singular point of the continued function")
    return min(cap, 0.5 * dist)


def derivatives_at(Q, z0, k_max=3, radius=None, nodes=_DERIV_NODES):
    """Derivatives Q~^(k)(z0), k=1..k_max, by Cauchy circle integrals.

    Trapezoid sums on a circle of the given radius (spectrally accurate);
    the error estimate per derivative is the node-doubling difference.
    Accepts an N1Function or any callable holomorphic on the closed disk.
    Returns (values, errors) with values[k-1] = k-th derivative.
    """
    if isinstance(Q, N1Function):
        r = radius if radius is not None else analyticity_radius(Q, z0)
        func = lambda w: eval_Q_jet(Q, w, 0, continued=True).f
    else:
        if radius is None:
            raise DomainError("a radius is required for a bare callable")
        r, func = radius, Q
    z0 = complex(z0)
    vals, errs = None, None
    for _ in range(4):
        theta = 2.0 * math.pi * np.arange(nodes) / nodes
        try:
            samples = np.array([func(z0 + r * cmath.exp(1j * t)) for t in theta])
        except DomainError:
            r *= 0.5
            continue
        coeff_full = np.fft.fft(samples) / nodes
        coeff_half = np.fft.fft(samples[::2]) / (nodes // 2)
        vals, errs = [], []
        fact = 1.0
        noise = 4e-16 * float(np.max(np.abs(samples)))
        for k in range(1, k_max + 1):
            fact *= k
            scale = fact / r**k
            vals.append(complex(coeff_full[k]) * scale)
            errs.append(abs(coeff_full[k] - coeff_half[k]) * scale + noise * scale)
        if all(e <= 1e-6 * (1.0 + abs(v)) for v, e in zip(vals, errs)):
            break
        r *= 0.5  # pole contamination or slow decay: shrink the circle
    if vals is None:
        raise DomainError(f"no valid derivative circle around z0={z0}")
    return vals, [float(e) for e in errs]


@dataclass(frozen=True)
class CaseReport:
    """Local trichotomy at a real contact point of the zero trajectory."""

    z0: float
    case: int
    theta0: float | None
    derivatives: tuple
    errors: tuple
    tol: float
    boundary_theta: bool = False

    def as_dict(self):
        return {
            "z0": self.z0,
            "case": self.case,
            "theta0": self.theta0,
            "boundary_theta": self.boundary_theta,
            "derivatives": [[d.real, d.imag] for d in self.derivatives],
            "errors": list(self.errors),
            "tol": self.tol,
        }


def _dead_band(mag, tol):
    return tol / 10.0 <= mag <= tol


def case_report_from_derivs(z0, derivs, errs):
    """Classify a contact from (Q', Q'', Q''') with their error estimates.

    Zero tests use tol = max(1e-8, 1000*error); magnitudes inside
    [tol/10, tol] are refused as Unclassifiable rather than guessed.
    """
    d1, d2, d3 = derivs
    tol = max(1e-8, 1e3 * max(errs))
    scale = max(1.0, abs(d1), abs(d2), abs(d3))
    tol_s = tol * scale
    if _dead_band(abs(d1), tol_s):
        raise Unclassifiable(f"|Q'|={abs(d1):.3e} inside the dead band at z0={z0}")
    if abs(d1) > tol_s:
        if d1.real < 0 and abs(d1.imag) <= tol_s:
            return CaseReport(z0, 1, None, tuple(derivs), tuple(errs), tol)
        raise Unclassifiable(f"Q'={d1} at z0={z0} is neither zero nor negative real")
    if _dead_band(abs(d2), tol_s):
        raise Unclassifiable(f"|Q''|={abs(d2):.3e} inside the dead band at z0={z0}")
    if abs(d2) > tol_s:
        if d2.imag < -tol_s:
            raise Unclassifiable(f"Q''={d2} at z0={z0} has negative imaginary part")
        theta0 = math.atan2(max(d2.imag, 0.0), d2.real)
        boundary = theta0 <= 1e-7 or theta0 >= math.pi - 1e-7
        return CaseReport(z0, 2, theta0, tuple(derivs), tuple(errs), tol, boundary)
    if _dead_band(abs(d3), tol_s):
        raise Unclassifiable(f"|Q'''|={abs(d3):.3e} inside the dead band at z0={z0}")
    if d3.real > tol_s and abs(d3.imag) <= tol_s:
        return CaseReport(z0, 3, None, tuple(derivs), tuple(errs), tol)
    raise Unclassifiable(f"derivatives ({d1}, {d2}, {d3}) at z0={z0} fit no case")


def local_case(Q, z0):
    """Trichotomy of a real GZNT: Q'<0, or Q'=0 with Q''!=0 (angle
    theta0 = arg Q'' in [0, pi]), or Q'=Q''=0 with Q'''>0."""
    z0 = float(z0)
    val = eval_Q_jet(Q, z0, 0, continued=True).f
    derivs, errs = derivatives_at(Q, z0)
    zero_tol = max(1e-8, 1e3 * max(errs)) * max(1.0, *(abs(d) for d in derivs))
    if abs(val) > zero_tol:
        raise NotAZero(f"|Q~({z0})| = {abs(val):.3e} exceeds {zero_tol:.3e}")
    return case_report_from_derivs(z0, derivs, errs)


def halton_points(n, lo=-2.0, hi=2.0, im_lo=0.2, im_hi=2.0):
    """Deterministic low-discrepancy points in a C+ box (bases 2 and 3)."""

    def radical_inverse(i, base):
        f, r = 1.0, 0.0
        while i > 0:
            f /= base
            r += f * (i % base)
            i //= base
        return r

    return [
        complex(lo + (hi - lo) * radical_inverse(i, 2), im_lo + (im_hi - im_lo) * radical_inverse(i, 3))
        for i in range(1, n + 1)
    ]
