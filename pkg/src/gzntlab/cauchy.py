"""Cauchy transforms of polynomial densities and their continuation.

For a polynomial p on [lo, hi] the transform I(z) = int p(t)/(t-z) dt is
closed form through the recurrence

    I_0(z) = Log((hi-z)/(lo-z)),
    I_n(z) = z*I_{n-1}(z) + (hi^n - lo^n)/n,

with the principal logarithm.  Continuation of the restriction to the upper
half-plane across (lo, hi) only needs a correction of the base value I_0:

  * on the interval itself the boundary value is ln((hi-x)/(x-lo)) + i*pi
    (principal value plus the half jump),
  * in the open lower half-plane below the interval the correction is the
    full jump +2*pi*i.

The recurrence then propagates the correction to 2*pi*i*p(z) automatically.
Branch convention: principal Log everywhere; the lower sheet is an explicit
additive correction, never a rotated branch cut.  The boundary value is
built from real logarithms, not from Log of a negative real, to stay clear
of signed-zero branch flips.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy import integrate

from ._jets import Jet
from .errors import DomainError, NoConvergence

TWO_PI_I = 2j * math.pi

# additive corrections of I_0 relative to the principal branch
_PRINCIPAL = 0
_HALF_JUMP = 1
_FULL_JUMP = 2


def _i0_jet(lo, hi, z, order, correction):
    """Jet of the base transform I_0 at z, with the requested branch correction."""
    z = complex(z)
    if correction == _HALF_JUMP:
        x = z.real
        c0 = complex(math.log((hi - x) / (x - lo)), math.pi)
    else:
        c0 = cmath.log((hi - z) / (lo - z))
        if correction == _FULL_JUMP:
            c0 += TWO_PI_I
    coeffs = [c0]
    am, bm = 1.0 + 0j, 1.0 + 0j
    for m in range(1, order + 1):
        am *= lo - z
        bm *= hi - z
        coeffs.append((1.0 / am - 1.0 / bm) / m)
    return Jet(coeffs)


def _transform_jet(lo, hi, coeffs, z, order, correction):
    zj = Jet.variable(z, order)
    i_n = _i0_jet(lo, hi, z, order, correction)
    acc = i_n * coeffs[0]
    hp, lp = hi, lo
    for n in range(1, len(coeffs)):
        i_n = zj * i_n + (hp - lp) / n
        hp *= hi
        lp *= lo
        if coeffs[n]:
            acc = acc + i_n * coeffs[n]
    return acc


def _window_correction(lo, hi, z):
    """Branch correction for the continued transform; DomainError off window."""
    z = complex(z)
    if z.imag > 0.0:
        return _PRINCIPAL
    x = z.real
    if x == lo or x == hi:
        raise DomainError(f"continuation undefined on the endpoint vertical Re z = {x}")
    if z.imag == 0.0:
        if lo < x < hi:
            return _HALF_JUMP
        return _PRINCIPAL  # real axis beyond the interval: already holomorphic
    if lo < x < hi:
        return _FULL_JUMP
    raise DomainError(f"z={z} outside the continuation window over ({lo}, {hi})")


def cauchy_poly(lo, hi, coeffs, z):
    """int p(t)/(t-z) dt for z off the closed interval [lo, hi].

    Exact up to roundoff; linear in the coefficients.  Real z outside the
    interval is allowed (the value is then real for real coefficients).
    """
    return cauchy_poly_jet(lo, hi, coeffs, z, 0).f


def cauchy_poly_jet(lo, hi, coeffs, z, order=0):
    z = complex(z)
    if z.imag == 0.0 and lo <= z.real <= hi:
        raise DomainError(f"z={z} lies on the closed interval [{lo}, {hi}]")
    return _transform_jet(lo, hi, coeffs, z, order, _PRINCIPAL)


def cauchy_extended(lo, hi, coeffs, z):
    """Continuation of the transform from above across (lo, hi).

    The window is {x+iy : lo < x < hi} united with the upper half-plane;
    anything else raises DomainError.  On the interval the value is the
    principal-value integral plus i*pi*p(x); in the lower window it is
    conj(I(conj z)) + 2*pi*i*p(z), which the branch correction realizes.
    """
    return cauchy_extended_jet(lo, hi, coeffs, z, 0).f


def cauchy_extended_jet(lo, hi, coeffs, z, order=0):
    return _transform_jet(lo, hi, coeffs, z, order, _window_correction(lo, hi, z))


def poly_eval(coeffs, z):
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def poly_jump(coeffs, z):
    """The jump 2*pi*i*p(z) of the transform across the interval."""
    return TWO_PI_I * poly_eval(coeffs, z)


def cauchy_quad(density, lo, hi, z, rtol=1e-10):
    """Adaptive-quadrature oracle for int density(t)/(t-z) dt, z off [lo, hi].

    Splits the interval at the projection of z and applies a tanh-sinh rule
    on each half, which is robust against the near-singular alignment.
    Raises NoConvergence if the error estimate exceeds rtol*(1+|value|).
    """
    z = complex(z)
    if z.imag == 0.0 and lo <= z.real <= hi:
        raise DomainError(f"z={z} on the closed interval")
    split = min(max(z.real, lo), hi)
    spans = [(lo, split), (split, hi)] if lo < split < hi else [(lo, hi)]

    val = 0j
    err = 0.0
    for a, b in spans:
        for take in (np.real, np.imag):
            def part(t, _take=take):
                t = np.asarray(t, dtype=float)
                return _take(density(t) / (t - z))

            res = integrate.tanhsinh(part, a, b, atol=1e-14, rtol=1e-13)
            val += (1.0 if take is np.real else 1j) * float(res.integral)
            err += float(res.error) if math.isfinite(res.error) else math.inf
    if not err <= rtol * (1.0 + abs(val)):
        raise NoConvergence(f"quadrature error {err:.2e} above target near z={z}")
    return val


def fullline_constant(z, c):
    """Regularized transform of the constant density c on the whole line.

    c * int (1/(t-z) - t/(t^2+1)) dt = i*pi*c*sign(Im z); DomainError on the
    real axis (use fullline_extended for boundary/continued values).
    """
    z = complex(z)
    if z.imag == 0.0:
        raise DomainError("full-line transform undefined on the real axis")
    return 1j * math.pi * c * (1.0 if z.imag > 0 else -1.0)


def fullline_extended(c):
    """Continuation of the full-line constant transform from above: i*pi*c."""
    return 1j * math.pi * c
