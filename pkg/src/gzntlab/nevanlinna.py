"""Herglotz-Nevanlinna functions built from a spectral measure.

M(z) = a_eff + b*z + int d sigma(t)/(t-z) + (full-line constant term), where
the usual regularizer t/(1+t^2) has been absorbed into a_eff (all supported
measures integrate it).  An optional constant Lebesgue density on the whole
line is kept analytically: it contributes i*pi*c on the upper half-plane and
continues across the axis as the constant i*pi*c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from ._jets import Jet
from .cauchy import (
    _FULL_JUMP,
    _HALF_JUMP,
    _PRINCIPAL,
    _transform_jet,
    fullline_extended,
)
from .errors import AtomCollision, DomainError, NoConvergence
from .measures import SpectralMeasure

DEFAULT_EPS_SEQ = tuple(0.1 * 2.0**-k for k in range(9))


@dataclass(frozen=True)
class NevanlinnaFunction:
    """Triple (a_eff, b, sigma) plus an optional full-line constant density."""

    a_eff: float
    b: float
    measure: SpectralMeasure = field(default_factory=SpectralMeasure)
    fullline: float = 0.0

    def __call__(self, z):
        return eval_M(self, z)

    def interval_mass(self, t1, t2):
        """Model mass of [t1, t2] including the full-line density."""
        return self.measure.interval_mass(t1, t2) + self.fullline * (t2 - t1)


@dataclass(frozen=True)
class ExtensionWindow:
    """Maximal real interval across which M continues holomorphically.

    ``host`` is the index of the density piece whose interior contains the
    window (None for a gap window).  ``designated`` is the one atom location
    allowed inside; the continued function keeps its pole there.
    """

    lo: float
    hi: float
    host: int | None = None
    designated: float | None = None

    def contains(self, z):
        z = complex(z)
        return z.imag > 0.0 or self.lo < z.real < self.hi


def _piece_correction(piece, z):
    """Branch correction for one piece under continuation-from-above at z."""
    z = complex(z)
    if z.imag > 0.0:
        return _PRINCIPAL
    x = z.real
    if x == piece.lo or x == piece.hi:
        raise DomainError(f"evaluation on the endpoint vertical Re z = {x} of piece [{piece.lo}, {piece.hi}]")
    inside = piece.lo < x < piece.hi
    if z.imag == 0.0:
        return _HALF_JUMP if inside else _PRINCIPAL
    return _FULL_JUMP if inside else _PRINCIPAL


def _atom_jet(location, mass, z, order):
    d = location - complex(z)
    if d == 0:
        raise AtomCollision(f"evaluation at the point mass t={location}")
    return Jet(mass / d ** (k + 1) for k in range(order + 1))


def eval_M_jet(M, z, order=0, *, continued, skip_atom=None):
    """Jet of M at z.

    With ``continued=False`` this is the plain two-half-plane evaluation
    (symmetric below the axis, undefined on it).  With ``continued=True`` it
    is the continuation of M from the upper half-plane: boundary values on
    the axis, jump-corrected values in the columns below density pieces.
    """
    z = complex(z)
    if not continued:
        if z.imag == 0.0:
            raise DomainError("M is only defined off the real axis; use the continued evaluation")
        acc = Jet.constant(complex(M.a_eff, 0) + 1j * math.pi * M.fullline * (1 if z.imag > 0 else -1), order)
    else:
        acc = Jet.constant(M.a_eff + fullline_extended(M.fullline), order)
    if M.b:
        acc = acc + Jet.variable(z, order) * M.b
    for piece in M.measure.pieces:
        corr = _piece_correction(piece, z) if continued else _PRINCIPAL
        acc = acc + _transform_jet(piece.lo, piece.hi, piece.coeffs, z, order, corr)
    for atom in M.measure.atoms:
        if skip_atom is not None and atom.location == skip_atom:
            continue
        acc = acc + _atom_jet(atom.location, atom.mass, z, order)
    return acc


def eval_M(M, z):
    """M(z) for z off the real axis (symmetry principle below it)."""
    return eval_M_jet(M, z, 0, continued=False).f


def extension_window(M, x, designated=None):
    """Largest window around real x across which M continues holomorphically.

    The window is bounded by piece endpoints (an interior point of a piece
    is hosted by that piece, a gap point by the neighbouring closures) and
    by any atom other than the designated one.
    """
    lo, hi, host = -math.inf, math.inf, None
    for i, p in enumerate(M.measure.pieces):
        if p.lo < x < p.hi:
            lo, hi, host = p.lo, p.hi, i
            break
        if x == p.lo or x == p.hi:
            raise DomainError(f"x={x} sits on a piece endpoint; no continuation window there")
    if host is None:
        for p in M.measure.pieces:
            if p.hi <= x:
                lo = max(lo, p.hi)
            if p.lo >= x:
                hi = min(hi, p.lo)
    for a in M.measure.atoms:
        if a.location == designated:
            continue
        if a.location == x:
            raise AtomCollision(f"x={x} carries a non-designated point mass")
        if lo < a.location < x:
            lo = a.location
        elif x < a.location < hi:
            hi = a.location
    return ExtensionWindow(lo, hi, host, designated)


def eval_M_extended(M, window, z):
    """Continuation of M|C+ evaluated inside window union C+.

    Agrees with eval_M on the upper half-plane; on the window interval the
    value is the boundary value from above; in the strip below, the jump
    formula applies to the hosting piece while all other contributions
    continue by reflection/direct evaluation.
    """
    z = complex(z)
    if not window.contains(z):
        raise DomainError(f"z={z} outside window ({window.lo}, {window.hi}) union C+")
    for a in M.measure.atoms:
        if window.lo < a.location < window.hi and a.location != window.designated and z.imag <= 0:
            raise AtomCollision(f"window contains the non-designated point mass at t={a.location}")
    return eval_M_jet(M, z, 0, continued=True).f


def stieltjes_invert(M, t1, t2, eps_seq=None, tol=1e-5):
    """Recover sigma([t1, t2]) from boundary values of Im M.

    Computes (1/pi) * int_{t1}^{t2} Im M(t + i*eps) dt over a decreasing
    eps sequence and removes the O(eps) Poisson-kernel error with a 2-point
    Richardson step.  t1, t2 must not be atom locations.
    """
    if t1 >= t2:
        raise DomainError("need t1 < t2")
    for a in M.measure.atoms:
        if a.location in (t1, t2):
            raise DomainError(f"interval endpoint {a.location} is an atom location")
    eps_seq = tuple(eps_seq) if eps_seq is not None else DEFAULT_EPS_SEQ
    if len(eps_seq) < 3:
        raise DomainError("need at least three eps values for extrapolation")

    breaks = sorted(
        {a.location for a in M.measure.atoms if t1 < a.location < t2}
        | {e for p in M.measure.pieces for e in (p.lo, p.hi) if t1 < e < t2}
    )

    def smoothed(eps):
        f = lambda t: eval_M(M, complex(t, eps)).imag / math.pi
        val, _ = integrate.quad(f, t1, t2, points=breaks or None, limit=400)
        return val

    vals = [smoothed(e) for e in eps_seq]
    rich = [2.0 * vals[k + 1] - vals[k] for k in range(len(vals) - 1)]
    resid = [abs(rich[k + 1] - rich[k]) for k in range(len(rich) - 1)]
    if not resid[-1] <= tol * (1.0 + abs(rich[-1])):
        raise NoConvergence(f"inversion residual {resid[-1]:.2e} exceeds tolerance on [{t1}, {t2}]")
    return rich[-1]


def nevanlinna_kernel(values_at, points):
    """Hermitian Gram matrix (f(z_i) - conj(f(z_j))) / (z_i - conj(z_j))."""
    zs = np.asarray(points, dtype=complex)
    fs = np.asarray([values_at(z) for z in zs])
    num = fs[:, None] - np.conj(fs)[None, :]
    den = zs[:, None] - np.conj(zs)[None, :]
    return num / den


def kernel_signature(K, rel_tol=1e-9):
    """(n_negative, n_positive) eigenvalue counts at threshold rel_tol*||K||."""
    w = np.linalg.eigvalsh(K)
    thresh = rel_tol * max(np.max(np.abs(w)), 1e-300)
    return int(np.sum(w < -thresh)), int(np.sum(w > thresh))
