"""Classification of a real zero of nonpositive type into cases (A)-(E).

The decision data are the atom mass delta at alpha, the nontangential limit
gamma = lim Q(z)/(z-alpha)^2, and convergence of the moment integrals
int d sigma(t)/(t-alpha)^k for k = 2, 4:

    A   delta > 0
    B   delta = 0, moment2 divergent
    C   delta = 0, moment2 finite, gamma real nonzero
    D   delta = gamma = 0, moment2 finite, moment4 divergent
    E   delta = gamma = 0, moment4 finite

Divergence is decided symbolically from the vanishing order of the density
at alpha, never by watching quadrature blow up.  The normalized form with
the generalized pole at infinity is required; classification for a finite
pole is rejected rather than guessed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .cauchy import cauchy_poly_jet
from .errors import DomainError, NoConvergence, Unclassifiable
from .measures import LOCAL_ATOM, LOCAL_NONE, local_order, mass_at
from .n1 import ZERO_ONLY, eval_Q
from .nevanlinna import eval_M_jet

DIVERGENT = "divergent"

_ZERO_TOL = 1e-8


@dataclass(frozen=True)
class ClassificationEvidence:
    alpha: float
    delta: float
    gamma: complex | None
    moment2: object          # float or DIVERGENT
    moment4: object          # float, DIVERGENT or None (not needed)
    decided: str

    def as_dict(self):
        def enc(v):
            if v is None or isinstance(v, str):
                return v
            if isinstance(v, complex):
                return [v.real, v.imag]
            return v

        return {
            "alpha": self.alpha,
            "delta": self.delta,
            "gamma": enc(self.gamma),
            "moment2": enc(self.moment2),
            "moment4": enc(self.moment4),
            "class": self.decided,
        }

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2)


def moment_integral(measure, alpha, k, fullline=0.0):
    """int d sigma(t)/(t-alpha)^k, decided symbolically, computed exactly.

    Returns DIVERGENT or the value.  An atom at alpha, a density of
    vanishing order < k at alpha, or a positive full-line density all force
    divergence; otherwise the local piece integrates by polynomial division
    and remote pieces via derivatives of the closed-form transform.
    """
    if k not in (2, 4):
        raise DomainError(f"moment order k={k} unsupported (need 2 or 4)")
    order = local_order(measure, alpha)
    if order == LOCAL_ATOM:
        return DIVERGENT
    if fullline > 0.0:
        return DIVERGENT
    if order != LOCAL_NONE and order < k:
        return DIVERGENT
    total = 0.0
    for piece in measure.pieces:
        if piece.contains(alpha):
            shifted = piece.shifted_coeffs(alpha)
            for j in range(k, len(shifted)):
                p = j - k + 1
                total += shifted[j] * ((piece.hi - alpha) ** p - (piece.lo - alpha) ** p) / p
        else:
            jet = cauchy_poly_jet(piece.lo, piece.hi, piece.coeffs, alpha, k - 1)
            total += jet.derivative(k - 1).real / math.factorial(k - 1)
    for atom in measure.atoms:
        total += atom.mass / (atom.location - alpha) ** k
    return total


def gamma_alpha(Q, alpha, h0=0.1, levels=11):
    """Nontangential limit of Q(z)/(z-alpha)^2 along z = alpha + i*h.

    Halving h sequence with iterated Richardson extrapolation; requires the
    normalized form (generalized pole at infinity) and no atom at alpha.
    """
    if Q.factor.kind != ZERO_ONLY:
        raise DomainError("gamma limit requires the normalized form with pole at infinity")
    if mass_at(Q.base.measure, alpha) > 0:
        raise DomainError("gamma limit undefined when alpha carries a point mass")
    hs = [h0 * 2.0**-k for k in range(levels)]
    table = [eval_Q(Q, complex(alpha, h)) / (1j * h) ** 2 for h in hs]
    for m in range(1, 4):
        w = 2.0**m
        table = [(w * table[i + 1] - table[i]) / (w - 1.0) for i in range(len(table) - 1)]
    resid = abs(table[-1] - table[-2])
    if not resid <= 1e-6 * (1.0 + abs(table[-1])):
        raise NoConvergence(f"gamma extrapolation residual {resid:.2e} at alpha={alpha}")
    return table[-1]


def classify(Q, alpha):
    """Decide the class letter of a real zero of nonpositive type.

    Yields the full evidence record; zero tests use a 1e-8 relative
    tolerance and anything inside the dead band raises Unclassifiable.
    """
    alpha = float(alpha)
    if Q.factor.kind != ZERO_ONLY:
        raise DomainError("classification requires the normalized form with pole at infinity")
    if Q.factor.alpha is None or Q.factor.alpha != complex(alpha, 0.0):
        raise DomainError(f"alpha={alpha} is not the designated zero {Q.factor.alpha}")
    measure = Q.base.measure
    delta = mass_at(measure, alpha)
    if delta > 0.0:
        return ClassificationEvidence(alpha, delta, None, DIVERGENT, DIVERGENT, "A")
    m2 = moment_integral(measure, alpha, 2, Q.base.fullline)
    if m2 == DIVERGENT:
        gamma = _gamma_or_none(Q, alpha)
        return ClassificationEvidence(alpha, 0.0, gamma, DIVERGENT, None, "B")
    gamma = gamma_alpha(Q, alpha)
    scale = 1.0 + abs(m2)
    if abs(gamma.imag) > _ZERO_TOL * scale:
        raise Unclassifiable(
            f"gamma={gamma} is not real although the second moment converges"
        )
    g = gamma.real
    if _ZERO_TOL / 10.0 * scale <= abs(g) <= _ZERO_TOL * scale:
        raise Unclassifiable(f"|gamma|={abs(g):.3e} inside the dead band")
    if abs(g) > _ZERO_TOL * scale:
        return ClassificationEvidence(alpha, 0.0, gamma, m2, None, "C")
    m4 = moment_integral(measure, alpha, 4, Q.base.fullline)
    if m4 == DIVERGENT:
        return ClassificationEvidence(alpha, 0.0, gamma, m2, DIVERGENT, "D")
    return ClassificationEvidence(alpha, 0.0, gamma, m2, m4, "E")


def _gamma_or_none(Q, alpha):
    try:
        return gamma_alpha(Q, alpha)
    except (DomainError, NoConvergence):
        return None


#: class letter -> admissible local trichotomy case
CASE_PAIRING = {"A": 1, "B": 2, "C": 2, "D": 3, "E": 3}
