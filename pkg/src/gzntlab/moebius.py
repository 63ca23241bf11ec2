"""The one-parameter rotation family Q_tau = (Q - tau)/(1 + tau*Q).

tau lives on the circle R union {inf}; the infinity chart (Q_inf = -1/Q) is
first class and compose_tau is the tangent-addition group law.  Points with
|1 - tau*sigma| small are routed through the inf symbol rather than large
floats.
"""

from __future__ import annotations

import math

from .errors import PoleHit, ZeroDenominator

INF = math.inf


def is_inf(tau):
    return math.isinf(tau)


def normalize_tau(tau):
    """Identify -inf with +inf (one point at infinity on the circle)."""
    tau = float(tau)
    return INF if math.isinf(tau) else tau


def moebius_value(q, tau):
    """Apply the parameter-tau transform to an already computed value q."""
    if is_inf(tau):
        if q == 0:
            raise ZeroDenominator("Q_inf = -1/Q undefined at a zero of Q")
        return -1.0 / q
    den = 1.0 + tau * q
    if den == 0:
        raise PoleHit(f"1 + tau*Q = 0 (pole of Q_tau) at tau={tau}")
    return (q - tau) / den


def q_tau(Q, tau, z):
    """Q_tau(z) for a function-like Q (N1Function or callable)."""
    q = Q(z) if callable(Q) else Q
    return moebius_value(q, normalize_tau(tau))


def moebius_jet(qjet, tau):
    """Jet version of the transform (for Newton on Q_tau)."""
    if is_inf(tau):
        if qjet.f == 0:
            raise ZeroDenominator("Q_inf = -1/Q undefined at a zero of Q")
        return -1.0 / qjet
    den = 1.0 + qjet * tau
    if den.f == 0:
        raise PoleHit(f"1 + tau*Q = 0 (pole of Q_tau) at tau={tau}")
    return (qjet - tau) / den


def compose_tau(tau, sigma):
    """Group law: (Q_tau)_sigma = Q_{compose_tau(tau, sigma)}.

    Tangent addition (tau + sigma)/(1 - tau*sigma) with the product 1 case
    mapped to inf; inf composes as -1/other.
    """
    tau, sigma = normalize_tau(tau), normalize_tau(sigma)
    if is_inf(tau) and is_inf(sigma):
        return 0.0
    if is_inf(tau):
        return INF if sigma == 0 else -1.0 / sigma
    if is_inf(sigma):
        return INF if tau == 0 else -1.0 / tau
    den = 1.0 - tau * sigma
    if den == 0:
        return INF
    return (tau + sigma) / den
