"""Continuation of the zero of nonpositive type along the rotation family.

The trajectory alpha(tau) solves Q~(alpha) = tau in the closed upper
half-plane.  Away from critical points a damped-Newton corrector follows an
Euler predictor alpha += dtau/Q~'(alpha).  Where Q~' vanishes the trajectory
meets the real axis; the local square-root (case 2) or cube-root (case 3)
model steps across, with the branch picked by the predicted approach angle
and re-validated against the corrector.  Full-circle runs use two charts,
tau on [-1, 1] and s = -1/tau elsewhere.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DomainError,
    GzntError,
    InsufficientSamples,
    NoConvergence,
    NotNonpositiveType,
    PathLost,
)
from .moebius import INF, is_inf, moebius_jet
from .n1 import analyticity_radius, case_report_from_derivs, derivatives_at, eval_Q_jet

FTOL = 1e-11
SNAP_IM = 1e-9
NEWTON_BUDGET = 100
AXIS_BAND = 0.05  # |Im alpha| below this prompts a critical-point probe


def chordal(z, w):
    """Metric of the Riemann sphere, 2|z-w|/sqrt((1+|z|^2)(1+|w|^2))."""
    if z == w:
        return 0.0
    zi, wi = (not math.isfinite(abs(z))), (not math.isfinite(abs(w)))
    if zi and wi:
        return 0.0
    if zi:
        return 2.0 / math.sqrt(1.0 + abs(w) ** 2)
    if wi:
        return 2.0 / math.sqrt(1.0 + abs(z) ** 2)
    return 2.0 * abs(z - w) / math.sqrt((1.0 + abs(z) ** 2) * (1.0 + abs(w) ** 2))


@dataclass(frozen=True)
class PathSample:
    tau: float          # parameter value (math.inf at the infinity point)
    alpha: complex
    on_axis: bool
    chart: str          # "tau" or "s"


@dataclass(frozen=True)
class ContactEvent:
    tau_star: float
    z0: float
    report: object      # CaseReport

    def as_dict(self):
        return {
            "tau_star": self.tau_star,
            "z0": self.z0,
            "case": self.report.case,
            "theta0": self.report.theta0,
        }


@dataclass
class ZeroPath:
    samples: list = field(default_factory=list)
    events: list = field(default_factory=list)
    full_circle: bool = False

    def taus(self):
        return np.array([s.tau for s in self.samples])

    def alphas(self):
        return np.array([s.alpha for s in self.samples])

    def write_csv(self, fh):
        fh.write("tau,re_alpha,im_alpha,flag,chart\n")
        for s in self.samples:
            flag = "R" if s.on_axis else "U"
            fh.write(f"{s.tau:.17g},{s.alpha.real:.17g},{s.alpha.imag:.17g},{flag},{s.chart}\n")

    def events_json(self):
        return json.dumps([e.as_dict() for e in self.events], indent=2)


# ---------------------------------------------------------------------------
# chart-aware evaluation


def _chart_jet(Q, z, order, chart):
    qj = eval_Q_jet(Q, z, order, continued=True)
    return qj if chart == "tau" else moebius_jet(qj, INF)


def _chart_tau(chart, t):
    """The tau value a chart parameter represents."""
    if chart == "tau":
        return t
    return INF if t == 0.0 else -1.0 / t


def _admissible_real(Q, x):
    """A real root is a GZNT only if Re Q~' <= 0 there (or Q~' ~ 0)."""
    d = eval_Q_jet(Q, x, 1, continued=True).derivative(1)
    return d.real <= 1e-9 * (1.0 + abs(d))


def _newton(Q, target, guess, chart="tau", budget=NEWTON_BUDGET):
    """Damped Newton for (chart eval)(z) = target, landing in closed C+.

    Returns (root, iterations used).
    """
    z = complex(guess)
    used = 0
    for it in range(budget):
        used = it
        try:
            jet = _chart_jet(Q, z, 1, chart)
        except (DomainError, ZeroDivisionError):
            z += complex(0.0, 1e-9)  # nudge off a singular column
            continue
        f = jet.f - target
        if abs(f) <= FTOL * (1.0 + abs(target)):
            break
        d = jet.derivative(1)
        if d == 0:
            raise NoConvergence(f"vanishing derivative in Newton at z={z}")
        step = -f / d
        lam = 1.0
        znew = z + step
        for _damp in range(60):
            znew = z + lam * step
            try:
                fnew = _chart_jet(Q, znew, 0, chart).f - target
            except (DomainError, ZeroDivisionError):
                lam *= 0.5
                continue
            if abs(fnew) <= abs(f) or abs(lam * step) <= 1e-16 * (1.0 + abs(z)):
                break
            lam *= 0.5
        z = znew
    else:
        raise NoConvergence(f"Newton budget exhausted near z={z} (target {target})")
    if abs(z.imag) <= SNAP_IM * (1.0 + abs(z)):
        z = complex(z.real, 0.0)
    if z.imag < 0:
        raise NotNonpositiveType(f"root {z} lies in the open lower half-plane")
    if z.imag == 0.0 and not _admissible_real(Q, z.real):
        raise NotNonpositiveType(f"real root {z.real} has positive derivative (ordinary zero)")
    return z, used


def solve_alpha(Q, tau, guess):
    """Root of Q~(z) = tau in the closed upper half-plane near the guess.

    Real roots are admitted only when they pass the nonpositive-type test
    (Q~' <= 0, with the higher-order cases of the trichotomy accepted via
    the ~0 branch).  Raises NoConvergence or NotNonpositiveType.
    """
    root, _ = _newton(Q, float(tau), guess, "tau")
    return root


# ---------------------------------------------------------------------------
# contact handling


def _locate_contact(Q, z_start, r_loc):
    """Newton on Q~' from z_start; returns (z0, tau_star) or None."""
    z = complex(z_start)
    for _ in range(80):
        try:
            jet = eval_Q_jet(Q, z, 2, continued=True)
        except (GzntError, ZeroDivisionError):
            return None
        d1, d2 = jet.derivative(1), jet.derivative(2)
        if d1 == 0:
            break
        if d2 == 0:
            return None
        step = -d1 / d2
        z = z + step
        if abs(z - z_start) > 4.0 * max(r_loc, abs(z_start.imag)):
            return None  # ran away: no critical point nearby
        if abs(step) <= 1e-14 * (1.0 + abs(z)):
            break
    else:
        return None
    if abs(z.imag) > 1e-7 * (1.0 + abs(z)):
        return None  # critical point off the axis is not a contact
    z0 = z.real
    try:
        tau_star = eval_Q_jet(Q, z0, 0, continued=True).f
    except GzntError:
        return None
    if abs(tau_star.imag) > 1e-7 * (1.0 + abs(tau_star)):
        return None
    return z0, tau_star.real


def _contact_report(Q, z0, tau_star):
    """CaseReport of Q_{tau*} at its contact point.

    At an exact contact the derivatives of Q_{tau*} are those of Q~ scaled
    by the positive factor 1/(1+tau*^2), so the trichotomy is decided on
    the scaled values directly.
    """
    derivs, errs = derivatives_at(Q, z0)
    scale = 1.0 / (1.0 + tau_star**2)
    return case_report_from_derivs(
        z0, [d * scale for d in derivs], [e * scale for e in errs]
    )


def _puiseux_candidates(case, coeff, dtau):
    """Displacements w with (coeff/k!) w^k = dtau, k the branch order."""
    if case == 2:
        w = cmath.sqrt(2.0 * dtau / coeff)
        return [w, -w]
    c = 6.0 * dtau / coeff
    r = abs(c) ** (1.0 / 3.0)
    phi = cmath.phase(c) / 3.0
    return [r * cmath.exp(1j * (phi + 2.0 * math.pi * k / 3.0)) for k in range(3)]


def _target_angle(case, theta0, side):
    """Approach angle of alpha(tau) - z0 on the requested side of tau*.

    side +1 is the tau > tau* branch, side -1 the tau < tau* branch.
    """
    if case == 2:
        return (2.0 * math.pi - theta0) / 2.0 if side > 0 else (math.pi - theta0) / 2.0
    if case == 3:
        return 2.0 * math.pi / 3.0 if side > 0 else math.pi / 3.0
    return math.pi if side > 0 else 0.0


def _angle_dist(a, b):
    d = abs(a - b) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


# ---------------------------------------------------------------------------
# the tracking engine


class _State:
    __slots__ = ("chart", "t", "alpha")

    def __init__(self, chart, t, alpha):
        self.chart = chart
        self.t = t
        self.alpha = complex(alpha)

    @property
    def on_axis(self):
        return self.alpha.imag == 0.0

    @property
    def tau(self):
        return _chart_tau(self.chart, self.t)


class _Tracker:
    def __init__(self, Q):
        self.Q = Q
        alpha = Q.factor.alpha
        if alpha is None:
            raise NotNonpositiveType("tracking requires a finite generalized zero")
        self.r_loc = analyticity_radius(Q, alpha)
        self.events = []
        self._probe_cache = {}

    # -- contact bookkeeping

    def _known_contact(self, tau_star):
        for e in self.events:
            if abs(e.tau_star - tau_star) <= 1e-9 * (1.0 + abs(tau_star)):
                return e
        return None

    def _record_event(self, z0, tau_star):
        known = self._known_contact(tau_star)
        if known is not None:
            return known
        event = ContactEvent(tau_star, z0, _contact_report(self.Q, z0, tau_star))
        self.events.append(event)
        self.events.sort(key=lambda e: e.tau_star)
        return event

    def _probe_contact(self, z_from):
        key = (round(z_from.real, 10), round(z_from.imag, 10))
        if key not in self._probe_cache:
            self._probe_cache[key] = _locate_contact(self.Q, z_from, self.r_loc)
        return self._probe_cache[key]

    # -- stepping

    def _plain_step(self, state, t_new):
        span = t_new - state.t
        jet = _chart_jet(self.Q, state.alpha, 2, state.chart)
        d1, d2 = jet.derivative(1), jet.derivative(2)
        if abs(d1) <= 1e-4 * (abs(d2) * self.r_loc + 1e-12):
            raise NotNonpositiveType("critical point underfoot")
        guess = state.alpha + span / d1
        if state.on_axis and abs(guess.imag) < 1e-12 * (1.0 + abs(guess)):
            guess = complex(guess.real, 0.0)
        z, iters = _newton(self.Q, t_new, guess, state.chart)
        if chordal(z, state.alpha) > max(0.5, 4.0 * abs(span)):
            raise NoConvergence("corrector jumped too far; refine the step")
        return z, iters

    def _contact_step(self, state, t_new):
        """Interpret the current span as a contact crossing; None if it is not."""
        tau_a = _chart_tau(state.chart, state.t)
        tau_b = _chart_tau(state.chart, t_new)
        if not (math.isfinite(tau_a) and math.isfinite(tau_b)):
            return None
        tau_a, tau_b = min(tau_a, tau_b), max(tau_a, tau_b)
        found = self._probe_contact(state.alpha)
        if found is None:
            return None
        z0, tau_star = found
        slack = 1e-12 * (1.0 + abs(tau_star))
        if not (tau_a - slack <= tau_star <= tau_b + slack):
            return None
        try:
            event = self._record_event(z0, tau_star)
        except GzntError:
            return None
        tau_new = _chart_tau(state.chart, t_new)
        dtau = tau_new - tau_star
        if abs(dtau) <= 1e-15 * (1.0 + abs(tau_star)):
            return complex(z0, 0.0)
        if event.report.case == 1:
            return None  # regular crossing; plain Newton handles it
        side = 1 if dtau > 0 else -1
        target = _target_angle(event.report.case, event.report.theta0 or 0.0, side)
        k = 2 if event.report.case == 2 else 3
        coeff = eval_Q_jet(self.Q, z0, k, continued=True).derivative(k)
        candidates = _puiseux_candidates(event.report.case, coeff, dtau)
        candidates.sort(key=lambda w: _angle_dist(cmath.phase(w) % (2.0 * math.pi), target))
        for w in candidates:
            if abs(w) > 0.75 * self.r_loc:
                return None  # local model stretched too far: refine the span
            if w.imag < -1e-12 * abs(w):
                continue
            if abs(w.imag) <= 1e-12 * abs(w):
                w = complex(w.real, 0.0)
            try:
                z, _ = _newton(self.Q, t_new, z0 + w, state.chart)
            except (NoConvergence, NotNonpositiveType):
                continue
            if z.imag == 0.0 or _angle_dist(cmath.phase(z - z0), target) < 0.6:
                return z
        return None

    def _polish_near_axis(self, state):
        """Snap a sample onto a contact it parametrically coincides with."""
        found = self._probe_contact(state.alpha)
        if found is None:
            return
        z0, tau_star = found
        tau_here = state.tau
        if not math.isfinite(tau_here):
            return
        if abs(tau_here - tau_star) <= 1e-9 * (1.0 + abs(tau_star)) and abs(state.alpha - z0) <= 1e-2:
            try:
                self._record_event(z0, tau_star)
            except GzntError:
                return
            state.alpha = complex(z0, 0.0)

    def advance(self, state, t_target, record=None, chart_switch_check=False):
        """March state.t to t_target, recording only the final point."""
        if chart_switch_check:
            z, _ = _newton(self.Q, state.t, state.alpha, state.chart)
            if chordal(z, state.alpha) > 1e-7:
                raise PathLost(f"chart overlap mismatch at t={state.t}")
            state.alpha = z
        dt = t_target - state.t
        failures = 0
        while state.t != t_target:
            remaining = t_target - state.t
            if dt * remaining <= 0 or abs(dt) > abs(remaining):
                dt = remaining
            t_new = state.t + dt
            if t_new == state.t:
                raise PathLost(f"step size underflow at t={state.t}")
            z, iters = None, 0
            try:
                z, iters = self._plain_step(state, t_new)
            except (NoConvergence, NotNonpositiveType, DomainError):
                try:
                    z = self._contact_step(state, t_new)
                except GzntError:
                    z = None
            if z is None:
                failures += 1
                if failures > 45:
                    raise PathLost(f"lost the trajectory near tau={state.tau}")
                dt *= 0.5
                continue
            failures = 0
            state.t, state.alpha = t_new, z
            if 0.0 < abs(z.imag) <= AXIS_BAND:
                self._polish_near_axis(state)
            if iters > 8:
                dt *= 0.5
            elif iters <= 3 and abs(dt) < abs(t_target - state.t):
                dt *= 2.0
        if record is not None:
            record(state)
        return state

    def touch_events_from_samples(self, samples):
        """Emit events for axis touches visible in the recorded samples.

        On-axis samples come in maximal runs.  A run along a spectral gap
        has Im Q~ identically zero and its boundary events are already
        recorded by the critical-contact machinery.  A tangential (case-1
        style) touch instead shows nonzero Im Q~ away from the touch point;
        the sample minimizing |Im Q~| is the contact.
        """
        runs, current = [], []
        for s in samples:
            if s.on_axis and not is_inf(s.tau):
                current.append(s)
            elif current:
                runs.append(current)
                current = []
        if current:
            runs.append(current)
        for run in runs:
            ims, ok = [], []
            for s in run:
                try:
                    q = eval_Q_jet(self.Q, s.alpha.real, 0, continued=True).f
                except GzntError:
                    continue
                ims.append(abs(q.imag) / (1.0 + abs(q)))
                ok.append(s)
            if not ok:
                continue
            if len(ok) > 1 and max(ims) <= 1e-13:
                continue  # genuine real segment (gap regime), not a touch
            s = ok[int(np.argmin(ims))]
            if self._known_contact(s.tau) is not None:
                continue
            try:
                report = _contact_report(self.Q, s.alpha.real, s.tau)
            except GzntError:
                continue
            self.events.append(ContactEvent(s.tau, s.alpha.real, report))
        self.events.sort(key=lambda e: e.tau_star)


def track_path(Q, taus):
    """Sample the trajectory at the given (strictly monotone) tau schedule.

    The start point is obtained by continuing internally from tau = 0,
    where the zero of nonpositive type is part of the function data.
    Returns a ZeroPath with one sample per scheduled tau plus the contact
    events encountered inside the scheduled range.
    """
    taus = [float(t) for t in taus]
    if not taus:
        raise DomainError("empty tau schedule")
    diffs = [b - a for a, b in zip(taus, taus[1:])]
    if any(d == 0 for d in diffs) or (diffs and min(diffs) < 0 < max(diffs)):
        raise DomainError("tau schedule must be strictly monotone")
    tracker = _Tracker(Q)
    state = _State("tau", 0.0, Q.factor.alpha)
    tracker.advance(state, taus[0])
    tracker.events.clear()  # warm-up traversal does not belong to the path

    path = ZeroPath()

    def record(st):
        path.samples.append(PathSample(st.tau, st.alpha, st.on_axis, st.chart))

    record(state)
    for t in taus[1:]:
        tracker.advance(state, t, record)
    tracker.touch_events_from_samples(path.samples)
    lo, hi = min(taus), max(taus)
    path.events = [e for e in tracker.events if lo - 1e-12 <= e.tau_star <= hi + 1e-12]
    return path


def track_full_circle(Q, steps=2400):
    """One full loop of the parameter circle through tau = infinity.

    Chart plan: tau from 0 to 1, s = -1/tau from -1 through 0 (the infinity
    point) to 1, then tau from -1 back to 0.  Chart hand-offs re-solve at
    the overlap point and verify consistency.  Requires a finite
    generalized pole (the trajectory passes through it at tau = infinity).
    """
    quarter = max(steps // 4, 8)
    tracker = _Tracker(Q)
    state = _State("tau", 0.0, Q.factor.alpha)
    path = ZeroPath(full_circle=True)

    def record(st):
        path.samples.append(PathSample(st.tau, st.alpha, st.on_axis, st.chart))

    record(state)
    for t in np.linspace(0.0, 1.0, quarter + 1)[1:]:
        tracker.advance(state, float(t), record)
    state = _State("s", -1.0, state.alpha)
    tracker.advance(state, -1.0, None, chart_switch_check=True)
    for s in np.linspace(-1.0, 1.0, 2 * quarter + 1)[1:]:
        tracker.advance(state, float(s), record)
    state = _State("tau", -1.0, state.alpha)
    tracker.advance(state, -1.0, None, chart_switch_check=True)
    for t in np.linspace(-1.0, 0.0, quarter + 1)[1:]:
        tracker.advance(state, float(t), record)
    tracker.touch_events_from_samples(path.samples)
    path.events = list(tracker.events)
    return path


# ---------------------------------------------------------------------------
# path diagnostics


def contact_angles(path, z0, fit_window=1e-4):
    """Left/right limits of arg(alpha(tau) - z0) at the contact.

    A linear fit of the angle against |tau - tau*|^(1/m) (m the branch
    order of the recorded case) is extrapolated to the contact; the two
    intercepts are returned in [0, pi] as (tau-up limit, tau-down limit).
    """
    event = None
    for e in path.events:
        if abs(e.z0 - z0) <= 1e-6 * (1.0 + abs(z0)):
            event = e
            break
    if event is None:
        raise InsufficientSamples(f"no contact event at z0={z0} in this path")
    m = float(event.report.case)
    out = []
    for side in (-1, 1):
        xs, ys = [], []
        for s in path.samples:
            if is_inf(s.tau):
                continue
            dtau = s.tau - event.tau_star
            if side * dtau <= 0 or abs(dtau) > fit_window:
                continue
            dz = s.alpha - event.z0
            if dz == 0:
                continue
            xs.append(abs(dtau) ** (1.0 / m))
            ys.append(cmath.phase(dz))
        if len(xs) < 2:
            raise InsufficientSamples(
                f"need 2+ samples with 0 < {side}*(tau - tau*) <= {fit_window}"
            )
        coeffs = np.polyfit(np.array(xs), np.array(ys), 1)
        out.append(min(max(float(coeffs[1]), 0.0), math.pi))
    theta_left, theta_right = out
    return theta_left, theta_right


def curve_diagnostics(path):
    """Continuity/injectivity/closure numbers for a sampled trajectory.

    Chordal step maxima measure continuity, the minimum chordal distance
    between samples more than 5 indices apart (circularly, for loops) is an
    injectivity proxy, and the closure gap compares first to last sample.
    """
    al = path.alphas()
    n = len(al)
    if n < 2:
        return {"max_chordal_step": 0.0, "min_far_pair_separation": math.inf, "closure_gap": 0.0}
    steps = [chordal(al[i], al[i + 1]) for i in range(n - 1)]
    finite = np.isfinite(al)
    weights = np.where(finite, 1.0 / np.sqrt(1.0 + np.abs(np.where(finite, al, 0.0)) ** 2), 0.0)
    min_sep = math.inf
    for i in range(n):
        j = np.arange(i + 6, n)
        if not len(j):
            continue
        if path.full_circle:
            j = j[np.minimum(j - i, n - (j - i)) > 5]
            if not len(j):
                continue
        if finite[i]:
            d = 2.0 * np.abs(al[i] - al[j]) * weights[i] * weights[j]
            d = np.where(np.isfinite(al[j]), d, 2.0 * weights[i])
        else:
            d = 2.0 * weights[j]
        if len(d):
            min_sep = min(min_sep, float(np.min(d)))
    return {
        "max_chordal_step": float(max(steps)),
        "min_far_pair_separation": min_sep,
        "closure_gap": chordal(al[0], al[-1]),
    }


def dense_contact_schedule(tau_star, coarse_span=1e-2, fine=1e-8, per_side=30):
    """Geometric tau schedule straddling a contact, for angle fits."""
    offs = np.geomspace(fine, coarse_span, per_side)
    left = [tau_star - o for o in offs[::-1]]
    right = [tau_star + o for o in offs]
    return left + [tau_star] + right
