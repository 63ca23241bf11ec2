"""Generalized Nevanlinna functions with one negative square.

Construction from spectral data, holomorphic continuation across the real
axis, trajectory of the zero of nonpositive type under the rotation family,
local contact trichotomy and the (A)-(E) classification, plus level-set
tracing of Im Q = 0.
"""

from .classify import CASE_PAIRING, ClassificationEvidence, classify, gamma_alpha, moment_integral
from .errors import (
    AmbiguousBoundary,
    AtomCollision,
    ConfigError,
    DomainError,
    GzntError,
    InsufficientSamples,
    NoConvergence,
    NotAZero,
    NotNonpositiveType,
    NumericalError,
    PathLost,
    PoleHit,
    Unclassifiable,
    ZeroDenominator,
)
from .levelset import LevelCurveSet, departure_points, trace_im_zero
from .measures import (
    Atom,
    PolynomialDensityPiece,
    SpectralMeasure,
    local_order,
    mass_at,
    validate_measure,
)
from .moebius import compose_tau, q_tau
from .n1 import (
    CaseReport,
    FactorR,
    N1Function,
    derivatives_at,
    eval_Q,
    eval_Q_extended,
    local_case,
    split_point_mass,
)
from .nevanlinna import (
    ExtensionWindow,
    NevanlinnaFunction,
    eval_M,
    eval_M_extended,
    extension_window,
    stieltjes_invert,
)
from .registry import builtin, function_from_dict, function_to_dict, parse_spec
from .tracker import (
    ContactEvent,
    PathSample,
    ZeroPath,
    chordal,
    contact_angles,
    curve_diagnostics,
    solve_alpha,
    track_full_circle,
    track_path,
)

__version__ = "0.1.0"
