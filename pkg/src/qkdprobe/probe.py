"""Closed-form observables of the entangling probe.

The most general unitary individual attack on the four-state protocol is
parameterized by four probe angles (lambda, mu, theta, phi).  All
observables flow through a derived coefficient quadruple (a, b, c, d):

    a = sin^2(lam) sin(2 mu) + cos^2(lam) cos(2 theta) sin(2 phi)
    b = sin^2(lam) sin(2 mu) + cos^2(lam) sin(2 phi)
    c = cos^2(lam) sin(2 theta) cos(2 phi)
    d = sin^2(lam) + cos^2(lam) cos(2 theta)

together with the signal geometry: the basis half-angle alpha in
(0, pi/4), where the angle between the two nonorthogonal signal states is
pi/2 - 2*alpha.  From (a, b, c, d; alpha) the module evaluates the four
detection probabilities, the induced receiver error rate E, the overlap Q
of the correlated probe states, and the Renyi information gain
log2(2 - Q^2).

Everything in this module is a pure function of immutable value types and
is safe for unrestricted concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DegenerateModelError,
    DomainError,
    InfeasibleConstraintError,
    SingularLambdaError,
)

# Tolerance for exact-identity checks (row sums, probability ranges).
IDENTITY_TOL = 1e-12
# Guard below which sin(lambda) is treated as zero in mu_from_constraint.
SINGULAR_SIN_LAMBDA = 1e-12
# Roundoff slack allowed when clamping an arcsine argument to [-1, 1].
ARCSINE_CLAMP_TOL = 1e-10


@dataclass(frozen=True)
class SignalGeometry:
    """Signal-basis geometry: the half-angle alpha in radians.

    alpha must lie in the open interval (0, pi/4).  The derived angle
    between the two nonorthogonal signal polarization states is
    theta_bar = pi/2 - 2*alpha; alpha = pi/8 is the standard protocol with
    45 degrees between the bases.
    """

    alpha: float

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < math.pi / 4:
            raise DomainError(
                f"alpha must lie in (0, pi/4); got {self.alpha!r}"
            )

    @property
    def theta_bar(self) -> float:
        """Angle between the nonorthogonal signal states, in (0, pi/2)."""
        return math.pi / 2 - 2.0 * self.alpha

    @property
    def sin_two_alpha(self) -> float:
        return math.sin(2.0 * self.alpha)

    @property
    def sin_sq_two_alpha(self) -> float:
        return math.sin(2.0 * self.alpha) ** 2

    @property
    def cos_sq_two_alpha(self) -> float:
        return math.cos(2.0 * self.alpha) ** 2

    def interchanged(self) -> "SignalGeometry":
        """Geometry after interchanging the roles of the two signal states."""
        return SignalGeometry(math.pi / 4 - self.alpha)


def interchange_geometry(geom: SignalGeometry) -> SignalGeometry:
    """Map alpha -> pi/4 - alpha (an involution; pi/8 is its fixed point)."""
    return geom.interchanged()


@dataclass(frozen=True)
class ProbeParams:
    """The four probe angles, each confined to [0, pi].

    All observables are pi-periodic in each angle, so the closed range
    [0, pi] covers every distinct attack.
    """

    lam: float
    mu: float
    theta: float
    phi: float

    def __post_init__(self) -> None:
        for name in ("lam", "mu", "theta", "phi"):
            value = getattr(self, name)
            if not -IDENTITY_TOL <= value <= math.pi + IDENTITY_TOL:
                raise DomainError(
                    f"probe angle {name} must lie in [0, pi]; got {value!r}"
                )


@dataclass(frozen=True)
class ProbeCoefficients:
    """Derived quadruple (a, b, c, d); each lies in [-1, 1]."""

    a: float
    b: float
    c: float
    d: float


@dataclass(frozen=True)
class DetectionProbabilities:
    """Conditional detection probabilities P(detected | sent).

    p_uu + p_u_ubar = 1 and p_ubar_u + p_ubar_ubar = 1: the off-diagonal
    entries are the conditional error probabilities for the two sent
    states.
    """

    p_uu: float
    p_u_ubar: float
    p_ubar_u: float
    p_ubar_ubar: float


@dataclass(frozen=True)
class AttackEvaluation:
    """Error rate E, probe-state overlap Q, and Renyi information gain."""

    error_rate: float
    overlap: float
    renyi_info: float


def coefficients(params: ProbeParams) -> ProbeCoefficients:
    """Evaluate the coefficient quadruple (a, b, c, d) at a probe setting."""
    sin_sq_lam = math.sin(params.lam) ** 2
    cos_sq_lam = math.cos(params.lam) ** 2
    sin_two_mu = math.sin(2.0 * params.mu)
    cos_two_theta = math.cos(2.0 * params.theta)
    sin_two_theta = math.sin(2.0 * params.theta)
    sin_two_phi = math.sin(2.0 * params.phi)
    cos_two_phi = math.cos(2.0 * params.phi)
    return ProbeCoefficients(
        a=sin_sq_lam * sin_two_mu + cos_sq_lam * cos_two_theta * sin_two_phi,
        b=sin_sq_lam * sin_two_mu + cos_sq_lam * sin_two_phi,
        c=cos_sq_lam * sin_two_theta * cos_two_phi,
        d=sin_sq_lam + cos_sq_lam * cos_two_theta,
    )


def detection_probabilities(
    coeffs: ProbeCoefficients, geom: SignalGeometry
) -> DetectionProbabilities:
    """The four conditional detection probabilities.

    Raises DegenerateModelError if any entry leaves [0, 1] beyond
    tolerance, which signals coefficients not realizable by any probe
    setting.
    """
    s2 = geom.sin_sq_two_alpha
    s1 = geom.sin_two_alpha
    a, c, d = coeffs.a, coeffs.c, coeffs.d
    half_disturb = 0.5 * (d - a) * s2
    half_skew = 0.5 * c * s1
    probs = DetectionProbabilities(
        p_uu=0.5 * (1.0 + d) - half_disturb + half_skew,
        p_u_ubar=0.5 * (1.0 - d) + half_disturb - half_skew,
        p_ubar_u=0.5 * (1.0 - d) + half_disturb + half_skew,
        p_ubar_ubar=0.5 * (1.0 + d) - half_disturb - half_skew,
    )
    for name in ("p_uu", "p_u_ubar", "p_ubar_u", "p_ubar_ubar"):
        p = getattr(probs, name)
        if not -IDENTITY_TOL <= p <= 1.0 + IDENTITY_TOL:
            raise DegenerateModelError(
                f"{name} = {p!r} outside [0, 1]; coefficients {coeffs} are "
                "not realizable by any probe setting"
            )
    return probs


def error_rate(coeffs: ProbeCoefficients, geom: SignalGeometry) -> float:
    """Induced receiver error rate E = (1 - d + (d - a) sin^2 2a) / 2."""
    return 0.5 * (
        1.0 - coeffs.d + (coeffs.d - coeffs.a) * geom.sin_sq_two_alpha
    )


def _overlap_denominator_sq(
    coeffs: ProbeCoefficients, geom: SignalGeometry
) -> float:
    s2 = geom.sin_sq_two_alpha
    half_sum = 0.5 * (1.0 + coeffs.d + (coeffs.a - coeffs.d) * s2)
    return half_sum * half_sum - 0.25 * coeffs.c * coeffs.c * s2


def overlap(coeffs: ProbeCoefficients, geom: SignalGeometry) -> float:
    """Overlap Q of the probe states correlated with the receiver outcomes.

    Q = [ (a + b)/2 + (d - a) sin^2(2a) / 2 ] /
        sqrt( [(1 + d + (a - d) sin^2(2a)) / 2]^2 - c^2 sin^2(2a) / 4 )

    Raises DegenerateModelError when the radicand is non-positive (error
    rate approaching one, or unphysical coefficients).
    """
    s2 = geom.sin_sq_two_alpha
    radicand = _overlap_denominator_sq(coeffs, geom)
    if radicand <= 0.0:
        raise DegenerateModelError(
            f"overlap denominator radicand {radicand!r} is non-positive"
        )
    numerator = 0.5 * (coeffs.a + coeffs.b) + 0.5 * (coeffs.d - coeffs.a) * s2
    return numerator / math.sqrt(radicand)


def overlap_from_error(
    coeffs: ProbeCoefficients, geom: SignalGeometry
) -> float:
    """Equivalent overlap form Q = [(a+b+d-1)/2 + E] / sqrt((1-E)^2 - c^2 sin^2(2a)/4).

    Algebraically identical to :func:`overlap`; kept as an independent
    evaluation route for consistency checks.
    """
    e = error_rate(coeffs, geom)
    radicand = (1.0 - e) ** 2 - 0.25 * coeffs.c**2 * geom.sin_sq_two_alpha
    if radicand <= 0.0:
        raise DegenerateModelError(
            f"overlap denominator radicand {radicand!r} is non-positive"
        )
    return (0.5 * (coeffs.a + coeffs.b + coeffs.d - 1.0) + e) / math.sqrt(
        radicand
    )


def q_value(coeffs: ProbeCoefficients) -> float:
    """The combination q = a + b + d through which the overlap is expressed."""
    return coeffs.a + coeffs.b + coeffs.d


def mu_from_constraint(
    lam: float,
    theta: float,
    phi: float,
    target_error: float,
    geom: SignalGeometry,
    *,
    alternate_branch: bool = False,
) -> float:
    """Solve for mu so the probe induces the target error rate.

    Inverts the error-rate relation for sin(2 mu) at fixed
    (lambda, theta, phi):

        sin 2mu = [ cos^2(lam) (1 - cos 2theta)
                    + sin^2(2a) (sin^2(lam) + cos^2(lam) cos 2theta
                                 - cos^2(lam) cos 2theta sin 2phi)
                    - 2 E ] / (sin^2(2a) sin^2(lam))

    The arcsine is double-valued on [0, pi]; the default branch returns
    the solution with cos(2 mu) >= 0, ``alternate_branch=True`` the one
    with cos(2 mu) <= 0.  Both produce identical observables, since mu
    enters them only through sin(2 mu).

    Raises:
        SingularLambdaError: sin(lam) ~ 0, so mu is unobservable; use the
            phi-elimination route instead.
        InfeasibleConstraintError: no mu achieves the target error rate at
            this (lambda, theta, phi).
        DomainError: target error rate outside [0, 1/2).
    """
    if not 0.0 <= target_error < 0.5:
        raise DomainError(
            f"target error rate must lie in [0, 1/2); got {target_error!r}"
        )
    sin_lam = math.sin(lam)
    if abs(sin_lam) <= SINGULAR_SIN_LAMBDA:
        raise SingularLambdaError(
            f"sin(lam) = {sin_lam!r} ~ 0: mu has no effect on any observable"
        )
    sin_sq_lam = sin_lam * sin_lam
    cos_sq_lam = math.cos(lam) ** 2
    cos_two_theta = math.cos(2.0 * theta)
    sin_two_phi = math.sin(2.0 * phi)
    s2 = geom.sin_sq_two_alpha
    rhs = (
        cos_sq_lam * (1.0 - cos_two_theta)
        + s2
        * (
            sin_sq_lam
            + cos_sq_lam * cos_two_theta
            - cos_sq_lam * cos_two_theta * sin_two_phi
        )
        - 2.0 * target_error
    ) / (s2 * sin_sq_lam)
    if abs(rhs) > 1.0 + ARCSINE_CLAMP_TOL:
        raise InfeasibleConstraintError(
            f"sin(2 mu) would need to be {rhs!r}; no mu achieves error rate "
            f"{target_error!r} at this (lam, theta, phi)"
        )
    rhs = max(-1.0, min(1.0, rhs))
    half_arc = 0.5 * math.asin(rhs)
    if alternate_branch:
        return 0.5 * math.pi - half_arc
    return half_arc if half_arc >= 0.0 else half_arc + math.pi


def renyi_info(q_overlap: float) -> float:
    """Renyi information gain, in bits, for a given overlap: log2(2 - Q^2)."""
    if abs(q_overlap) > 1.0 + IDENTITY_TOL:
        raise DomainError(f"|overlap| must not exceed 1; got {q_overlap!r}")
    q_clamped = max(-1.0, min(1.0, q_overlap))
    return math.log2(2.0 - q_clamped * q_clamped)


def evaluate(params: ProbeParams, geom: SignalGeometry) -> AttackEvaluation:
    """Full evaluation of one probe setting: (E, Q, Renyi bits)."""
    coeffs = coefficients(params)
    q = overlap(coeffs, geom)
    return AttackEvaluation(
        error_rate=error_rate(coeffs, geom),
        overlap=q,
        renyi_info=renyi_info(q),
    )
