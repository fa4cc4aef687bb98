"""Closed-form spectral predictions for U = I_s G in the small-eigenphase regime.

Everything here follows from the quadratic approximation of the secular
equation around lambda = 0:

    (1 + L2) lam^2 + 2 L1 lam - 4 s_t^2 = 0,   Lp = sum_{i != t} s_i^2 cot^p(theta_i / 2)

with B = sqrt(1 + L2) and the mixing angle eta defined by cot(2 eta) = L1 / (2 s_t B).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np


@dataclass(frozen=True)
class ValidityThresholds:
    """Concrete cut-offs for the asymptotic "much less than" conditions."""

    max_st: float = 0.05
    gap_margin: float = 10.0
    max_delta: float = 0.25


DEFAULT_THRESHOLDS = ValidityThresholds()


@dataclass(frozen=True)
class Moments:
    lambda1: float
    lambda2: float

    @property
    def B(self):
        return math.sqrt(1.0 + self.lambda2)


@dataclass(frozen=True)
class Validity:
    small_st: bool
    small_lambda_vs_gap: bool
    small_Delta: bool

    @property
    def ok(self):
        return self.small_st and self.small_lambda_vs_gap and self.small_Delta


@dataclass(frozen=True)
class SpectralPrediction:
    s_t: float
    theta_min: float
    moments: Moments
    lambda_plus: float
    lambda_minus: float
    eta: float
    delta_cap: float
    overlap_s_plus: float
    overlap_s_minus: float
    overlap_t_plus: complex
    overlap_t_minus: complex
    Q_exact: float
    Q: int
    P: float
    P_at_Q: float
    cost_estimate: int
    q_max_error: float
    valid: Validity = field(default_factory=lambda: Validity(False, False, False))

    @property
    def B(self):
        return self.moments.B

    def to_dict(self):
        """Prediction JSON; keys are stable across versions."""
        return {
            "lambda_plus": self.lambda_plus,
            "lambda_minus": self.lambda_minus,
            "eta": self.eta,
            "Delta": self.delta_cap,
            "Q": self.Q,
            "Q_exact": self.Q_exact,
            "P": self.P,
            "P_at_Q": self.P_at_Q,
            "B": self.B,
            "Lambda1": self.moments.lambda1,
            "Lambda2": self.moments.lambda2,
            "s_t": self.s_t,
            "theta_min": self.theta_min,
            "overlap_s": [self.overlap_s_plus, self.overlap_s_minus],
            "overlap_t": [
                [self.overlap_t_plus.real, self.overlap_t_plus.imag],
                [self.overlap_t_minus.real, self.overlap_t_minus.imag],
            ],
            "cost_estimate": self.cost_estimate,
            "q_max_error": self.q_max_error,
            "valid": {**asdict(self.valid), "ok": self.valid.ok},
        }


def moments(inst):
    theta = np.delete(inst.theta, inst.target)
    if np.any(theta == 0.0):
        raise ValueError("non-target phase at 0 puts a pole in the moments")
    w = np.delete(inst.s, inst.target) ** 2
    # cot(pi/2) is 6e-17 in floating point; the G = -I_t case needs it exactly 0
    c = np.where(np.abs(theta) == np.pi, 0.0, 1.0 / np.tan(0.5 * theta))
    return Moments(lambda1=float(np.dot(w, c)), lambda2=float(np.dot(w, c * c)))


def mixing_angle(lambda1, s_t, B):
    """eta in (0, pi/2) with cot(2 eta) = lambda1 / (2 s_t B)."""
    x = lambda1 / (2.0 * s_t * B)
    # arccot with range (0, pi)
    return 0.5 * (0.5 * math.pi - math.atan(x))


def round_half_up(x):
    return int(math.floor(x + 0.5))


def query_count(s_t, B):
    """Real-valued optimum pi B / (4 s_t) - 1/2 and its nearest integer."""
    q = math.pi * B / (4.0 * s_t) - 0.5
    return q, max(0, round_half_up(q))


def success_probability(eta, B):
    s2 = math.sin(2.0 * eta)
    return (s2 / B) ** 2 * math.sin(math.pi / (2.0 * s2)) ** 2


def alpha_magnitude(eta, B, s_t, q):
    """|<t|U^q|s>| from the two-eigenphase model; vectorizes over q."""
    s2 = math.sin(2.0 * eta)
    if s2 <= 0.0:
        raise ValueError("sin(2 eta) = 0: amplitude is not predictable")
    qp = np.asarray(q, dtype=np.float64) + 0.5
    return (s2 / B) * np.abs(np.sin(2.0 * qp * s_t / (B * s2)))


def predict(inst, thresholds=DEFAULT_THRESHOLDS):
    s_t = inst.s_t
    if s_t <= 0.0:
        raise ValueError("s_t = 0: the start state has no overlap with the target")
    mom = moments(inst)
    B = mom.B
    eta = mixing_angle(mom.lambda1, s_t, B)
    tan_eta = math.tan(eta)
    lam_p = 2.0 * s_t / B * tan_eta
    lam_m = -2.0 * s_t / B / tan_eta
    delta_cap = -mom.lambda1 / (4.0 * s_t * B)
    f_p, f_m = math.sin(eta), math.cos(eta)
    # <t|lam> = 2 s_t <s|lam> / (1 - e^{-i lam}) = -i s_t <s|lam> e^{i lam/2} / sin(lam/2);
    # with |lam| small this gives -i e^{i lam+/2} f- and +i e^{i lam-/2} f+.
    t_p = -1j * complex(np.exp(0.5j * lam_p)) * f_m
    t_m = 1j * complex(np.exp(0.5j * lam_m)) * f_p
    q_exact, q_int = query_count(s_t, B)
    P = success_probability(eta, B)
    P_at_Q = float(alpha_magnitude(eta, B, s_t, q_int)) ** 2
    lam_big = max(abs(lam_p), abs(lam_m))
    valid = Validity(
        small_st=s_t <= thresholds.max_st,
        small_lambda_vs_gap=(2.0 * s_t / B) * (1.0 + abs(delta_cap)) <= inst.theta_min / thresholds.gap_margin,
        small_Delta=abs(delta_cap) <= thresholds.max_delta,
    )
    return SpectralPrediction(
        s_t=s_t,
        theta_min=inst.theta_min,
        moments=mom,
        lambda_plus=lam_p,
        lambda_minus=lam_m,
        eta=eta,
        delta_cap=delta_cap,
        overlap_s_plus=f_p / B,
        overlap_s_minus=f_m / B,
        overlap_t_plus=t_p,
        overlap_t_minus=t_m,
        Q_exact=q_exact,
        Q=q_int,
        P=P,
        P_at_Q=P_at_Q,
        cost_estimate=int(math.ceil(B**3 / s_t)),
        q_max_error=q_int * max(s_t * s_t, lam_big * lam_big),
        valid=valid,
    )


def predicted_alpha_magnitude(pred, q):
    return alpha_magnitude(pred.eta, pred.B, pred.s_t, q)
