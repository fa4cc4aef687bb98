"""Assumption-free reference computations for U = I_s G.

The eigenphases of U that couple to |s> are exactly the roots of

    F(lam) = sum_i s_i^2 cot((lam - theta_i) / 2)

Between consecutive distinct phases carrying weight, F falls monotonically
from +inf to -inf, so each such circular interval holds exactly one root.
Eigenvectors orthogonal to |s> (inside degenerate phase groups, or on indices
with s_i = 0) sit exactly at some theta_i, never mix into U^q|s>, and are not
enumerated.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _accel, spectral
from .operators import alpha_curve, apply_U, random_instance, wrap_angle
from .statevec import freeze

POLE_TOL = 1e-14


@dataclass(frozen=True)
class SecularRoot:
    """A root of F, stored as ``anchor + offset`` with ``anchor`` its nearer pole.

    ``lam`` is that sum rounded to a double and wrapped to (-pi, pi]. Between
    two poles only ~1e-6 apart, F' reaches ~1e10 and the rounding alone would
    leave |F(lam)| near 1e-6; the split form keeps the root resolved.
    """

    lam: float
    bracket: tuple
    overlap_s: float
    anchor: float
    offset: float


def _split(lam):
    if isinstance(lam, SecularRoot):
        return lam.anchor, lam.offset
    return float(lam), 0.0


def _pole_tol(lam):
    # a split root is resolved below one ulp of lambda, so only exact hits count
    return 0.0 if isinstance(lam, SecularRoot) else POLE_TOL


def _phase_gaps(inst, lam):
    """theta_i - lam, taken through the anchor when a split root is given."""
    anchor, offset = _split(lam)
    return (inst.theta - anchor) - offset


def pole_weights(inst):
    """Distinct phases with nonzero total weight sum s_i^2, sorted ascending."""
    w = inst.s**2
    keep = w > 0.0
    poles, inv = np.unique(inst.theta[keep], return_inverse=True)
    weights = np.bincount(inv, weights=w[keep])
    return poles, weights


def secular_value(inst, lam):
    """F(lam); ``lam`` may be a float or a ``SecularRoot``."""
    d = np.abs(wrap_angle(_phase_gaps(inst, lam)))
    if np.any((d <= _pole_tol(lam)) & (inst.s != 0.0)):
        raise ValueError(f"lambda={lam!r} sits on a pole of the secular function")
    poles, weights = pole_weights(inst)
    anchor, offset = _split(lam)
    return float(_accel.offset_secular(poles, weights, anchor, offset))


def overlap_s(inst, lam):
    """<s|lam> > 0 from normalization: <s|lam>^-2 = sum_i s_i^2 csc^2((lam - theta_i)/2)."""
    sn = np.sin(0.5 * _phase_gaps(inst, lam))
    return 1.0 / math.sqrt(float(np.sum(inst.s**2 / (sn * sn))))


def secular_roots(inst):
    poles, weights = pole_weights(inst)
    anchors, offsets = _accel.bisect_roots(poles, weights)
    d = poles.shape[0]
    roots = []
    for j in range(d):
        lo = float(poles[j])
        hi = float(poles[j + 1]) if j + 1 < d else float(poles[0] + 2.0 * np.pi)
        anchor, offset = float(anchors[j]), float(offsets[j])
        lam = float(wrap_angle(anchor + offset))
        ov = overlap_s(inst, SecularRoot(lam, (lo, hi), 0.0, anchor, offset))
        roots.append(SecularRoot(lam=lam, bracket=(lo, hi), overlap_s=ov, anchor=anchor, offset=offset))
    roots.sort(key=lambda r: r.lam)
    return roots


def nearest_pair(roots):
    """(lambda_+, lambda_-): the smallest positive and the largest negative root."""
    pos = [r for r in roots if r.lam > 0.0]
    neg = [r for r in roots if r.lam < 0.0]
    if not pos or not neg:
        raise ValueError("no pair of roots straddling zero")
    return min(pos, key=lambda r: r.lam), max(neg, key=lambda r: r.lam)


def eigenvector_from_root(inst, lam):
    """Eigenvector of U for eigenphase ``lam``, phased so <s|lam> is real positive.

    Components follow <i|lam> ~ s_i / (1 - e^{i(theta_i - lam)}).
    """
    gaps = _phase_gaps(inst, lam)
    # 1 - e^{ix} without cancellation at small x
    x = -2j * np.sin(0.5 * gaps) * np.exp(0.5j * gaps)
    coupled = inst.s != 0.0
    if np.any(np.abs(x[coupled]) <= _pole_tol(lam)):
        raise ValueError(f"lambda={lam!r} coincides with a phase of G")
    v = np.zeros(inst.n, dtype=np.complex128)
    v[coupled] = inst.s[coupled] / x[coupled]
    ov = np.dot(inst.s, v)
    v *= abs(ov) / ov
    return freeze(v / np.linalg.norm(v))


def eigen_residual(inst, lam, v):
    """||U v - e^{i lam} v||."""
    lam = lam.lam if isinstance(lam, SecularRoot) else lam
    return float(np.linalg.norm(apply_U(inst, v) - np.exp(1j * lam) * v))


@dataclass(frozen=True)
class Tolerances:
    """Error budgets, scaled by the error orders of the small-phase expansion.

    eigenphases: |pred - exact| <= lambda_factor * (s_t^2 + lambda_exact^2)
    overlaps:    |pred - exact| <= overlap_factor * max(s_t, |lambda|/theta_min) * exact
    alpha curve: max_{q <= Q} ||alpha_pred| - |alpha_exact|| <= alpha_abs
    """

    lambda_factor: float = 5.0
    overlap_factor: float = 10.0
    alpha_abs: float = 0.05


@dataclass
class VerificationReport:
    valid: bool
    validity: dict
    lambda_pred: tuple
    lambda_exact: tuple
    lambda_err: tuple
    lambda_bound: tuple
    overlap_pred: tuple
    overlap_exact: tuple
    overlap_err: tuple
    overlap_bound: tuple
    alpha_err: float
    Q: int
    passed: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return self.valid and all(self.passed.values())

    def to_dict(self):
        d = asdict(self)
        d["ok"] = self.ok
        return d


def verify_prediction(inst, tolerances=Tolerances(), thresholds=spectral.DEFAULT_THRESHOLDS):
    """Compare the closed-form prediction with exact roots and direct iteration.

    An instance outside the validity regime is reported as such; its errors
    are still measured but no accuracy claim is checked.
    """
    pred = spectral.predict(inst, thresholds)
    roots = secular_roots(inst)
    rp, rm = nearest_pair(roots)
    s_t = inst.s_t

    lam_pred = (pred.lambda_plus, pred.lambda_minus)
    lam_exact = (rp.lam, rm.lam)
    lam_err = tuple(abs(a - b) for a, b in zip(lam_pred, lam_exact))
    lam_bound = tuple(tolerances.lambda_factor * (s_t**2 + b**2) for b in lam_exact)

    ov_pred = (pred.overlap_s_plus, pred.overlap_s_minus)
    ov_exact = (rp.overlap_s, rm.overlap_s)
    ov_err = tuple(abs(a - b) for a, b in zip(ov_pred, ov_exact))
    ov_bound = tuple(
        tolerances.overlap_factor * max(s_t, abs(lam) / inst.theta_min) * ex
        for lam, ex in zip(lam_exact, ov_exact)
    )

    exact = np.abs(alpha_curve(inst, pred.Q))
    approx = spectral.predicted_alpha_magnitude(pred, np.arange(pred.Q + 1))
    alpha_err = float(np.max(np.abs(exact - approx)))

    notes = []
    if not pred.valid.ok:
        notes.append("instance outside validity regime; accuracy not asserted")
    notes.append("eigenvectors orthogonal to |s> are not enumerated")
    passed = {
        "lambda": all(e <= b for e, b in zip(lam_err, lam_bound)),
        "overlap": all(e <= b for e, b in zip(ov_err, ov_bound)),
        "alpha": alpha_err <= tolerances.alpha_abs,
    }
    return VerificationReport(
        valid=pred.valid.ok,
        validity=asdict(pred.valid),
        lambda_pred=lam_pred,
        lambda_exact=lam_exact,
        lambda_err=lam_err,
        lambda_bound=lam_bound,
        overlap_pred=ov_pred,
        overlap_exact=ov_exact,
        overlap_err=ov_err,
        overlap_bound=ov_bound,
        alpha_err=alpha_err,
        Q=pred.Q,
        passed=passed,
        notes=notes,
    )


def in_regime_instances(rng, count, max_draws=100_000, thresholds=spectral.DEFAULT_THRESHOLDS):
    """Random instances (see ``random_instance``) kept only if every validity flag holds."""
    out = []
    for _ in range(max_draws):
        if len(out) == count:
            break
        inst = random_instance(rng)
        if spectral.predict(inst, thresholds).valid.ok:
            out.append(inst)
    return out
