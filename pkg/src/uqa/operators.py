"""The diagonal phase operator G, the reflection I_s and the iterate U = I_s G.

Operator products read right to left: ``apply_U`` applies G first, then I_s.
Phases are kept as angles in (-pi, pi] and only turned into unit-modulus
factors at application time.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from . import _accel
from .statevec import NORM_TOL, freeze

TARGET_ZERO_TOL = 1e-12


class InstanceError(ValueError):
    """Raised when a problem instance violates its invariants."""


def wrap_angle(x):
    """Map angles onto (-pi, pi]."""
    x = np.asarray(x, dtype=np.float64)
    return np.pi - np.mod(np.pi - x, 2.0 * np.pi)


def _readonly(a, dtype=np.float64):
    a = np.array(a, dtype=dtype)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class PhaseSpectrum:
    """Diagonal of G as angles, with a unique zero-phase target index."""

    theta: np.ndarray
    target: int
    theta_min: float | None = None

    def __post_init__(self):
        theta = np.array(self.theta, dtype=np.float64).ravel()
        n = theta.shape[0]
        if n < 2:
            raise InstanceError(f"need at least 2 phases, got {n}")
        if not np.all(np.isfinite(theta)):
            raise InstanceError("non-finite phase")
        t = int(self.target)
        if not 0 <= t < n:
            raise InstanceError(f"target {t} out of range for n={n}")
        theta = wrap_angle(theta)
        if abs(theta[t]) > TARGET_ZERO_TOL:
            raise InstanceError(f"theta[target] must be 0, got {theta[t]!r}")
        theta[t] = 0.0
        others = np.delete(np.abs(theta), t)
        gap = float(others.min())
        if gap <= 0.0:
            raise InstanceError("a non-target phase is zero; the target is not unique")
        tmin = gap if self.theta_min is None else float(self.theta_min)
        if not 0.0 < tmin <= gap * (1 + 1e-12):
            raise InstanceError(f"theta_min={tmin!r} inconsistent with actual gap {gap!r}")
        object.__setattr__(self, "theta", _readonly(theta))
        object.__setattr__(self, "target", t)
        object.__setattr__(self, "theta_min", tmin)

    def __len__(self):
        return self.theta.shape[0]

    @cached_property
    def factors(self):
        return _readonly(np.exp(1j * self.theta), np.complex128)


@dataclass(frozen=True, eq=False)
class StartState:
    """Real, unit-norm start amplitudes s_i."""

    s: np.ndarray

    def __post_init__(self):
        s = np.array(self.s, dtype=np.float64).ravel()
        if not np.all(np.isfinite(s)):
            raise InstanceError("non-finite start amplitude")
        nrm2 = float(np.dot(s, s))
        if abs(nrm2 - 1.0) > NORM_TOL:
            raise InstanceError(f"start state not normalized: sum s_i^2 = {nrm2!r}")
        object.__setattr__(self, "s", _readonly(s))

    def __len__(self):
        return self.s.shape[0]

    @property
    def state(self):
        return freeze(self.s)


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """The (G, s, t) triple that defines U = I_s G."""

    spectrum: PhaseSpectrum
    start: StartState
    n: int = field(init=False)

    def __post_init__(self):
        if len(self.spectrum) != len(self.start):
            raise InstanceError(
                f"spectrum has {len(self.spectrum)} phases but start state has {len(self.start)} amplitudes"
            )
        if self.start.s[self.spectrum.target] < 0.0:
            raise InstanceError("start amplitude on the target must be non-negative")
        object.__setattr__(self, "n", len(self.spectrum))

    @classmethod
    def build(cls, theta, s, target, theta_min=None):
        return cls(PhaseSpectrum(theta, target, theta_min), StartState(s))

    @property
    def target(self):
        return self.spectrum.target

    @property
    def theta(self):
        return self.spectrum.theta

    @property
    def s(self):
        return self.start.s

    @property
    def s_t(self):
        return float(self.start.s[self.spectrum.target])

    @property
    def theta_min(self):
        return self.spectrum.theta_min

    def to_dict(self):
        return {
            "n": self.n,
            "target": self.target,
            "theta": [float(x) for x in self.theta],
            "s": [float(x) for x in self.s],
        }

    @classmethod
    def from_dict(cls, data):
        try:
            n = int(data["n"])
            target = int(data["target"])
            theta = data["theta"]
            s = data["s"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceError(f"malformed instance: {exc}") from exc
        if len(theta) != n or len(s) != n:
            raise InstanceError(f"n={n} but len(theta)={len(theta)}, len(s)={len(s)}")
        theta_arr = np.asarray(theta, dtype=np.float64)
        if theta_arr[target] != 0.0:
            raise InstanceError(f"theta[target] must be exactly 0, got {theta_arr[target]!r}")
        return cls.build(theta_arr, s, target)


def load_instance(path):
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}: invalid JSON ({exc})") from exc
    return ProblemInstance.from_dict(data)


def save_instance(inst, path):
    Path(path).write_text(json.dumps(inst.to_dict(), indent=2) + "\n")


def _check_dim(n, v):
    v = np.asarray(v)
    if v.shape != (n,):
        raise ValueError(f"dimension mismatch: operator on {n}, vector shape {v.shape}")
    return v


def apply_diagonal(spec, v):
    v = _check_dim(len(spec), v)
    return freeze(spec.factors * v)


def apply_reflection(start, v):
    """I_s v = v - 2 <s|v> s."""
    v = _check_dim(len(start), v)
    s = start.s
    return freeze(v - 2.0 * np.dot(s, v) * s)


def apply_U(inst, v):
    return apply_reflection(inst.start, apply_diagonal(inst.spectrum, v))


def evolve_phases(phases, s, q, v0=None, watch=0):
    """Iterate (1 - 2|s><s|) diag(e^{i phases}) q times.

    Unlike ``ProblemInstance`` this takes any phase array, including ones with
    no zero entry or with a global offset. Returns the final state and the
    amplitudes on index ``watch`` after 0..q steps.
    """
    phases = np.asarray(phases, dtype=np.float64)
    s = np.ascontiguousarray(s, dtype=np.float64)
    if q < 0:
        raise ValueError(f"iteration count must be >= 0, got {q}")
    if phases.shape != s.shape:
        raise ValueError(f"dimension mismatch: {phases.shape} vs {s.shape}")
    v0 = s if v0 is None else _check_dim(s.shape[0], v0)
    factors = np.exp(1j * phases)
    v, alpha = _accel.evolve(factors, s, np.ascontiguousarray(v0, dtype=np.complex128), int(q), int(watch))
    return freeze(v), alpha


def iterate_U(inst, q):
    """U^q |s>."""
    v, _ = _accel.evolve(inst.spectrum.factors, inst.s, inst.start.state, _count(q), inst.target)
    return freeze(v)


def alpha_curve(inst, q_max):
    """<t|U^q|s> for q = 0..q_max, from one pass of direct iteration."""
    _, alpha = _accel.evolve(inst.spectrum.factors, inst.s, inst.start.state, _count(q_max), inst.target)
    return alpha


def amplitude_on_target(inst, q):
    return complex(alpha_curve(inst, q)[-1])


def _count(q):
    q = int(q)
    if q < 0:
        raise ValueError(f"iteration count must be >= 0, got {q}")
    return q


def random_instance(rng, n_range=(64, 512), st_range=(0.005, 0.03), gap_factor=20.0):
    """Random instance with s_t and phases drawn so the gap is well above s_t.

    N is uniform in ``n_range`` (inclusive), s_t uniform in ``st_range``, the
    remaining amplitude spread evenly over the other indices with random signs,
    and each non-target phase is +-U[gap_factor * s_t, pi].
    """
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    t = int(rng.integers(n))
    st = float(rng.uniform(*st_range))
    signs = rng.choice([-1.0, 1.0], size=n)
    s = signs * np.sqrt((1.0 - st * st) / (n - 1))
    s[t] = st
    s /= np.linalg.norm(s)
    theta = rng.choice([-1.0, 1.0], size=n) * rng.uniform(gap_factor * st, np.pi, size=n)
    theta[t] = 0.0
    return ProblemInstance.build(theta, s, t)
