"""Amplitude amplification with G = -I_t, and Grover search from a uniform start."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import ProblemInstance, alpha_curve
from .spectral import round_half_up


@dataclass(frozen=True)
class GroverSpec:
    n: int
    target: int = 0

    def __post_init__(self):
        # n = 3 is accepted: the formulas need no power of two
        if self.n < 3:
            raise ValueError(f"Grover search needs n >= 3, got {self.n}")
        if not 0 <= self.target < self.n:
            raise ValueError(f"target {self.target} out of range for n={self.n}")


@dataclass(frozen=True)
class GroverResult:
    n: int
    target: int
    q_used: int
    success_probability: float
    shots: dict | None = None

    def to_dict(self):
        d = {
            "n": self.n,
            "target": self.target,
            "q_used": self.q_used,
            "success_probability": self.success_probability,
        }
        if self.shots is not None:
            d["shots"] = self.shots
        return d


def grover_instance(spec):
    theta = np.full(spec.n, np.pi)
    theta[spec.target] = 0.0
    s = np.full(spec.n, 1.0 / math.sqrt(spec.n))
    return ProblemInstance.build(theta, s, spec.target)


def grover_iterations(n):
    return round_half_up(math.pi * math.sqrt(n) / 4.0 - 0.5)


def closed_form_alpha(n, q):
    """|<t|U^q|s>| = |sin((2q + 1) arcsin(1/sqrt(n)))|."""
    return np.abs(np.sin((2 * np.asarray(q) + 1) * math.asin(1.0 / math.sqrt(n))))


def run_grover(spec, shots=None, rng=None):
    """Iterate U for round(pi sqrt(N)/4 - 1/2) steps; probability is exact.

    With ``shots`` the final distribution is also sampled (hit/miss on the
    target) through ``rng``.
    """
    inst = grover_instance(spec)
    q = grover_iterations(spec.n)
    p = float(abs(alpha_curve(inst, q)[-1]) ** 2)
    sampled = None
    if shots:
        rng = np.random.default_rng() if rng is None else rng
        hits = int(rng.binomial(int(shots), min(p, 1.0)))
        sampled = {"shots": int(shots), "hits": hits, "frequency": hits / int(shots)}
    return GroverResult(spec.n, spec.target, q, p, sampled)
