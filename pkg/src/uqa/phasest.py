"""Phase estimation without a Fourier transform.

A 2M-dimensional system: one control qubit (most significant) and m estimate
qubits, index ``c * M + l``. The executable operator is

    G = Z' (c1 V) (c0 R),   R|l> = e^{2 pi i l / M}|l>,

so |0 l> picks up 2 pi l / M and |1 l> picks up pi + 2 pi phi. G never refers
to the answer b; the b-relative spectrum in ``analysis_spectrum`` differs from
it only by the global phase e^{-2 pi i b / M}, and exists for verification.

Amplitude amplification toward |0 b> only works when the residual offset of
phi from the bin b/M is small (phase matching), so the estimate runs four
times with V replaced by e^{-2 pi i g / 8M} V, g in {+1, -1, +3, -3}, and keeps
the run with the sharpest peak.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import spectral
from .operators import ProblemInstance, evolve_phases
from .statevec import as_state, tensor

G_SCHEDULE = (1, -1, 3, -3)
B_ASYMPTOTIC = 1.04
SUCCESS_FLOOR = 0.25
TWO_PI = 2.0 * math.pi


class EstimationError(RuntimeError):
    """No run produced a peak above the success floor."""


@dataclass(frozen=True)
class BinDecomposition:
    """phi = b/M + delta = b/M + g/(8M) + delta_prime."""

    M: int
    b: int
    delta: float
    g: int
    delta_prime: float


@dataclass(frozen=True)
class PhaseEstimationConfig:
    m: int
    phase_oracle: Callable[[], float] | float
    g_schedule: Sequence[int] = G_SCHEDULE

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"need m >= 2 estimate qubits, got {self.m}")
        if sorted(self.g_schedule) != sorted(G_SCHEDULE):
            raise ValueError(f"g_schedule must be a permutation of {G_SCHEDULE}, got {self.g_schedule}")

    @property
    def M(self):
        return 2**self.m

    def phi(self):
        phi = self.phase_oracle() if callable(self.phase_oracle) else self.phase_oracle
        phi = float(phi)
        if not 0.0 <= phi < 1.0:
            raise ValueError(f"phase must lie in [0, 1), got {phi}")
        return phi


@dataclass
class PhaseEstimate:
    M: int
    b: int
    g: int
    phi_hat: float
    run_success: list
    run_peaks: list
    g_schedule: list
    chosen_run: int
    queries_per_run: int
    shots: int | None = None

    def to_dict(self):
        return {
            "b": self.b,
            "g": self.g,
            "phi_hat": self.phi_hat,
            "M": self.M,
            "run_success": self.run_success,
            "run_peaks": self.run_peaks,
            "g_schedule": self.g_schedule,
            "chosen_run": self.chosen_run,
            "queries_per_run": self.queries_per_run,
            "shots": self.shots,
        }


def nearest_bin(phi, M):
    """(b, delta) with phi = b/M + delta mod 1, |delta| <= 1/(2M); exact halves go to the smaller b."""
    b = math.ceil(phi * M - 0.5)
    delta = phi - b / M
    return b % M, delta


def decompose(phi, M):
    b, delta = nearest_bin(phi, M)
    g = min(G_SCHEDULE, key=lambda g: (abs(delta - g / (8 * M)), -g))
    return BinDecomposition(M=M, b=b, delta=delta, g=g, delta_prime=delta - g / (8 * M))


def circular_error(a, b):
    """Distance between two phases on the unit circle, in turns."""
    d = (a - b) % 1.0
    return min(d, 1.0 - d)


def build_start_state(m):
    """|sigma>|+>^m with <sigma|0'> = 1/(2 sqrt M) and <sigma|1'> real positive."""
    M = 2**m
    c0 = 1.0 / (2.0 * math.sqrt(M))
    sigma = as_state([c0, math.sqrt(1.0 - c0 * c0)])
    plus = as_state([1.0, 1.0], normalize=True)
    s = sigma
    for _ in range(m):
        s = tensor(s, plus)
    return s


def start_amplitudes(m):
    return np.ascontiguousarray(build_start_state(m).real)


def r_gate_phases(m):
    """Diagonal phases of R assembled from its m single-qubit gates.

    Qubit k (k = 1..m, weight 2^{m-k}) gets diag(1, e^{2 pi i / 2^k}).
    """
    phases = np.zeros(1)
    for k in range(1, m + 1):
        phases = (phases[:, None] + np.array([0.0, TWO_PI / 2**k])[None, :]).ravel()
    return phases


def build_G(m, phi_eff):
    """Raw diagonal phases of Z'(c1 V)(c0 R), reduced mod 2 pi."""
    M = 2**m
    ell = np.arange(M)
    phases = np.concatenate([TWO_PI * ell / M, np.full(M, math.pi + TWO_PI * phi_eff)])
    return np.mod(phases, TWO_PI)


def analysis_spectrum(m, phi_eff):
    """The b-relative instance: theta_{0l} = 2 pi (l - b)/M, theta_{1l} = pi (1 + 2 delta)."""
    M = 2**m
    b, delta = nearest_bin(phi_eff, M)
    ell = np.arange(M)
    theta = np.concatenate([TWO_PI * (ell - b) / M, np.full(M, math.pi * (1.0 + 2.0 * delta))])
    inst = ProblemInstance.build(theta, start_amplitudes(m), b, theta_min=TWO_PI / M)
    return inst, decompose(phi_eff, M)


def _bin_cot(r, M):
    """cot(pi r / M) with r reduced to (-M/2, M/2]; exactly odd in r, exactly 0 at r = M/2."""
    r = ((np.asarray(r) + M // 2) % M) - M // 2
    out = np.zeros(r.shape)
    nz = r != -(M // 2)
    out[nz] = 1.0 / np.tan(math.pi * r[nz] / M)
    return out


def analysis_moments(m, delta_in):
    """Lambda_p ~ (-pi delta)^p + (4M^2)^-1 sum'_l cot^p(pi (l - b)/M), summed directly."""
    M = 2**m
    if abs(delta_in) > 1.0 / (2 * M) * (1 + 1e-12):
        raise ValueError(f"|delta| must be <= 1/(2M) = {1 / (2 * M)}, got {delta_in}")
    h = _bin_cot(np.arange(1, M), M)
    lam1 = -math.pi * delta_in + math.fsum(h) / (4.0 * M * M)
    lam2 = (math.pi * delta_in) ** 2 + math.fsum(h * h) / (4.0 * M * M)
    return spectral.Moments(lambda1=lam1, lambda2=lam2)


def cot_sum(m):
    """sum'_l h_l; zero exactly because h pairs off as h_l = -h_{2b-l}."""
    M = 2**m
    return math.fsum(_bin_cot(np.arange(1, M), M))


def queries_per_run(m, B=B_ASYMPTOTIC):
    M = 2**m
    return spectral.query_count(1.0 / (2 * M), B)[1]


def run_distribution(m, phi_eff, q=None):
    """Exact outcome probabilities over all 2M basis states after q applications of U."""
    q = queries_per_run(m) if q is None else q
    v, _ = evolve_phases(build_G(m, phi_eff), start_amplitudes(m), q)
    return np.abs(v) ** 2


def shifted_run(m, phi, shift, q=None):
    """Run once with V replaced by e^{-2 pi i shift} V."""
    return run_distribution(m, (phi - shift) % 1.0, q)


def _peak(prob0, shots, rng):
    if shots is None:
        ell = int(np.argmax(prob0))
        return ell, float(prob0[ell])
    counts = rng.multinomial(shots, prob0)[: prob0.shape[0] - 1]
    ell = int(np.argmax(counts))
    return ell, counts[ell] / shots


def run_phase_estimation(cfg, shots=None, rng=None, floor=SUCCESS_FLOOR):
    """Four shifted runs; keep the one whose most likely |0 l> outcome is strongest.

    With ``shots`` the peak is read from sampled measurement counts instead of
    the exact distribution.
    """
    M = cfg.M
    q = queries_per_run(cfg.m)
    if shots is not None and rng is None:
        rng = np.random.default_rng()
    success, peaks = [], []
    for g in cfg.g_schedule:
        phi_eff = (cfg.phi() - g / (8 * M)) % 1.0
        prob = run_distribution(cfg.m, phi_eff, q)
        # final bucket collects every control-|1'> outcome
        prob0 = np.append(prob[:M], max(0.0, 1.0 - prob[:M].sum()))
        ell, p = _peak(prob0 if shots is not None else prob[:M], shots, rng)
        peaks.append(ell)
        success.append(p)
    k = int(np.argmax(success))
    if success[k] < floor:
        raise EstimationError(f"all runs peaked below {floor}: {success}")
    g = int(cfg.g_schedule[k])
    b = peaks[k]
    return PhaseEstimate(
        M=M,
        b=b,
        g=g,
        phi_hat=(b / M + g / (8 * M)) % 1.0,
        run_success=[float(x) for x in success],
        run_peaks=peaks,
        g_schedule=[int(x) for x in cfg.g_schedule],
        chosen_run=k,
        queries_per_run=q,
        shots=shots,
    )


def resonance_scan(m, phi, shifts):
    """Probability of |0 b> (b the nearest bin of phi) against an applied phase shift."""
    M = 2**m
    half = 1.0 / (2 * M)
    b, _ = nearest_bin(phi, M)
    out = []
    for x in shifts:
        if abs(x) > half * (1 + 1e-12):
            raise ValueError(f"shift {x} outside [-1/(2M), 1/(2M)]")
        out.append((float(x), float(shifted_run(m, phi, x)[b])))
    return out
