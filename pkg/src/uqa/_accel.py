"""Hot numeric kernels: repeated application of U = I_s G, and a root search of
the secular equation in every pole interval.

Each kernel exists twice: a numba ``@njit`` version and a pure-numpy version.
The numba path is used when numba imports cleanly and ``UQA_DISABLE_NUMBA`` is
unset (or ``0``). Both paths stay importable so they can be compared directly.

The numpy root search bisects all intervals at once; the numba one walks the
intervals in turn with bracket-safeguarded Newton steps. Both finish on a
collapsed bracket.
"""
import logging
import os

import numpy as np

log = logging.getLogger(__name__)

_MAX_BISECT = 200


def _env_disabled():
    return os.environ.get("UQA_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")


try:
    import numba as nb

    njit = nb.njit(cache=True, nogil=True, error_model="numpy")
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(func):
        return func


# ---------------------------------------------------------------- numpy path


def evolve_numpy(factors, s, v0, q, target):
    """Apply U q times to ``v0``; return (final state, <t|U^k v0> for k=0..q)."""
    v = v0.astype(np.complex128, copy=True)
    sc = s.astype(np.complex128)
    alpha = np.empty(q + 1, dtype=np.complex128)
    alpha[0] = v[target]
    for k in range(1, q + 1):
        v *= factors
        v -= (2.0 * np.dot(s, v)) * sc
        alpha[k] = v[target]
    return v, alpha


def secular_numpy(poles, weights, lam):
    """F(lam) = sum_j w_j cot((lam - p_j)/2) for an array of lam values."""
    lam = np.atleast_1d(np.asarray(lam, dtype=np.float64))
    half = 0.5 * (lam[:, None] - poles[None, :])
    return (weights[None, :] / np.tan(half)).sum(axis=1)


def _brackets(poles):
    hi = np.empty_like(poles)
    hi[:-1] = poles[1:]
    hi[-1] = poles[0] + 2.0 * np.pi
    return hi - poles


def _offset_secular_numpy(d, weights, x):
    # rows: intervals; d[k, j] = anchor_k - pole_j
    return (weights[None, :] / np.tan(0.5 * (d + x[:, None]))).sum(axis=1)


def bisect_roots_numpy(poles, weights):
    """One root of F per circular interval between consecutive sorted poles.

    F falls from +inf just above each pole to -inf just below the next, so
    bisection on the open interval always converges. Each root is returned as
    (anchor, offset) with the anchor being whichever end pole is nearer: the
    anchor-to-pole differences of close poles are then exact, and the root is
    resolved far below one ulp of lambda itself. All intervals are bisected
    at once.
    """
    gap = _brackets(poles)
    lo_anchor = poles
    hi_anchor = np.roll(poles, -1)
    with np.errstate(divide="ignore", invalid="ignore"):
        f_mid = _offset_secular_numpy(lo_anchor[:, None] - poles[None, :], weights, 0.5 * gap)
    upper = f_mid > 0.0
    anchor = np.where(upper, hi_anchor, lo_anchor)
    a = np.where(upper, -0.5 * gap, 0.0)
    b = np.where(upper, 0.0, 0.5 * gap)
    d = anchor[:, None] - poles[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        for _ in range(_MAX_BISECT):
            mid = 0.5 * (a + b)
            done = (mid <= a) | (mid >= b)
            if done.all():
                break
            f = _offset_secular_numpy(d, weights, mid)
            a = np.where((f > 0.0) & ~done, mid, a)
            b = np.where((f <= 0.0) & ~done, mid, b)
        fa = np.abs(_offset_secular_numpy(d, weights, a))
        fb = np.abs(_offset_secular_numpy(d, weights, b))
    # an endpoint still sitting on a pole gives inf/nan; never pick it
    fa = np.where(np.isfinite(fa), fa, np.inf)
    fb = np.where(np.isfinite(fb), fb, np.inf)
    return anchor.copy(), np.where(fa <= fb, a, b)


def offset_secular_numpy(poles, weights, anchor, offset):
    """F at anchor + offset, with pole differences taken from the anchor."""
    d = np.asarray([anchor - poles], dtype=np.float64)
    return float(_offset_secular_numpy(d, weights, np.array([offset], dtype=np.float64))[0])


# ---------------------------------------------------------------- numba path


@njit
def evolve_numba(factors, s, v0, q, target):
    n = v0.shape[0]
    v = v0.astype(np.complex128)
    alpha = np.empty(q + 1, dtype=np.complex128)
    alpha[0] = v[target]
    for k in range(1, q + 1):
        acc = 0.0 + 0.0j
        for i in range(n):
            v[i] *= factors[i]
            acc += s[i] * v[i]
        acc *= 2.0
        for i in range(n):
            v[i] -= acc * s[i]
        alpha[k] = v[target]
    return v, alpha


@njit
def _secular_scalar(poles, weights, lam):
    acc = 0.0
    for j in range(poles.shape[0]):
        acc += weights[j] / np.tan(0.5 * (lam - poles[j]))
    return acc


@njit
def secular_numba(poles, weights, lam):
    out = np.empty(lam.shape[0])
    for k in range(lam.shape[0]):
        out[k] = _secular_scalar(poles, weights, lam[k])
    return out


@njit
def offset_secular_numba(poles, weights, anchor, offset):
    acc = 0.0
    for j in range(poles.shape[0]):
        acc += weights[j] / np.tan(0.5 * ((anchor - poles[j]) + offset))
    return acc


@njit
def _secular_and_slope(poles, weights, anchor, x):
    f = 0.0
    df = 0.0
    for j in range(poles.shape[0]):
        h = 0.5 * ((anchor - poles[j]) + x)
        sn = np.sin(h)
        f += weights[j] * np.cos(h) / sn
        df -= 0.5 * weights[j] / (sn * sn)
    return f, df


@njit
def _bisect_one(poles, weights, anchor, a, b):
    """Root of the offset secular function on (a, b), where F(a+) > 0 > F(b-).

    Newton steps are taken when they land inside the current bracket and
    bisection otherwise; each evaluation also tightens the bracket, so the
    loop ends with the bracket collapsed to adjacent doubles.
    """
    x = 0.5 * (a + b)
    for _ in range(_MAX_BISECT):
        if x <= a or x >= b:
            x = 0.5 * (a + b)
            if x <= a or x >= b:
                break
        f, df = _secular_and_slope(poles, weights, anchor, x)
        if f > 0.0:
            a = x
        else:
            b = x
        if f == 0.0:
            return x
        step = f / df
        nxt = x - step
        if nxt <= a or nxt >= b or not np.isfinite(nxt):
            nxt = 0.5 * (a + b)
        elif nxt == x:
            # step below one ulp: probe the neighbour so the bracket closes
            nxt = np.nextafter(x, b) if f > 0.0 else np.nextafter(x, a)
        x = nxt
    fa = abs(offset_secular_numba(poles, weights, anchor, a))
    fb = abs(offset_secular_numba(poles, weights, anchor, b))
    if not np.isfinite(fa):
        fa = np.inf
    if not np.isfinite(fb):
        fb = np.inf
    return a if fa <= fb else b


@njit
def bisect_roots_numba(poles, weights):
    d = poles.shape[0]
    anchors = np.empty(d)
    offsets = np.empty(d)
    for j in range(d):
        if j + 1 < d:
            upper_pole = poles[j + 1]
            gap = poles[j + 1] - poles[j]
        else:
            upper_pole = poles[0]
            gap = poles[0] + 2.0 * np.pi - poles[j]
        half = 0.5 * gap
        if offset_secular_numba(poles, weights, poles[j], half) > 0.0:
            anchors[j] = upper_pole
            offsets[j] = _bisect_one(poles, weights, upper_pole, -half, 0.0)
        else:
            anchors[j] = poles[j]
            offsets[j] = _bisect_one(poles, weights, poles[j], 0.0, half)
    return anchors, offsets


# ---------------------------------------------------------------- dispatch

USE_NUMBA = HAVE_NUMBA and not _env_disabled()
BACKEND = "numba" if USE_NUMBA else "numpy"

if USE_NUMBA:
    evolve = evolve_numba
    bisect_roots = bisect_roots_numba
    offset_secular = offset_secular_numba

    def secular(poles, weights, lam):
        return secular_numba(poles, weights, np.atleast_1d(np.asarray(lam, dtype=np.float64)))

else:
    evolve = evolve_numpy
    bisect_roots = bisect_roots_numpy
    offset_secular = offset_secular_numpy
    secular = secular_numpy

log.debug("uqa kernels using %s backend", BACKEND)
