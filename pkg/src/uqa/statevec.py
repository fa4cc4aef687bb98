"""Dense complex state vectors.

States are plain ``complex128`` numpy arrays that are frozen (read-only) on
construction. Composite systems put the most significant factor first, so
``tensor(a, b)[j * len(b) + k] == a[j] * b[k]``.
"""
import numpy as np

NORM_TOL = 1e-10


def freeze(v):
    v = np.array(v, dtype=np.complex128)
    v.flags.writeable = False
    return v


def as_state(amplitudes, normalize=False):
    """Validate ``amplitudes`` as a state vector and return a frozen copy."""
    v = np.array(amplitudes, dtype=np.complex128).ravel()
    if v.shape[0] < 2:
        raise ValueError(f"state dimension must be >= 2, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ValueError("state has non-finite amplitudes")
    nrm = np.linalg.norm(v)
    if normalize:
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        v = v / nrm
    elif abs(nrm - 1.0) > NORM_TOL:
        raise ValueError(f"state norm {nrm!r} differs from 1")
    return freeze(v)


def basis_state(i, n):
    if n < 1:
        raise ValueError(f"dimension must be positive, got {n}")
    if not 0 <= i < n:
        raise IndexError(f"basis index {i} out of range for dimension {n}")
    v = np.zeros(n, dtype=np.complex128)
    v[i] = 1.0
    return freeze(v)


def uniform_superposition(n):
    if n < 2:
        raise ValueError(f"uniform superposition needs n >= 2, got {n}")
    return freeze(np.full(n, 1.0 / np.sqrt(n), dtype=np.complex128))


def inner_product(a, b):
    """<a|b> with the first argument conjugated."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def norm(v):
    return float(np.linalg.norm(v))


def tensor(a, b):
    return freeze(np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128)))


def probabilities(v):
    return np.abs(np.asarray(v)) ** 2
