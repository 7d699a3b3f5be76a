"""Dense real matrix arithmetic for switched linear systems.

Matrices are square `float64` numpy arrays.  Every function here is pure and leaves
its inputs untouched, so they may be shared freely between threads.
"""

import logging

import numpy as np

from .core import LinalgError

log = logging.getLogger(__name__)


def as_matrix(data, name=None):
    """Convert `data` to a square, finite `float64` matrix.

    :param data: a nested sequence (row-major) or an array
    :param name: optional label used in error messages
    """

    label = name or "matrix"

    try:
        mat = np.array(data, dtype=np.float64)
    except (TypeError, ValueError) as err:
        raise LinalgError(f"{label}: not a real matrix ({err})")

    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
        raise LinalgError(f"{label}: expected a square matrix, got shape {mat.shape}")

    if not np.all(np.isfinite(mat)):
        raise LinalgError(f"{label}: entries must be finite")

    mat.setflags(write=False)

    return mat


def dim(a):
    """Return the dimension `d` of the square matrix `a`."""
    return a.shape[0]


def identity(d):
    """Return the `d`x`d` identity matrix."""
    return np.eye(d, dtype=np.float64)


def _check_same_dim(a, b):
    if a.shape != b.shape:
        raise LinalgError(f"dimension mismatch: {a.shape} vs {b.shape}")


def mat_mul(a, b):
    """Return the product `a @ b` of two matrices with equal dimension."""
    _check_same_dim(a, b)
    return a @ b


def mat_pow(a, k):
    """Return `a` raised to the nonnegative integer power `k`.

    Computed by repeated right multiplication, `a^k = (...(I a) a...) a`.
    """

    if k < 0:
        raise LinalgError(f"negative exponent: {k}")

    result = identity(dim(a))

    for _ in range(k):
        result = mat_mul(result, a)

    return result


def spectral_norm(a):
    """Return the induced Euclidean norm (largest singular value) of `a`."""

    if not np.all(np.isfinite(a)):
        raise LinalgError("spectral norm of a non-finite matrix")

    return float(np.linalg.norm(a, ord=2))


def spectral_radius(a, name=None):
    """Return the largest eigenvalue modulus of `a`."""

    try:
        eigs = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as err:
        raise LinalgError(f"eigenvalues did not converge for {name or 'matrix'}: {err}")

    return float(np.max(np.abs(eigs)))


def commutator(a, p, b, q):
    """Return the commutator `a^p b^q - b^q a^p`.

    :param a: the first matrix
    :param p: positive power applied to `a`
    :param b: the second matrix
    :param q: positive power applied to `b`
    """

    _check_same_dim(a, b)

    if p < 1 or q < 1:
        raise LinalgError(f"commutator powers must be positive: p={p}, q={q}")

    ap = mat_pow(a, p)
    bq = mat_pow(b, q)

    return mat_mul(ap, bq) - mat_mul(bq, ap)


def power_norms(a, first, last):
    """Return `{n: ||a^n||}` for every `n` in `first..last` (inclusive)."""

    norms = {}
    power = mat_pow(a, first)

    for n in range(first, last + 1):
        norms[n] = spectral_norm(power)
        power = mat_mul(power, a)

    return norms
