"""Dense symmetric and symmetric-definite generalized eigendecompositions.

The generalized solver reduces ``A S = Sigma S D`` to a standard symmetric
eigenproblem by whitening with Sigma's eigendecomposition, so the
intermediate whitened quantities are available for verification.
"""

from dataclasses import dataclass

import numpy as np

# Relative symmetry tolerance for inputs, and the floor/jitter policy for
# near-singular covariances: floor = JITTER_FLOOR * trace/dim, and one shot
# of JITTER_SCALE * trace/dim is added if the smallest eigenvalue sits at or
# below the floor.
SYMMETRY_RTOL = 1e-10
JITTER_FLOOR = 1e-12
JITTER_SCALE = 1e-10


class NotPositiveDefiniteError(np.linalg.LinAlgError):
    """Raised when a covariance is not positive definite even after jitter."""


def as_matrix(a, name="matrix"):
    """Validate and return a 2-D float64 array: finite entries, both dims >= 1."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"{name} must be 2-D with at least one row and column, "
                         f"got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError(f"{name} contains non-finite entries")
    return a


def check_square_symmetric(a, name="matrix", rtol=SYMMETRY_RTOL):
    a = as_matrix(a, name)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    scale = np.linalg.norm(a)
    if np.linalg.norm(a - a.T) > rtol * max(scale, 1e-300):
        raise ValueError(f"{name} is not symmetric within tolerance")
    return a


def _fix_signs(vectors):
    # Deterministic sign convention: the entry of largest magnitude in each
    # column is made positive (first such entry on ties).
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


@dataclass(frozen=True)
class SymEig:
    """Eigendecomposition of a symmetric matrix.

    values are sorted non-increasing; column i of vectors pairs with
    values[i] and the columns are orthonormal.
    """
    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class GenEig:
    """Solution of the symmetric-definite problem A S = Sigma S diag(values).

    values are sorted non-increasing; vectors holds S with the
    Sigma-orthonormal normalization S' Sigma S = I.
    """
    values: np.ndarray
    vectors: np.ndarray


def sym_eig(a):
    """Eigendecomposition of a symmetric matrix.

    Parameters
    ----------
    a : (n, n) array, symmetric within ``SYMMETRY_RTOL * ||a||``.

    Returns
    -------
    SymEig with values sorted descending and a deterministic sign convention
    on the eigenvectors.
    """
    a = check_square_symmetric(a, "a")
    values, vectors = np.linalg.eigh(a)
    order = np.argsort(values)[::-1]
    return SymEig(values[order], _fix_signs(vectors[:, order]))


def ensure_spd(sigma):
    """Return (sigma_eff, SymEig of sigma_eff) where sigma_eff is sigma,
    jittered once on the diagonal if its smallest eigenvalue sits at or
    below the floor. Raises NotPositiveDefiniteError, naming the offending
    eigenvalue, if jitter does not rescue it.
    """
    sigma = check_square_symmetric(sigma, "sigma")
    dim = sigma.shape[0]
    eig = sym_eig(sigma)
    if eig.values[-1] > JITTER_FLOOR * np.trace(sigma) / dim:
        return sigma, eig
    jittered = sigma + (JITTER_SCALE * np.trace(sigma) / dim) * np.eye(dim)
    eig = sym_eig(jittered)
    if eig.values[-1] <= JITTER_FLOOR * np.trace(jittered) / dim:
        raise NotPositiveDefiniteError(
            f"covariance not positive definite: smallest eigenvalue "
            f"{eig.values[-1]:.6e} after jitter")
    return jittered, eig


def whiten(sigma):
    """Whitening transform T with T Sigma T' = I, built as Lambda^{-1/2} U'.

    Near-singular input gets one shot of diagonal jitter (see module
    constants); T then whitens the jittered matrix.
    """
    t, _ = whiten_with_eig(sigma)
    return t


def whiten_with_eig(sigma):
    """As whiten(), also returning the SymEig of the (possibly jittered) Sigma."""
    _, eig = ensure_spd(sigma)
    t = eig.vectors.T / np.sqrt(eig.values)[:, None]
    return t, eig


def gen_eig_spd(a, sigma):
    """All eigenpairs of the symmetric-definite problem A S = Sigma S D.

    Parameters
    ----------
    a : (n, n) symmetric array.
    sigma : (n, n) symmetric positive definite array (jitter policy applies).

    Returns
    -------
    GenEig with the full spectrum sorted descending and S normalized so
    that S' Sigma S = I.

    The reduction whitens with Sigma's eigenbasis, solves the standard
    symmetric problem on T A T', and maps the eigenvectors back as S = T' V.
    """
    a = check_square_symmetric(a, "a")
    sigma = check_square_symmetric(sigma, "sigma")
    if a.shape != sigma.shape:
        raise ValueError(f"dimension mismatch: a is {a.shape}, sigma is {sigma.shape}")
    t = whiten(sigma)
    a_hat = t @ a @ t.T
    a_hat = 0.5 * (a_hat + a_hat.T)  # symmetrize roundoff before eigh
    inner = sym_eig(a_hat)
    s = _fix_signs(t.T @ inner.vectors)
    return GenEig(inner.values, s)
