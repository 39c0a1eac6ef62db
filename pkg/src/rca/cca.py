"""Canonical correlation analysis as a residual-component fit.

Solving the joint sample covariance against the block-diagonal of the
per-view covariances turns the generalized eigenvalues into 1 +/- rho for
each canonical correlation rho; the eigenvectors split into the canonical
direction pairs. A direct whitened-cross-covariance solver is provided as
an independent check of that equivalence.
"""

from dataclasses import dataclass

import numpy as np

from .core import BlockDiagonal, RcaFit, rca_fit
from .linalg import as_matrix

# Correlations below this are indistinguishable from zero and dropped;
# values above 1 by less than this are clamped (rank-deficiency artifacts).
CORR_TOL = 1e-8


@dataclass(frozen=True)
class CcaFit:
    """Canonical directions (per-view normalized), correlations and the
    probabilistic loadings; fit keeps the underlying joint solve."""
    s1: np.ndarray
    s2: np.ndarray
    correlations: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    clamped: bool
    fit: RcaFit


def _center(y, name):
    y = as_matrix(y, name)
    return y - y.mean(axis=0)


def cca_fit(y1, y2):
    """Canonical correlation analysis of two views with shared rows.

    Views are centered internally; covariances use the 1/n convention. The
    retained pairs are the generalized eigenvalues above 1 + CORR_TOL, whose
    excess over one is the canonical correlation. Correlations that land
    above 1 by roundoff are clamped and flagged on the result.
    """
    y1 = _center(y1, "y1")
    y2 = _center(y2, "y2")
    n = y1.shape[0]
    if y2.shape[0] != n:
        raise ValueError(f"row-count mismatch: y1 has {n}, y2 has {y2.shape[0]}")
    d1 = y1.shape[1]
    joint = np.hstack([y1, y2])
    c = joint.T @ joint / n
    c11 = c[:d1, :d1]
    c22 = c[d1:, d1:]
    fit = rca_fit(c, BlockDiagonal((c11, c22)), n_obs=n)

    q = int(np.sum(fit.eig.values > 1.0 + CORR_TOL))
    correlations = fit.eig.values[:q] - 1.0
    clamped = bool((correlations > 1.0).any())
    correlations = np.minimum(correlations, 1.0)

    # The joint vectors are blkdiag-orthonormal, so each view block carries
    # half the unit norm; sqrt(2) restores per-view normalization.
    s = fit.eig.vectors[:, :q] * np.sqrt(2.0)
    s1, s2 = s[:d1], s[d1:]
    root = np.sqrt(correlations)
    return CcaFit(s1=s1, s2=s2, correlations=correlations,
                  v1=c11 @ s1 * root, v2=c22 @ s2 * root,
                  clamped=clamped, fit=fit)


def cca_oracle(y1, y2):
    """Canonical correlations by the direct route: singular spectrum of the
    whitened cross-covariance. Independent of the generalized-eigenvalue
    path; returns all min(d1, d2) correlations, descending."""
    y1 = _center(y1, "y1")
    y2 = _center(y2, "y2")
    if y2.shape[0] != y1.shape[0]:
        raise ValueError("row-count mismatch")
    n = y1.shape[0]
    c11 = y1.T @ y1 / n
    c22 = y2.T @ y2 / n
    c12 = y1.T @ y2 / n

    def inv_sqrt(m):
        lam, u = np.linalg.eigh(m)
        if lam.min() <= 1e-12 * lam.max():
            raise np.linalg.LinAlgError("degenerate view covariance")
        return (u / np.sqrt(lam)) @ u.T

    m = inv_sqrt(c11) @ c12 @ np.linalg.inv(c22) @ c12.T @ inv_sqrt(c11)
    lam = np.linalg.eigvalsh(0.5 * (m + m.T))[::-1]
    rho2 = np.clip(lam, 0.0, None)[:min(c11.shape[0], c22.shape[0])]
    return np.sqrt(rho2)
