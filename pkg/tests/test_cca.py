import numpy as np
import pytest

from rca.cca import cca_fit, cca_oracle


def make_views(rng, n, d1, d2, shared=2, strength=0.9):
    z = rng.standard_normal((n, shared))
    y1 = z @ rng.standard_normal((shared, d1)) * strength + rng.standard_normal((n, d1))
    y2 = z @ rng.standard_normal((shared, d2)) * strength + rng.standard_normal((n, d2))
    return y1, y2


def test_identical_views_give_unit_correlations():
    rng = np.random.default_rng(1)
    y1 = rng.standard_normal((40, 3))
    fit = cca_fit(y1, y1.copy())
    assert fit.correlations.shape == (3,)
    np.testing.assert_allclose(fit.correlations, np.ones(3), atol=1e-8)


def test_orthogonal_column_spaces_give_no_correlations():
    # mutually orthogonal zero-mean sign patterns: cross-covariance is exactly 0
    y1 = np.array([[1.0], [-1.0], [1.0], [-1.0]])
    y2 = np.array([[1.0, 1.0], [1.0, -1.0], [-1.0, -1.0], [-1.0, 1.0]])
    fit = cca_fit(y1, y2)
    assert fit.correlations.shape == (0,)
    oracle = cca_oracle(y1, y2)
    np.testing.assert_allclose(oracle, np.zeros(1), atol=1e-12)


def test_matches_direct_oracle():
    rng = np.random.default_rng(2)
    y1, y2 = make_views(rng, 30, 3, 4)
    fit = cca_fit(y1, y2)
    oracle = cca_oracle(y1, y2)
    np.testing.assert_allclose(fit.correlations, oracle[:fit.correlations.size],
                               atol=1e-8)


def test_spectrum_symmetric_about_one():
    rng = np.random.default_rng(3)
    y1, y2 = make_views(rng, 50, 4, 3)
    fit = cca_fit(y1, y2)
    values = fit.fit.eig.values
    np.testing.assert_allclose(values + values[::-1], 2.0 * np.ones_like(values),
                               atol=1e-8)


def test_per_view_normalization_and_diagonal_cross():
    rng = np.random.default_rng(4)
    y1, y2 = make_views(rng, 60, 4, 4)
    y1c = y1 - y1.mean(axis=0)
    y2c = y2 - y2.mean(axis=0)
    n = y1.shape[0]
    c11, c22, c12 = y1c.T @ y1c / n, y2c.T @ y2c / n, y1c.T @ y2c / n
    fit = cca_fit(y1, y2)
    q = fit.correlations.size
    assert q > 0
    np.testing.assert_allclose(fit.s1.T @ c11 @ fit.s1, np.eye(q), atol=1e-8)
    np.testing.assert_allclose(fit.s2.T @ c22 @ fit.s2, np.eye(q), atol=1e-8)
    cross = fit.s1.T @ c12 @ fit.s2
    np.testing.assert_allclose(cross, np.diag(fit.correlations), atol=1e-8)
    assert ((fit.correlations > 0) & (fit.correlations <= 1.0 + 1e-8)).all()


def test_probabilistic_loadings_identity():
    rng = np.random.default_rng(5)
    y1, y2 = make_views(rng, 45, 3, 5)
    fit = cca_fit(y1, y2)
    q = fit.correlations.size
    np.testing.assert_allclose(fit.s1.T @ fit.v1,
                               np.diag(np.sqrt(fit.correlations)), atol=1e-8)
    np.testing.assert_allclose(fit.s2.T @ fit.v2,
                               np.diag(np.sqrt(fit.correlations)), atol=1e-8)
    assert fit.v1.shape == (3, q) and fit.v2.shape == (5, q)


def test_loadings_product_recovers_cross_covariance():
    # when every canonical pair is retained, V1 V2' rebuilds C12 exactly
    rng = np.random.default_rng(12)
    z = rng.standard_normal((200, 3))
    y1 = z @ rng.standard_normal((3, 3)) + 0.3 * rng.standard_normal((200, 3))
    y2 = z @ rng.standard_normal((3, 3)) + 0.3 * rng.standard_normal((200, 3))
    fit = cca_fit(y1, y2)
    assert fit.correlations.size == 3
    y1c = y1 - y1.mean(axis=0)
    y2c = y2 - y2.mean(axis=0)
    c12 = y1c.T @ y2c / y1.shape[0]
    np.testing.assert_allclose(fit.v1 @ fit.v2.T, c12, atol=1e-8)


def test_invariance_under_invertible_per_view_transforms():
    rng = np.random.default_rng(6)
    y1, y2 = make_views(rng, 40, 3, 3)
    base = cca_fit(y1, y2).correlations
    a = rng.standard_normal((3, 3)) + 3.0 * np.eye(3)
    b = rng.standard_normal((3, 3)) + 3.0 * np.eye(3)
    transformed = cca_fit(y1 @ a, y2 @ b).correlations
    assert transformed.size == base.size
    np.testing.assert_allclose(transformed, base, atol=1e-8)


def test_row_count_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        cca_fit(np.ones((4, 2)), np.ones((5, 2)))


def test_oracle_rejects_degenerate_view():
    rng = np.random.default_rng(7)
    y1 = rng.standard_normal((20, 3))
    y1[:, 2] = y1[:, 0]  # collinear columns: singular view covariance
    y2 = rng.standard_normal((20, 2))
    with pytest.raises(np.linalg.LinAlgError, match="degenerate view"):
        cca_oracle(y1, y2)


def test_fit_survives_rank_deficient_views_via_jitter():
    # more columns than rows: covariances are singular but jitter carries
    # the solve through, and identical views still give unit correlations
    rng = np.random.default_rng(8)
    y1 = rng.standard_normal((10, 15))
    fit = cca_fit(y1, y1.copy())
    assert fit.correlations.size > 0
    np.testing.assert_allclose(fit.correlations,
                               np.ones_like(fit.correlations), atol=1e-6)
