import numpy as np
import pytest

from surrofit import PcaTransform, ValidationError

from oracles import jacobi_eigenvalues


def test_line_data_is_rank_one(rng):
    x = rng.normal(size=(40, 1))
    X = np.hstack([x, 3.0 * x])
    pca = PcaTransform(n_components=2).fit(X)
    total = np.sum(np.var(X, axis=0))
    assert pca.explained_variance_[0] == pytest.approx(total, rel=1e-10)
    assert pca.explained_variance_[1] <= 1e-12


def test_full_rank_reconstruction(rng):
    X = rng.normal(size=(30, 5))
    pca = PcaTransform(n_components=5).fit(X)
    recovered = pca.inverse_transform(pca.transform(X))
    assert np.abs(recovered - X).max() <= 1e-8


def test_components_orthonormal_and_oracle_eigenvalues(rng):
    X = rng.normal(size=(50, 6)) @ rng.normal(size=(6, 6))
    pca = PcaTransform(n_components=6).fit(X)
    gram = pca.components_ @ pca.components_.T
    assert np.abs(gram - np.eye(6)).max() <= 1e-8
    cov = np.cov(X, rowvar=False, bias=True)
    expected = jacobi_eigenvalues(cov)
    assert np.allclose(pca.explained_variance_, expected, atol=1e-8)


def test_explained_variance_nonincreasing_and_sums_to_total(rng):
    X = rng.normal(size=(80, 7)) * rng.uniform(0.1, 5.0, size=7)
    pca = PcaTransform(n_components=7).fit(X)
    ev = pca.explained_variance_
    assert (np.diff(ev) <= 1e-12).all()
    assert ev.sum() == pytest.approx(np.sum(np.var(X, axis=0)), abs=1e-8)


def test_transform_of_mean_rows_is_zero(rng):
    X = rng.normal(size=(20, 4))
    pca = PcaTransform(n_components=3).fit(X)
    out = pca.transform(np.tile(pca.mean_, (5, 1)))
    assert np.abs(out).max() <= 1e-12


def test_rank_one_transformed_variance(rng):
    x = rng.normal(size=(60, 1))
    X = np.hstack([x, 3.0 * x])
    pca = PcaTransform(n_components=1).fit(X)
    z = pca.transform(X)
    assert np.var(z[:, 0]) == pytest.approx(pca.explained_variance_[0],
                                            abs=1e-10)


def test_full_rank_transform_preserves_norms(rng):
    X = rng.normal(size=(25, 4))
    pca = PcaTransform(n_components=4).fit(X)
    z = pca.transform(X)
    centered = X - pca.mean_
    assert np.allclose(np.linalg.norm(z, axis=1),
                       np.linalg.norm(centered, axis=1), atol=1e-8)


def test_deterministic_sign_convention(rng):
    X = rng.normal(size=(40, 5))
    a = PcaTransform(n_components=5).fit(X)
    b = PcaTransform(n_components=5).fit(X.copy())
    assert (a.components_ == b.components_).all()
    for row in a.components_:
        assert row[np.argmax(np.abs(row))] > 0


def test_k_greater_than_f_rejected(rng):
    with pytest.raises(ValidationError):
        PcaTransform(n_components=5).fit(rng.normal(size=(10, 3)))


def test_requires_two_rows(rng):
    with pytest.raises(ValidationError):
        PcaTransform(n_components=1).fit(rng.normal(size=(1, 3)))


def test_serialization_roundtrip_exact(rng):
    X = rng.normal(size=(30, 4))
    pca = PcaTransform(n_components=3).fit(X)
    restored = PcaTransform.from_dict(pca.to_dict())
    probe = rng.normal(size=(10, 4))
    assert np.abs(restored.transform(probe) - pca.transform(probe)).max() \
        <= 1e-15
