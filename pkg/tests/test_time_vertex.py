import numpy as np
import pytest

from dgw.errors import ParameterError
from dgw.time_vertex import (ijft, jft, joint_laplacian_apply, ring_eigenvalues,
                             ring_laplacian_apply, ring_laplacian_matrix)

from conftest import complete_graph, path_graph, rgg_graph


def test_ring_laplacian_constant_is_zero():
    np.testing.assert_array_equal(ring_laplacian_apply(np.full((3, 7), 2.5)), 0.0)


def test_ring_laplacian_cosine_eigenvector():
    T = 16
    t = np.arange(T)
    row = np.cos(2 * np.pi * t / T)
    out = ring_laplacian_apply(row[None, :])[0]
    np.testing.assert_allclose(out, 2 * (np.cos(2 * np.pi / T) - 1) * row, atol=1e-14)


def test_ring_laplacian_t3_stencil():
    np.testing.assert_array_equal(ring_laplacian_apply([[1.0, 0.0, 0.0]]), [[-2.0, 1.0, 1.0]])


def test_ring_laplacian_needs_three_steps():
    with pytest.raises(ParameterError):
        ring_laplacian_apply(np.ones((2, 2)))


def test_ring_laplacian_matches_circulant(rng):
    x = rng.standard_normal((5, 11))
    np.testing.assert_allclose(ring_laplacian_apply(x), x @ ring_laplacian_matrix(11), atol=1e-12)


def test_ring_eigenvalues():
    for T in (1, 2, 5, 64):
        assert ring_eigenvalues(T)[0] == 0.0
    np.testing.assert_allclose(ring_eigenvalues(4)[[1, 2]], [-2.0, -4.0], atol=1e-15)
    # stencil cross-check: (1,-1,1,-1) is an eigenvector with eigenvalue -4
    alt = np.array([[1.0, -1.0, 1.0, -1.0]])
    np.testing.assert_allclose(ring_laplacian_apply(alt), -4.0 * alt)
    cos_row = np.cos(np.pi * np.arange(4) / 2)[None, :]
    np.testing.assert_allclose(ring_laplacian_apply(cos_row), -2.0 * cos_row, atol=1e-15)


def test_ring_eigenvalues_match_circulant_spectrum():
    T = 9
    np.testing.assert_allclose(np.sort(ring_eigenvalues(T)),
                               np.linalg.eigvalsh(ring_laplacian_matrix(T)), atol=1e-12)


def test_joint_laplacian(rng):
    g = complete_graph(3)
    assert np.all(joint_laplacian_apply(np.zeros((3, 3)), g) == 0)
    np.testing.assert_allclose(joint_laplacian_apply(np.full((3, 5), 4.0), g), 0.0, atol=1e-14)
    x = rng.standard_normal((3, 3))
    ref = g.laplacian @ x + x @ ring_laplacian_matrix(3)
    np.testing.assert_allclose(joint_laplacian_apply(x, g), ref, atol=1e-14)
    with pytest.raises(ParameterError):
        joint_laplacian_apply(np.ones((4, 3)), g)


def test_jft_constant_signal_concentrates_at_origin():
    g = complete_graph(4)
    b = g.basis
    x = np.outer(b.eigenvectors[:, 0], np.ones(6))
    xh = jft(x, b)
    mask = np.ones_like(xh, dtype=bool)
    mask[0, 0] = False
    assert np.max(np.abs(xh[mask])) < 1e-12
    assert abs(xh[0, 0]) == pytest.approx(np.sqrt(6))


def test_jft_delta_on_k2():
    b = path_graph(2).basis
    x = np.zeros((2, 2))
    x[0, 0] = 1.0
    np.testing.assert_allclose(np.abs(jft(x, b)), 0.5, atol=1e-15)


def test_jft_parseval_and_roundtrip(rng):
    b = rgg_graph(12, seed=1).basis
    for _ in range(10):
        x = rng.standard_normal((12, 20))
        xh = jft(x, b)
        assert abs(np.linalg.norm(xh) - np.linalg.norm(x)) < 1e-10
        np.testing.assert_allclose(ijft(xh, b), x, atol=1e-10)


def test_ijft_zero_and_single_entry():
    b = rgg_graph(7, seed=2).basis
    T = 10
    assert np.all(ijft(np.zeros((7, T), complex), b) == 0)
    ell, k = 3, 2
    s = np.zeros((7, T), complex)
    s[ell, k] = 1.0
    x = ijft(s, b, real=False).real
    t = np.arange(T)
    expected = np.outer(b.eigenvectors[:, ell], np.cos(2 * np.pi * k * t / T)) / np.sqrt(T)
    np.testing.assert_allclose(x, expected, atol=1e-14)
    with pytest.raises(ParameterError):
        ijft(s, b)


def test_jft_diagonalizes_joint_laplacian(rng):
    g = rgg_graph(15, seed=3)
    b = g.basis
    T = 24
    x = rng.standard_normal((15, T))
    lhs = jft(joint_laplacian_apply(x, g), b)
    rhs = (b.eigenvalues[:, None] + ring_eigenvalues(T)[None, :]) * jft(x, b)
    np.testing.assert_allclose(lhs, rhs, atol=1e-8)


def test_jft_dimension_mismatch():
    b = path_graph(2).basis
    with pytest.raises(ParameterError):
        jft(np.ones((3, 4)), b)
