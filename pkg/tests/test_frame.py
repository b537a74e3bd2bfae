import numpy as np
import pytest

from dgw import build_frame, frame_bounds, scale_grid
from dgw.errors import FrameWarning, ParameterError, StabilityError
from dgw.kernels import KernelSpec, corollary_lower_bound, kernel_time_spectrum
from dgw.time_vertex import ijft, jft

from conftest import path_graph, rgg_graph, small_frame


def brute_analysis(frame, x):
    """Inner products against explicitly materialized periodic atoms."""
    S, n, T = frame.coefficient_shape
    c = np.empty((S, n, T))
    for s in range(S):
        for m in range(n):
            for tau in range(T):
                c[s, m, tau] = np.sum(frame.atom(m, tau, s, wrap=True) * x)
    return c


def test_scale_grid():
    np.testing.assert_allclose(scale_grid(10, 2.0), np.linspace(0.2, 2.0, 10))
    assert scale_grid(10, 2.0, lambda_max=4.0)[-1] == pytest.approx(3.99 / 4.0)
    np.testing.assert_allclose(scale_grid(3, 1.0, s_min=0.5), [0.5, 0.75, 1.0])
    with pytest.raises(ParameterError):
        scale_grid(0)


def test_default_configuration_ten_scales_up_to_two():
    g = path_graph(5, w=0.4)     # lambda_max < 2, so s = 2 is stable
    grid = scale_grid(10, 2.0, g.basis.lambda_max)
    assert grid.size == 10 and grid[0] > 0 and grid[-1] == pytest.approx(2.0)
    frame = build_frame(g.basis, 32, grid, beta=0.5)
    assert frame.n_scales == 10


def test_build_frame_errors():
    b = rgg_graph(8, seed=0).basis
    with pytest.raises(ParameterError):
        build_frame(b, 16, [], 1.0)
    with pytest.raises(StabilityError, match="scale #1"):
        build_frame(b, 16, [0.1, 4.0 / b.lambda_max], 1.0)
    with pytest.warns(FrameWarning, match="frame not guaranteed"):
        build_frame(b, 16, [0.1], 0.0)
    with pytest.warns(FrameWarning, match="wrap-around"):
        build_frame(b, 16, [0.1], 0.1)


def test_multipliers_equal_kernel_time_spectrum(frame_6x8):
    f = frame_6x8
    for si, s in enumerate(f.scales):
        for ell, lam in enumerate(f.basis.eigenvalues):
            expect = kernel_time_spectrum(KernelSpec("damped_wave", s, f.beta), lam, f.n_steps,
                                          normalized=False)
            np.testing.assert_allclose(f.multipliers[si, ell], expect, atol=1e-12)


def test_atom_at_onset_is_vertex_delta(frame_6x8):
    a = frame_6x8.atom(2, 3, 1)
    np.testing.assert_allclose(a[:, 3], np.eye(6)[2], atol=1e-12)
    assert np.all(a[:, :3] == 0)


def test_atom_k2_hand_value():
    g = path_graph(2)
    with pytest.warns(FrameWarning):
        f = build_frame(g.basis, 8, [1.0], beta=0.0)
    a = f.atom(0, 2, 0)
    assert a[0, 3] == pytest.approx(0.5, abs=1e-14)
    assert a[1, 3] == pytest.approx(0.5, abs=1e-14)


def test_atom_energy_decay_bound():
    g = rgg_graph(10, seed=3)
    f = build_frame(g.basis, 64, scale_grid(3, 2.0, g.basis.lambda_max), beta=0.2)
    a = f.atom(4, 5, 2)
    lag = np.arange(64) - 5
    bound = np.where(lag >= 0, np.exp(-0.2 * np.maximum(lag, 0)) * 10, 0.0)
    assert np.all(np.abs(a) <= bound[None, :] + 1e-12)


def test_atom_index_errors(frame_6x8):
    for args in ((6, 0, 0), (0, 8, 0), (0, 0, 3), (-1, 0, 0)):
        with pytest.raises(ParameterError):
            frame_6x8.atom(*args)


def test_analyze_matches_dense_brute_force(rng):
    f = small_frame(n=6, T=8, S=2, beta=1.0, seed=5)
    x = rng.standard_normal((6, 8))
    np.testing.assert_allclose(f.analyze(x), brute_analysis(f, x), atol=1e-8)


def test_analyze_zero(frame_6x8):
    assert np.all(frame_6x8.analyze(np.zeros((6, 8))) == 0)


def test_matched_filter_peak():
    g = rgg_graph(8, seed=7, k=3)
    f = build_frame(g.basis, 16, scale_grid(3, 2.0, g.basis.lambda_max), beta=0.8)
    m0, tau0, s0 = 5, 4, 1
    x = f.atom(m0, tau0, s0, wrap=True)
    c = brute_analysis(f, x)
    np.testing.assert_allclose(f.analyze(x), c, atol=1e-10)
    si, m, tau = np.unravel_index(np.argmax(np.abs(c)), c.shape)
    assert m == m0 and abs(tau - tau0) <= 1


def test_adjointness(frame_6x8, rng):
    for _ in range(5):
        x = rng.standard_normal((6, 8))
        c = rng.standard_normal(frame_6x8.coefficient_shape)
        lhs = np.sum(frame_6x8.analyze(x) * c)
        rhs = np.sum(x * frame_6x8.synthesize(c))
        assert lhs == pytest.approx(rhs, abs=1e-8)


def test_synthesize_delta_is_atom(frame_6x8):
    c = np.zeros(frame_6x8.coefficient_shape)
    c[2, 4, 6] = 1.0
    np.testing.assert_allclose(frame_6x8.synthesize(c), frame_6x8.atom(4, 6, 2, wrap=True),
                               atol=1e-12)
    c = np.zeros(frame_6x8.coefficient_shape)
    c[0, 1, 0] = 1.0
    np.testing.assert_allclose(frame_6x8.synthesize(c), frame_6x8.atom(1, 0, 0), atol=1e-12)


def test_gram_is_spectral_power(frame_6x8, rng):
    f = frame_6x8
    x = rng.standard_normal((6, 8))
    expect = ijft(f.power * jft(x, f.basis), f.basis)
    np.testing.assert_allclose(f.synthesize(f.analyze(x)), expect, atol=1e-10)
    np.testing.assert_allclose(f.gram_apply(x), expect, atol=1e-10)


def test_energy_identity(frame_6x8, rng):
    f = frame_6x8
    x = rng.standard_normal((6, 8))
    xh = jft(x, f.basis)
    spectral = sum(np.sum(np.abs(f.multipliers[s] * xh) ** 2) for s in range(f.n_scales))
    assert np.sum(f.analyze(x) ** 2) == pytest.approx(spectral, rel=1e-10)


def test_bounds_against_svd(frame_6x8):
    sv = np.linalg.svd(frame_6x8.to_dense(), compute_uv=False)
    b = frame_bounds(frame_6x8)
    assert b.A == pytest.approx(sv.min() ** 2, rel=1e-8)
    assert b.B == pytest.approx(sv.max() ** 2, rel=1e-8)


@pytest.mark.parametrize("beta", [0.1, 0.5, 1.0, 2.0])
def test_lower_bound_over_closed_form(beta):
    g = rgg_graph(12, seed=1)
    scales = scale_grid(4, 2.0, g.basis.lambda_max)
    T = 256
    omega = 2 * np.pi * np.arange(T) / T
    from dgw.kernels import closed_form_spectrum
    power = sum(np.abs(closed_form_spectrum(KernelSpec("damped_wave", s, beta),
                                            g.basis.eigenvalues[:, None], omega[None, :])) ** 2
                for s in scales)
    assert power.min() >= corollary_lower_bound(beta)


def test_frame_inequality(frame_6x8, rng):
    b = frame_6x8.bounds()
    for _ in range(100):
        x = rng.standard_normal((6, 8))
        e, n2 = np.sum(frame_6x8.analyze(x) ** 2), np.sum(x * x)
        slack = 1e-9 * b.B * n2
        assert b.A * n2 - slack <= e <= b.B * n2 + slack


def test_huge_damping_single_scale_is_near_tight():
    g = rgg_graph(10, seed=2)
    f = build_frame(g.basis, 16, [0.1], beta=30.0)
    b = f.bounds()
    assert b.B / b.A == pytest.approx(1.0, abs=1e-10)


def test_coefficient_shape_checked(frame_6x8):
    with pytest.raises(ParameterError):
        frame_6x8.synthesize(np.zeros((2, 6, 8)))
    with pytest.raises(ParameterError):
        frame_6x8.analyze(np.zeros((6, 9)))
