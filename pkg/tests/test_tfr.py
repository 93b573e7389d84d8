import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tauop.grid import CSignal, Grid1D, PhaseGrid, gaussian_signal, hermite_signal, inner_product, make_dual_grid
from tauop.tfr import (
    J,
    TFShift,
    a_tau_operator,
    matrix_A_tau,
    matrix_B_tau,
    stft,
    stft2d_at,
    stft2d_blocks,
    stft_at,
    stft_of_wigner_closed,
    stft_of_wigner_symplectic,
    tau_wigner,
    tf_shift,
    wigner_via_stft,
)
from tauop.gaussians import Phi, tau_wigner_gaussian_closed
from tauop.grid import CField2D, fourier_transform


def test_tf_shift_examples(grid, phi):
    same = tf_shift(phi, TFShift(0, 0))
    assert np.array_equal(same.samples, phi.samples)
    moved = tf_shift(phi, TFShift(1, 0))
    assert np.max(np.abs(moved.samples - np.exp(-np.pi * (grid.points - 1) ** 2))) < 1e-15


def test_tf_shift_fourier_commutation(grid):
    a, x0 = 1.3, 0.2
    f = gaussian_signal(grid, a=a, x0=x0)
    fhat = lambda xi: a**-0.5 * np.exp(-np.pi * xi**2 / a - 2j * np.pi * x0 * xi)
    x, w = 0.75, -0.5
    lhs = fourier_transform(tf_shift(f, TFShift(x, w)))
    xi = lhs.grid.points
    # F pi(x, w) f = e^{+2 pi i x w} pi(w, -x) F f
    rhs = np.exp(2j * np.pi * x * w) * np.exp(-2j * np.pi * x * xi) * fhat(xi - w)
    assert np.max(np.abs(lhs.samples - rhs)) < 1e-10


def test_stft_gaussian_origin_and_closed_form(grid, phi, rng):
    V = stft(phi, phi)
    i0 = grid.n_samples // 2
    assert V.values[i0, i0] == pytest.approx(2**-0.5, abs=1e-13)
    x, w = rng.uniform(-2, 2, (2, 25))
    exact = 2**-0.5 * np.exp(-np.pi * (x**2 + w**2) / 2 - 1j * np.pi * x * w)
    assert np.max(np.abs(stft_at(phi, phi, x, w) - exact)) < 1e-13


def test_stft_rejects_zero_window(grid, phi):
    with pytest.raises(ValueError):
        stft(phi, CSignal(grid, np.zeros(grid.n_samples)))


def test_stft_of_tf_shifts(test_signals):
    f, g = test_signals[1], test_signals[3]
    u, om = 0.5, 0.25
    V = stft(tf_shift(f, TFShift(u, om)), tf_shift(g, TFShift(u, om)))
    base = stft(f, g)
    X, Xi = base.phase_grid.mesh()
    assert np.max(np.abs(V.values - np.exp(2j * np.pi * (om * X - Xi * u)) * base.values)) < 1e-10


def test_orthogonality_relations(test_signals):
    f1, g1, f2, g2 = test_signals[0], test_signals[2], test_signals[3], test_signals[1]
    lhs = stft(f1, g1).inner(stft(f2, g2))
    rhs = inner_product(f1, f2) * np.conj(inner_product(g1, g2))
    assert abs(lhs - rhs) < 1e-12


@pytest.mark.parametrize("tau", [0.0, 0.25, 0.5, 0.75, 1.0])
def test_wigner_of_gaussian_matches_closed_form(grid, phi, tau):
    W = tau_wigner(phi, phi, tau)
    X, Xi = W.phase_grid.mesh()
    assert np.max(np.abs(W.values - tau_wigner_gaussian_closed(tau, X, Xi))) < 1e-8


def test_wigner_half_at_origin(grid, phi):
    W = tau_wigner(phi, phi, 0.5)
    assert W.values[128, 128] == pytest.approx(np.sqrt(2), abs=1e-13)


def test_wigner_rejects_bad_tau(phi):
    for tau in (-0.1, 1.1):
        with pytest.raises(ValueError):
            tau_wigner(phi, phi, tau)


@pytest.mark.parametrize("tau", [0.0, 0.3, 0.5, 1.0])
def test_moyal(test_signals, tau):
    f1, g1, f2, g2 = test_signals[1], test_signals[3], test_signals[2], test_signals[4]
    lhs = tau_wigner(f1, g1, tau).inner(tau_wigner(f2, g2, tau))
    rhs = inner_product(f1, f2) * np.conj(inner_product(g1, g2))
    assert abs(lhs - rhs) < 1e-10


def test_moyal_norm(phi):
    for tau in (0.0, 0.4, 1.0):
        assert tau_wigner(phi, phi, tau).l2_norm() ** 2 == pytest.approx(phi.norm() ** 4, rel=1e-12)


@pytest.mark.parametrize("tau", [0.0, 0.2, 0.5, 0.9, 1.0])
def test_conjugation_symmetry(test_signals, tau):
    f, g = test_signals[1], test_signals[3]
    a = tau_wigner(f, g, 1 - tau).values
    b = tau_wigner(g, f, tau).values
    assert np.max(np.abs(a - np.conj(b))) < 1e-12


def test_wigner_sampled_signals_use_interpolation(grid):
    f = gaussian_signal(grid, 1.5, 0.5, 0.25)
    fs = CSignal(grid, f.samples)
    a = tau_wigner(f, f, 0.3).values
    b = tau_wigner(fs, fs, 0.3).values
    assert np.max(np.abs(a - b)) < 1e-10


def test_a_tau_examples(grid, test_signals):
    f = test_signals[1]
    t = grid.points
    assert np.max(np.abs(a_tau_operator(f, 0.5).samples - f(-t))) < 1e-15
    assert np.max(np.abs(a_tau_operator(a_tau_operator(f, 0.5), 0.5).samples - f.samples)) < 1e-15
    assert np.max(np.abs(a_tau_operator(f, 1 / 3).samples - f(-2 * t))) < 1e-15
    for tau in (0.0, 1.0):
        with pytest.raises(ValueError):
            a_tau_operator(f, tau)


def test_wigner_via_stft(grid, test_signals, rng):
    phi = test_signals[0]
    assert wigner_via_stft(phi, phi, 0.5, 0.0, 0.0) == pytest.approx(np.sqrt(2), abs=1e-12)
    W = tau_wigner(phi, phi, 0.5)
    assert abs(wigner_via_stft(phi, phi, 0.5, 0.0, 0.0) - W.values[128, 128]) < 1e-8
    f, g = test_signals[1], test_signals[3]
    pg = PhaseGrid.dual(grid)
    Wfg = tau_wigner(f, g, 0.3, pg)
    i, j = rng.integers(100, 156, (2, 25))
    via = wigner_via_stft(f, g, 0.3, grid.points[i], pg.xi_grid.points[j])
    assert np.max(np.abs(via - Wfg.values[i, j])) < 1e-6


def test_matrix_lemma():
    assert np.array_equal(matrix_A_tau(0.5), J)
    for tau in np.linspace(0.1, 0.9, 9):
        A, A1, B = matrix_A_tau(tau), matrix_A_tau(1 - tau), matrix_B_tau(tau)
        assert np.linalg.det(A) == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(A.T @ J @ A, J, atol=1e-12)
        assert np.allclose(A.T, -A1, atol=1e-15)
        assert np.allclose(np.linalg.inv(A), -A, atol=1e-12)
        assert np.allclose(A1 @ A, np.eye(2) - B, atol=1e-12)
        r = np.sqrt(tau * (1 - tau))
        assert np.allclose(r * (A + A1), J, atol=1e-12)
        assert np.allclose(r * B @ A, J, atol=1e-12)
    for tau in (0.0, 1.0):
        with pytest.raises(ValueError):
            matrix_A_tau(tau)


@pytest.mark.parametrize("tau", [0.0, 0.4, 1.0])
def test_stft_of_wigner_factorization(grid, tau, rng):
    f = gaussian_signal(grid, 1.0, 0.5, 0.25)
    g = gaussian_signal(grid, 1.5, -0.25, -0.5)
    p1, p2 = gaussian_signal(grid), gaussian_signal(grid, 0.75)
    pg = PhaseGrid.dual(grid)
    F = tau_wigner(g, f, tau, pg)
    win = tau_wigner(p1, p2, tau, pg)
    z = rng.integers(-20, 21, (10, 2)) * grid.step
    s = rng.uniform(-1.5, 1.5, (10, 2))
    direct = stft2d_at(F, win, z, s)
    closed = stft_of_wigner_closed(f, g, p1, p2, tau, (z[:, 0], z[:, 1]), (s[:, 0], s[:, 1]))
    assert np.max(np.abs(direct - closed)) / np.max(np.abs(direct)) < 1e-5


def test_factorization_at_zero_zeta(test_signals, rng):
    f, g, p1, p2 = test_signals[1], test_signals[2], test_signals[0], test_signals[3]
    z = rng.uniform(-1, 1, (2, 5))
    val = stft_of_wigner_closed(f, g, p1, p2, 0.3, z, (np.zeros(5), np.zeros(5)))
    ref = stft_at(g, p1, z[0], z[1]) * np.conj(stft_at(f, p2, z[0], z[1]))
    assert np.max(np.abs(val - ref)) < 1e-15


@settings(max_examples=20, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_symplectic_form_equivalence(tau, z1, z2, s1, s2):
    g = Grid1D.from_length(16, 128)
    f, h = gaussian_signal(g, 1.2, 0.3), hermite_signal(g, 1)
    p = gaussian_signal(g)
    a = stft_of_wigner_closed(f, h, p, p, tau, (z1, z2), (s1, s2))
    b = stft_of_wigner_symplectic(f, h, p, p, tau, (z1, z2), (s1, s2))
    assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


def test_stft2d_blocks_match_pointwise(small_grid):
    pg = PhaseGrid.dual(Grid1D.from_length(8, 32))
    X, Xi = pg.mesh()
    F = CField2D(pg, Phi(X - 0.3, Xi + 0.2))
    z_pg = PhaseGrid(Grid1D.from_length(8, 8), Grid1D.from_length(8, 8))
    d1, d2 = make_dual_grid(pg.x_grid).points, make_dual_grid(pg.xi_grid).points
    for i, block in stft2d_blocks(F, Phi, z_pg, batch=3):
        if i != 5:
            continue
        zs = [(z_pg.x_grid.points[i], z_pg.xi_grid.points[2])] * 2
        ss = [(d1[10], d2[20]), (d1[0], d2[31])]
        ref = stft2d_at(F, Phi, zs, ss)
        assert np.allclose([block[2, 10, 20], block[2, 0, 31]], ref, atol=1e-14)


def test_sampled_window_requires_alignment(grid, phi):
    pg = PhaseGrid.dual(grid)
    W = tau_wigner(phi, phi, 0.5, pg)
    with pytest.raises(ValueError):
        stft2d_at(W, W, [(0.01, 0.0)], [(0.0, 0.0)])
