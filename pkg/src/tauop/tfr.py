"""Time-frequency representations: STFT, tau-Wigner distributions, A_tau.

The STFT convention is ``V_g f(x, w) = int f(t) conj(g(t - x)) exp(-2 pi i t w) dt``
and the cross tau-Wigner distribution is

    W_tau(f, g)(x, xi) = int exp(-2 pi i t xi) f(x + tau t) conj(g(x - (1 - tau) t)) dt.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .grid import (
    CField2D,
    CSignal,
    Grid1D,
    PhaseGrid,
    evaluate,
    fourier_at,
    fourier_sum,
    make_dual_grid,
)

__all__ = [
    "TFShift",
    "J",
    "tf_shift",
    "stft",
    "stft_at",
    "tau_wigner",
    "a_tau_operator",
    "wigner_via_stft",
    "stft_of_wigner_closed",
    "stft_of_wigner_symplectic",
    "matrix_A_tau",
    "matrix_B_tau",
    "stft2d_at",
    "stft2d_blocks",
]

J = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class TFShift:
    x: float
    omega: float


def _check_tau(tau, open_interval=False):
    lo_ok = tau > 0 if open_interval else tau >= 0
    hi_ok = tau < 1 if open_interval else tau <= 1
    if not (lo_ok and hi_ok):
        rng = "(0, 1)" if open_interval else "[0, 1]"
        raise ValueError(f"tau must lie in {rng}, got {tau}")


def tf_shift(f: CSignal, z: TFShift) -> CSignal:
    """``pi(z) f(t) = exp(2 pi i omega t) f(t - x)``."""
    x, w = float(z.x), float(z.omega)

    def ev(t):
        t = np.asarray(t, dtype=float)
        return np.exp(2j * np.pi * w * t) * evaluate(f, t - x)

    return CSignal.from_function(f.grid, ev)


def stft(f: CSignal, g: CSignal, pg: PhaseGrid | None = None) -> CField2D:
    """Short-time Fourier transform sampled on ``pg`` (default: lattice x dual).

    For every window position the product ``f(t) conj(g(t - x))`` is formed on
    the lattice of ``f`` and transformed along ``t`` by :func:`fourier_sum`.
    """
    if not f.grid.same_as(g.grid):
        raise ValueError("f and g must share a grid")
    if not np.any(g.samples):
        raise ValueError("zero window")
    pg = PhaseGrid.dual(f.grid) if pg is None else pg
    t = f.grid.points
    x = pg.x_grid.points
    win = evaluate(g, t[None, :] - x[:, None])
    prod = f.samples[None, :] * np.conj(win)
    return CField2D(pg, fourier_sum(prod, f.grid, pg.xi_grid, -1, axis=1))


def stft_at(f: CSignal, g: CSignal, x, omega) -> np.ndarray:
    """STFT at arbitrary points by direct quadrature over the lattice of ``f``."""
    x, omega = np.broadcast_arrays(np.asarray(x, float), np.asarray(omega, float))
    t = f.grid.points
    xf, wf = x.ravel(), omega.ravel()
    out = np.empty(xf.size, dtype=complex)
    rows = max(1, (1 << 20) // t.size)
    for s in range(0, xf.size, rows):
        xs, ws = xf[s : s + rows, None], wf[s : s + rows, None]
        integrand = f.samples[None, :] * np.conj(evaluate(g, t[None, :] - xs))
        out[s : s + rows] = np.sum(integrand * np.exp(-2j * np.pi * t[None, :] * ws), axis=1)
    return (out * f.grid.step).reshape(x.shape)


def tau_wigner(f: CSignal, g: CSignal, tau: float, pg: PhaseGrid | None = None) -> CField2D:
    """Cross tau-Wigner distribution ``W_tau(f, g)`` on ``pg``.

    For ``0 < tau < 1`` the t-integral is a rectangle rule on the centered
    lattice of ``f`` (off-lattice arguments go through the signals' evaluators
    or trigonometric interpolation).  The endpoints use the Rihaczek product
    forms ``exp(-2 pi i x xi) f(x) conj(g^(xi))`` and
    ``exp(2 pi i x xi) conj(g(x)) f^(xi)``.
    """
    _check_tau(tau)
    if not f.grid.same_as(g.grid):
        raise ValueError("f and g must share a grid")
    pg = PhaseGrid.dual(f.grid) if pg is None else pg
    x = pg.x_grid.points
    xi = pg.xi_grid.points
    chirp = np.exp(2j * np.pi * np.outer(x, xi))
    if tau == 0:
        vals = np.conj(chirp) * evaluate(f, x)[:, None] * np.conj(_fourier_on(g, pg.xi_grid))[None, :]
        return CField2D(pg, vals)
    if tau == 1:
        vals = chirp * np.conj(evaluate(g, x))[:, None] * _fourier_on(f, pg.xi_grid)[None, :]
        return CField2D(pg, vals)
    tgrid = f.grid.centered()
    t = tgrid.points
    prod = evaluate(f, x[:, None] + tau * t[None, :]) * np.conj(
        evaluate(g, x[:, None] - (1 - tau) * t[None, :])
    )
    return CField2D(pg, fourier_sum(prod, tgrid, pg.xi_grid, -1, axis=1))


def _fourier_on(f: CSignal, xi_grid: Grid1D) -> np.ndarray:
    if xi_grid.same_as(make_dual_grid(f.grid)):
        return fourier_sum(f.samples, f.grid, xi_grid, -1)
    return fourier_at(f, xi_grid.points)


def a_tau_operator(f: CSignal, tau: float) -> CSignal:
    """``A_tau f(t) = f(-((1 - tau)/tau) t)``."""
    _check_tau(tau, open_interval=True)
    r = (1 - tau) / tau
    return CSignal.from_function(f.grid, lambda t: evaluate(f, -r * np.asarray(t, float)))


def wigner_via_stft(f: CSignal, g: CSignal, tau: float, x, xi) -> np.ndarray:
    """``W_tau(f, g)`` evaluated as ``tau^-1 e^{2 pi i x xi / tau} V_{A_tau g} f(x/(1-tau), xi/tau)``."""
    _check_tau(tau, open_interval=True)
    x, xi = np.asarray(x, float), np.asarray(xi, float)
    v = stft_at(f, a_tau_operator(g, tau), x / (1 - tau), xi / tau)
    return np.exp(2j * np.pi * x * xi / tau) * v / tau


def stft_of_wigner_closed(f, g, phi1, phi2, tau, z, zeta) -> np.ndarray:
    """Product formula for ``V_{W_tau(phi1, phi2)} W_tau(g, f)(z, zeta)``.

    ``z`` and ``zeta`` are pairs (arrays broadcast together).
    """
    _check_tau(tau)
    z1, z2 = (np.asarray(c, float) for c in z)
    s1, s2 = (np.asarray(c, float) for c in zeta)
    phase = np.exp(-2j * np.pi * z2 * s2)
    if tau == 0:
        vg = stft_at(g, phi1, z1, z2 + s1)
        vf = stft_at(f, phi2, z1 + s2, z2)
    elif tau == 1:
        vg = stft_at(g, phi1, z1 - s2, z2)
        vf = stft_at(f, phi2, z1, z2 - s1)
    else:
        vg = stft_at(g, phi1, z1 - tau * s2, z2 + (1 - tau) * s1)
        vf = stft_at(f, phi2, z1 + (1 - tau) * s2, z2 - tau * s1)
    return phase * vg * np.conj(vf)


def stft_of_wigner_symplectic(f, g, phi1, phi2, tau, z, zeta) -> np.ndarray:
    """Same quantity as :func:`stft_of_wigner_closed`, via ``A_tau`` matrix arithmetic."""
    _check_tau(tau, open_interval=True)
    zv = np.stack(np.broadcast_arrays(*(np.asarray(c, float) for c in z)))
    sv = np.stack(np.broadcast_arrays(*(np.asarray(c, float) for c in zeta)))
    A = matrix_A_tau(tau)
    c = np.sqrt(tau * (1 - tau))
    pg_ = zv + c * np.tensordot(A.T, sv, axes=1)
    pf_ = zv + c * np.tensordot(A, sv, axes=1)
    phase = np.exp(-2j * np.pi * zv[1] * sv[1])
    return phase * stft_at(g, phi1, pg_[0], pg_[1]) * np.conj(stft_at(f, phi2, pf_[0], pf_[1]))


def matrix_A_tau(tau: float) -> np.ndarray:
    _check_tau(tau, open_interval=True)
    return np.array([[0.0, np.sqrt((1 - tau) / tau)], [-np.sqrt(tau / (1 - tau)), 0.0]])


def matrix_B_tau(tau: float) -> np.ndarray:
    _check_tau(tau, open_interval=True)
    return np.diag([1.0 / (1 - tau), 1.0 / tau])


# --- STFT of fields on the phase plane ------------------------------------

Window2D = Union[CField2D, Callable[[np.ndarray, np.ndarray], np.ndarray]]


def _window_values(window: Window2D, F: CField2D, z1: float, z2: float) -> np.ndarray:
    """Samples of ``window(y - z)`` on the grid of ``F``."""
    pg = F.phase_grid
    if callable(window):
        X, Xi = pg.mesh()
        return np.asarray(window(X - z1, Xi - z2), dtype=complex)
    wpg = window.phase_grid
    out = np.zeros(pg.shape, dtype=complex)
    i0 = z1 / wpg.x_grid.step
    j0 = z2 / wpg.xi_grid.step
    if abs(i0 - round(i0)) > 1e-9 or abs(j0 - round(j0)) > 1e-9:
        raise ValueError("sampled windows require lattice-aligned shifts")
    di, dj = int(round(i0)), int(round(j0))
    n1, n2 = pg.shape
    src_i = np.arange(n1) - di
    src_j = np.arange(n2) - dj
    oi = (src_i >= 0) & (src_i < n1)
    oj = (src_j >= 0) & (src_j < n2)
    out[np.ix_(oi, oj)] = window.values[np.ix_(src_i[oi], src_j[oj])]
    return out


def stft2d_at(F: CField2D, window: Window2D, z, zeta) -> np.ndarray:
    """Direct 2-D quadrature of ``V_window F(z, zeta)`` at a list of points.

    ``z`` and ``zeta`` are sequences of pairs.  A sampled window must live on
    the same phase grid as ``F`` and ``z`` must be lattice-aligned.
    """
    pg = F.phase_grid
    X, Xi = pg.mesh()
    out = []
    for (z1, z2), (s1, s2) in zip(z, zeta):
        w = _window_values(window, F, z1, z2)
        e = np.exp(-2j * np.pi * (X * s1 + Xi * s2))
        out.append(np.sum(F.values * np.conj(w) * e) * pg.cell)
    return np.array(out)


def stft2d_blocks(F: CField2D, window: Callable, z_pg: PhaseGrid, batch: int = 64):
    """Yield ``(i, values)`` with ``values[j, :, :] = V_window F(z_i, z_j; zeta)``.

    ``zeta`` runs over the dual lattices of ``F.phase_grid`` (both axes);
    ``window`` is a callable ``(x, xi) -> values``.  One row of window
    positions at a time keeps memory at ``O(n_z * N^2)``.
    """
    pg = F.phase_grid
    X, Xi = pg.mesh()
    d1, d2 = make_dual_grid(pg.x_grid), make_dual_grid(pg.xi_grid)
    zs1, zs2 = z_pg.x_grid.points, z_pg.xi_grid.points
    for i, z1 in enumerate(zs1):
        rows = []
        for s in range(0, zs2.size, batch):
            zb = zs2[s : s + batch]
            w = np.asarray(window(X[None] - z1, Xi[None] - zb[:, None, None]), dtype=complex)
            prod = F.values[None] * np.conj(w)
            tmp = fourier_sum(prod, pg.x_grid, d1, -1, axis=1)
            rows.append(fourier_sum(tmp, pg.xi_grid, d2, -1, axis=2))
        yield i, np.concatenate(rows, axis=0)
