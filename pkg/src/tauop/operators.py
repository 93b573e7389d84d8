"""Dense discretization of tau-pseudodifferential operators.

    Op_tau(a) f(x) = int int exp(2 pi i (x - y) xi) a((1 - tau) x + tau y, xi) f(y) dy dxi

is represented by the kernel ``k(u, t) = int a(u, xi) exp(2 pi i t xi) dxi``
evaluated at ``u = (1 - tau) x_m + tau y_n`` and ``t = x_m - y_n``.  The
matrix acts by ``(K f)_m = h * sum_n K[m, n] f_n``.

A sum over the dual lattice is L-periodic in ``t``, so the kernel is only
meaningful for ``|t| <= L/2``: entries with ``|m - n| > N/2`` are zero and the
two boundary diagonals ``|m - n| = N/2`` carry half weight.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .grid import (
    CField2D,
    CSignal,
    Grid1D,
    PhaseGrid,
    fourier_sum,
    fourier_transform,
    gaussian_signal,
    inner_product,
    make_dual_grid,
)
from .spaces import Weight, modulation_norm
from .tfr import TFShift, tau_wigner, tf_shift

__all__ = [
    "Symbol",
    "OperatorMatrix",
    "ConvergenceWarning",
    "build_kernel",
    "op_kohn_nirenberg",
    "op_weyl",
    "weak_pairing_residual",
    "convert_symbol",
    "adjoint_residual",
    "l2_operator_norm",
    "modulation_operator_norm_lower",
    "probe_family",
]


class ConvergenceWarning(RuntimeWarning):
    pass


@dataclass(frozen=True, eq=False)
class Symbol:
    """A symbol given by a vectorized evaluator ``func(x, xi)`` or by samples."""

    func: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = field(default=None, repr=False)
    samples: Optional[CField2D] = field(default=None, repr=False)
    label: str = ""

    def __post_init__(self):
        if self.func is None and self.samples is None:
            raise ValueError("a symbol needs an evaluator or samples")

    @classmethod
    def constant(cls, c: complex = 1.0, label: str = "const"):
        return cls(lambda x, xi: np.full(np.broadcast(x, xi).shape, c, dtype=complex), label=label)

    def __call__(self, x, xi):
        if self.func is None:
            raise ValueError("sampled symbol has no off-grid evaluator")
        return np.asarray(self.func(np.asarray(x, float), np.asarray(xi, float)), dtype=complex) * np.ones(
            np.broadcast(x, xi).shape
        )

    def sample(self, pg: PhaseGrid) -> CField2D:
        if self.samples is not None:
            if self.samples.phase_grid.x_grid.same_as(pg.x_grid) and self.samples.phase_grid.xi_grid.same_as(
                pg.xi_grid
            ):
                return self.samples
            if self.func is None:
                raise ValueError("symbol grid incompatible with the requested phase grid")
        X, Xi = pg.mesh()
        return CField2D(pg, self(X, Xi))


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    grid: Grid1D
    tau: float
    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=complex)
        n = self.grid.n_samples
        if e.shape != (n, n):
            raise ValueError("entries must be N x N")
        if not np.all(np.isfinite(e)):
            raise ValueError("non-finite kernel entries")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def quad_weight(self) -> float:
        return self.grid.step

    def matrix(self) -> np.ndarray:
        """The matrix acting on sample vectors (entries times the quadrature weight)."""
        return self.entries * self.quad_weight

    def apply(self, f: CSignal) -> CSignal:
        if not f.grid.same_as(self.grid):
            raise ValueError("signal grid does not match operator grid")
        return CSignal(self.grid, self.matrix() @ f.samples)

    def scaled(self, c: complex) -> "OperatorMatrix":
        return OperatorMatrix(self.grid, self.tau, c * self.entries)


def _band_mask(n: int) -> np.ndarray:
    d = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    return np.where(d < n // 2, 1.0, np.where(d == n // 2, 0.5, 0.0))


def _kernel_quadrature(a: Symbol, tau: float, grid: Grid1D, chunk: int = 16) -> np.ndarray:
    x = grid.points
    dual = make_dual_grid(grid)
    xi, eta = dual.points, dual.step
    ex = np.exp(2j * np.pi * np.outer(x, xi))
    ey = np.conj(ex)
    if tau == 0:
        return ((a(x[:, None], xi[None, :]) * ex) @ ey.T) * eta
    if tau == 1:
        return (ex @ (a(x[:, None], xi[None, :]) * ey).T) * eta
    n = x.size
    out = np.empty((n, n), dtype=complex)
    for s in range(0, n, chunk):
        xm = x[s : s + chunk]
        u = (1 - tau) * xm[:, None] + tau * x[None, :]
        vals = a(u[:, :, None], xi[None, None, :])
        out[s : s + chunk] = np.einsum("mnk,mk,nk->mn", vals, ex[s : s + chunk], ey, optimize=True) * eta
    return out


def _kernel_table(field_: CField2D, tau: float, grid: Grid1D) -> np.ndarray:
    n = grid.n_samples
    tgrid = grid.centered()
    # T[j, l] = k(x_j, t_l), periodic in t with period L
    T = fourier_sum(field_.values, field_.phase_grid.xi_grid, tgrid, +1, axis=1)
    delta = np.arange(-(n - 1), n)
    cols = T[:, (delta + n // 2) % n]
    if tau != 0:
        # fractional shift u -> u - tau * delta * h by trigonometric interpolation
        nu_grid = make_dual_grid(grid)
        spec = fourier_sum(cols, grid, nu_grid, -1, axis=0)
        shift = np.exp(-2j * np.pi * np.outer(nu_grid.points, tau * delta * grid.step))
        cols = fourier_sum(spec * shift, nu_grid, grid, +1, axis=0)
    m = np.arange(n)[:, None]
    nn = np.arange(n)[None, :]
    return cols[np.broadcast_to(m, (n, n)), (m - nn) + (n - 1)]


def build_kernel(a: Symbol, tau: float, grid: Grid1D, method: Optional[str] = None) -> OperatorMatrix:
    """Discretize ``Op_tau(a)`` on ``grid``.

    ``method='quadrature'`` evaluates the symbol at every ``(u, xi)`` needed
    and sums over the dual lattice (requires an evaluator; at ``tau`` in
    {0, 1} this is exactly the Kohn-Nirenberg / anti-Kohn-Nirenberg formula).
    ``method='table'`` takes the partial inverse Fourier transform of the
    sampled symbol in ``xi`` and shifts each kernel diagonal to the required
    ``u`` by trigonometric interpolation.  Default: quadrature when an
    evaluator exists.
    """
    if not 0 <= tau <= 1:
        raise ValueError("tau must lie in [0, 1]")
    if method is None:
        method = "quadrature" if a.func is not None else "table"
    if method == "quadrature":
        if a.func is None:
            raise ValueError("quadrature needs a symbol evaluator")
        entries = _kernel_quadrature(a, tau, grid) * _band_mask(grid.n_samples)
    elif method == "table":
        pg = PhaseGrid.dual(grid)
        entries = _kernel_table(a.sample(pg), tau, grid) * _band_mask(grid.n_samples)
    else:
        raise ValueError(f"unknown method {method!r}")
    return OperatorMatrix(grid, float(tau), entries)


def op_kohn_nirenberg(a: Symbol, f: CSignal, points=None):
    """``int a(x, xi) f^(xi) exp(2 pi i x xi) dxi`` on the lattice of ``f`` or at ``points``."""
    fh = fourier_transform(f)
    xi, eta = fh.grid.points, fh.grid.step
    if points is None:
        x = f.grid.points
        if a.func is None:
            vals = a.sample(PhaseGrid(f.grid, fh.grid)).values
        else:
            vals = a(x[:, None], xi[None, :])
        return CSignal(f.grid, (vals * np.exp(2j * np.pi * np.outer(x, xi))) @ fh.samples * eta)
    x = np.asarray(points, float)
    flat = x.ravel()
    out = np.empty(flat.size, dtype=complex)
    rows = max(1, (1 << 20) // xi.size)
    for s in range(0, flat.size, rows):
        xs = flat[s : s + rows, None]
        out[s : s + rows] = (a(xs, xi[None, :]) * np.exp(2j * np.pi * xs * xi[None, :])) @ fh.samples * eta
    return out.reshape(x.shape)


def op_weyl(a: Symbol, f: CSignal) -> CSignal:
    return build_kernel(a, 0.5, f.grid).apply(f)


def weak_pairing_residual(a: Symbol, tau: float, f: CSignal, g: CSignal, K: Optional[OperatorMatrix] = None) -> float:
    """``|<Op_tau(a) f, g> - <a, W_tau(g, f)>| / (||f|| ||g||)``.

    The left side uses the kernel matrix, the right side phase-space quadrature.
    """
    K = build_kernel(a, tau, f.grid) if K is None else K
    lhs = inner_product(K.apply(f), g)
    pg = PhaseGrid.dual(f.grid)
    W = tau_wigner(g, f, tau, pg)
    rhs = a.sample(pg).inner(W)
    return abs(lhs - rhs) / (f.norm() * g.norm())


def convert_symbol(a: Symbol, tau1: float, tau2: float, pg: Optional[PhaseGrid] = None) -> Symbol:
    """Symbol ``a2`` with ``Op_tau2(a2) = Op_tau1(a)``.

    Multiplies the 2-D Fourier transform of the sampled symbol by the chirp
    ``exp(-2 pi i (tau2 - tau1) s1 s2)``.
    """
    if pg is None:
        if a.samples is None:
            raise ValueError("a phase grid is required for evaluator symbols")
        pg = a.samples.phase_grid
    F = a.sample(pg)
    if tau1 == tau2:
        return Symbol(samples=F, label=a.label)
    d1, d2 = make_dual_grid(pg.x_grid), make_dual_grid(pg.xi_grid)
    ah = fourier_sum(fourier_sum(F.values, pg.x_grid, d1, -1, axis=0), pg.xi_grid, d2, -1, axis=1)
    chirp = np.exp(-2j * np.pi * (tau2 - tau1) * np.outer(d1.points, d2.points))
    back = fourier_sum(fourier_sum(ah * chirp, d1, pg.x_grid, +1, axis=0), d2, pg.xi_grid, +1, axis=1)
    return Symbol(samples=CField2D(pg, back), label=f"{a.label}[{tau1}->{tau2}]")


def adjoint_residual(a: Symbol, grid: Grid1D) -> float:
    """``||K_1 - K_0^H||_F / ||K_0||_F`` for a real symbol."""
    vals = a.sample(PhaseGrid.dual(grid)).values
    if np.max(np.abs(vals.imag)) > 1e-14 * max(np.max(np.abs(vals)), 1e-300):
        raise ValueError("adjoint identity is implemented for real-valued symbols only")
    K0 = build_kernel(a, 0.0, grid).entries
    K1 = build_kernel(a, 1.0, grid).entries
    den = np.linalg.norm(K0)
    return float(np.linalg.norm(K1 - K0.conj().T) / den) if den else float(np.linalg.norm(K1))


def l2_operator_norm(K: OperatorMatrix, tol: float = 1e-10, max_iter: int = 500, seed: int = 0) -> float:
    """Largest singular value of the discretized operator by power iteration."""
    A = K.matrix()
    rng = np.random.Generator(np.random.Philox(seed))
    v = np.ones(A.shape[1], dtype=complex) + 0.1 * rng.standard_normal(A.shape[1])
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(max_iter):
        Av = A @ v
        w = A.conj().T @ Av
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0
        new = float(np.sqrt(nw))
        v = w / nw
        if sigma and abs(new - sigma) <= tol * new:
            return float(np.linalg.norm(A @ v))
        sigma = new
    warnings.warn(f"power iteration did not converge in {max_iter} steps", ConvergenceWarning)
    return float(np.linalg.norm(A @ v))


def probe_family(grid: Grid1D, extent: int = 2, n_random: int = 0, seed: int = 0, spacing: float = 1.0):
    """Time-frequency shifted Gaussians on a square lattice, then random smooth signals.

    Each random probe is a sum of eight randomly shifted and modulated Gaussians.

    Random probes come from a Philox stream keyed by ``seed`` and are drawn in
    order, so the first ``k`` random probes do not depend on ``n_random``.
    """
    phi = gaussian_signal(grid)
    out = []
    for j in range(-extent, extent + 1):
        for k in range(-extent, extent + 1):
            out.append(tf_shift(phi, TFShift(j * spacing, k * spacing)))
    rng = np.random.Generator(np.random.Philox(seed))
    x = grid.points
    for _ in range(n_random):
        c = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        w = rng.uniform(-2.0, 2.0, 8)
        x0 = rng.uniform(-2.0, 2.0, 8)
        sig = sum(ci * np.exp(2j * np.pi * wi * x - np.pi * (x - xi0) ** 2) for ci, wi, xi0 in zip(c, w, x0))
        out.append(CSignal(grid, sig))
    return out


def modulation_operator_norm_lower(
    a: Symbol,
    tau: float,
    r1: float = 2.0,
    r2: float = 2.0,
    m: Weight = Weight(),
    n_probes: int = 0,
    grid: Optional[Grid1D] = None,
    K: Optional[OperatorMatrix] = None,
    extent: int = 2,
    seed: int = 0,
) -> float:
    """``max ||Op_tau(a) f||_{M^{r1,r2}_m} / ||f||_{M^{r1,r2}_m}`` over a probe family."""
    if K is None:
        if grid is None:
            raise ValueError("need a grid or a prebuilt operator")
        K = build_kernel(a, tau, grid)
    grid = K.grid
    window = gaussian_signal(grid)
    best = 0.0
    for f in probe_family(grid, extent, n_probes, seed):
        den = modulation_norm(f, window, r1, r2, m)
        if not den > 0:
            continue
        best = max(best, modulation_norm(K.apply(f), window, r1, r2, m) / den)
    return best
