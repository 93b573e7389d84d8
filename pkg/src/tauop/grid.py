"""Sampling lattices, sampled signals and the centered Fourier transform.

All transforms use the normalization

    F f(xi) = int f(x) exp(-2 pi i x xi) dx,

discretized by the rectangle rule on a symmetric lattice ``x_n = (n - N/2 + s) h``
with ``h = L / N`` and ``s`` either 0 or 1/2 (the "shifted" lattice has no
sample at the origin).  The DFT needed for this is an ordinary FFT wrapped in a
pre-twiddle ``exp(-2 pi i n b / N)`` and a post-twiddle
``exp(-2 pi i a (k + b) / N)`` where ``a`` and ``b`` are the (fractional) index
offsets of the two lattices.  Every module goes through :func:`fourier_sum`.
"""
from __future__ import annotations

import contextlib
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.fft as sfft

__all__ = [
    "Grid1D",
    "PhaseGrid",
    "CSignal",
    "CField2D",
    "make_dual_grid",
    "inner_product",
    "fourier_transform",
    "inverse_fourier",
    "fourier_at",
    "fourier_sum",
    "resample",
    "evaluate",
    "gaussian_signal",
    "hermite_signal",
    "twiddle_fault",
]

# real part added to the twiddle exponent; nonzero only inside twiddle_fault()
_TWIDDLE_DEFECT = 0.0
_ON_GRID_TOL = 1e-9
_CHUNK = 1 << 21


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid1D:
    """Symmetric lattice covering ``[-half_width, half_width)``.

    ``offset`` is the fractional index shift (0 or 1/2).  With ``offset=0.5``
    the samples sit at half-steps and the origin is not a lattice point.
    """

    half_width: float
    n_samples: int
    offset: float = 0.0

    def __post_init__(self):
        if not _is_pow2(int(self.n_samples)):
            raise ValueError(f"n_samples must be a power of two, got {self.n_samples}")
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")
        if self.offset not in (0.0, 0.5):
            raise ValueError("offset must be 0 or 0.5")

    @classmethod
    def from_length(cls, length: float, n_samples: int, shifted: bool = False) -> "Grid1D":
        return cls(length / 2.0, int(n_samples), 0.5 if shifted else 0.0)

    @property
    def length(self) -> float:
        return 2.0 * self.half_width

    @property
    def step(self) -> float:
        return self.length / self.n_samples

    @property
    def index_origin(self) -> float:
        """Fractional index ``a`` with ``x_n = (n + a) * step``."""
        return -self.n_samples / 2 + self.offset

    @property
    def points(self) -> np.ndarray:
        return (np.arange(self.n_samples) + self.index_origin) * self.step

    def centered(self) -> "Grid1D":
        return Grid1D(self.half_width, self.n_samples, 0.0)

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x)
        lo = self.index_origin * self.step
        return (x >= lo - 0.5 * self.step) & (x < lo + (self.n_samples - 0.5) * self.step)

    def same_as(self, other: "Grid1D") -> bool:
        return (
            self.n_samples == other.n_samples
            and np.isclose(self.half_width, other.half_width, rtol=1e-13, atol=0)
            and self.offset == other.offset
        )


def make_dual_grid(g: Grid1D) -> Grid1D:
    """Frequency lattice with step ``1/(h N)``, same size, centered at 0."""
    return Grid1D(g.n_samples / (2.0 * g.length), g.n_samples, 0.0)


@dataclass(frozen=True)
class PhaseGrid:
    x_grid: Grid1D
    xi_grid: Grid1D

    @classmethod
    def dual(cls, g: Grid1D) -> "PhaseGrid":
        return cls(g, make_dual_grid(g))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.x_grid.n_samples, self.xi_grid.n_samples)

    @property
    def cell(self) -> float:
        return self.x_grid.step * self.xi_grid.step

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x_grid.points, self.xi_grid.points, indexing="ij")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CSignal:
    """Complex samples on a :class:`Grid1D`.

    ``evaluator`` (optional) evaluates the underlying function at arbitrary
    real points; when present it is used for every off-grid access.
    """

    grid: Grid1D
    samples: np.ndarray
    evaluator: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)

    def __post_init__(self):
        s = _frozen(self.samples)
        if s.shape != (self.grid.n_samples,):
            raise ValueError(f"expected {self.grid.n_samples} samples, got shape {s.shape}")
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_function(cls, grid: Grid1D, func: Callable[[np.ndarray], np.ndarray]) -> "CSignal":
        return cls(grid, func(grid.points), func)

    def __call__(self, x) -> np.ndarray:
        return evaluate(self, x)

    def norm(self) -> float:
        return float(np.sqrt(inner_product(self, self).real))

    def scaled(self, c: complex) -> "CSignal":
        ev = None if self.evaluator is None else (lambda t, e=self.evaluator: c * e(t))
        return CSignal(self.grid, c * self.samples, ev)


@dataclass(frozen=True, eq=False)
class CField2D:
    """Complex field sampled on a :class:`PhaseGrid` (axis 0 = x, axis 1 = xi)."""

    phase_grid: PhaseGrid
    values: np.ndarray

    def __post_init__(self):
        v = _frozen(self.values)
        if v.shape != self.phase_grid.shape:
            raise ValueError(f"values shape {v.shape} != grid shape {self.phase_grid.shape}")
        object.__setattr__(self, "values", v)

    def inner(self, other: "CField2D") -> complex:
        return complex(np.vdot(other.values, self.values) * self.phase_grid.cell)

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.phase_grid.cell))


def _check_same_grid(a: Grid1D, b: Grid1D):
    if not a.same_as(b):
        raise ValueError(f"grid mismatch: {a} vs {b}")


def inner_product(f: CSignal, g: CSignal) -> complex:
    """Riemann sum ``h * sum f conj(g)``; antilinear in ``g``."""
    _check_same_grid(f.grid, g.grid)
    return complex(np.vdot(g.samples, f.samples) * f.grid.step)


@contextlib.contextmanager
def twiddle_fault(defect: float):
    """Corrupt the FFT post-twiddle (test hook for mutation checks)."""
    global _TWIDDLE_DEFECT
    old = _TWIDDLE_DEFECT
    _TWIDDLE_DEFECT = float(defect)
    try:
        yield
    finally:
        _TWIDDLE_DEFECT = old


def fourier_sum(values, src: Grid1D, dst: Grid1D, sign: int = -1, axis: int = -1) -> np.ndarray:
    """``src.step * sum_n v_n exp(sign 2 pi i x_n w_k)`` along ``axis``.

    Uses the FFT when ``dst`` is reciprocal to ``src`` (``h_src h_dst N = 1``),
    otherwise a dense exponential sum.
    """
    v = np.moveaxis(np.asarray(values, dtype=complex), axis, -1)
    n = src.n_samples
    if v.shape[-1] != n:
        raise ValueError("values length does not match source grid")
    reciprocal = dst.n_samples == n and abs(src.step * dst.step * n - 1.0) < 1e-12
    if reciprocal:
        a = src.index_origin
        b = dst.index_origin
        idx = np.arange(n)
        pre = np.exp(sign * 2j * np.pi * idx * b / n)
        post = np.exp((sign * 2j * np.pi + _TWIDDLE_DEFECT) * a * (idx + b) / n)
        if sign < 0:
            out = sfft.fft(v * pre, axis=-1)
        else:
            out = sfft.ifft(v * pre, axis=-1) * n
        out = out * post * src.step
    else:
        kernel = np.exp(sign * 2j * np.pi * np.outer(src.points, dst.points))
        out = (v @ kernel) * src.step
    return np.moveaxis(out, -1, axis)


def fourier_transform(f: CSignal) -> CSignal:
    """Samples of ``F f`` on the dual lattice."""
    dual = make_dual_grid(f.grid)
    return CSignal(dual, fourier_sum(f.samples, f.grid, dual, -1))


def inverse_fourier(F: CSignal, grid: Optional[Grid1D] = None) -> CSignal:
    """Inverse of :func:`fourier_transform`.

    ``grid`` selects the target lattice (default: the centered dual of
    ``F.grid``); pass the original lattice to invert a transform of a signal
    that lived on a shifted grid.
    """
    target = make_dual_grid(F.grid) if grid is None else grid
    return CSignal(target, fourier_sum(F.samples, F.grid, target, +1))


def fourier_at(f: CSignal, xi) -> np.ndarray:
    """Direct quadrature of ``F f`` at arbitrary frequencies."""
    xi = np.asarray(xi, dtype=float)
    out = np.empty(xi.shape, dtype=complex)
    flat = xi.ravel()
    x = f.grid.points
    rows = max(1, _CHUNK // x.size)
    res = out.reshape(-1)
    for s in range(0, flat.size, rows):
        w = flat[s : s + rows]
        res[s : s + rows] = np.exp(-2j * np.pi * np.outer(w, x)) @ f.samples * f.grid.step
    return out


def _on_grid_indices(grid: Grid1D, x: np.ndarray):
    """Integer lattice indices for ``x`` if every point is a lattice point, else None."""
    pos = x / grid.step - grid.index_origin
    idx = np.rint(pos)
    if np.all(np.abs(pos - idx) < _ON_GRID_TOL):
        return idx.astype(np.int64)
    return None


def _trig_interp(f: CSignal, x: np.ndarray) -> np.ndarray:
    spec = fourier_sum(f.samples, f.grid, make_dual_grid(f.grid), -1)
    xi = make_dual_grid(f.grid).points
    eta = make_dual_grid(f.grid).step
    flat = x.ravel()
    out = np.empty(flat.size, dtype=complex)
    rows = max(1, _CHUNK // xi.size)
    for s in range(0, flat.size, rows):
        out[s : s + rows] = np.exp(2j * np.pi * np.outer(flat[s : s + rows], xi)) @ spec * eta
    return out.reshape(x.shape)


def resample(f: CSignal, points) -> tuple[np.ndarray, bool]:
    """Evaluate ``f`` at arbitrary points.

    Returns ``(values, outside)`` where ``outside`` flags that some point fell
    outside the sampling window.  With an evaluator the values are exact
    everywhere; otherwise lattice points are read directly, other points use
    trigonometric (discrete sinc) interpolation, and points outside the window
    are set to zero.
    """
    x = np.asarray(points, dtype=float)
    inside = f.grid.contains(x)
    outside = bool(not np.all(inside))
    if f.evaluator is not None:
        return np.asarray(f.evaluator(x), dtype=complex) * np.ones(x.shape), outside
    out = np.zeros(x.shape, dtype=complex)
    idx = _on_grid_indices(f.grid, x)
    if idx is not None:
        ok = (idx >= 0) & (idx < f.grid.n_samples)
        out[ok] = f.samples[idx[ok]]
        return out, outside
    out[inside] = _trig_interp(f, x[inside])
    return out, outside


def evaluate(f: CSignal, points) -> np.ndarray:
    return resample(f, points)[0]


def gaussian_signal(grid: Grid1D, a: float = 1.0, x0: float = 0.0, w0: float = 0.0) -> CSignal:
    """``exp(2 pi i w0 t) exp(-pi a (t - x0)^2)`` with closed-form evaluator."""

    def ev(t):
        t = np.asarray(t, dtype=float)
        return np.exp(2j * np.pi * w0 * t - np.pi * a * (t - x0) ** 2)

    return CSignal.from_function(grid, ev)


def hermite_signal(grid: Grid1D, k: int) -> CSignal:
    """L2-normalized Hermite function adapted to ``exp(-pi t^2)``.

    ``h_k(t) = 2^{1/4} (2^k k!)^{-1/2} H_k(sqrt(2 pi) t) exp(-pi t^2)``,
    an eigenfunction of the Fourier transform with eigenvalue ``(-i)^k``.
    """
    from numpy.polynomial.hermite import hermval
    from math import factorial

    coef = np.zeros(k + 1)
    coef[k] = 1.0
    norm = 2.0**0.25 / np.sqrt(2.0**k * factorial(k))

    def ev(t):
        t = np.asarray(t, dtype=float)
        return (norm * hermval(np.sqrt(2 * np.pi) * t, coef) * np.exp(-np.pi * t**2)).astype(complex)

    return CSignal.from_function(grid, ev)
