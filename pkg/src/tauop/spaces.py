"""Weights, weighted mixed norms, modulation and Wiener amalgam norms."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy.signal import fftconvolve

from .grid import CField2D, CSignal, Grid1D, PhaseGrid, gaussian_signal, make_dual_grid
from .gaussians import Phi
from .tfr import stft, stft2d_blocks

__all__ = [
    "Weight",
    "MixedNormSpec",
    "PhaseField4D",
    "weight_eval",
    "compose_with_J",
    "lp_norm",
    "mixed_norm",
    "mixed_norm_array",
    "modulation_norm",
    "wiener_amalgam_norm",
    "symbol_norm",
    "linf_l1_norm",
    "linf_l1_array",
    "convolve_fields",
    "alpha",
    "conjugate_exponent",
]

INF = float("inf")
_KINDS = ("constant", "radial_poly", "separable_poly", "exponential")


@dataclass(frozen=True)
class Weight:
    """Even submultiplicative weight, or its reciprocal when ``inverse`` is set.

    kinds: ``constant`` (1), ``radial_poly`` ((1+|z|)^s), ``separable_poly``
    ((1+|z1|)^s1 (1+|z2|)^s2) and ``exponential`` (e^{a|z|}, a <= 1).
    """

    kind: str = "constant"
    params: tuple = ()
    inverse: bool = False

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown weight kind {self.kind!r}")
        p = tuple(float(v) for v in self.params)
        object.__setattr__(self, "params", p)
        if any(v < 0 for v in p):
            raise ValueError("weight parameters must be non-negative")
        if self.kind == "separable_poly" and len(p) != 2:
            raise ValueError("separable_poly needs (s1, s2)")
        if self.kind in ("radial_poly", "exponential") and len(p) != 1:
            raise ValueError(f"{self.kind} needs one parameter")
        if self.kind == "exponential" and p[0] > 1:
            raise ValueError("exponential weights are capped at a <= 1")

    @classmethod
    def constant(cls):
        return cls("constant")

    @classmethod
    def radial_poly(cls, s):
        return cls("radial_poly", (s,))

    @classmethod
    def separable_poly(cls, s1, s2):
        return cls("separable_poly", (s1, s2))

    @classmethod
    def exponential(cls, a):
        return cls("exponential", (a,))

    def reciprocal(self) -> "Weight":
        return Weight(self.kind, self.params, not self.inverse)

    def __call__(self, *coords) -> np.ndarray:
        return weight_eval(self, *coords)


def weight_eval(v: Weight, *coords) -> np.ndarray:
    """Evaluate ``v`` at points given coordinate-wise (any dimension except separable)."""
    cs = np.broadcast_arrays(*(np.asarray(c, float) for c in coords))
    if v.kind == "constant":
        out = np.ones(cs[0].shape)
    elif v.kind == "separable_poly":
        if len(cs) != 2:
            raise ValueError("separable_poly is defined on the plane")
        out = (1 + np.abs(cs[0])) ** v.params[0] * (1 + np.abs(cs[1])) ** v.params[1]
    else:
        r = np.sqrt(sum(c**2 for c in cs))
        if v.kind == "radial_poly":
            out = (1 + r) ** v.params[0]
        else:
            out = np.exp(v.params[0] * r)
    return 1.0 / out if v.inverse else out


def compose_with_J(v: Weight) -> Weight:
    """``v_J(z) = v(z2, -z1)``; closed within the implemented kinds."""
    if v.kind == "separable_poly":
        return Weight("separable_poly", (v.params[1], v.params[0]), v.inverse)
    return v


def conjugate_exponent(p: float) -> float:
    if p == 1:
        return INF
    if p == INF:
        return 1.0
    return p / (p - 1)


def _inv(p):
    return 0.0 if p == INF else 1.0 / p


def alpha(r1: float, r2: float, tau: float, d: int = 1) -> float:
    """``tau^{-d(1/r1' + 1/r2)} (1 - tau)^{-d(1/r1 + 1/r2')}``."""
    if not 0 < tau < 1:
        raise ValueError("alpha is defined for tau in (0, 1)")
    for r in (r1, r2):
        if not (r >= 1):
            raise ValueError("exponents must be >= 1")
    e_tau = d * (_inv(conjugate_exponent(r1)) + _inv(r2))
    e_one = d * (_inv(r1) + _inv(conjugate_exponent(r2)))
    return float(tau**-e_tau * (1 - tau) ** -e_one)


def lp_norm(values, p: float, cell: float = 1.0, axis=None):
    a = np.abs(values)
    if p == INF:
        return np.max(a, axis=axis)
    return (np.sum(a**p, axis=axis) * cell) ** (1.0 / p)


def _check_exponents(*ps):
    for p in ps:
        if not (p >= 1):
            raise ValueError(f"exponent {p} < 1")


def mixed_norm_array(values, p, q, weight=None, steps=(1.0, 1.0), inner_axis=0) -> float:
    """``(int (int |F m|^p d inner)^{q/p} d outer)^{1/q}`` for a 2-D array."""
    _check_exponents(p, q)
    a = np.abs(values)
    if weight is not None:
        a = a * weight
    inner = lp_norm(a, p, steps[inner_axis], axis=inner_axis)
    return float(lp_norm(inner, q, steps[1 - inner_axis]))


@dataclass(frozen=True)
class MixedNormSpec:
    """``order='inner_x'`` is the modulation convention, ``'inner_xi'`` the Wiener one."""

    p: float
    q: float
    weight: Weight = field(default_factory=Weight)
    order: str = "inner_x"

    def __post_init__(self):
        _check_exponents(self.p, self.q)
        if self.order not in ("inner_x", "inner_xi"):
            raise ValueError("order must be 'inner_x' or 'inner_xi'")


def mixed_norm(F: CField2D, spec: MixedNormSpec) -> float:
    pg = F.phase_grid
    X, Xi = pg.mesh()
    m = spec.weight(X, Xi)
    inner_axis = 0 if spec.order == "inner_x" else 1
    return mixed_norm_array(F.values, spec.p, spec.q, m, (pg.x_grid.step, pg.xi_grid.step), inner_axis)


def _default_window(grid: Grid1D) -> CSignal:
    return gaussian_signal(grid)


def modulation_norm(f: CSignal, window: Optional[CSignal] = None, p=2.0, q=2.0, m: Weight = Weight()) -> float:
    """``||V_g f||_{L^{p,q}_m}`` (inner integral over time)."""
    g = _default_window(f.grid) if window is None else window
    return mixed_norm(stft(f, g), MixedNormSpec(p, q, m, "inner_x"))


def wiener_amalgam_norm(
    F: Union[CSignal, CField2D],
    p=2.0,
    q=2.0,
    u: Weight = Weight(),
    w: Weight = Weight(),
    window=None,
    z_stride: int = 1,
) -> float:
    """``W(F L^p_u, L^q_w)`` norm: inner integral over frequency with weight ``u``.

    Signals use a Gaussian window on the phase plane; fields on the phase
    plane use the 4-D STFT with window ``Phi`` (see :func:`symbol_norm`).
    """
    if isinstance(F, CSignal):
        g = _default_window(F.grid) if window is None else window
        V = stft(F, g)
        X, Xi = V.phase_grid.mesh()
        m = u(Xi) * w(X)
        pg = V.phase_grid
        return mixed_norm_array(V.values, p, q, m, (pg.x_grid.step, pg.xi_grid.step), inner_axis=1)
    return symbol_norm(F, p, q, zeta_weight=u, z_weight=w, order="inner_zeta", window=window, z_stride=z_stride)


def _sub_grid(g: Grid1D, stride: int) -> Grid1D:
    if stride == 1:
        return g
    return Grid1D(g.half_width, g.n_samples // stride, g.offset)


def symbol_norm(
    F: CField2D,
    p=2.0,
    q=2.0,
    zeta_weight: Weight = Weight(),
    z_weight: Weight = Weight(),
    order: str = "inner_zeta",
    window=None,
    z_stride: int = 1,
) -> float:
    """Mixed norm of the 4-D STFT ``V_Phi F(z, zeta)`` of a field on the phase plane.

    ``order='inner_zeta'`` gives ``W(F L^p_u, L^q_w)`` with ``u = zeta_weight``,
    ``w = z_weight``; ``order='inner_z'`` gives ``M^{p,q}_{w (x) u}``.  Window
    positions run over the field's lattice subsampled by ``z_stride``; the
    computation streams one row of positions at a time.
    """
    _check_exponents(p, q)
    if order not in ("inner_zeta", "inner_z"):
        raise ValueError("order must be 'inner_zeta' or 'inner_z'")
    window = Phi if window is None else window
    pg = F.phase_grid
    z_pg = PhaseGrid(_sub_grid(pg.x_grid, z_stride), _sub_grid(pg.xi_grid, z_stride))
    dz = z_pg.cell
    d1, d2 = make_dual_grid(pg.x_grid), make_dual_grid(pg.xi_grid)
    dzeta = d1.step * d2.step
    S1, S2 = np.meshgrid(d1.points, d2.points, indexing="ij")
    u = zeta_weight(S1, S2)
    zs1, zs2 = z_pg.x_grid.points, z_pg.xi_grid.points
    if order == "inner_zeta":
        outer = []
        for i, block in stft2d_blocks(F, window, z_pg):
            inner = lp_norm(np.abs(block) * u[None], p, dzeta, axis=(1, 2))
            outer.append(inner * z_weight(zs1[i], zs2))
        return float(lp_norm(np.concatenate(outer), q, dz))
    acc = np.zeros(u.shape)
    for i, block in stft2d_blocks(F, window, z_pg):
        a = np.abs(block) * z_weight(zs1[i], zs2)[:, None, None]
        if p == INF:
            acc = np.maximum(acc, a.max(axis=0))
        else:
            acc += np.sum(a**p, axis=0) * dz
    inner = acc if p == INF else acc ** (1.0 / p)
    return float(lp_norm(inner * u, q, dzeta))


@dataclass(frozen=True, eq=False)
class PhaseField4D:
    """Samples ``F(z, zeta)`` with ``z`` on ``z_grid`` and ``zeta`` on ``zeta_grid``."""

    z_grid: PhaseGrid
    zeta_grid: PhaseGrid
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != self.z_grid.shape + self.zeta_grid.shape:
            raise ValueError("values shape does not match the grids")


def linf_l1_array(values, m_values=None, zeta_cell: float = 1.0) -> float:
    """``max_z sum_zeta |F| m * cell`` for an array whose last two axes are ``zeta``."""
    a = np.abs(values)
    if m_values is not None:
        a = a * m_values
    return float(np.max(np.sum(a, axis=(-2, -1)) * zeta_cell))


def linf_l1_norm(F: PhaseField4D, m: Weight = Weight()) -> float:
    """``sup_z int |F(z, zeta)| m(zeta) d zeta``."""
    S1, S2 = F.zeta_grid.mesh()
    return linf_l1_array(F.values, m(S1, S2), F.zeta_grid.cell)


def convolve_fields(F, G, cell: float = 1.0):
    """Full linear convolution of two arrays with quadrature weight ``cell``.

    If ``F`` has its first sample at coordinate ``o_F`` and ``G`` at ``o_G``
    (same step), the output's first sample sits at ``o_F + o_G``.
    """
    return fftconvolve(np.asarray(F), np.asarray(G), mode="full") * cell
