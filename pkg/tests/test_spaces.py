import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tauop.grid import CField2D, Grid1D, PhaseGrid, fourier_transform, gaussian_signal, hermite_signal
from tauop.gaussians import Phi
from tauop.spaces import (
    INF,
    MixedNormSpec,
    PhaseField4D,
    Weight,
    alpha,
    compose_with_J,
    linf_l1_norm,
    mixed_norm,
    modulation_norm,
    symbol_norm,
    weight_eval,
    wiener_amalgam_norm,
)
from tauop.experiments import young_4d_trials, young_mixed_trials

coord = st.floats(-50, 50, allow_nan=False)


def weights():
    return st.one_of(
        st.just(Weight.constant()),
        st.floats(0, 4).map(Weight.radial_poly),
        st.tuples(st.floats(0, 4), st.floats(0, 4)).map(lambda s: Weight.separable_poly(*s)),
        st.floats(0, 1).map(Weight.exponential),
    )


def test_weight_examples():
    assert weight_eval(Weight.radial_poly(2), 1, 0) == pytest.approx(4)
    assert weight_eval(Weight.constant(), 3, -7) == 1
    assert compose_with_J(Weight.separable_poly(1, 2))(3, 5) == pytest.approx(96)
    r = np.linspace(0, 200, 2001)
    e, p = Weight.exponential(1)(r, 0 * r), Weight.radial_poly(3)(r, 0 * r)
    assert np.all(e[r >= 20] > p[r >= 20])


def test_weight_validation():
    with pytest.raises(ValueError):
        Weight.exponential(1.5)
    with pytest.raises(ValueError):
        Weight("bogus")
    with pytest.raises(ValueError):
        Weight.radial_poly(-1)
    with pytest.raises(ValueError):
        Weight.separable_poly(1, 2)(1, 2, 3)


@settings(max_examples=200, deadline=None)
@given(weights(), coord, coord, coord, coord)
def test_weight_submultiplicative_even(v, z1, z2, w1, w2):
    assert v(z1 + w1, z2 + w2) <= v(z1, z2) * v(w1, w2) * (1 + 1e-12)
    assert v(-z1, -z2) == pytest.approx(v(z1, z2), rel=1e-14)
    assert v(0, 0) == 1


@settings(max_examples=200, deadline=None)
@given(weights(), coord, coord, coord, coord)
def test_reciprocal_is_moderate(v, x1, x2, y1, y2):
    m = v.reciprocal()
    assert m(x1 + y1, x2 + y2) <= v(y1, y2) * m(x1, x2) * (1 + 1e-12)


@settings(max_examples=100, deadline=None)
@given(weights(), coord, coord)
def test_v_J_composition(v, z1, z2):
    vJ = compose_with_J(v)
    assert vJ(z1, z2) == pytest.approx(v(z2, -z1), rel=1e-14)
    assert compose_with_J(vJ)(z1, z2) == pytest.approx(v(z1, z2), rel=1e-14)


@pytest.fixture(scope="module")
def gauss_field():
    pg = PhaseGrid.dual(Grid1D.from_length(16, 256))
    X, Xi = pg.mesh()
    return CField2D(pg, Phi(X, Xi))


def test_mixed_norm_examples(gauss_field):
    assert mixed_norm(gauss_field, MixedNormSpec(2, 2)) == pytest.approx(2**-0.5, rel=1e-12)
    assert mixed_norm(gauss_field, MixedNormSpec(INF, INF)) == pytest.approx(1.0)
    assert mixed_norm(gauss_field, MixedNormSpec(1, 1)) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(ValueError):
        MixedNormSpec(0.5, 2)
    with pytest.raises(ValueError):
        MixedNormSpec(2, 2, order="sideways")


def test_modulation_norm_examples(grid, phi):
    assert modulation_norm(phi, phi, 2, 2) == pytest.approx(0.5**0.5, rel=1e-12)
    h1 = hermite_signal(grid, 1)
    assert modulation_norm(phi, h1, 2, 2) == pytest.approx(phi.norm() * h1.norm(), rel=1e-12)
    n11, n22, ninf = (modulation_norm(phi, phi, p, p) for p in (1, 2, INF))
    assert n11 >= n22 >= ninf


@pytest.mark.parametrize("pq", [(2.0, 2.0), (1.0, INF), (1.0, 2.0)])
def test_wiener_is_fourier_image_of_modulation(grid, pq):
    f = gaussian_signal(grid, 1.3, 0.2, -0.3)
    g = gaussian_signal(grid)
    a = modulation_norm(f, g, *pq)
    b = wiener_amalgam_norm(fourier_transform(f), *pq, window=fourier_transform(g))
    assert b == pytest.approx(a, rel=1e-6)


def test_symbol_norms_of_gaussian():
    pg = PhaseGrid.dual(Grid1D.from_length(8, 64))
    X, Xi = pg.mesh()
    F = CField2D(pg, Phi(X, Xi))
    w = wiener_amalgam_norm(F, 2, 2)
    m = symbol_norm(F, 2, 2, order="inner_z")
    assert w == pytest.approx(m, rel=1e-6)
    assert w == pytest.approx(0.5, rel=1e-6)
    assert symbol_norm(F, INF, INF) == pytest.approx(0.5, rel=1e-12)  # value of V_Phi Phi at the origin


def test_symbol_norm_stride_consistent():
    pg = PhaseGrid.dual(Grid1D.from_length(8, 64))
    X, Xi = pg.mesh()
    F = CField2D(pg, Phi(X, Xi))
    full = symbol_norm(F, 1, INF)
    coarse = symbol_norm(F, 1, INF, z_stride=2)
    assert coarse == pytest.approx(full, rel=1e-12)  # sup attained at z = 0 in both


def test_linf_l1_examples():
    g = PhaseGrid.dual(Grid1D.from_length(5.6, 32))  # both axes span about +-2.8
    Z1, Z2 = g.mesh()
    S1, S2 = Z1, Z2
    vals = Phi(Z1, Z2)[:, :, None, None] * Phi(S1, S2)[None, None]
    F = PhaseField4D(g, g, vals)
    assert linf_l1_norm(F) == pytest.approx(1.0, rel=1e-6)
    # radial weight: 1-D radial quadrature of int e^{-pi r^2} (1 + r) 2 pi r dr
    r = np.linspace(0, 10, 200001)
    ref = np.trapezoid(np.exp(-np.pi * r**2) * (1 + r) * 2 * np.pi * r, r)
    assert linf_l1_norm(F, Weight.radial_poly(1)) == pytest.approx(ref, rel=1e-3)
    assert linf_l1_norm(PhaseField4D(g, g, 2 * vals)) == pytest.approx(2 * linf_l1_norm(F))


def test_alpha_examples():
    assert alpha(2, 2, 0.5) == 4.0
    taus = np.linspace(0.01, 0.99, 99)
    for t in taus:
        assert alpha(1, INF, t) == pytest.approx((1 - t) ** -2, rel=1e-14)
        assert alpha(INF, 1, t) == pytest.approx(t**-2, rel=1e-14)
        if abs(t - 0.5) > 1e-9:
            assert alpha(2, 2, t) > 4
    assert alpha(1, INF, 1e-9) == pytest.approx(1.0, abs=1e-8)
    assert alpha(1, INF, 1 - 1e-9) > 1e17
    assert alpha(INF, 1, 1e-9) > 1e17
    for t in (0.0, 1.0):
        with pytest.raises(ValueError):
            alpha(2, 2, t)


def test_young_mixed_random_instances():
    assert young_mixed_trials(100, seed=3) <= 1e-10


def test_young_4d_random_instances():
    worst_inf, worst_two = young_4d_trials(100, seed=3)
    assert worst_inf <= 1e-10
    assert worst_two <= 1e-10
