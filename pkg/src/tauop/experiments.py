"""Experiment drivers: identity suite, alpha scaling, counterexample, norms, conversion.

Every driver takes an :class:`ExperimentConfig` and returns ``(header, rows)``
ready for :func:`write_csv`; the identity suite returns a :class:`RunSummary`.
Random draws use ``numpy.random.Philox`` keyed by the config seed.
"""
from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import math
import time
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable, Optional

import numpy as np

from .gaussians import (
    GenGaussianParams,
    Phi,
    gen_gaussian,
    stft_gen_gaussian_closed,
    stft_wigner_gaussian_magnitude,
    tau_wigner_gaussian_closed,
    uniform_window_amplitude,
)
from .grid import (
    CField2D,
    CSignal,
    Grid1D,
    PhaseGrid,
    evaluate,
    fourier_sum,
    fourier_transform,
    gaussian_signal,
    hermite_signal,
    inner_product,
    inverse_fourier,
    make_dual_grid,
    resample,
)
from .operators import (
    Symbol,
    adjoint_residual,
    build_kernel,
    convert_symbol,
    l2_operator_norm,
    modulation_operator_norm_lower,
    op_kohn_nirenberg,
    weak_pairing_residual,
)
from .spaces import (
    INF,
    MixedNormSpec,
    Weight,
    alpha,
    compose_with_J,
    conjugate_exponent,
    convolve_fields,
    linf_l1_array,
    lp_norm,
    mixed_norm,
    mixed_norm_array,
    modulation_norm,
    symbol_norm,
    wiener_amalgam_norm,
)
from .tfr import (
    TFShift,
    a_tau_operator,
    matrix_A_tau,
    matrix_B_tau,
    J,
    stft,
    stft2d_at,
    stft_at,
    stft_of_wigner_closed,
    stft_of_wigner_symplectic,
    tau_wigner,
    tf_shift,
    wigner_via_stft,
)

__all__ = [
    "ExperimentConfig",
    "CheckResult",
    "RunSummary",
    "CHECKS",
    "DEFAULT_TOLERANCES",
    "parse_weight",
    "make_symbol",
    "run_checks",
    "cmd_verify",
    "cmd_scaling",
    "cmd_counterexample",
    "cmd_norms",
    "cmd_convert",
    "write_csv",
    "write_summary",
    "format_value",
    "young_mixed_trials",
    "young_4d_trials",
    "chirp_ft_error",
]

TAU_DEFAULT = tuple(round(0.1 * k, 10) for k in range(11))

DEFAULT_TOLERANCES = {
    # core grid
    "parseval": 1e-10,
    "fourier_reflection": 1e-10,
    "inverse_roundtrip": 1e-12,
    "resample_on_grid": 0.0,
    "resample_sampled": 1e-8,
    # time-frequency representations
    "moyal": 1e-6,
    "covariance": 1e-8,
    "conjugation_symmetry": 1e-8,
    "fourier_covariance": 1e-8,
    "orthogonality": 1e-6,
    "fundamental_identity": 1e-8,
    "stft_tfshift": 1e-8,
    "stft_gaussian": 1e-8,
    "change_of_window": 1e-10,
    "commutation": 1e-8,
    "a_tau_algebra": 1e-12,
    "wigner_via_stft": 1e-6,
    "rihaczek_forms": 1e-8,
    "stft_wigner_factorization": 1e-5,
    "symplectic_form": 1e-12,
    # gaussian closed forms
    "gaussian_wigner_closed": 1e-8,
    "stft_gen_gaussian": 1e-4,
    "gen_gaussian_symmetry": 1e-10,
    "gaussian_magnitude_oracle": 1e-4,
    "amplitude_constant": 1e-10,
    "gaussian_window_l1_spread": 1.5,
    "wigner_gaussian_l2": 1e-8,
    # matrix algebra and alpha
    "symplectic_lemma": 1e-12,
    "alpha_values": 1e-12,
    "alpha_minimum": 0.0,
    # function spaces
    "mixed_norm_gaussian": 1e-10,
    "weight_submultiplicative": 1e-12,
    "weight_moderate": 1e-12,
    "modulation_monotone": 1e-12,
    "young_mixed": 1e-10,
    "young_linf_l1": 1e-10,
    "young_l2": 1e-10,
    "wiener_modulation": 1e-6,
    "symbol_wiener_gaussian": 1e-6,
    # operators
    "identity_symbol": 1e-6,
    "multiplication_symbol": 1e-5,
    "fourier_multiplier": 1e-5,
    "kn_agreement": 1e-6,
    "weak_pairing": 1e-6,
    "rank_one": 1e-4,
    "cross_quantization": 1e-5,
    "conversion_equivalence": 1e-3,
    "conversion_semigroup": 1e-10,
    "chirp_ft": 1e-2,
    "adjoint_real": 1e-8,
    "adjoint_counterexample": 1e-6,
    "l2_norm_identity": 1e-6,
    "l2_norm_rank_one": 1e-4,
    "probe_lower_identity": 1e-4,
    "probe_lower_rank_one": 1e-12,
    # experiment acceptance
    "scaling_spread": 10.0,
    "l2_uniform_spread": 0.2,
    "counterexample_closed_form": 1e-3,
    "counterexample_slope": 0.05,
}


def _parse_list(text: str) -> tuple:
    return tuple(float(v) for v in str(text).replace(";", ",").split(",") if v.strip())


def _parse_float(text) -> float:
    t = str(text).strip().lower()
    if t in ("inf", "infinity", "oo"):
        return INF
    return float(t)


def _parse_bool(text) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def parse_weight(text: str) -> Weight:
    """``constant``, ``radial_poly:s``, ``separable_poly:s1,s2``, ``exponential:a``; prefix ``1/`` inverts."""
    t = text.strip()
    inverse = t.startswith("1/")
    if inverse:
        t = t[2:]
    kind, _, args = t.partition(":")
    w = Weight(kind, _parse_list(args) if args else ())
    return w.reciprocal() if inverse else w


def _weight_text(w: Weight) -> str:
    body = w.kind if not w.params else w.kind + ":" + ",".join(repr(p) for p in w.params)
    return ("1/" if w.inverse else "") + body


@dataclass(frozen=True)
class ExperimentConfig:
    """Run parameters.  Text form: one ``key = value`` per line, ``#`` comments.

    Keys: ``grid.n``, ``grid.l``, ``grid.shifted``, ``tau_list``,
    ``factorization_taus``, ``scaling.tau_list``, ``space.r1``, ``space.r2``, ``space.weight``,
    ``symbol``, ``symbol.p``, ``symbol.q``, ``symbol_grid.n``,
    ``symbol_grid.l``, ``norms.p``, ``norms.q``, ``probes.extent``,
    ``probes.n_random``, ``probes.seed``, ``counterexample.epsilons``,
    ``tol.<check>``.
    """

    n: int = 256
    l: float = 16.0
    shifted: bool = False
    tau_list: tuple = TAU_DEFAULT
    factorization_taus: tuple = (0.0, 0.25, 0.4, 0.5, 0.75, 1.0)
    scaling_taus: tuple = tuple(round(0.05 * k, 10) for k in range(1, 20))
    r1: float = 2.0
    r2: float = 2.0
    weight: str = "constant"
    symbol: str = "gaussian"
    symbol_p: float = 2.0
    symbol_q: float = 2.0
    symbol_n: int = 64
    symbol_l: float = 8.0
    norms_p: float = 2.0
    norms_q: float = 2.0
    probe_extent: int = 2
    n_random: int = 8
    seed: int = 0
    epsilons: tuple = tuple(2.0**-k for k in range(4, 11))
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    _KEYS = {
        "grid.n": ("n", int),
        "grid.l": ("l", float),
        "grid.shifted": ("shifted", _parse_bool),
        "tau_list": ("tau_list", _parse_list),
        "factorization_taus": ("factorization_taus", _parse_list),
        "scaling.tau_list": ("scaling_taus", _parse_list),
        "space.r1": ("r1", _parse_float),
        "space.r2": ("r2", _parse_float),
        "space.weight": ("weight", str),
        "symbol": ("symbol", str),
        "symbol.p": ("symbol_p", _parse_float),
        "symbol.q": ("symbol_q", _parse_float),
        "symbol_grid.n": ("symbol_n", int),
        "symbol_grid.l": ("symbol_l", float),
        "norms.p": ("norms_p", _parse_float),
        "norms.q": ("norms_q", _parse_float),
        "probes.extent": ("probe_extent", int),
        "probes.n_random": ("n_random", int),
        "probes.seed": ("seed", int),
        "counterexample.epsilons": ("epsilons", _parse_list),
    }

    def __post_init__(self):
        for taus in (self.tau_list, self.factorization_taus, self.scaling_taus):
            if any(not 0 <= t <= 1 for t in taus):
                raise ValueError("tau values must lie in [0, 1]")
        Grid1D.from_length(self.l, self.n)
        parse_weight(self.weight)
        make_symbol(self.symbol)
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ValueError(f"unknown tolerance keys: {sorted(unknown)}")

    @classmethod
    def from_mapping(cls, items: dict, base: Optional["ExperimentConfig"] = None) -> "ExperimentConfig":
        base = cls() if base is None else base
        kw = {}
        tol = dict(base.tolerances)
        for key, raw in items.items():
            key = key.strip()
            if key.startswith("tol."):
                tol[key[4:]] = float(raw)
                continue
            if key not in cls._KEYS:
                raise ValueError(f"unknown config key {key!r}")
            name, conv = cls._KEYS[key]
            kw[name] = conv(raw)
        return replace(base, tolerances=tol, **kw)

    @classmethod
    def from_file(cls, path, base: Optional["ExperimentConfig"] = None) -> "ExperimentConfig":
        items = {}
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            k, v = line.split("=", 1)
            items[k.strip()] = v.strip()
        return cls.from_mapping(items, base)

    def grid(self) -> Grid1D:
        return Grid1D.from_length(self.l, self.n, self.shifted)

    def symbol_grid(self) -> Grid1D:
        return Grid1D.from_length(self.symbol_l, self.symbol_n)

    def canonical(self) -> str:
        lines = []
        for key, (name, _) in sorted(self._KEYS.items()):
            v = getattr(self, name)
            if name == "weight":
                v = _weight_text(parse_weight(v))
            elif isinstance(v, tuple):
                v = ",".join(repr(float(x)) for x in v)
            else:
                v = repr(v)
            lines.append(f"{key}={v}")
        lines += [f"tol.{k}={self.tolerances[k]!r}" for k in sorted(self.tolerances)]
        return "\n".join(lines)

    def hash(self) -> str:
        return hashlib.sha256(self.canonical().encode("utf-8")).hexdigest()[:16]


# --- symbols ----------------------------------------------------------------


def _counterexample_symbol(x, xi):
    x = np.asarray(x, float)
    inside = (x > 0) & (x <= 1)
    safe = np.where(inside, x, 1.0)
    return np.where(inside, safe**-0.5, 0.0) * np.exp(-np.pi * np.asarray(xi, float) ** 2)


def make_symbol(name: str) -> Symbol:
    """Named symbols: ``gaussian``, ``identity``, ``zero``, ``counterexample``, ``wigner_gaussian``."""
    if name == "gaussian":
        return Symbol(lambda x, xi: Phi(x, xi), label="gaussian")
    if name == "identity":
        return Symbol.constant(1.0, "identity")
    if name == "zero":
        return Symbol.constant(0.0, "zero")
    if name == "counterexample":
        return Symbol(_counterexample_symbol, label="counterexample")
    if name == "wigner_gaussian":
        return Symbol(lambda x, xi: tau_wigner_gaussian_closed(0.5, x, xi), label="wigner_gaussian")
    raise ValueError(f"unknown symbol {name!r}")


# --- results ----------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value <= self.threshold)


@dataclass
class RunSummary:
    config: ExperimentConfig
    checks: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add(self, result: CheckResult):
        if any(c.name == result.name for c in self.checks):
            raise ValueError(f"duplicate check {result.name}")
        self.checks.append(result)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def csv_rows(self):
        h = self.config.hash()
        header = ["check", "value", "threshold", "passed", "config_hash"]
        rows = [[c.name, c.value, c.threshold, int(c.passed), h] for c in self.checks]
        return header, rows

    def write(self, path):
        lines = [
            f"timestamp={_dt.datetime.now(_dt.timezone.utc).isoformat(timespec='seconds')}",
            f"config_hash={self.config.hash()}",
            f"passed={int(self.passed)}",
        ]
        lines += [f"{k}={v}" for k, v in self.metadata.items()]
        for c in self.checks:
            lines.append(f"check.{c.name}={format_value(c.value)} threshold={format_value(c.threshold)} passed={int(c.passed)}")
        lines += [f"tol.{k}={format_value(v)}" for k, v in sorted(self.config.tolerances.items())]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.16e" % float(v)
    return str(v)


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([format_value(v) for v in r])


def write_summary(path, config: ExperimentConfig, items: dict):
    lines = [
        f"timestamp={_dt.datetime.now(_dt.timezone.utc).isoformat(timespec='seconds')}",
        f"config_hash={config.hash()}",
    ]
    lines += [f"{k}={format_value(v)}" for k, v in items.items()]
    lines += [f"tol.{k}={format_value(v)}" for k, v in sorted(config.tolerances.items())]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# --- identity suite -----------------------------------------------------------


class _Ctx:
    """Shared signals for the checks, built on the configured grid."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.grid = cfg.grid()
        self.cgrid = self.grid.centered()
        self.taus = tuple(sorted(set(float(t) for t in cfg.tau_list)))
        self.inner_taus = tuple(t for t in self.taus if 0 < t < 1)
        self.seed = cfg.seed
        g = self.grid
        self.phi = gaussian_signal(g)
        self.g2 = gaussian_signal(g, a=2.0, x0=0.5, w0=-0.25)
        self.g3 = gaussian_signal(g, a=0.5, x0=-1.0, w0=0.5)
        self.h1 = hermite_signal(g, 1)
        self.h2 = hermite_signal(g, 2)
        self.signals = [self.phi, self.g2, self.g3, self.h1, self.h2]

    def rng(self, stream: int) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=[self.seed, stream]))


def _rel(a, b, scale=None) -> float:
    a, b = np.asarray(a), np.asarray(b)
    s = np.max(np.abs(b)) if scale is None else scale
    return float(np.max(np.abs(a - b)) / s)


def _gauss_ft(a, x0, w0):
    """Closed-form Fourier transform of ``gaussian_signal(a, x0, w0)``."""

    def ev(xi):
        xi = np.asarray(xi, float)
        return a**-0.5 * np.exp(-np.pi * (xi - w0) ** 2 / a - 2j * np.pi * x0 * (xi - w0))

    return ev


def _chk_parseval(c: _Ctx):
    err = 0.0
    for f in c.signals:
        for g in c.signals:
            err = max(err, abs(inner_product(f, g) - inner_product(fourier_transform(f), fourier_transform(g))))
    return err


def _chk_fourier_reflection(c: _Ctx):
    err = 0.0
    for f in c.signals:
        ff = fourier_transform(fourier_transform(f))
        err = max(err, np.max(np.abs(ff.samples - f.evaluator(-ff.grid.points))))
    return err


def _chk_inverse_roundtrip(c: _Ctx):
    rng = c.rng(1)
    noise = CSignal(c.grid, rng.standard_normal(c.grid.n_samples) + 1j * rng.standard_normal(c.grid.n_samples))
    err = 0.0
    for f in (c.phi, c.h2, noise):
        back = inverse_fourier(fourier_transform(f), f.grid)
        err = max(err, np.max(np.abs(back.samples - f.samples)))
    return err


def _chk_resample_on_grid(c: _Ctx):
    sampled = CSignal(c.grid, c.h1.samples)
    vals, _ = resample(sampled, c.grid.points)
    return float(np.max(np.abs(vals - sampled.samples)))


def _chk_resample_sampled(c: _Ctx):
    sampled = CSignal(c.grid, c.phi.samples)
    x = c.rng(2).uniform(-3, 3, 50)
    x = np.append(x, 0.3)
    return float(np.max(np.abs(resample(sampled, x)[0] - np.exp(-np.pi * x**2))))


def _quadruples(c: _Ctx):
    return [
        (c.phi, c.phi, c.phi, c.phi),
        (c.phi, c.g2, c.g3, c.h1),
        (c.h1, c.h2, c.h1, c.g2),
        (c.g2, c.phi, c.h2, c.h2),
    ]


def _chk_moyal(c: _Ctx):
    err = 0.0
    for tau in c.taus:
        for f1, g1, f2, g2 in _quadruples(c):
            lhs = tau_wigner(f1, g1, tau).inner(tau_wigner(f2, g2, tau))
            rhs = inner_product(f1, f2) * np.conj(inner_product(g1, g2))
            err = max(err, abs(lhs - rhs) / (f1.norm() * g1.norm() * f2.norm() * g2.norm()))
    return err


def _chk_covariance(c: _Ctx):
    g = c.grid
    eta = make_dual_grid(g).step
    di, dj = 16, 8
    w = TFShift(di * g.step, dj * eta)
    err = 0.0
    for tau in c.taus:
        base = tau_wigner(c.g2, c.h1, tau).values
        moved = tau_wigner(tf_shift(c.g2, w), tf_shift(c.h1, w), tau).values
        err = max(err, np.max(np.abs(moved[di:, dj:] - base[:-di, :-dj])))
    return err


def _chk_conjugation(c: _Ctx):
    err = 0.0
    for tau in c.taus:
        a = tau_wigner(c.g2, c.h1, 1 - tau).values
        b = tau_wigner(c.h1, c.g2, tau).values
        err = max(err, np.max(np.abs(a - np.conj(b))))
    return err


def _chk_fourier_covariance(c: _Ctx):
    """``W_tau f(x, xi) = W_{1-tau} f^(xi, -x)``, equivalently ``W_tau f^(x, xi) = W_{1-tau} f(-xi, x)``."""
    f = gaussian_signal(c.cgrid, a=1.5, x0=0.5, w0=0.25)
    fh = fourier_transform(f)
    n = c.cgrid.n_samples
    i = np.arange(1, n)
    err = 0.0
    for tau in c.taus:
        w = tau_wigner(f, f, tau).values  # (x_i, xi_j)
        wh = tau_wigner(fh, fh, 1 - tau).values  # (xi_a, x_b); fh is sampled only
        # w[i, j] = wh[j, -i]; -x_i is a lattice point for i >= 1
        err = max(err, np.max(np.abs(w[i, :] - wh[:, n - i].T)))
        # wh[a, b] = w[-b, a]
        err = max(err, np.max(np.abs(wh[:, i] - w[n - i, :].T)))
    return err


def _chk_orthogonality(c: _Ctx):
    err = 0.0
    combos = [(c.phi, c.g2, c.h1, c.g3), (c.h2, c.phi, c.h2, c.g2), (c.g3, c.h1, c.phi, c.h1)]
    for f1, g1, f2, g2 in combos:
        lhs = stft(f1, g1).inner(stft(f2, g2))
        rhs = inner_product(f1, f2) * np.conj(inner_product(g1, g2))
        err = max(err, abs(lhs - rhs) / (f1.norm() * g1.norm() * f2.norm() * g2.norm()))
    return err


def _chk_fundamental_identity(c: _Ctx):
    g = c.cgrid
    f = gaussian_signal(g, a=1.5, x0=0.5, w0=0.25)
    w = hermite_signal(g, 1)
    n = g.n_samples
    lhs = stft(f, w).values  # (x_i, w_k)
    rhs = stft(fourier_transform(f), fourier_transform(w)).values  # (w_k, x'_j)
    x, om = np.meshgrid(g.points, make_dual_grid(g).points, indexing="ij")
    i = np.arange(1, n)
    # V_g f(x_i, w_k) = e^{-2 pi i x w} V_gh fh(w_k, -x_i)
    pred = np.exp(-2j * np.pi * x[i] * om[i]) * rhs[:, n - i].T
    return float(np.max(np.abs(lhs[i] - pred)))


def _chk_stft_tfshift(c: _Ctx):
    u, wg = 0.75, -0.5
    z = TFShift(u, wg)
    V = stft(tf_shift(c.g3, z), tf_shift(c.h1, z))
    base = stft(c.g3, c.h1)
    X, Xi = base.phase_grid.mesh()
    pred = np.exp(2j * np.pi * (wg * X - Xi * u)) * base.values
    return float(np.max(np.abs(V.values - pred)))


def _chk_stft_gaussian(c: _Ctx):
    rng = c.rng(3)
    x, w = rng.uniform(-2, 2, 25), rng.uniform(-2, 2, 25)
    num = stft_at(c.phi, c.phi, x, w)
    exact = 2**-0.5 * np.exp(-np.pi * (x**2 + w**2) / 2 - 1j * np.pi * x * w)
    V = stft(c.phi, c.phi)
    X, Om = V.phase_grid.mesh()
    grid_exact = 2**-0.5 * np.exp(-np.pi * (X**2 + Om**2) / 2 - 1j * np.pi * X * Om)
    return max(float(np.max(np.abs(num - exact))), float(np.max(np.abs(V.values - grid_exact))))


def _chk_change_of_window(c: _Ctx):
    g = c.cgrid
    f, w, w0, gam = hermite_signal(g, 1), gaussian_signal(g, a=2.0), gaussian_signal(g), gaussian_signal(g, 0.5, 0.25)
    lhs = np.abs(stft(f, w0).values)
    A = np.abs(stft(f, w).values)
    B = np.abs(stft(gam, w0).values)
    pg = stft(f, w).phase_grid
    full = convolve_fields(A, B, pg.cell)
    n1, n2 = pg.shape
    rhs = full[n1 // 2 : n1 // 2 + n1, n2 // 2 : n2 // 2 + n2] / abs(inner_product(gam, w))
    return float(max(0.0, np.max(lhs - rhs)))


def _chk_commutation(c: _Ctx):
    err = 0.0
    for tau in c.inner_taus:
        for z1, z2 in ((0.5, 0.25), (-1.0, 0.75)):
            r = (1 - tau) / tau
            lhs = tf_shift(a_tau_operator(c.g2, tau), TFShift(z1, z2))
            rhs = a_tau_operator(tf_shift(c.g2, TFShift(-r * z1, -z2 / r)), tau)
            err = max(err, np.max(np.abs(lhs.samples - rhs.samples)))
    return err


def _chk_a_tau_algebra(c: _Ctx):
    t = c.grid.points
    e1 = np.max(np.abs(a_tau_operator(c.g2, 0.5).samples - c.g2.evaluator(-t)))
    e2 = np.max(np.abs(a_tau_operator(a_tau_operator(c.g2, 0.5), 0.5).samples - c.g2.samples))
    e3 = np.max(np.abs(a_tau_operator(c.g2, 1 / 3).samples - c.g2.evaluator(-2 * t)))
    return float(max(e1, e2, e3))


def _chk_wigner_via_stft(c: _Ctx):
    x, xi = c.rng(4).uniform(-1.5, 1.5, (2, 25))
    ref = np.array([_direct_wigner(c.g2, c.h1, 0.3, a, b) for a, b in zip(x, xi)])
    e1 = _rel(wigner_via_stft(c.g2, c.h1, 0.3, x, xi), ref)
    i0 = c.grid.n_samples // 2
    Wp = tau_wigner(c.phi, c.phi, 0.5)
    o = wigner_via_stft(c.phi, c.phi, 0.5, 0.0, 0.0)
    e2 = abs(o - Wp.values[i0, make_dual_grid(c.grid).n_samples // 2]) if not c.grid.offset else 0.0
    e3 = abs(o - math.sqrt(2))
    return float(max(e1, e2, e3))


def _direct_wigner(f, g, tau, x, xi):
    t = f.grid.centered().points
    h = f.grid.step
    return np.sum(np.exp(-2j * np.pi * t * xi) * evaluate(f, x + tau * t) * np.conj(evaluate(g, x - (1 - tau) * t))) * h


def _chk_rihaczek(c: _Ctx):
    pg = PhaseGrid.dual(c.grid)
    X, Xi = pg.mesh()
    f, g = c.g2, c.g3
    gh = _gauss_ft(0.5, -1.0, 0.5)(Xi)
    fh = _gauss_ft(2.0, 0.5, -0.25)(Xi)
    w0 = tau_wigner(f, g, 0.0).values
    w1 = tau_wigner(f, g, 1.0).values
    e0 = np.max(np.abs(w0 - np.exp(-2j * np.pi * X * Xi) * f.evaluator(X) * np.conj(gh)))
    e1 = np.max(np.abs(w1 - np.exp(2j * np.pi * X * Xi) * np.conj(g.evaluator(X)) * fh))
    return float(max(e0, e1))


def _tf_points(rng, pg: PhaseGrid, n: int, zmax=1.5, smax=1.5):
    """Lattice-aligned z and arbitrary zeta."""
    hx, hxi = pg.x_grid.step, pg.xi_grid.step
    i = rng.integers(-int(zmax / hx), int(zmax / hx) + 1, n)
    j = rng.integers(-int(zmax / hxi), int(zmax / hxi) + 1, n)
    z = np.stack([i * hx, j * hxi], axis=1)
    s = rng.uniform(-smax, smax, (n, 2))
    return z, s


def _chk_factorization(c: _Ctx):
    grid = c.cgrid
    f = gaussian_signal(grid, a=1.0, x0=0.5, w0=0.25)
    g = gaussian_signal(grid, a=1.5, x0=-0.25, w0=-0.5)
    p1 = gaussian_signal(grid)
    p2 = gaussian_signal(grid, a=0.75)
    pg = PhaseGrid.dual(grid)
    rng = c.rng(5)
    err = 0.0
    for tau in c.cfg.factorization_taus:
        F = tau_wigner(g, f, tau, pg)
        win = tau_wigner(p1, p2, tau, pg)
        z, s = _tf_points(rng, pg, 10)
        direct = stft2d_at(F, win, z, s)
        closed = stft_of_wigner_closed(f, g, p1, p2, tau, (z[:, 0], z[:, 1]), (s[:, 0], s[:, 1]))
        err = max(err, _rel(closed, direct))
    return err


def _chk_symplectic_form(c: _Ctx):
    rng = c.rng(6)
    z = rng.uniform(-1.5, 1.5, (2, 10))
    s = rng.uniform(-1.5, 1.5, (2, 10))
    err = 0.0
    for tau in c.inner_taus:
        a = stft_of_wigner_closed(c.g2, c.h1, c.phi, c.g3, tau, z, s)
        b = stft_of_wigner_symplectic(c.g2, c.h1, c.phi, c.g3, tau, z, s)
        err = max(err, _rel(b, a))
    return err


def _chk_gaussian_wigner_closed(c: _Ctx):
    pg = PhaseGrid.dual(c.grid)
    X, Xi = pg.mesh()
    err = 0.0
    for tau in (0.0, 0.25, 0.5, 0.75, 1.0):
        err = max(err, np.max(np.abs(tau_wigner(c.phi, c.phi, tau, pg).values - tau_wigner_gaussian_closed(tau, X, Xi))))
    return float(err)


def _chk_stft_gen_gaussian(c: _Ctx):
    pg = PhaseGrid.dual(c.cgrid)
    X, Xi = pg.mesh()
    rng = c.rng(7)
    err = 0.0
    for p in (GenGaussianParams(1.0, 1.0, 0.0), GenGaussianParams(1.5, 0.75, 0.6), GenGaussianParams(0.8, 1.2, -0.9)):
        F = CField2D(pg, gen_gaussian(p, X, Xi))
        z = rng.uniform(-1.5, 1.5, (10, 2))
        s = rng.uniform(-1.5, 1.5, (10, 2))
        direct = stft2d_at(F, Phi, z, s)
        closed = stft_gen_gaussian_closed(p, (z[:, 0], z[:, 1]), (s[:, 0], s[:, 1]))
        err = max(err, _rel(closed, direct))
    e0 = abs(stft_gen_gaussian_closed(GenGaussianParams(1, 1, 0), (0.0, 0.0), (0.0, 0.0)) - 0.5)
    return float(max(err, e0))


def _chk_gen_gaussian_symmetry(c: _Ctx):
    z1, z2, s1, s2 = c.rng(8).uniform(-2, 2, (4, 50))
    p = GenGaussianParams(1.3, 0.7, 0.8)
    q = GenGaussianParams(1.3, 0.7, -0.8)
    vq = stft_gen_gaussian_closed(q, (z1, z2), (s1, s2))
    reflect = stft_gen_gaussian_closed(p, (z1, -z2), (s1, -s2))
    conj = np.conj(stft_gen_gaussian_closed(p, (z1, z2), (-s1, -s2)))
    return float(max(np.max(np.abs(vq - reflect)), np.max(np.abs(vq - conj))))


def _chk_gaussian_magnitude(c: _Ctx):
    pg = PhaseGrid.dual(c.cgrid)
    X, Xi = pg.mesh()
    rng = c.rng(9)
    err = 0.0
    for tau in (0.0, 0.3, 0.5, 0.8, 1.0):
        F = CField2D(pg, tau_wigner_gaussian_closed(tau, X, Xi))
        z = rng.uniform(-1, 1, (10, 2))
        s = rng.uniform(-1, 1, (10, 2))
        num = np.abs(stft2d_at(F, Phi, z, s))
        ref = stft_wigner_gaussian_magnitude(tau, (z[:, 0], z[:, 1]), (s[:, 0], s[:, 1]))
        err = max(err, _rel(num, ref))
    return err


def _chk_amplitude(c: _Ctx):
    taus = np.linspace(0, 1, 201)
    at0 = np.array([stft_wigner_gaussian_magnitude(t, (0.0, 0.0), (0.0, 0.0)) for t in taus])
    pg = PhaseGrid.dual(c.cgrid)
    X, Xi = pg.mesh()
    F = CField2D(pg, tau_wigner_gaussian_closed(0.5, X, Xi))
    numeric = abs(stft2d_at(F, Phi, [(0.0, 0.0)], [(0.0, 0.0)])[0])
    target = uniform_window_amplitude(1)
    return float(
        max(
            abs(np.max(at0) - target),
            abs(taus[np.argmax(at0)] - 0.5),
            abs(numeric - target),
            abs(target - (9 / 2) ** -0.5),
        )
    )


def gaussian_window_l1(tau: float, v: Weight, n: int = 32, length: float = 8.0) -> float:
    """``int int |V_Phi W_tau phi|(z, zeta) v_J(zeta) dz dzeta`` by a 4-D rectangle rule."""
    h = length / n
    x = (np.arange(n) - n / 2) * h
    Z1, Z2, S1, S2 = np.meshgrid(x, x, x, x, indexing="ij")
    vals = stft_wigner_gaussian_magnitude(tau, (Z1, Z2), (S1, S2)) * compose_with_J(v)(S1, S2)
    return float(np.sum(vals) * h**4)


def _chk_gaussian_l1_spread(c: _Ctx):
    spread = 1.0
    for v in (Weight.constant(), Weight.radial_poly(1), Weight.radial_poly(2), Weight.separable_poly(1, 2)):
        vals = [gaussian_window_l1(t, v) for t in np.linspace(0, 1, 21)]
        if not np.all(np.isfinite(vals)):
            return INF
        spread = max(spread, max(vals) / min(vals))
    return spread


def _chk_wigner_gaussian_l2(c: _Ctx):
    pg = PhaseGrid.dual(c.cgrid)
    X, Xi = pg.mesh()
    err = 0.0
    for tau in np.linspace(0, 1, 11):
        F = CField2D(pg, tau_wigner_gaussian_closed(tau, X, Xi))
        err = max(err, abs(F.l2_norm() ** 2 - 0.5) / 0.5)
    return err


def _chk_symplectic_lemma(c: _Ctx):
    err = 0.0
    I2 = np.eye(2)
    for tau in np.round(np.linspace(0.1, 0.9, 9), 10):
        A, A1, B = matrix_A_tau(tau), matrix_A_tau(1 - tau), matrix_B_tau(tau)
        r = math.sqrt(tau * (1 - tau))
        res = [
            A.T @ J @ A - J,
            np.array([[np.linalg.det(A) - 1.0]]),
            A.T + A1,
            np.linalg.inv(A) + A,
            A1 @ A - (I2 - B),
            A.T @ np.linalg.inv(A) - (I2 - B),
            r * (A + A1) - J,
            r * (B @ A) - J,
        ]
        err = max(err, max(np.max(np.abs(x)) for x in res))
    err = max(err, np.max(np.abs(matrix_A_tau(0.5) - J)))
    return float(err)


def _chk_alpha_values(c: _Ctx):
    e = [abs(alpha(2, 2, 0.5) - 4.0), abs(alpha(2, 2, 0.5, d=2) - 16.0)]
    for tau in np.linspace(0.05, 0.95, 19):
        e.append(abs(alpha(1, INF, tau) - (1 - tau) ** -2) / (1 - tau) ** -2)
        e.append(abs(alpha(INF, 1, tau) - tau**-2) / tau**-2)
    near0 = [alpha(1, INF, t) for t in (1e-2, 1e-4, 1e-8)]
    near1 = [alpha(1, INF, 1 - t) for t in (1e-2, 1e-4, 1e-8)]
    inf0 = [alpha(INF, 1, t) for t in (1e-2, 1e-4, 1e-8)]
    limits_ok = (
        abs(near0[-1] - 1.0) < 1e-6
        and all(a < b for a, b in zip(near1, near1[1:]))
        and near1[-1] > 1e15
        and all(a < b for a, b in zip(inf0, inf0[1:]))
        and inf0[-1] > 1e15
    )
    return float(max(e)) if limits_ok else INF


def _chk_alpha_minimum(c: _Ctx):
    taus = np.linspace(0.01, 0.99, 99)
    vals = np.array([alpha(2, 2, t) for t in taus])
    at_half = np.isclose(taus, 0.5)
    bad = np.sum(vals[~at_half] <= 4.0) + np.sum(np.abs(vals[at_half] - 4.0) > 0)
    return float(bad)


def _chk_mixed_norm_gaussian(c: _Ctx):
    pg = PhaseGrid.dual(c.cgrid)
    X, Xi = pg.mesh()
    F = CField2D(pg, Phi(X, Xi))
    e = [
        abs(mixed_norm(F, MixedNormSpec(2, 2)) - 2**-0.5),
        abs(mixed_norm(F, MixedNormSpec(INF, INF)) - 1.0),
        abs(mixed_norm(F, MixedNormSpec(1, 1)) - 1.0),
        abs(mixed_norm(F, MixedNormSpec(1, 1, order="inner_xi")) - 1.0),
    ]
    return float(max(e))


def _weight_family():
    return [
        Weight.constant(),
        Weight.radial_poly(0.5),
        Weight.radial_poly(2),
        Weight.separable_poly(1, 2),
        Weight.separable_poly(0, 3),
        Weight.exponential(0.3),
        Weight.exponential(1.0),
    ]


def _chk_submultiplicative(c: _Ctx):
    rng = c.rng(10)
    worst = 0.0
    for v in _weight_family():
        z, w = rng.uniform(-20, 20, (2, 2, 1000))
        ratio = v(z[0] + w[0], z[1] + w[1]) / (v(*z) * v(*w))
        worst = max(worst, float(np.max(ratio)) - 1.0, abs(float(v(0.0, 0.0)) - 1.0))
        worst = max(worst, float(np.max(np.abs(v(-z[0], -z[1]) - v(*z)) / v(*z))))
    return max(worst, 0.0)


def _chk_moderate(c: _Ctx):
    rng = c.rng(11)
    worst = 0.0
    for v in _weight_family():
        m = v.reciprocal()
        x, y = rng.uniform(-20, 20, (2, 2, 1000))
        ratio = m(x[0] + y[0], x[1] + y[1]) / (v(*y) * m(*x))
        worst = max(worst, float(np.max(ratio)) - 1.0)
    return max(worst, 0.0)


def _chk_modulation_monotone(c: _Ctx):
    f = c.phi
    n11 = modulation_norm(f, c.phi, 1, 1)
    n22 = modulation_norm(f, c.phi, 2, 2)
    ninf = modulation_norm(f, c.phi, INF, INF)
    return float(max(0.0, n22 - n11, ninf - n22))


def _random_exponent_pair(rng):
    """``(p1, p2, r)`` with ``1/p1 + 1/p2 = 1 + 1/r``."""
    choices = [1.0, 1.25, 1.5, 2.0, 3.0, 4.0, INF]
    while True:
        p1, p2 = rng.choice(choices, 2)
        s = (0 if p1 == INF else 1 / p1) + (0 if p2 == INF else 1 / p2) - 1
        if s >= 0:
            return float(p1), float(p2), (INF if s == 0 else 1 / s)


def _random_weight(rng) -> Weight:
    k = int(rng.integers(0, 4))
    if k == 0:
        return Weight.constant()
    if k == 1:
        return Weight.radial_poly(float(rng.uniform(0, 2)))
    if k == 2:
        return Weight.separable_poly(float(rng.uniform(0, 2)), float(rng.uniform(0, 2)))
    return Weight.exponential(float(rng.uniform(0, 1)))


def _random_field(rng, shape):
    a = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return a * (rng.random(shape) < 0.7)


def _positions(origin, step, n):
    return origin + step * np.arange(n)


def young_mixed_trials(n_trials: int = 100, seed: int = 0) -> float:
    """Worst relative excess of ``||F*G||_{L^{r,s}_m}`` over ``||F||_{L^{p1,q1}_v} ||G||_{L^{p2,q2}_m}``."""
    rng = np.random.Generator(np.random.Philox(key=[seed, 100]))
    worst = -INF
    for _ in range(n_trials):
        p1, p2, r = _random_exponent_pair(rng)
        q1, q2, s = _random_exponent_pair(rng)
        v = _random_weight(rng)
        m = [v, v.reciprocal(), Weight.constant()][int(rng.integers(0, 3))]
        h = (float(rng.choice([0.25, 0.5])), float(rng.choice([0.25, 0.5])))
        sF = tuple(int(k) for k in rng.integers(3, 12, 2))
        sG = tuple(int(k) for k in rng.integers(3, 12, 2))
        oF = tuple(-h[i] * int(rng.integers(0, sF[i])) for i in range(2))
        oG = tuple(-h[i] * int(rng.integers(0, sG[i])) for i in range(2))
        F, G = _random_field(rng, sF), _random_field(rng, sG)
        H = convolve_fields(F, G, h[0] * h[1])

        def wt(weight, origin, shape):
            X, Y = np.meshgrid(_positions(origin[0], h[0], shape[0]), _positions(origin[1], h[1], shape[1]), indexing="ij")
            return weight(X, Y)

        oH = (oF[0] + oG[0], oF[1] + oG[1])
        lhs = mixed_norm_array(H, r, s, wt(m, oH, H.shape), h)
        rhs = mixed_norm_array(F, p1, q1, wt(v, oF, sF), h) * mixed_norm_array(G, p2, q2, wt(m, oG, sG), h)
        if rhs > 0:
            worst = max(worst, (lhs - rhs) / rhs)
    return worst


def young_4d_trials(n_trials: int = 100, seed: int = 0, n4: int = 16) -> tuple[float, float]:
    """Worst relative excess for the ``L^inf_z(L^1_{zeta,m})`` and ``L^2_{1 (x) m}`` convolution bounds."""
    rng = np.random.Generator(np.random.Philox(key=[seed, 200]))
    worst_inf, worst_two = -INF, -INF
    for _ in range(n_trials):
        v = _random_weight(rng)
        m = [v, v.reciprocal(), Weight.constant()][int(rng.integers(0, 3))]
        h = float(rng.choice([0.25, 0.5]))
        nf = int(rng.integers(4, n4 + 1))
        f = _random_field(rng, (nf,) * 4)
        g = _random_field(rng, (n4,) * 4)
        of = -h * (nf // 2)
        og = -h * (n4 // 2)
        fg = convolve_fields(f, g, h**4)
        zeta = lambda o, k: np.meshgrid(_positions(o, h, k), _positions(o, h, k), indexing="ij")
        vf = v(*zeta(of, nf))
        mg = m(*zeta(og, n4))
        mh = m(*zeta(of + og, fg.shape[-1]))
        cell2 = h**2
        f_l1v = float(np.sum(np.abs(f) * vf) * h**4)
        lhs_inf = linf_l1_array(fg, mh, cell2)
        rhs_inf = f_l1v * linf_l1_array(g, mg, cell2)
        lhs_two = float(lp_norm(fg * mh, 2, h**4))
        rhs_two = f_l1v * float(lp_norm(g * mg, 2, h**4))
        if rhs_inf > 0:
            worst_inf = max(worst_inf, (lhs_inf - rhs_inf) / rhs_inf)
        if rhs_two > 0:
            worst_two = max(worst_two, (lhs_two - rhs_two) / rhs_two)
    return worst_inf, worst_two


_YOUNG_CACHE: dict = {}


def _young4d(c: _Ctx):
    if c.seed not in _YOUNG_CACHE:
        _YOUNG_CACHE[c.seed] = young_4d_trials(100, c.seed)
    return _YOUNG_CACHE[c.seed]


def _chk_young_mixed(c: _Ctx):
    return young_mixed_trials(100, c.seed)


def _chk_young_linf(c: _Ctx):
    return _young4d(c)[0]


def _chk_young_l2(c: _Ctx):
    return _young4d(c)[1]


def _chk_wiener_modulation(c: _Ctx):
    g = c.cgrid
    f = gaussian_signal(g)
    win = gaussian_signal(g)
    fh, wh = fourier_transform(f), fourier_transform(win)
    err = 0.0
    for p, q in ((2.0, 2.0), (1.0, INF)):
        a = modulation_norm(f, win, p, q)
        b = wiener_amalgam_norm(fh, p, q, window=wh)
        err = max(err, abs(a - b) / a)
    return err


def _symbol_field(sym: Symbol, grid: Grid1D) -> CField2D:
    return sym.sample(PhaseGrid.dual(grid))


def _chk_symbol_wiener_gaussian(c: _Ctx):
    F = _symbol_field(make_symbol("gaussian"), c.cfg.symbol_grid())
    w = symbol_norm(F, 2, 2, order="inner_zeta")
    m = symbol_norm(F, 2, 2, order="inner_z")
    sup = symbol_norm(F, INF, INF)
    e = [abs(w - m) / m, abs(w - 0.5) / 0.5, abs(sup - 0.5) / 0.5]
    return float(max(e))


def _gauss_symbol():
    return make_symbol("gaussian")


def _chk_identity_symbol(c: _Ctx):
    one = Symbol.constant(1.0)
    err = 0.0
    for tau in c.taus:
        K = build_kernel(one, tau, c.grid)
        for f in (c.phi, c.h1):
            err = max(err, _l2rel(K.apply(f), f))
    return err


def _l2rel(a: CSignal, b: CSignal) -> float:
    return float(np.linalg.norm(a.samples - b.samples) / np.linalg.norm(b.samples))


def _chk_multiplication(c: _Ctx):
    sig = lambda x: np.exp(-np.pi * x**2 / 4)
    a = Symbol(lambda x, xi: sig(x) * np.ones_like(xi))
    err = 0.0
    for tau in c.taus:
        K = build_kernel(a, tau, c.grid)
        for f in (c.g2, c.h1):
            err = max(err, _l2rel(K.apply(f), CSignal(c.grid, sig(c.grid.points) * f.samples)))
    return err


def _chk_fourier_multiplier(c: _Ctx):
    sig = lambda xi: np.exp(-np.pi * xi**2 / 2) * (1 + 0.5j * xi)
    a = Symbol(lambda x, xi: sig(xi) * np.ones_like(x))
    err = 0.0
    for tau in c.taus:
        K = build_kernel(a, tau, c.grid)
        for f in (c.g2, c.h1):
            fh = fourier_transform(f)
            ref = inverse_fourier(CSignal(fh.grid, sig(fh.grid.points) * fh.samples), f.grid)
            err = max(err, _l2rel(K.apply(f), ref))
    return err


def _chk_kn_agreement(c: _Ctx):
    a = _gauss_symbol()
    K = build_kernel(a, 0.0, c.grid)
    err = 0.0
    for f in (c.phi, c.g2, c.h1):
        err = max(err, _l2rel(K.apply(f), op_kohn_nirenberg(a, f)))
    return err


def _chk_weak_pairing(c: _Ctx):
    a = _gauss_symbol()
    one = Symbol.constant(1.0)
    err = 0.0
    for tau in c.taus:
        K = build_kernel(a, tau, c.grid)
        err = max(err, weak_pairing_residual(a, tau, c.phi, c.phi, K))
        err = max(err, weak_pairing_residual(a, tau, c.g2, c.h1, K))
    for tau in (0.0, 0.5, 1.0):
        err = max(err, weak_pairing_residual(one, tau, c.g3, c.h2))
    return err


def _chk_rank_one(c: _Ctx):
    pg = PhaseGrid.dual(c.grid)
    err = 0.0
    for tau in c.taus:
        for u, v in ((c.phi, c.phi), (c.g2, c.h1)):
            a = Symbol(samples=tau_wigner(u, v, tau, pg))
            K = build_kernel(a, tau, c.grid, method="table")
            for f in (c.g3, c.h2):
                ref = u.scaled(inner_product(f, v))
                err = max(err, _l2rel(K.apply(f), ref) if ref.norm() > 1e-8 else K.apply(f).norm())
    return err


def _chk_cross_quantization(c: _Ctx):
    a = _gauss_symbol()
    err = 0.0
    for tau in np.round(np.linspace(0.1, 0.9, 9), 10):
        Kq = build_kernel(a, tau, c.grid, method="quadrature").entries
        Kt = build_kernel(a, tau, c.grid, method="table").entries
        err = max(err, np.linalg.norm(Kq - Kt) / np.linalg.norm(Kq))
    return float(err)


def _chk_conversion_equivalence(c: _Ctx):
    grid = Grid1D.from_length(c.cfg.l, 128)
    pg = PhaseGrid.dual(grid)
    a = _gauss_symbol()
    a0 = convert_symbol(a, 0.5, 0.0, pg)
    K0 = build_kernel(a0, 0.0, grid).entries
    Kh = build_kernel(a, 0.5, grid).entries
    return float(np.linalg.norm(K0 - Kh) / np.linalg.norm(Kh))


def _chk_conversion_semigroup(c: _Ctx):
    pg = PhaseGrid.dual(c.grid)
    a = _gauss_symbol()
    err = 0.0
    for t1, t2, t3 in ((0.5, 0.0, 1.0), (0.2, 0.7, 0.4), (1.0, 0.3, 0.5)):
        two = convert_symbol(convert_symbol(a, t1, t2, pg), t2, t3)
        one = convert_symbol(a, t1, t3, pg)
        err = max(err, np.max(np.abs(two.samples.values - one.samples.values)))
    same = convert_symbol(a, 0.3, 0.3, pg).samples.values
    err = max(err, np.max(np.abs(same - a.sample(pg).values)))
    return float(err)


def chirp_ft_error(t: float = 1.0, eps: float = 0.008, n: int = 2048, length: float = 45.0, zmax: float = 0.35) -> float:
    """Relative error of ``F H_t = t^-1 exp(-2 pi i s1 s2 / t)`` against the FFT of a windowed chirp.

    ``H_t`` is damped by ``exp(-pi eps (x^2 + xi^2))``; the comparison uses
    interior frequencies ``|s_i| <= zmax`` where the damping bias is below 1%.
    """
    g = Grid1D.from_length(length, n)
    x = g.points
    X, Xi = np.meshgrid(x, x, indexing="ij")
    H = np.exp(2j * np.pi * t * X * Xi - np.pi * eps * (X**2 + Xi**2))
    d = make_dual_grid(g)
    Hh = fourier_sum(fourier_sum(H, g, d, -1, axis=0), g, d, -1, axis=1)
    s = d.points
    sel = np.abs(s) <= zmax
    S1, S2 = np.meshgrid(s[sel], s[sel], indexing="ij")
    exact = np.exp(-2j * np.pi * S1 * S2 / t) / t
    return float(np.max(np.abs(Hh[np.ix_(sel, sel)] - exact)) / np.max(np.abs(exact)))


def _chk_chirp(c: _Ctx):
    return chirp_ft_error()


def _chk_adjoint_real(c: _Ctx):
    return max(adjoint_residual(_gauss_symbol(), c.grid), adjoint_residual(Symbol.constant(1.0), c.grid))


def _chk_adjoint_counterexample(c: _Ctx):
    return adjoint_residual(make_symbol("counterexample"), Grid1D.from_length(c.cfg.l, c.cfg.n, shifted=True))


def _chk_l2_identity(c: _Ctx):
    err = abs(l2_operator_norm(build_kernel(Symbol.constant(1.0), 0.5, c.grid)) - 1.0)
    K = build_kernel(_gauss_symbol(), 0.3, c.grid)
    err = max(err, abs(l2_operator_norm(K.scaled(3.0)) - 3 * l2_operator_norm(K)) / (3 * l2_operator_norm(K)))
    return float(err)


def _chk_l2_rank_one(c: _Ctx):
    pg = PhaseGrid.dual(c.grid)
    u = c.phi.scaled(1 / c.phi.norm())
    err = 0.0
    for tau in (0.0, 0.25, 0.5, 0.75, 1.0):
        K = build_kernel(Symbol(samples=tau_wigner(u, u, tau, pg)), tau, c.grid, method="table")
        err = max(err, abs(l2_operator_norm(K) - 1.0))
    return err


def _chk_probe_identity(c: _Ctx):
    lb = modulation_operator_norm_lower(Symbol.constant(1.0), 0.5, 2, 2, grid=c.grid, extent=1, seed=c.seed)
    return abs(lb - 1.0)


def _chk_probe_rank_one(c: _Ctx):
    pg = PhaseGrid.dual(c.grid)
    a = Symbol(samples=tau_wigner(c.phi, c.phi, 0.5, pg))
    K = build_kernel(a, 0.5, c.grid, method="table")
    lb = modulation_operator_norm_lower(a, 0.5, 2, 2, K=K, extent=1, seed=c.seed)
    target = 2**-0.5
    return float(max(0.0, lb - target - 1e-13, 0.99 * target - lb))


# name -> (function, group)
CHECKS: dict[str, tuple[Callable[[_Ctx], float], str]] = {
    "parseval": (_chk_parseval, "core"),
    "fourier_reflection": (_chk_fourier_reflection, "core"),
    "inverse_roundtrip": (_chk_inverse_roundtrip, "core"),
    "resample_on_grid": (_chk_resample_on_grid, "core"),
    "resample_sampled": (_chk_resample_sampled, "core"),
    "moyal": (_chk_moyal, "identities"),
    "covariance": (_chk_covariance, "identities"),
    "conjugation_symmetry": (_chk_conjugation, "identities"),
    "fourier_covariance": (_chk_fourier_covariance, "identities"),
    "orthogonality": (_chk_orthogonality, "identities"),
    "fundamental_identity": (_chk_fundamental_identity, "identities"),
    "stft_tfshift": (_chk_stft_tfshift, "identities"),
    "stft_gaussian": (_chk_stft_gaussian, "tfr"),
    "change_of_window": (_chk_change_of_window, "tfr"),
    "commutation": (_chk_commutation, "tfr"),
    "a_tau_algebra": (_chk_a_tau_algebra, "tfr"),
    "wigner_via_stft": (_chk_wigner_via_stft, "tfr"),
    "rihaczek_forms": (_chk_rihaczek, "tfr"),
    "stft_wigner_factorization": (_chk_factorization, "factorization"),
    "symplectic_form": (_chk_symplectic_form, "factorization"),
    "gaussian_wigner_closed": (_chk_gaussian_wigner_closed, "gaussian"),
    "stft_gen_gaussian": (_chk_stft_gen_gaussian, "gaussian"),
    "gen_gaussian_symmetry": (_chk_gen_gaussian_symmetry, "gaussian"),
    "gaussian_magnitude_oracle": (_chk_gaussian_magnitude, "gaussian"),
    "amplitude_constant": (_chk_amplitude, "gaussian"),
    "gaussian_window_l1_spread": (_chk_gaussian_l1_spread, "gaussian"),
    "wigner_gaussian_l2": (_chk_wigner_gaussian_l2, "gaussian"),
    "symplectic_lemma": (_chk_symplectic_lemma, "symplectic"),
    "alpha_values": (_chk_alpha_values, "alpha"),
    "alpha_minimum": (_chk_alpha_minimum, "alpha"),
    "mixed_norm_gaussian": (_chk_mixed_norm_gaussian, "spaces"),
    "weight_submultiplicative": (_chk_submultiplicative, "spaces"),
    "weight_moderate": (_chk_moderate, "spaces"),
    "modulation_monotone": (_chk_modulation_monotone, "spaces"),
    "young_mixed": (_chk_young_mixed, "young"),
    "young_linf_l1": (_chk_young_linf, "young"),
    "young_l2": (_chk_young_l2, "young"),
    "wiener_modulation": (_chk_wiener_modulation, "young"),
    "symbol_wiener_gaussian": (_chk_symbol_wiener_gaussian, "spaces"),
    "identity_symbol": (_chk_identity_symbol, "operators"),
    "multiplication_symbol": (_chk_multiplication, "operators"),
    "fourier_multiplier": (_chk_fourier_multiplier, "operators"),
    "kn_agreement": (_chk_kn_agreement, "operators"),
    "weak_pairing": (_chk_weak_pairing, "operators"),
    "rank_one": (_chk_rank_one, "operators"),
    "cross_quantization": (_chk_cross_quantization, "operators"),
    "conversion_equivalence": (_chk_conversion_equivalence, "operators"),
    "conversion_semigroup": (_chk_conversion_semigroup, "operators"),
    "chirp_ft": (_chk_chirp, "operators"),
    "adjoint_real": (_chk_adjoint_real, "operators"),
    "adjoint_counterexample": (_chk_adjoint_counterexample, "operators"),
    "l2_norm_identity": (_chk_l2_identity, "norm_estimates"),
    "l2_norm_rank_one": (_chk_l2_rank_one, "norm_estimates"),
    "probe_lower_identity": (_chk_probe_identity, "norm_estimates"),
    "probe_lower_rank_one": (_chk_probe_rank_one, "norm_estimates"),
}


def run_checks(cfg: ExperimentConfig, names: Optional[Iterable[str]] = None, groups: Optional[Iterable[str]] = None) -> RunSummary:
    """Run the named checks (default: all) and collect a :class:`RunSummary`."""
    ctx = _Ctx(cfg)
    selected = list(CHECKS) if names is None else list(names)
    if groups is not None:
        gs = set(groups)
        selected = [n for n in selected if CHECKS[n][1] in gs]
    summary = RunSummary(cfg)
    t0 = time.perf_counter()
    for name in selected:
        fn, _ = CHECKS[name]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            try:
                value = float(fn(ctx))
            except FloatingPointError:
                value = INF
        summary.add(CheckResult(name, value, float(cfg.tolerances[name])))
    summary.metadata["runtime_s"] = f"{time.perf_counter() - t0:.3f}"
    summary.metadata["tau_list"] = ",".join(repr(t) for t in ctx.taus)
    return summary


def cmd_verify(cfg: ExperimentConfig, out_dir=None, names=None) -> RunSummary:
    summary = run_checks(cfg, names)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(out / "verify.csv", *summary.csv_rows())
        summary.write(out / "verify_summary.txt")
    return summary


# --- scaling ------------------------------------------------------------------


def admissible(p: float, q: float, r1: float, r2: float) -> bool:
    """``q <= p'`` and ``max(r1, r2, r1', r2') <= p``."""
    rs = [r1, r2, conjugate_exponent(r1), conjugate_exponent(r2)]
    return q <= conjugate_exponent(p) and max(rs) <= p


def symbol_wiener_norm(sym: Symbol, cfg: ExperimentConfig) -> float:
    F = _symbol_field(sym, cfg.symbol_grid())
    return symbol_norm(F, cfg.symbol_p, cfg.symbol_q, order="inner_zeta")


def cmd_scaling(cfg: ExperimentConfig, taus=None):
    """Rows ``tau, alpha, norm_lower, symbol_norm, ratio, admissible, config_hash``."""
    taus = sorted(t for t in (cfg.scaling_taus if taus is None else taus) if 0 < t < 1)
    sym = make_symbol(cfg.symbol)
    grid = cfg.grid()
    m = parse_weight(cfg.weight)
    ok = admissible(cfg.symbol_p, cfg.symbol_q, cfg.r1, cfg.r2)
    if not ok:
        warnings.warn("symbol exponents outside the admissible range; rows computed anyway")
    snorm = symbol_wiener_norm(sym, cfg)
    h = cfg.hash()
    rows = []
    for tau in taus:
        a_ = alpha(cfg.r1, cfg.r2, tau)
        lb = modulation_operator_norm_lower(
            sym, tau, cfg.r1, cfg.r2, m, cfg.n_random, grid=grid, extent=cfg.probe_extent, seed=cfg.seed
        )
        ratio = lb / (a_ * snorm) if snorm > 0 else 0.0
        rows.append([float(tau), a_, lb, snorm, ratio, int(ok), h])
    header = ["tau", "alpha", "norm_lower", "symbol_norm", "ratio", "admissible", "config_hash"]
    return header, rows


def scaling_summary(rows) -> dict:
    ratios = np.array([r[4] for r in rows])
    lbs = np.array([r[2] for r in rows])
    pos = ratios[ratios > 0]
    spread = float(pos.max() / pos.min()) if pos.size else 0.0
    l2_spread = float((lbs.max() - lbs.min()) / lbs.max()) if lbs.size and lbs.max() > 0 else 0.0
    return {"ratio_max": float(ratios.max()) if ratios.size else 0.0, "ratio_spread": spread, "norm_lower_spread": l2_spread}


# --- counterexample ---------------------------------------------------------


def counterexample_closed_form(x):
    """``Op_0(a) phi(x) = 2^{-1/2} x^{-1/2} exp(-pi x^2 / 2)`` on ``(0, 1]``."""
    x = np.asarray(x, float)
    inside = (x > 0) & (x <= 1)
    safe = np.where(inside, x, 1.0)
    return np.where(inside, 2**-0.5 * safe**-0.5 * np.exp(-np.pi * safe**2 / 2), 0.0)


def _log_nodes(eps: float, n: int = 64):
    """Gauss-Legendre nodes in ``s = ln x`` on ``[ln eps, 0]`` and weights for ``dx``."""
    s, w = np.polynomial.legendre.leggauss(n)
    a, b = math.log(eps), 0.0
    s = 0.5 * (b - a) * s + 0.5 * (b + a)
    x = np.exp(s)
    return x, 0.5 * (b - a) * w * x


def cmd_counterexample(cfg: ExperimentConfig, n_nodes: int = 64):
    """Partial ``L^2([eps, 1])`` norms of ``Op_0(a) phi`` for the singular symbol.

    Columns: ``epsilon, partial_l2_sq, log_inv_eps, closed_form,
    anti_kn_pairing, grid_partial_l2_sq, below_resolution, config_hash``.
    ``anti_kn_pairing`` is ``<a, W_1(phi, g_eps)>`` with ``g_eps`` the
    truncated closed form, i.e. ``<Op_1(a) g_eps, phi>`` computed on the
    phase plane; it equals ``partial_l2_sq`` by the adjoint relation.
    """
    grid = Grid1D.from_length(cfg.l, cfg.n, shifted=True)
    a = make_symbol("counterexample")
    phi = gaussian_signal(grid)
    phih = fourier_transform(phi)
    xi, eta = phih.grid.points, phih.grid.step
    K = build_kernel(a, 0.0, grid)
    kphi = K.apply(phi).samples
    h = cfg.hash()
    rows = []
    for eps in sorted(cfg.epsilons, reverse=True):
        x, w = _log_nodes(eps, n_nodes)
        num = op_kohn_nirenberg(a, phi, points=x)
        partial = float(np.sum(np.abs(num) ** 2 * w))
        closed = float(np.sum(counterexample_closed_form(x) ** 2 * w))
        # <a, W_1(phi, g)> = int int a(x, xi) e^{-2 pi i x xi} g(x) conj(phi^(xi)) dx dxi
        g_eps = counterexample_closed_form(x)
        inner_xi = (np.exp(-np.pi * xi**2)[None, :] * np.exp(-2j * np.pi * np.outer(x, xi))) @ np.conj(phih.samples) * eta
        pairing = complex(np.sum(x**-0.5 * g_eps * inner_xi * w))
        pts = grid.points
        sel = (pts >= eps) & (pts <= 1)
        grid_partial = float(np.sum(np.abs(kphi[sel]) ** 2) * grid.step)
        rows.append([eps, partial, math.log(1 / eps), closed, pairing.real, grid_partial, int(eps < grid.step / 2), h])
    header = [
        "epsilon",
        "partial_l2_sq",
        "log_inv_eps",
        "closed_form",
        "anti_kn_pairing",
        "grid_partial_l2_sq",
        "below_resolution",
        "config_hash",
    ]
    return header, rows


def counterexample_closed_form_error(cfg: ExperimentConfig, n: int = 200) -> float:
    grid = Grid1D.from_length(cfg.l, cfg.n, shifted=True)
    x = np.linspace(0.1, 1.0, n)
    num = op_kohn_nirenberg(make_symbol("counterexample"), gaussian_signal(grid), points=x)
    ref = counterexample_closed_form(x)
    return float(np.max(np.abs(num - ref) / np.abs(ref)))


def counterexample_summary(rows) -> dict:
    logs = np.array([r[2] for r in rows])
    vals = np.array([r[1] for r in rows])
    slope = float(np.polyfit(logs, vals, 1)[0]) if len(rows) > 1 else float("nan")
    pair_err = max(abs(r[4] - r[1]) / r[1] for r in rows) if rows else 0.0
    closed_err = max(abs(r[1] - r[3]) / r[3] for r in rows) if rows else 0.0
    return {"slope": slope, "pairing_rel_err": pair_err, "closed_form_rel_err": closed_err}


# --- norms of tau-Wigner distributions -----------------------------------------


def cmd_norms(cfg: ExperimentConfig, z_stride: int = 1):
    """Wiener and modulation norms of ``W_tau(g, f)`` over ``tau`` on the symbol grid.

    Columns: ``tau, pair, w_fl1_linf, w_fl2_l2, m_pq, norm_product, alpha,
    ratio_fl1_linf, ratio_fl2_l2, ratio_m_pq, ratio_fl1_alpha, config_hash``.
    Weights: ``1/v_J`` on ``zeta`` with ``v`` from ``space.weight``.
    """
    grid = cfg.symbol_grid()
    v = parse_weight(cfg.weight)
    u = compose_with_J(v).reciprocal()
    phi = gaussian_signal(grid)
    pairs = {"phi,phi": (phi, phi), "phi,h1": (phi, hermite_signal(grid, 1))}
    h = cfg.hash()
    rows = []
    for tau in sorted(cfg.tau_list):
        for label, (f, g) in pairs.items():
            W = tau_wigner(g, f, tau)
            n1 = symbol_norm(W, 1, INF, zeta_weight=u, order="inner_zeta", z_stride=z_stride)
            n2 = symbol_norm(W, 2, 2, zeta_weight=u, order="inner_zeta", z_stride=z_stride)
            nm = symbol_norm(W, cfg.norms_p, cfg.norms_q, zeta_weight=u, order="inner_z", z_stride=z_stride)
            prod = f.norm() * g.norm()
            al = alpha(cfg.r1, cfg.r2, tau) if 0 < tau < 1 else float("nan")
            rows.append([float(tau), label, n1, n2, nm, prod, al, n1 / prod, n2 / prod, nm / prod, n1 / (al * prod), h])
    header = [
        "tau",
        "pair",
        "w_fl1_linf",
        "w_fl2_l2",
        "m_pq",
        "norm_product",
        "alpha",
        "ratio_fl1_linf",
        "ratio_fl2_l2",
        "ratio_m_pq",
        "ratio_fl1_alpha",
        "config_hash",
    ]
    return header, rows


def norms_summary(rows) -> dict:
    out = {}
    for col, name in ((8, "ratio_fl2_l2"), (7, "ratio_fl1_linf"), (9, "ratio_m_pq")):
        vals = np.array([r[col] for r in rows])
        out[f"{name}_spread"] = float((vals.max() - vals.min()) / vals.max()) if vals.size else 0.0
    inner = np.array([r[10] for r in rows if 0.1 - 1e-12 <= r[0] <= 0.9 + 1e-12])
    out["ratio_fl1_alpha_max"] = float(inner.max()) if inner.size else float("nan")
    return out


# --- conversion utility -------------------------------------------------------


def cmd_convert(cfg: ExperimentConfig, tau1: float, tau2: float):
    """Samples of the converted symbol: ``x, xi, re, im, config_hash``."""
    grid = cfg.grid().centered()
    pg = PhaseGrid.dual(grid)
    out = convert_symbol(make_symbol(cfg.symbol), tau1, tau2, pg).samples
    X, Xi = pg.mesh()
    h = cfg.hash()
    v = out.values
    rows = [[X[i, j], Xi[i, j], v[i, j].real, v[i, j].imag, h] for i in range(v.shape[0]) for j in range(v.shape[1])]
    return ["x", "xi", "re", "im", "config_hash"], rows
