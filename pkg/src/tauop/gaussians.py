"""Closed forms for generalized Gaussians on the phase plane (d = 1)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "GenGaussianParams",
    "gen_gaussian",
    "stft_gen_gaussian_closed",
    "wigner_gaussian_params",
    "tau_wigner_gaussian_closed",
    "stft_wigner_gaussian_magnitude",
    "uniform_window_amplitude",
    "phi",
    "Phi",
]


@dataclass(frozen=True)
class GenGaussianParams:
    """``exp(-pi a x^2) exp(-pi b xi^2) exp(2 pi i c x xi)``; ``c`` may have either sign."""

    a: float
    b: float
    c: float = 0.0

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError("a and b must be positive")


def phi(t):
    return np.exp(-np.pi * np.asarray(t, float) ** 2)


def Phi(x, xi):
    """The standard window ``exp(-pi (x^2 + xi^2))`` on the phase plane."""
    return np.exp(-np.pi * (np.asarray(x, float) ** 2 + np.asarray(xi, float) ** 2))


def gen_gaussian(p: GenGaussianParams, x, xi):
    x, xi = np.asarray(x, float), np.asarray(xi, float)
    return np.exp(-np.pi * p.a * x**2 - np.pi * p.b * xi**2 + 2j * np.pi * p.c * x * xi)


def stft_gen_gaussian_closed(p: GenGaussianParams, z, zeta):
    """``V_Phi f_{a,b,c}(z, zeta)`` with window ``Phi``.

    The Gaussian integral gives, with ``D = (a+1)(b+1) + c^2``,

        D^{-1/2} exp(-pi Q / D) exp(2 pi i P / D),
        Q = [a(b+1)+c^2] z1^2 + [(a+1)b+c^2] z2^2 + (b+1) s1^2 + (a+1) s2^2
            - 2c (z1 s2 + z2 s1),
        P = c (z1 z2 - s1 s2) - (b+1) z1 s1 - (a+1) z2 s2.
    """
    a, b, c = p.a, p.b, p.c
    z1, z2 = (np.asarray(v, float) for v in z)
    s1, s2 = (np.asarray(v, float) for v in zeta)
    D = (a + 1) * (b + 1) + c**2
    Q = (
        (a * (b + 1) + c**2) * z1**2
        + ((a + 1) * b + c**2) * z2**2
        + (b + 1) * s1**2
        + (a + 1) * s2**2
        - 2 * c * (z1 * s2 + z2 * s1)
    )
    P = c * (z1 * z2 - s1 * s2) - (b + 1) * z1 * s1 - (a + 1) * z2 * s2
    return D**-0.5 * np.exp(-np.pi * Q / D) * np.exp(2j * np.pi * P / D)


def _c_of_tau(tau):
    return 2 * tau**2 - 2 * tau + 1


def wigner_gaussian_params(tau: float) -> tuple[float, GenGaussianParams]:
    """``W_tau(phi) = amp * f_{a,b,c}`` with ``a = b = 1/c(tau)``, ``c = (2 tau - 1)/c(tau)``."""
    if not 0 <= tau <= 1:
        raise ValueError("tau must lie in [0, 1]")
    ct = _c_of_tau(tau)
    return ct**-0.5, GenGaussianParams(1 / ct, 1 / ct, (2 * tau - 1) / ct)


def tau_wigner_gaussian_closed(tau: float, x, xi):
    amp, p = wigner_gaussian_params(tau)
    return amp * gen_gaussian(p, x, xi)


def stft_wigner_gaussian_magnitude(tau: float, z, zeta):
    """``|V_Phi W_tau(phi)|(z, zeta)``."""
    if not 0 <= tau <= 1:
        raise ValueError("tau must lie in [0, 1]")
    z1, z2 = (np.asarray(v, float) for v in z)
    s1, s2 = (np.asarray(v, float) for v in zeta)
    den = 2 * tau**2 - 2 * tau + 5
    q = 3 * (z1**2 + z2**2) + (2 * tau**2 - 2 * tau + 2) * (s1**2 + s2**2) + (2 - 4 * tau) * (
        z1 * s2 + z2 * s1
    )
    return den**-0.5 * np.exp(-np.pi * q / den)


def uniform_window_amplitude(d: int = 1) -> float:
    """``max_tau (2 tau^2 - 2 tau + 5)^{-d/2}``, attained at ``tau = 1/2``; equals ``(2/9)^{d/2}``."""
    return (2.0 / 9.0) ** (d / 2)
