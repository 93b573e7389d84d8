"""Discretized tau-Wigner distributions and tau-pseudodifferential operators."""

from .gaussians import (
    GenGaussianParams,
    Phi,
    gen_gaussian,
    phi,
    stft_gen_gaussian_closed,
    stft_wigner_gaussian_magnitude,
    tau_wigner_gaussian_closed,
    uniform_window_amplitude,
    wigner_gaussian_params,
)
from .grid import (
    CField2D,
    CSignal,
    Grid1D,
    PhaseGrid,
    evaluate,
    fourier_transform,
    gaussian_signal,
    hermite_signal,
    inner_product,
    inverse_fourier,
    make_dual_grid,
    resample,
)
from .operators import (
    OperatorMatrix,
    Symbol,
    adjoint_residual,
    build_kernel,
    convert_symbol,
    l2_operator_norm,
    modulation_operator_norm_lower,
    op_kohn_nirenberg,
    op_weyl,
    weak_pairing_residual,
)
from .spaces import (
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
from .tfr import (
    TFShift,
    a_tau_operator,
    matrix_A_tau,
    matrix_B_tau,
    stft,
    stft_of_wigner_closed,
    tau_wigner,
    tf_shift,
    wigner_via_stft,
)

__version__ = "0.1.0"

__all__ = [
    "GenGaussianParams",
    "Phi",
    "gen_gaussian",
    "phi",
    "stft_gen_gaussian_closed",
    "stft_wigner_gaussian_magnitude",
    "tau_wigner_gaussian_closed",
    "uniform_window_amplitude",
    "wigner_gaussian_params",
    "CField2D",
    "CSignal",
    "Grid1D",
    "PhaseGrid",
    "evaluate",
    "fourier_transform",
    "gaussian_signal",
    "hermite_signal",
    "inner_product",
    "inverse_fourier",
    "make_dual_grid",
    "resample",
    "OperatorMatrix",
    "Symbol",
    "adjoint_residual",
    "build_kernel",
    "convert_symbol",
    "l2_operator_norm",
    "modulation_operator_norm_lower",
    "op_kohn_nirenberg",
    "op_weyl",
    "weak_pairing_residual",
    "MixedNormSpec",
    "PhaseField4D",
    "Weight",
    "alpha",
    "compose_with_J",
    "linf_l1_norm",
    "mixed_norm",
    "modulation_norm",
    "symbol_norm",
    "weight_eval",
    "wiener_amalgam_norm",
    "TFShift",
    "a_tau_operator",
    "matrix_A_tau",
    "matrix_B_tau",
    "stft",
    "stft_of_wigner_closed",
    "tau_wigner",
    "tf_shift",
    "wigner_via_stft",
]
