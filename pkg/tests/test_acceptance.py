"""Acceptance criteria 1-10 on the default grid (N = 256, L = 16).

Each test prints one ``PASS``/``FAIL`` line with the measured value and the
tolerance, then asserts.  Run directly with ``python3 tests/test_acceptance.py``
for the summary lines alone.
"""
import contextlib
import io
import math
import sys
import time

import numpy as np
import pytest

from tauop import experiments as ex
from tauop.experiments import ExperimentConfig
from tauop.gaussians import uniform_window_amplitude
from tauop.grid import gaussian_signal
from tauop.spaces import alpha, symbol_norm
from tauop.tfr import tau_wigner

CFG = ExperimentConfig()
TOL = CFG.tolerances


def report(num, label, value, tol, ok, capsys=None):
    line = f"{'PASS' if ok else 'FAIL'} criterion {num:>2}: {label} = {value:.3e} (tol {tol:.1e})"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    return ok


def _checks(names):
    s = ex.run_checks(CFG, names)
    return s, {c.name: c for c in s.checks}


def criterion_checks(num, names, capsys=None, max_runtime=None):
    t0 = time.perf_counter()
    s, by = _checks(names)
    dt = time.perf_counter() - t0
    ok = True
    for n in names:
        c = by[n]
        ok &= report(num, n, c.value, c.threshold, c.passed, capsys)
    if max_runtime is not None:
        ok &= report(num, "runtime_s", dt, max_runtime, dt < max_runtime, capsys)
    return ok


def c1(capsys=None):
    names = ["moyal", "covariance", "conjugation_symmetry", "fourier_covariance", "orthogonality",
             "fundamental_identity", "stft_tfshift"]
    return criterion_checks(1, names, capsys, max_runtime=60.0)


def c2(capsys=None):
    return criterion_checks(2, ["stft_wigner_factorization"], capsys)


def c3(capsys=None):
    ok = criterion_checks(3, ["gaussian_wigner_closed", "stft_gen_gaussian", "gaussian_magnitude_oracle", "amplitude_constant"], capsys)
    amp = uniform_window_amplitude(1)
    err = abs(amp - math.sqrt(2 / 9))
    return report(3, "amplitude (2/9)^(1/2)", err, 1e-15, err <= 1e-15, capsys) and ok


def c4(capsys=None):
    return criterion_checks(4, ["symplectic_lemma"], capsys)


def c5(capsys=None):
    ok = criterion_checks(5, ["alpha_values", "alpha_minimum"], capsys)
    exact = alpha(2, 2, 0.5) == 4.0
    return report(5, "alpha_22(1/2) - 4", abs(alpha(2, 2, 0.5) - 4.0), 0.0, exact, capsys) and ok


def c6(capsys=None):
    names = ["identity_symbol", "multiplication_symbol", "fourier_multiplier", "weak_pairing", "rank_one",
             "conversion_equivalence", "adjoint_real"]
    return criterion_checks(6, names, capsys)


def c7(capsys=None):
    _, rows = ex.cmd_scaling(CFG)
    s = ex.scaling_summary(rows)
    ok = report(7, "alpha ratio max/min", s["ratio_spread"], TOL["scaling_spread"], s["ratio_spread"] < TOL["scaling_spread"], capsys)
    ok &= report(7, "M2 lower-bound spread", s["norm_lower_spread"], TOL["l2_uniform_spread"],
                 s["norm_lower_spread"] < TOL["l2_uniform_spread"], capsys)
    # uniform L2 estimate for W_tau(phi, phi) in W(FL2, L2) on the symbol grid
    g = CFG.symbol_grid()
    phi = gaussian_signal(g)
    r = np.array([symbol_norm(tau_wigner(phi, phi, t), 2, 2) / phi.norm() ** 2 for t in CFG.tau_list])
    spread = float((r.max() - r.min()) / r.max())
    ok &= report(7, "W(FL2,L2) ratio spread", spread, TOL["l2_uniform_spread"], spread < TOL["l2_uniform_spread"], capsys)
    return ok


def c8(capsys=None):
    t0 = time.perf_counter()
    _, rows = ex.cmd_counterexample(CFG)
    s = ex.counterexample_summary(rows)
    err = ex.counterexample_closed_form_error(CFG)
    dt = time.perf_counter() - t0
    ok = report(8, "closed form rel err on [0.1,1]", err, TOL["counterexample_closed_form"], err < TOL["counterexample_closed_form"], capsys)
    dev = abs(s["slope"] - 0.5)
    ok &= report(8, f"|slope - 0.5| (slope {s['slope']:.4f})", dev, TOL["counterexample_slope"], dev <= TOL["counterexample_slope"], capsys)
    ok &= report(8, "runtime_s", dt, 120.0, dt < 120.0, capsys)
    return ok


def c9(capsys=None):
    return criterion_checks(9, ["young_mixed", "young_linf_l1", "young_l2", "wiener_modulation"], capsys)


def c10(capsys=None, tmp=None):
    import tempfile
    from pathlib import Path

    from tauop import cli

    base = Path(tempfile.mkdtemp() if tmp is None else tmp)
    cfgfile = base / "repro.cfg"
    cfgfile.write_text("scaling.tau_list = 0.25,0.5,0.75\nprobes.n_random = 3\nprobes.seed = 11\n")
    same = True
    for cmd, extra in (("verify", ["--check", "young_mixed", "--check", "young_l2"]), ("scaling", []), ("counterexample", [])):
        bodies = []
        for run in ("a", "b"):
            out = base / run / cmd
            with contextlib.redirect_stdout(io.StringIO()):
                cli.main([cmd, "--config", str(cfgfile), "--out", str(out)] + extra)
            bodies.append((out / f"{cmd}.csv").read_bytes())
        same &= bodies[0] == bodies[1]
    return report(10, "differing CSV bodies", 0.0 if same else 1.0, 0.0, same, capsys)


CRITERIA = [c1, c2, c3, c4, c5, c6, c7, c8, c9]


@pytest.mark.parametrize("crit", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 10)])
def test_criterion(crit, capsys):
    assert crit(capsys)


def test_criterion_10(capsys, tmp_path):
    assert c10(capsys, tmp_path)


if __name__ == "__main__":
    results = [c() for c in CRITERIA] + [c10()]
    sys.exit(0 if all(results) else 1)
