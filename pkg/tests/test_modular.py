import cmath

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from pullback import modular
from pullback.errors import ConvergenceFailure, OutOfModel
from pullback.modular import (gamma2_words, in_gamma2_domain, inverse_lambda, lambda_and_derivative,
                              modular_lambda, reduce_gamma2, reduce_sl2z)
from pullback.moebius import INF

mp.mp.dps = 40


def mp_lambda(tau):
    """Oracle: theta quotient in mpmath, no reduction."""
    q = mp.exp(1j * mp.pi * mp.mpc(tau))
    return (mp.jtheta(2, 0, q) / mp.jtheta(3, 0, q)) ** 4


def test_lambda_at_i():
    assert abs(modular_lambda(1j) - 0.5) < 1e-10
    assert abs(complex(mp_lambda(1j)) - 0.5) < 1e-30


def test_lambda_transformations():
    lam = modular_lambda(1j)
    assert abs(modular_lambda(1 + 1j) - lam / (lam - 1)) < 1e-12
    tau = 0.3 + 0.8j
    l0 = modular_lambda(tau)
    assert abs(modular_lambda(-1 / tau) - (1 - l0)) < 1e-12
    assert abs(modular_lambda(tau + 2) - l0) < 1e-12
    assert abs(modular_lambda(tau / (2 * tau + 1)) - l0) < 1e-12


def test_landen_relation_at_2i():
    lam = modular_lambda(1j)
    k = cmath.sqrt(1 - lam)
    assert abs(modular_lambda(2j) - ((1 - k) / (1 + k)) ** 2) < 1e-12


@pytest.mark.parametrize("tau", [0.1 + 0.05j, -0.37 + 0.02j, 3.3 + 0.4j, 0.5 + 2j, -7.9 + 1.3j,
                                 0.0123 + 0.011j, 0.49 + 0.003j])
def test_lambda_matches_mpmath(tau):
    ref = complex(mp_lambda(tau))
    assert abs(modular_lambda(tau) - ref) <= 1e-10 * max(1, abs(ref))


@pytest.mark.parametrize("tau", [0.2 + 0.6j, -0.45 + 0.15j, 1.7 + 0.9j, 0.5 + 0.5j])
def test_derivative_matches_mpmath(tau):
    ref = complex(mp.diff(mp_lambda, mp.mpc(tau)))
    _, d = lambda_and_derivative(tau)
    assert abs(d - ref) <= 1e-9 * max(1, abs(ref))


def test_reduction_lands_in_fundamental_domain():
    for tau in [0.01 + 0.001j, 5.5 + 0.2j, -0.3 + 0.1j]:
        r = reduce_sl2z(tau)
        assert abs(r.tau0.real) <= 0.5 + 1e-12 and abs(r.tau0) >= 1 - 1e-12
        a, b, c, d = r.matrix
        assert a * d - b * c == 1
        assert abs((a * tau + b) / (c * tau + d) - r.tau0) < 1e-9 * abs(r.tau0)


def test_reduction_rejects_lower_half_plane_and_floor():
    with pytest.raises(OutOfModel):
        modular_lambda(0.3 - 0.1j)
    with pytest.raises(ConvergenceFailure):
        modular_lambda(0.3 + 1e-14j)


def test_gamma2_reduction_preserves_lambda():
    for tau in [0.3 + 0.02j, 4.1 + 0.6j, -0.8 + 0.05j]:
        t0, word = reduce_gamma2(tau)
        assert in_gamma2_domain(t0)
        for a, b, c, d in word:
            assert a * d - b * c == 1 and b % 2 == 0 and c % 2 == 0
        assert abs(modular_lambda(t0) - modular_lambda(tau)) < 1e-9


def test_gamma2_words_count_and_membership():
    M = gamma2_words(3)
    assert M.shape == (1 + 4 + 12 + 36, 4)
    det = M[:, 0] * M[:, 3] - M[:, 1] * M[:, 2]
    assert np.all(det == 1)
    assert np.all(M[:, 1] % 2 == 0) and np.all(M[:, 2] % 2 == 0)
    assert len(gamma2_words(8)) == 1 + 4 * (3 ** 8 - 1) // 2


def test_inverse_at_half():
    assert abs(inverse_lambda(0.5) - 1j) < 1e-10


@pytest.mark.parametrize("x", [0.01, 0.2, 0.5, 0.77, 0.999])
def test_inverse_of_real_interval_is_imaginary(x):
    tau = inverse_lambda(x)
    assert abs(tau.real) < 1e-9 and tau.imag > 0


def test_inverse_rejects_punctures():
    with pytest.raises(OutOfModel):
        inverse_lambda(INF)
    for z in (0, 1, 1e-14, 1 + 1e-14j):
        with pytest.raises(ConvergenceFailure):
            inverse_lambda(z)


points = st.builds(complex, st.floats(-30, 30), st.floats(-30, 30)).filter(
    lambda z: abs(z) > 1e-3 and abs(z - 1) > 1e-3)


@given(points)
def test_roundtrip(z):
    tau = inverse_lambda(z)
    assert tau.imag > 0 and in_gamma2_domain(tau)
    assert abs(modular_lambda(tau) - z) < 1e-9 * max(1, abs(z))


def test_theta_tolerance_read_at_call_time(monkeypatch):
    tau = 0.1 + 0.9j
    exact = modular_lambda(tau)
    monkeypatch.setattr(modular, "THETA_REL_TOL", 1e-3)
    coarse = modular_lambda(tau)
    assert coarse != exact
    assert abs(coarse - exact) < 1e-2
