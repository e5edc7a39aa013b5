"""The modular lambda function and its inverse.

lambda(tau) = theta_2^4 / theta_3^4 with nome q = exp(i pi tau).  Evaluation
first moves tau into the SL(2,Z) fundamental domain (Im >= sqrt(3)/2), where
the theta series converge after a handful of terms, and transports the value
back with the anharmonic action of SL(2,Z)/Gamma(2) on lambda.
"""

from dataclasses import dataclass
from functools import lru_cache
import cmath
import math

import numpy as np

from .errors import ConvergenceFailure, OutOfModel
from .moebius import INF, Moebius, chordal

THETA_REL_TOL = 1e-16
# below this imaginary part the SL(2,Z) reduction is not attempted
IM_FLOOR = 1e-12
# inverse_lambda refuses points this close (chordally) to a puncture
PUNCTURE_FLOOR = 1e-12

_T = Moebius(1, 0, 1, -1)   # lambda(tau + 1) = lambda/(lambda - 1)
_S = Moebius(-1, 1, 0, 1)   # lambda(-1/tau) = 1 - lambda


def _theta23(tau, tol=None):
    """theta_2, theta_3 and their tau-derivatives at nome exp(i pi tau)."""
    tol = THETA_REL_TOL if tol is None else tol
    ipi = 1j * math.pi
    t2 = d2 = d3 = 0j
    t3 = 1.0 + 0j
    for n in range(0, 64):
        e2 = (n + 0.5) ** 2
        a2 = 2.0 * cmath.exp(ipi * tau * e2)
        t2 += a2
        d2 += a2 * ipi * e2
        if n > 0:
            a3 = 2.0 * cmath.exp(ipi * tau * n * n)
            t3 += a3
            d3 += a3 * ipi * n * n
        else:
            a3 = 0.0
        if abs(a2) < tol * abs(t2) and abs(a3) < tol * abs(t3) and n > 0:
            break
    return t2, t3, d2, d3


def theta3(tau):
    return _theta23(tau)[1]


@dataclass(frozen=True)
class Reduction:
    tau0: complex
    word: tuple          # sequence of ("T", n) and ("S",) moves applied to tau
    matrix: tuple        # (a, b, c, d) with tau0 = (a tau + b)/(c tau + d)
    transport: Moebius   # lambda(tau) = transport(lambda(tau0))


def reduce_sl2z(tau, max_steps=10000):
    """Move tau into |Re| <= 1/2, |tau| >= 1."""
    tau = complex(tau)
    if not tau.imag > 0:
        raise OutOfModel(f"Im(tau) must be positive: {tau}")
    if tau.imag < IM_FLOOR:
        raise ConvergenceFailure(f"Im(tau) = {tau.imag:.3g} below floor {IM_FLOOR:g}")
    a, b, c, d = 1, 0, 0, 1
    phi = Moebius(1, 0, 0, 1)
    word = []
    for _ in range(max_steps):
        n = round(tau.real)
        if n:
            tau -= n
            a, b = a - n * c, b - n * d
            word.append(("T", -n))
            if n % 2:
                phi = phi @ _T
        if abs(tau) < 1.0 - 1e-15:
            tau = -1.0 / tau
            a, b, c, d = -c, -d, a, b
            word.append(("S",))
            phi = phi @ _S
        else:
            return Reduction(tau, tuple(word), (a, b, c, d), phi)
    raise ConvergenceFailure("SL(2,Z) reduction did not terminate")


def _lambda_reduced(tau0):
    t2, t3, d2, d3 = _theta23(tau0)
    lam = (t2 / t3) ** 4
    dlam = 4.0 * lam * (d2 / t2 - d3 / t3)
    return lam, dlam


def modular_lambda(tau):
    r = reduce_sl2z(tau)
    lam0, _ = _lambda_reduced(r.tau0)
    return r.transport(lam0)


def lambda_and_derivative(tau):
    """(lambda(tau), lambda'(tau)) with the derivative transported by the chain rule."""
    tau = complex(tau)
    r = reduce_sl2z(tau)
    lam0, dlam0 = _lambda_reduced(r.tau0)
    a, b, c, d = r.matrix
    dg = 1.0 / (c * tau + d) ** 2
    lam = r.transport(lam0)
    return lam, r.transport.derivative(lam0) * dlam0 * dg


def lambda_prime(tau):
    return lambda_and_derivative(tau)[1]


# --- Gamma(2) ----------------------------------------------------------------

def in_gamma2_domain(tau, slack=1e-12):
    return (abs(tau.real) <= 1 + slack and abs(tau - 0.5) >= 0.5 - slack
            and abs(tau + 0.5) >= 0.5 - slack)


def reduce_gamma2(tau, max_steps=10000):
    """Move tau into |Re| <= 1, |tau -+ 1/2| >= 1/2 using Gamma(2) moves.

    Returns the reduced point and the word of applied matrices.
    """
    tau = complex(tau)
    word = []
    for _ in range(max_steps):
        n = 2 * round(tau.real / 2)
        if n:
            tau -= n
            word.append((1, -n, 0, 1))
        if abs(tau - 0.5) < 0.5:
            tau = tau / (1 - 2 * tau)
            word.append((1, 0, -2, 1))
        elif abs(tau + 0.5) < 0.5:
            tau = tau / (2 * tau + 1)
            word.append((1, 0, 2, 1))
        else:
            return tau, tuple(word)
    raise ConvergenceFailure("Gamma(2) reduction did not terminate")


@lru_cache(maxsize=None)
def gamma2_words(max_len):
    """Matrices of all reduced words of length <= max_len in the free
    generators tau + 2 and tau/(2 tau + 1), as an (N, 4) float array.
    The set is closed under inverses."""
    gens = [np.array([[1, 2], [0, 1]]), np.array([[1, -2], [0, 1]]),
            np.array([[1, 0], [2, 1]]), np.array([[1, 0], [-2, 1]])]
    inv = {0: 1, 1: 0, 2: 3, 3: 2}
    out = [np.eye(2, dtype=np.int64)]
    frontier = [(np.eye(2, dtype=np.int64), -1)]
    for _ in range(max_len):
        nxt = []
        for m, last in frontier:
            for g, G in enumerate(gens):
                if last >= 0 and inv[last] == g:
                    continue
                mg = m @ G
                nxt.append((mg, g))
                out.append(mg)
        frontier = nxt
    return np.array([m.reshape(4) for m in out], dtype=float)


# --- inverse ----------------------------------------------------------------

def _agm(a, b, iters=60):
    """Complex AGM with the optimal sign choice at each step."""
    for _ in range(iters):
        an = 0.5 * (a + b)
        bn = cmath.sqrt(a * b)
        if abs(an - bn) > abs(an + bn):
            bn = -bn
        a, b = an, bn
        if abs(a - b) <= 1e-16 * abs(a):
            break
    return a


def _anharmonic_cosets():
    """Pairs (matrix, transport) over the six cosets of Gamma(2) in SL(2,Z)."""
    T = ((1, 1, 0, 1), _T)
    S = ((0, -1, 1, 0), _S)

    def mul(x, y):
        (a, b, c, d), p = x
        (e, f, g, h), q = y
        return ((a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h), p @ q)

    e = ((1, 0, 0, 1), Moebius(1, 0, 0, 1))
    return [e, T, S, mul(T, S), mul(S, T), mul(T, mul(S, T))]


_COSETS = _anharmonic_cosets()


def _newton(z, tau, iters=30):
    for _ in range(iters):
        lam, dlam = lambda_and_derivative(tau)
        step = (lam - z) / dlam
        tau_new = tau - step
        if not tau_new.imag > 0:
            return None
        tau = tau_new
        if abs(step) <= 4e-16 * max(1.0, abs(tau)):
            break
    return tau


def inverse_lambda(z, tol=1e-10):
    """A preimage of z under lambda, reduced into the Gamma(2) domain."""
    if z is INF:
        raise OutOfModel("infinity is a puncture")
    z = complex(z)
    if min(chordal(z, 0), chordal(z, 1), chordal(z, INF)) < PUNCTURE_FLOOR:
        raise ConvergenceFailure(f"{z} is within {PUNCTURE_FLOOR:g} of a puncture")
    cands = []
    for (a, b, c, d), phi in _COSETS:
        w = phi.inverse()(z)
        if w is INF:
            continue
        cands.append((abs(w - 0.5), w, (a, b, c, d)))
    cands.sort(key=lambda t: t[0])
    for _, w, (a, b, c, d) in cands:
        try:
            s = 1j * _agm(1.0, cmath.sqrt(1.0 - w)) / _agm(1.0, cmath.sqrt(w))
        except ZeroDivisionError:
            continue
        if not s.imag > 0:
            continue
        tau = (a * s + b) / (c * s + d)
        tau = _newton(z, tau)
        if tau is None:
            continue
        tau, _ = reduce_gamma2(tau)
        if abs(modular_lambda(tau) - z) <= tol * max(1.0, abs(z)):
            return tau
    raise ConvergenceFailure(f"could not invert lambda at {z}")
