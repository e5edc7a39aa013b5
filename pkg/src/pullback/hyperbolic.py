"""Hyperbolic densities and distances on the standard models.

Curvature is normalized to -1 everywhere, so the disk density at the
origin is 2.  The thrice-punctured sphere is handled through the lambda
covering of :mod:`pullback.modular`.
"""

from dataclasses import dataclass
from enum import Enum
import math

import numpy as np

from .errors import DomainError, OutOfModel
from .modular import gamma2_words, inverse_lambda, lambda_and_derivative
from .moebius import INF

# shortest-geodesic constant of four-punctured spheres
LEVY_SHORT_GEODESIC = math.log(3.0 + 2.0 * math.sqrt(2.0))
GAMMA2_WORD_LENGTH = 8


class Model(Enum):
    UPPER_HALF_PLANE = "uhp"
    UNIT_DISK = "disk"
    PUNCTURED_DISK = "punctured-disk"
    SIGMA = "sigma"


@dataclass(frozen=True)
class HPoint:
    value: complex
    model: Model

    def __post_init__(self):
        check_model(self.value, self.model)


def check_model(z, model):
    if model is Model.SIGMA:
        if z is INF or z == 0 or z == 1:
            raise OutOfModel(f"{z} is a puncture")
        return
    z = complex(z)
    if model is Model.UPPER_HALF_PLANE and not z.imag > 0:
        raise OutOfModel(f"{z} is not in the upper half-plane")
    if model is Model.UNIT_DISK and not abs(z) < 1:
        raise OutOfModel(f"{z} is not in the unit disk")
    if model is Model.PUNCTURED_DISK and not 0 < abs(z) < 1:
        raise OutOfModel(f"{z} is not in the punctured disk")


def density(p):
    z, model = p.value, p.model
    check_model(z, model)
    if model is Model.UPPER_HALF_PLANE:
        return 1.0 / complex(z).imag
    if model is Model.UNIT_DISK:
        return 2.0 / (1.0 - abs(z) ** 2)
    if model is Model.PUNCTURED_DISK:
        r = abs(z)
        return 1.0 / (r * abs(math.log(r)))
    return density_sigma(z)


def dist_uhp(z, w):
    z, w = complex(z), complex(w)
    return 2.0 * math.asinh(abs(z - w) / (2.0 * math.sqrt(z.imag * w.imag)))


def dist_disk(z, w):
    z, w = complex(z), complex(w)
    return 2.0 * math.atanh(abs(z - w) / abs(1.0 - w.conjugate() * z))


def dist_punctured_disk(z, w):
    """Distance on 0 < |z| < 1 through the covering tau -> exp(i tau)."""
    tz = -1j * np.log(complex(z))
    tw = -1j * np.log(complex(w))
    return min(dist_uhp(tz, tw + 2 * math.pi * k) for k in (-1, 0, 1))


def distance(p, q):
    if p.model is not q.model:
        raise OutOfModel("points live in different models")
    check_model(p.value, p.model)
    check_model(q.value, q.model)
    if p.model is Model.UPPER_HALF_PLANE:
        return dist_uhp(p.value, q.value)
    if p.model is Model.UNIT_DISK:
        return dist_disk(p.value, q.value)
    if p.model is Model.PUNCTURED_DISK:
        return dist_punctured_disk(p.value, q.value)
    return dist_sigma(p.value, q.value)


# --- estimates ---------------------------------------------------------------

def _check_s(s):
    s = float(s)
    if s < 0 or math.isnan(s):
        raise DomainError(f"distance must be nonnegative: {s}")
    if s == 0:
        raise DomainError("bound degenerates at s = 0")
    return s


def contraction_bound(s):
    """Contraction factor of an inclusion U in V at a point at distance s
    from the complement: 2 r |log r| / (1 - r^2) with r = tanh(s/2).

    Increases from 0 to 1 as s runs over (0, inf); for s above about 19 the
    value rounds to 1.0 in double precision, see :func:`contraction_gap`.
    """
    s = _check_s(s)
    if s < 1.0:
        r = math.tanh(s / 2.0)
        return 2.0 * r * abs(math.log(r)) / ((1.0 - r) * (1.0 + r))
    # with u = exp(-s): r = (1-u)/(1+u), -log r = 2 atanh(u), 1-r^2 = 4u/(1+u)^2
    u = math.exp(-s)
    if u == 0.0:
        return 1.0
    return (1.0 - u * u) * math.atanh(u) / u


def contraction_gap(s):
    """1 - contraction_bound(s) without cancellation.

    1 - (1-u^2) atanh(u)/u = sum_{n>=1} 2 u^(2n) / (4 n^2 - 1), u = exp(-s).
    """
    s = _check_s(s)
    u = math.exp(-s)
    if u > 0.5:
        return 1.0 - contraction_bound(s)
    total, p = 0.0, 1.0
    for n in range(1, 200):
        p *= u * u
        term = 2.0 * p / (4 * n * n - 1)
        total += term
        if term < 1e-18 * total:
            break
    return total


@dataclass(frozen=True)
class Annulus:
    r1: float = None
    r2: float = None
    mod: float = None

    @property
    def modulus(self):
        if self.mod is not None:
            return float(self.mod)
        return math.log(self.r2 / self.r1) / (2.0 * math.pi)

    def __post_init__(self):
        if self.mod is None:
            if self.r1 is None or self.r2 is None or not 0 < self.r1 < self.r2:
                raise DomainError("need 0 < r1 < r2 or an explicit modulus")
        elif not self.mod > 0:
            raise DomainError("modulus must be positive")


def annulus_geodesic_length(a):
    m = a.modulus if isinstance(a, Annulus) else float(a)
    if not m > 0:
        raise DomainError("modulus must be positive")
    return math.pi / m


def levy_modulus_threshold(d0):
    if d0 < 0:
        raise DomainError("d0 must be nonnegative")
    return 5.0 * math.pi * math.exp(d0) / LEVY_SHORT_GEODESIC


def strip_diameter_bound(zn_abs, znp1_abs):
    if zn_abs <= 1 or znp1_abs <= 1:
        raise DomainError("moduli must exceed 1")
    if znp1_abs < zn_abs:
        raise DomainError("need |z_{n+1}| >= |z_n|")
    ln = math.log(zn_abs)
    return math.log(math.log(znp1_abs) / ln) + 2.0 * math.pi / ln


# --- thrice-punctured sphere --------------------------------------------------

def lift_sigma(z):
    return inverse_lambda(z)


def density_sigma(z):
    tau = lift_sigma(z)
    _, dlam = lambda_and_derivative(tau)
    return 1.0 / (tau.imag * abs(dlam))


def dist_uhp_lifted(tz, tw, max_word=GAMMA2_WORD_LENGTH):
    """min over Gamma(2) words g of d_H(tz, g tw)."""
    M = gamma2_words(max_word)
    a, b, c, d = M[:, 0], M[:, 1], M[:, 2], M[:, 3]
    g = (a * tw + b) / (c * tw + d)
    num = np.abs(tz - g)
    arg = num / (2.0 * np.sqrt(tz.imag * g.imag))
    return float(2.0 * np.arcsinh(arg.min()))


def dist_sigma(z, w, max_word=GAMMA2_WORD_LENGTH):
    if z == w:
        return 0.0
    return dist_uhp_lifted(lift_sigma(z), lift_sigma(w), max_word)
