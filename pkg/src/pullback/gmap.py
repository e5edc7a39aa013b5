"""Moduli-space maps: evaluation, inverse branches, cusps and fixed points.

The exponential families have the form

    G(z) = outer(exp(2 pi i k inner(z)))

with Moebius maps ``inner`` and ``outer``; ``inner`` has its pole at the
essential cusp.  Branch m of the inverse is

    z = inner^-1((Log(outer^-1(w)) + 2 pi i m) / (2 pi i k))

where Log takes arguments in (cut - 2 pi, cut].
"""

from dataclasses import dataclass
import cmath
import math

import numpy as np

from .errors import (BranchPole, ContinuationFailure, DegenerateInput,
                     DomainError, UndefinedAt, UnsupportedPortrait)
from .moebius import CUSPS, INF, Moebius, chordal, connecting_map, from_three_points

TWO_PI_I = 2j * math.pi
REPELLING_MARGIN = 1e-9
SUPERATTRACTING_MAX = 1e-9
# rectangle searches drop hits this close to the essential cusp
ESSENTIAL_MARGIN = 1e-6


# --- cusp metadata -----------------------------------------------------------

@dataclass(frozen=True)
class EssentialSingularity:
    def describe(self):
        return "essential"


@dataclass(frozen=True)
class FixedPoint:
    multiplier: complex

    @property
    def superattracting(self):
        return abs(self.multiplier) < SUPERATTRACTING_MAX

    @property
    def repelling(self):
        return abs(self.multiplier) > 1 + REPELLING_MARGIN

    def describe(self):
        if self.superattracting:
            return "fixed (superattracting)"
        return f"fixed (multiplier {self.multiplier:.12g})"


@dataclass(frozen=True)
class MapsTo:
    image: object

    def describe(self):
        return f"maps to {self.image}"


def classify(multiplier):
    a = abs(multiplier)
    if a > 1 + REPELLING_MARGIN:
        return "repelling"
    if a < SUPERATTRACTING_MAX:
        return "superattracting"
    return "anomalous"


@dataclass(frozen=True)
class FixedPointRecord:
    location: complex
    multiplier: complex
    classification: str
    residual: float
    cusp: bool = False

    def to_json(self):
        z, m = complex(self.location), complex(self.multiplier)
        return {"location": [z.real, z.imag], "multiplier": [m.real, m.imag],
                "abs_multiplier": abs(m), "class": self.classification,
                "residual": self.residual, "cusp": self.cusp}


def _same(p, q):
    if p is INF or q is INF:
        return p is q
    return p == q


# --- exponential families ----------------------------------------------------

def _exp2pii(x):
    """exp(2 pi i x) with the integer part of Re x removed first, so that
    integer arguments give exactly 1."""
    x = complex(x)
    n = math.floor(x.real + 0.5)
    return cmath.exp(TWO_PI_I * complex(x.real - n, x.imag))


def _exp2pii_array(x):
    n = np.floor(x.real + 0.5)
    return np.exp(TWO_PI_I * ((x.real - n) + 1j * x.imag))


def _moebius_array(m, z):
    a, b, c, d = (complex(v) for v in m.entries)
    return (a * z + b) / (c * z + d)


class ExpFamily:
    """outer(exp(2 pi i k inner(z)))."""

    kind = "exp"

    def __init__(self, k, inner, outer=None, cut=math.pi):
        if not isinstance(k, (int, np.integer)) or k == 0:
            raise DomainError(f"k must be a nonzero integer: {k!r}")
        self.k = int(k)
        self.inner = inner
        self.outer = outer if outer is not None else Moebius(1, 0, 0, 1)
        self.cut = float(cut)
        self._inner_inv = inner.inverse()
        self._outer_inv = self.outer.inverse()
        self.essential = self._inner_inv(INF)
        self.cusp_info = {c: self._cusp(c) for c in CUSPS}

    def __repr__(self):
        return f"{type(self).__name__}({self.k})"

    @property
    def name(self):
        return self.kind

    def _cusp(self, c):
        if _same(c, self.essential):
            return EssentialSingularity()
        img = self(c)
        if _same(img, c):
            if c is INF:
                raise NotImplementedError("fixed cusp at infinity")
            return FixedPoint(self.derivative(c))
        return MapsTo(img)

    def __call__(self, z):
        if _same(z, self.essential):
            raise UndefinedAt(f"{z} is the essential singularity")
        t = self.inner(z)
        return self.outer(_exp2pii(self.k * t))

    def derivative(self, z):
        if z is INF:
            raise UndefinedAt("derivative at infinity needs a chart")
        if _same(z, self.essential):
            raise UndefinedAt(f"{z} is the essential singularity")
        t = self.inner(z)
        e = _exp2pii(self.k * t)
        return complex(self.outer.derivative(e) * e * TWO_PI_I * self.k * self.inner.derivative(z))

    def log(self, v):
        """Logarithm with argument in (cut - 2 pi, cut]."""
        arg = cmath.phase(v)
        if arg > self.cut:
            arg -= 2 * math.pi
        elif arg <= self.cut - 2 * math.pi:
            arg += 2 * math.pi
        return complex(math.log(abs(v)), arg)

    def inverse_branch(self, m, w):
        v = self._outer_inv(w)
        if v is INF or v == 0:
            raise UndefinedAt(f"{w} is an omitted value")
        u = self.log(complex(v)) + TWO_PI_I * m
        if u == 0:
            raise BranchPole(f"branch {m} has a pole at {w}")
        return self._inner_inv(u / (TWO_PI_I * self.k))

    def branch_pole(self, m):
        """The value w at which branch m is singular, or None."""
        if m == 0:
            return self.outer(1)
        return None

    def fixed_point_chart(self):
        """Moebius chart s with s(essential) = INF used to seed searches."""
        e = self.essential
        if e is INF:
            return Moebius(1, 0, 0, 1)
        return Moebius(0, 1, 1, -e)

    def eval_array(self, z):
        return _moebius_array(self.outer, _exp2pii_array(self.k * _moebius_array(self.inner, z)))

    def derivative_array(self, z):
        t = _moebius_array(self.inner, z)
        e = _exp2pii_array(self.k * t)
        a, b, c, d = (complex(v) for v in self.inner.entries)
        dinner = (a * d - b * c) / (c * z + d) ** 2
        p, q, r, s = (complex(v) for v in self.outer.entries)
        douter = (p * s - q * r) / (r * e + s) ** 2
        return douter * e * TWO_PI_I * self.k * dinner

    def seed_spacing(self):
        """Grid spacing in the fixed-point chart giving >= 4 seeds per period cell."""
        chart_inv = self.fixed_point_chart().inverse()
        comp = self.inner @ chart_inv
        a, b, c, d = (complex(v) for v in comp.entries)
        if c != 0:
            # inner is affine in the chart coordinate only when c == 0
            return 0.5 / abs(self.k)
        return 0.5 / (abs(self.k) * abs(a / d))


class ExpPeriodic(ExpFamily):
    """exp(2 pi i k / z); the Log cut lies along the positive imaginary axis."""

    kind = "exp-periodic"

    def __init__(self, k):
        super().__init__(k, Moebius(0, 1, 1, 0), cut=math.pi / 2)


class ExpPreperiodic(ExpFamily):
    """exp(2 pi i k / (z - 1)) with the principal Log."""

    kind = "exp-preperiodic"

    def __init__(self, k):
        super().__init__(k, Moebius(0, 1, 1, -1), cut=math.pi)


FAMILY_KINDS = {"exp-periodic": ExpPeriodic, "exp-preperiodic": ExpPreperiodic}


def make_family(kind, k):
    try:
        return FAMILY_KINDS[kind](k)
    except KeyError:
        raise DomainError(f"unknown family {kind!r}; known: {', '.join(FAMILY_KINDS)}") from None


# --- rational families ---------------------------------------------------------

def _trim(c):
    c = [complex(x) for x in c]
    while len(c) > 1 and c[0] == 0:
        c.pop(0)
    return c


class UserRational:
    """p(z)/q(z) with inverse branches continued from a fixed basepoint.

    Coefficients are listed from the highest degree down.  The fiber over
    the basepoint is computed once and its order defines the branch index.
    """

    kind = "rational"

    def __init__(self, num, den, basepoint=0.5 + 0.5j, punctures=(), max_halvings=40):
        self.p = np.array(_trim(num))
        self.q = np.array(_trim(den))
        if not np.any(self.q):
            raise DegenerateInput("zero denominator")
        self.dp = np.polyder(self.p) if len(self.p) > 1 else np.array([0j])
        self.dq = np.polyder(self.q) if len(self.q) > 1 else np.array([0j])
        self.degree = max(len(self.p), len(self.q)) - 1
        if self.degree < 1:
            raise DegenerateInput("constant map")
        self.basepoint = complex(basepoint)
        self.punctures = tuple(punctures)
        self.max_halvings = max_halvings
        self.essential = None
        self.fiber = self._fiber(self.basepoint)
        self.cusp_info = {c: self._cusp(c) for c in CUSPS}

    name = "rational"

    def _poly_minus(self, w):
        n = max(len(self.p), len(self.q))
        p = np.concatenate([np.zeros(n - len(self.p)), self.p])
        q = np.concatenate([np.zeros(n - len(self.q)), self.q])
        return p - w * q

    def _fiber(self, w):
        roots = np.roots(self._poly_minus(w))
        if len(roots) != self.degree:
            raise DegenerateInput(f"fiber over {w} meets infinity")
        order = sorted(range(len(roots)), key=lambda n: (round(roots[n].real, 10), round(roots[n].imag, 10)))
        return tuple(complex(roots[n]) for n in order)

    def __call__(self, z):
        if z is INF:
            dp, dq = len(self.p) - 1, len(self.q) - 1
            if dp > dq:
                return INF
            if dp < dq:
                return 0j
            return complex(self.p[0] / self.q[0])
        z = complex(z)
        den = np.polyval(self.q, z)
        if den == 0:
            return INF
        return complex(np.polyval(self.p, z) / den)

    def derivative(self, z):
        if z is INF:
            raise UndefinedAt("derivative at infinity needs a chart")
        z = complex(z)
        p, q = np.polyval(self.p, z), np.polyval(self.q, z)
        if q == 0:
            raise UndefinedAt(f"pole at {z}")
        return complex((np.polyval(self.dp, z) * q - p * np.polyval(self.dq, z)) / q ** 2)

    def _cusp(self, c):
        img = self(c)
        if not _same(img, c):
            return MapsTo(img)
        if c is INF:
            dp, dq = len(self.p) - 1, len(self.q) - 1
            if dp - dq >= 2:
                return FixedPoint(0j)
            return FixedPoint(complex(self.q[0] / self.p[0]))
        return FixedPoint(self.derivative(c))

    def eval_array(self, z):
        return np.polyval(self.p, z) / np.polyval(self.q, z)

    def derivative_array(self, z):
        p, q = np.polyval(self.p, z), np.polyval(self.q, z)
        return (np.polyval(self.dp, z) * q - p * np.polyval(self.dq, z)) / q ** 2

    def _correct(self, z, w, iters=12):
        for _ in range(iters):
            h = np.polyval(self.p, z) - w * np.polyval(self.q, z)
            dh = np.polyval(self.dp, z) - w * np.polyval(self.dq, z)
            if dh == 0:
                return None
            step = h / dh
            z = z - step
            if abs(step) <= 1e-14 * (1 + abs(z)):
                return complex(z)
        return None

    def inverse_branch(self, m, w):
        if not 0 <= m < self.degree:
            raise DomainError(f"branch index {m} outside 0..{self.degree - 1}")
        if w is INF:
            raise UndefinedAt("continuation to infinity is not supported")
        w = complex(w)
        z = self.fiber[m]
        w0 = self.basepoint
        t, h = 0.0, 1.0 / 16
        halvings = 0
        while t < 1.0:
            h = min(h, 1.0 - t)
            t1 = t + h
            w1 = w0 + t1 * (w - w0)
            full = self._correct(z, w1)
            mid = self._correct(z, w0 + (t + h / 2) * (w - w0))
            half = self._correct(mid, w1) if mid is not None else None
            if full is not None and half is not None and abs(full - half) <= 1e-9 * (1 + abs(full)):
                z, t = full, t1
                h *= 1.5
            else:
                h /= 2
                halvings += 1
                if halvings > self.max_halvings:
                    raise ContinuationFailure(f"continuation to {w} failed at t={t:.6f}")
        return z

    def branch_pole(self, m):
        return None

    def fixed_point_chart(self):
        return Moebius(1, 0, 0, 1)

    def seed_spacing(self):
        return None


# --- the family attached to a portrait ------------------------------------------

def family_for_portrait(p, b, k):
    """The map outer(exp(2 pi i k inner(z))) attached to an exponential portrait.

    In the C-normalized coordinate y the covering is exp(2 pi i k K(y)) up to
    a Moebius map of the target, where K sends the essential point to INF and
    the two remaining C-points (lower index first) to 0 and 1; both of those
    points must share one image, and the asymptotic value must be omitted.
    """
    from .portrait import validate

    if not validate(p).ok or p.essential is None:
        raise UnsupportedPortrait("needs a valid transcendental portrait")
    regular_c = [x for x in b.cset if x != p.essential]
    asymptotic = [x for x in p.singular if x != p.essential]
    if (len(regular_c) != 2 or len(asymptotic) != 1
            or p.images[regular_c[0]] != p.images[regular_c[1]]
            or asymptotic[0] in p.images.values()):
        raise UnsupportedPortrait("no built-in analytic family for this portrait; "
                                  "supply a UserRational")
    beta = p.images[regular_c[0]]
    y = dict(zip(b.cset, (0, 1, INF)))
    phi = dict(zip(b.members, (0, 1, INF)))
    K = from_three_points(y[regular_c[0]], y[regular_c[1]], y[p.essential])
    L = from_three_points(phi[asymptotic[0]], phi[beta], phi[p.essential]).inverse()
    M = connecting_map(b.i, b.j)
    inner = K @ M.inverse()
    for cls in (ExpPeriodic, ExpPreperiodic):
        cand = cls(k)
        if _same_exponent(inner, cand.inner, k) and L == cand.outer:
            return cand
    return ExpFamily(k, inner, L)


def _same_exponent(inner1, inner2, k):
    """True when inner1 - inner2 is a constant c with k c an integer, so the
    two exponentials agree."""
    a, b, c, d = (complex(v) for v in (inner1 @ inner2.inverse()).entries)
    if c != 0 or a != d:
        return False
    shift = k * b / d
    return shift.imag == 0 and shift.real == round(shift.real)


# --- fixed points ---------------------------------------------------------------------

def _newton_array(g, chart_inv, s, iters):
    """Newton on G(z) - z in the chart coordinate s, vectorized."""
    a, b, c, d = (complex(v) for v in chart_inv.entries)
    det = a * d - b * c
    with np.errstate(all="ignore"):
        for _ in range(iters):
            z = (a * s + b) / (c * s + d)
            f = g.eval_array(z) - z
            dz = det / (c * s + d) ** 2
            df = (g.derivative_array(z) - 1.0) * dz
            s = s - f / df
        z = (a * s + b) / (c * s + d)
    return z


def find_fixed_points(g, radius=50.0, grid=None, region=None, max_iter=60, dedup=1e-8,
                      accept=1e-10):
    """Grid-seeded Newton search for fixed points.

    For families with an essential cusp e the search region is the annulus
    1/radius <= |z - e| <= radius, seeded on a square grid in s = 1/(z - e);
    fixed points accumulate at e, so the count grows with the radius.  A
    rectangle ``region = (xmin, xmax, ymin, ymax)`` seeds directly in z.
    """
    chart = g.fixed_point_chart() if region is None else Moebius(1, 0, 0, 1)
    chart_inv = chart.inverse()
    if region is None:
        h = grid if grid is not None else (g.seed_spacing() or radius / 200.0)
        n = int(math.ceil(radius / h))
        xs = np.arange(-n, n + 1) * h
        X, Y = np.meshgrid(xs, xs)
    else:
        xmin, xmax, ymin, ymax = region
        num = grid if grid is not None else 200
        X, Y = np.meshgrid(np.linspace(xmin, xmax, num), np.linspace(ymin, ymax, num))
    seeds = (X + 1j * Y).ravel()
    z = _newton_array(g, chart_inv, seeds, max_iter)
    with np.errstate(all="ignore"):
        res = np.abs(g.eval_array(z) - z)
    ok = np.isfinite(z) & np.isfinite(res) & (res < accept * np.maximum(1.0, np.abs(z)))
    z = z[ok]
    e = g.essential
    if region is None:
        if e is None or e is INF:
            dist = np.abs(z)
            keep = dist <= radius
        else:
            dist = np.abs(z - complex(e))
            keep = (dist >= 1.0 / radius) & (dist <= radius)
    else:
        keep = (z.real >= xmin) & (z.real <= xmax) & (z.imag >= ymin) & (z.imag <= ymax)
        if e is not None and e is not INF:
            # fixed points pile up at the essential cusp; keep a margin
            keep &= np.abs(z - complex(e)) >= ESSENTIAL_MARGIN
    z = z[keep]
    # collapse exact repeats first, then a greedy merge in a fixed order
    _, first = np.unique(np.round(z.real, 11) + 1j * np.round(z.imag, 11), return_index=True)
    z = z[np.sort(first)]
    z = z[np.lexsort((z.imag, z.real, np.round(np.abs(z), 9)))]
    found = np.empty(0, dtype=complex)
    for x in z:
        if not np.any(np.abs(found - x) <= dedup):
            found = np.append(found, x)
    found = [complex(x) for x in found]
    records = []
    for x in found:
        cusp = any(chordal(x, c) < 1e-12 for c in CUSPS)
        if cusp:
            x = complex(round(x.real), 0) if abs(x - round(x.real)) < 1e-12 else x
        mult = g.derivative(x)
        records.append(FixedPointRecord(x, mult, classify(mult), abs(g(x) - x), cusp))
    records.sort(key=lambda r: (abs(r.location), r.location.real, r.location.imag))
    return records
