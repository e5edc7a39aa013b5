"""Fractional-linear maps on the Riemann sphere.

Points of the sphere are plain numbers (int, Fraction, float, complex) or the
singleton ``INF``.  A :class:`Moebius` keeps its matrix unnormalized, so maps
with integer or rational entries stay exact; equality is projective.
"""

from fractions import Fraction
from math import gcd, lcm
import math

import numpy as np

from .errors import DegenerateInput


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

# the three punctures, in normalization order
CUSPS = (0, 1, INF)


def is_inf(z):
    return z is INF


def cusp_name(c):
    if c is INF:
        return "inf"
    return str(int(c))


def parse_cusp(c):
    if c is INF:
        return INF
    s = str(c).strip().lower()
    if s in ("inf", "infinity", "∞"):
        return INF
    if s in ("0", "1"):
        return int(s)
    raise ValueError(f"not a cusp: {c!r}")


def chordal(z, w):
    """Chordal distance on the unit sphere (diameter 2)."""
    if z is INF and w is INF:
        return 0.0
    if z is INF:
        z, w = w, z
    if w is INF:
        return 2.0 / math.sqrt(1.0 + abs(z) ** 2)
    return 2.0 * abs(z - w) / math.sqrt((1.0 + abs(z) ** 2) * (1.0 + abs(w) ** 2))


def _same_point(p, q):
    if p is INF or q is INF:
        return p is q
    return p == q


class Moebius:
    """z -> (a z + b)/(c z + d) with a d - b c != 0."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        if a * d - b * c == 0:
            raise DegenerateInput("singular matrix")
        self.a, self.b, self.c, self.d = a, b, c, d

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def __call__(self, z):
        a, b, c, d = self.entries
        if z is INF:
            return INF if c == 0 else a / c
        num = a * z + b
        den = c * z + d
        if den == 0:
            return INF
        if isinstance(num, int) and isinstance(den, int):
            return Fraction(num, den)
        return num / den

    def derivative(self, z):
        if z is INF:
            raise ValueError("derivative at infinity needs a chart")
        return self.det / (self.c * z + self.d) ** 2

    def inverse(self):
        return Moebius(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other):
        """self o other"""
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return Moebius(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def __eq__(self, other):
        if not isinstance(other, Moebius):
            return NotImplemented
        v, w = self.entries, other.entries
        return all(v[i] * w[k] == v[k] * w[i] for i in range(4) for k in range(i + 1, 4))

    __hash__ = None

    def isclose(self, other, tol=1e-12):
        """Projective closeness after scaling both by the same pivot entry."""
        v = np.array(self.entries, dtype=complex)
        w = np.array(other.entries, dtype=complex)
        k = int(np.argmax(np.abs(v)))
        if abs(w[k]) < tol * np.max(np.abs(w)):
            return False
        return bool(np.max(np.abs(v / v[k] - w / w[k])) <= tol)

    def cusp_images(self):
        return {c: self(c) for c in CUSPS}

    def permutes_cusps(self):
        imgs = [self(c) for c in CUSPS]
        found = set()
        for z in imgs:
            hit = [i for i, c in enumerate(CUSPS) if _same_point(z, c)]
            if not hit:
                return False
            found.add(hit[0])
        return len(found) == 3

    def formula(self):
        return _format(self.entries)

    def __repr__(self):
        return f"Moebius({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"

    def __str__(self):
        return self.formula()


IDENTITY = Moebius(1, 0, 0, 1)


def apply(m, z):
    return m(z)


def inverse(m):
    return m.inverse()


def compose(m1, m2):
    """m1 o m2"""
    return m1 @ m2


def from_three_points(p, q, r):
    """The Moebius map sending p, q, r to 0, 1, INF."""
    if _same_point(p, q) or _same_point(q, r) or _same_point(p, r):
        raise DegenerateInput(f"points not distinct: {p!r}, {q!r}, {r!r}")
    if p is INF:
        return Moebius(0, q - r, 1, -r)
    if q is INF:
        return Moebius(1, -p, 1, -r)
    if r is INF:
        return Moebius(1, -p, 0, q - p)
    return Moebius(q - r, -p * (q - r), q - p, -r * (q - p))


def integerized(m):
    """Scale a rational matrix to coprime integers."""
    fr = [Fraction(x) for x in m.entries]
    den = lcm(*(x.denominator for x in fr))
    ints = [int(x * den) for x in fr]
    g = gcd(*ints)
    return Moebius(*(x // g for x in ints))


def _others(n):
    return [k for k in (1, 2, 3, 4) if k != n]


def connecting_map(i, j):
    """The cusp-permuting map from the normalization omitting index j
    (domain coordinate) to the one omitting index i.

    A configuration of the four points is fixed by sending the three indices
    other than j to 0, 1, INF in increasing order and letting a_j float; the
    map is read off by renormalizing with the three indices other than i.
    """
    for n in (i, j):
        if n not in (1, 2, 3, 4):
            raise ValueError(f"index out of range: {n}")
    if i == j:
        return Moebius(1, 0, 0, 1)
    samples = [Fraction(2), Fraction(3), Fraction(5)]
    values = []
    for y in samples:
        conf = dict(zip(_others(j), (Fraction(0), Fraction(1), INF)))
        conf[j] = y
        norm = from_three_points(*(conf[k] for k in _others(i)))
        values.append(norm(conf[i]))
    m = from_three_points(*values).inverse() @ from_three_points(*samples)
    return integerized(m)


def _lin(p, q):
    """Format p z + q for integers p, q."""
    def zt(c):
        return "z" if c == 1 else f"{c}z"

    if p == 0:
        return str(q)
    if q == 0:
        return "-z" if p == -1 else zt(p)
    if p > 0:
        return f"{zt(p)} + {q}" if q > 0 else f"{zt(p)} - {-q}"
    if q > 0:
        return f"{q} - {zt(-p)}"
    return f"-{zt(-p)} - {-q}"


def _paren(s):
    return f"({s})" if (" " in s) else s


def _format(entries):
    if not all(isinstance(x, (int, Fraction)) and Fraction(x).denominator == 1 for x in entries):
        a, b, c, d = entries
        return f"(({a})*z + ({b}))/(({c})*z + ({d}))"
    v = [int(x) for x in entries]
    neg = sum(x < 0 for x in v)
    if sum(x > 0 for x in v) < neg:
        v = [-x for x in v]
    a, b, c, d = v
    if c == 0:
        if b % d == 0 and a % d == 0:
            return _lin(a // d, b // d)
        return f"{_paren(_lin(a, b))}/{d}"
    return f"{_paren(_lin(a, b))}/{_paren(_lin(c, d))}"
