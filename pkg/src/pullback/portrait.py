"""Dynamical portraits of marked maps with four marked points.

A portrait records where each marked point goes, which point (if any) is the
essential singularity, which marked points are singular values and the local
degrees that are known.  Points are referred to by label; the position of a
label in ``points`` is its index 1..4, which fixes the normalization order
used by :mod:`pullback.moebius`.
"""

from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import NamedTuple, Optional
import json

from .errors import PreconditionFailed, UnknownDegree
from .moebius import INF, parse_cusp


class MarkedPoint(NamedTuple):
    index: int
    label: str


@dataclass(frozen=True)
class Portrait:
    points: tuple
    images: dict
    essential: Optional[str] = None
    singular: frozenset = frozenset()
    degrees: dict = field(default_factory=dict)
    transcendental: bool = False
    unmarked_singular: bool = False

    def index(self, label):
        return self.points.index(label) + 1

    def label(self, index):
        return self.points[index - 1]

    def marked(self):
        return [MarkedPoint(n + 1, x) for n, x in enumerate(self.points)]

    def image(self, x):
        return self.images.get(x)

    def regular(self):
        """Marked points other than the essential singularity."""
        return [x for x in self.points if x != self.essential]

    def degree(self, x):
        """Known local degree, forced degree 1, or None when unspecified.

        A point whose image is not a singular value cannot be a critical
        point (its critical value would be singular), so its degree is 1.
        """
        d = self.degrees.get(x)
        if d is not None:
            return d
        if self.images.get(x) not in self.singular:
            return 1
        return None

    def relabeled(self, perm):
        """Conjugate by a label bijection ``perm`` (dict old -> new)."""
        return Portrait(
            points=tuple(perm[x] for x in self.points),
            images={perm[x]: perm[y] for x, y in self.images.items()},
            essential=perm.get(self.essential) if self.essential else None,
            singular=frozenset(perm[x] for x in self.singular),
            degrees={perm[x]: d for x, d in self.degrees.items()},
            transcendental=self.transcendental,
            unmarked_singular=self.unmarked_singular,
        )

    def with_degrees(self, **degrees):
        d = dict(self.degrees)
        d.update(degrees)
        return Portrait(self.points, dict(self.images), self.essential, self.singular,
                        d, self.transcendental, self.unmarked_singular)

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            points=tuple(data["points"]),
            images=dict(data.get("images", {})),
            essential=data.get("essential"),
            singular=frozenset(data.get("singular", [])),
            degrees=dict(data.get("degrees", {})),
            transcendental=bool(data.get("transcendental", data.get("essential") is not None)),
            unmarked_singular=bool(data.get("unmarked_singular_values", False)),
        )

    def to_json(self):
        order = {x: n for n, x in enumerate(self.points)}
        key = lambda x: (order.get(x, 99), x)
        out = {
            "points": list(self.points),
            "images": {x: self.images[x] for x in sorted(self.images, key=key)},
            "essential": self.essential,
            "singular": sorted(self.singular, key=key),
            "degrees": {x: self.degrees[x] for x in sorted(self.degrees, key=key)},
            "transcendental": self.transcendental,
        }
        if self.unmarked_singular:
            out["unmarked_singular_values"] = True
        return out

    def describe(self):
        arrows = ", ".join(f"{x}->{self.images[x]}" for x in self.points if x in self.images)
        ess = f"; {self.essential} essential" if self.essential else ""
        return f"{arrows}{ess}; S={{{','.join(sorted(self.singular))}}}"


@dataclass
class ValidationReport:
    issues: list

    @property
    def ok(self):
        return not self.issues

    def __bool__(self):
        return self.ok


def validate(p):
    issues = []
    pts = list(p.points)
    if len(pts) != 4 or len(set(pts)) != len(pts):
        issues.append("need exactly four distinct marked points")
    A = set(pts)
    if p.essential is not None:
        if p.essential not in A:
            issues.append(f"essential point {p.essential} is not marked")
        if not p.transcendental:
            issues.append("essential singularity set on a non-transcendental map")
        if p.essential in p.images:
            issues.append(f"essential point {p.essential} has an image")
    for x in pts:
        if x == p.essential:
            continue
        y = p.images.get(x)
        if y is None:
            issues.append(f"missing image for {x}")
        elif y not in A:
            issues.append(f"image of {x} is not marked: {y}")
    for x in p.images:
        if x not in A:
            issues.append(f"image given for unmarked point {x}")
    for x in p.singular:
        if x not in A:
            issues.append(f"singular value {x} is not marked")
    for x, d in p.degrees.items():
        if x not in A:
            issues.append(f"degree given for unmarked point {x}")
            continue
        if x == p.essential:
            issues.append(f"degree given for essential point {x}")
            continue
        if d is None:
            continue
        if not isinstance(d, int) or isinstance(d, bool) or d < 1:
            issues.append(f"degree of {x} is not a positive integer: {d!r}")
        elif d >= 2 and p.images.get(x) not in p.singular:
            issues.append(f"degree/singular inconsistency at {x}: degree {d} but "
                          f"{p.images.get(x)} is not singular")
    return ValidationReport(issues)


@dataclass(frozen=True)
class BSet:
    members: tuple
    cset: tuple
    i: int
    j: int
    points: tuple

    @property
    def a_i(self):
        return self.points[self.i - 1]

    @property
    def a_j(self):
        return self.points[self.j - 1]

    def to_json(self):
        return {"B": list(self.members), "C": list(self.cset), "i": self.i, "j": self.j}


def _require_valid(p):
    rep = validate(p)
    if not rep.ok:
        raise PreconditionFailed("invalid portrait: " + "; ".join(rep.issues))


def induced_cset(p, members):
    C = {x for x in p.regular() if p.images[x] in members}
    if p.essential is not None:
        C.add(p.essential)
    return C


def find_b_sets(p):
    _require_valid(p)
    if p.unmarked_singular:
        return []
    out = []
    for B in combinations(p.points, 3):
        if not p.singular <= set(B):
            continue
        C = induced_cset(p, B)
        if len(C) != 3:
            continue
        cset = tuple(x for x in p.points if x in C)
        i = next(n + 1 for n, x in enumerate(p.points) if x not in B)
        j = next(n + 1 for n, x in enumerate(p.points) if x not in C)
        out.append(BSet(tuple(B), cset, i, j, tuple(p.points)))
    return out


def _swaps_or_complements(p, x, y):
    img = {p.images[x], p.images[y]}
    return img == {x, y} or img == set(p.points) - {x, y}


def totally_unobstructed(p):
    """Decide total unobstructedness; returns (flag, witness pair or None).

    Not totally unobstructed exactly when two distinct non-essential points
    of local degree 1 are mapped onto themselves or onto the other two.
    """
    if not find_b_sets(p):
        raise PreconditionFailed("no admissible B-set; the criterion does not apply")
    unresolved = []
    for x, y in combinations(p.regular(), 2):
        if not _swaps_or_complements(p, x, y):
            continue
        dx, dy = p.degree(x), p.degree(y)
        if dx == 1 and dy == 1:
            return False, (x, y)
        if None in (dx, dy) and dx in (1, None) and dy in (1, None):
            unresolved.append((x, y))
    if unresolved:
        x, y = unresolved[0]
        raise UnknownDegree(f"answer depends on the unspecified degree at "
                            f"{x if p.degree(x) is None else y}")
    return True, None


# --- enumeration -----------------------------------------------------------

@dataclass(frozen=True)
class FamilySpec:
    """Constraints describing a family of portraits.

    ``omitted`` lists marked points that are not the image of any marked
    point (omitted values of the map, including an essential singularity of
    an entire map).  With ``relabel`` set, portraits that differ by a label
    permutation preserving the singular, essential and omitted sets are
    identified.
    """
    singular: frozenset
    essential: Optional[str] = None
    omitted: frozenset = frozenset()
    transcendental: bool = False
    relabel: bool = False
    points: tuple = ("a", "b", "c", "d")


FAMILIES = {
    # entire maps with three singular values, one of them the essential point
    "entire3": FamilySpec(frozenset("abd"), "d", frozenset("d"), True, True),
    # exponential maps: asymptotic value a is omitted, d the essential point
    "exponential": FamilySpec(frozenset("ad"), "d", frozenset("ad"), True, True),
    # transcendental meromorphic, three singular values, d not omitted
    "meromorphic3": FamilySpec(frozenset("abd"), "d", frozenset(), True, True),
}


@dataclass(frozen=True)
class FamilyMember:
    portrait: Portrait
    b_sets: tuple

    @property
    def condition_ii(self):
        return bool(self.b_sets)


def _postsingular(images, singular):
    seen = set()
    for s in singular:
        x = s
        while x is not None and x not in seen:
            seen.add(x)
            x = images.get(x)
    return seen


def _canonical(images, spec, perms):
    keys = []
    for perm in perms:
        conj = {perm[x]: perm[y] for x, y in images.items()}
        keys.append(tuple(conj.get(x) or "" for x in spec.points))
    return min(keys)


def enumerate_portraits(spec):
    pts = tuple(spec.points)
    if not spec.singular:
        return []
    if spec.essential is not None and not spec.transcendental:
        return []
    regular = [x for x in pts if x != spec.essential]
    targets = [x for x in pts if x not in spec.omitted]
    perms = [dict(zip(pts, pts))]
    if spec.relabel:
        perms = []
        for q in permutations(pts):
            perm = dict(zip(pts, q))
            if (frozenset(perm[x] for x in spec.singular) == spec.singular
                    and frozenset(perm[x] for x in spec.omitted) == spec.omitted
                    and (spec.essential is None or perm[spec.essential] == spec.essential)):
                perms.append(perm)
    seen = set()
    out = []
    for imgs in product(targets, repeat=len(regular)):
        images = dict(zip(regular, imgs))
        if _postsingular(images, spec.singular) != set(pts):
            continue
        key = _canonical(images, spec, perms)
        if key in seen:
            continue
        seen.add(key)
        p = Portrait(pts, images, spec.essential, frozenset(spec.singular), {}, spec.transcendental)
        out.append(FamilyMember(p, tuple(find_b_sets(p))))
    return out


def family_by_name(name):
    try:
        return FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; known: {', '.join(FAMILIES)}") from None


# --- Levy classes ----------------------------------------------------------

@dataclass(frozen=True)
class LevyClass:
    """A partition of the marked points into two pairs; ``first`` holds a_j."""
    first: tuple
    second: tuple

    def partition(self):
        return frozenset({frozenset(self.first), frozenset(self.second)})

    def __eq__(self, other):
        if not isinstance(other, LevyClass):
            return NotImplemented
        return self.partition() == other.partition()

    def __hash__(self):
        return hash(self.partition())

    def as_lists(self):
        return [list(self.first), list(self.second)]


def cusp_to_levy_class(b, cusp):
    """Pair partition separated by the curve pinched when a_j collides with
    the C-point that the cusp value marks (0, 1, INF <-> j1, j2, j3)."""
    cusp = parse_cusp(cusp)
    partner = b.cset[2 if cusp is INF else int(cusp)]
    first = (b.a_j, partner)
    rest = tuple(x for x in b.points if x not in first)
    return LevyClass(first, rest)


# --- built-in portraits ------------------------------------------------------

def exponential_portrait(preperiod):
    """The two exponential portraits: a->b->c->b (1) or a->b->c->c (2)."""
    images = {"a": "b", "b": "c", "c": "b" if preperiod == 1 else "c"}
    if preperiod not in (1, 2):
        raise ValueError("pre-period must be 1 or 2")
    return Portrait(("a", "b", "c", "d"), images, "d", frozenset("ad"),
                    {"a": 1, "b": 1, "c": 1}, True)


def entire_portrait(deg_c=None):
    """Entire portrait a->b, b<->c with singular values a, b, d."""
    degrees = {"a": 1}
    if deg_c is not None:
        degrees["c"] = deg_c
    return Portrait(("a", "b", "c", "d"), {"a": "b", "b": "c", "c": "b"}, "d",
                    frozenset("abd"), degrees, True)
