from itertools import combinations, permutations, product

import pytest
from hypothesis import given, strategies as st

from pullback.errors import PreconditionFailed, UnknownDegree
from pullback.moebius import INF
from pullback.portrait import (FAMILIES, FamilySpec, LevyClass, Portrait, cusp_to_levy_class,
                               entire_portrait, enumerate_portraits, exponential_portrait,
                               find_b_sets, totally_unobstructed, validate)

ABCD = ("a", "b", "c", "d")


def test_exponential_portrait_valid():
    assert validate(exponential_portrait(1)).ok
    assert validate(exponential_portrait(2)).ok


def test_missing_image_is_reported():
    p = Portrait(ABCD, {"b": "c", "c": "b"}, "d", frozenset("ad"), {}, True)
    rep = validate(p)
    assert not rep.ok
    assert any("missing image for a" in s for s in rep.issues)


def test_degree_singular_inconsistency_is_reported():
    p = exponential_portrait(1).with_degrees(b=2)
    rep = validate(p)
    assert any("degree/singular inconsistency at b" in s for s in rep.issues)


@pytest.mark.parametrize("p,fragment", [
    (Portrait(ABCD, {"a": "b", "b": "c", "c": "b"}, "d", frozenset("ad"), {}, False), "non-transcendental"),
    (Portrait(ABCD, {"a": "b", "b": "c", "c": "b", "d": "a"}, "d", frozenset("ad"), {}, True), "has an image"),
    (Portrait(ABCD, {"a": "b", "b": "c", "c": "x"}, "d", frozenset("ad"), {}, True), "not marked"),
    (Portrait(("a", "b", "c"), {"a": "b", "b": "c"}, "c", frozenset("a"), {}, True), "four distinct"),
    (Portrait(ABCD, {"a": "b", "b": "c", "c": "b"}, "d", frozenset("ad"), {"a": 0}, True), "positive integer"),
])
def test_validation_catches(p, fragment):
    rep = validate(p)
    assert any(fragment in s for s in rep.issues), rep.issues


def test_b_sets_exponential():
    (b,) = find_b_sets(exponential_portrait(1))
    assert b.members == ("a", "b", "d") and b.cset == ("a", "c", "d")
    assert (b.i, b.j) == (3, 2)
    (b,) = find_b_sets(exponential_portrait(2))
    assert b.members == ("a", "c", "d") and b.cset == ("b", "c", "d")
    assert (b.i, b.j) == (2, 1)


def test_b_sets_entire():
    (b,) = find_b_sets(entire_portrait(1))
    assert b.members == ("a", "b", "d") and b.cset == ("a", "c", "d")


def test_b_sets_empty_when_everything_maps_into_b():
    p = Portrait(ABCD, {x: "a" for x in ABCD}, None, frozenset("a"), {}, False)
    assert validate(p).ok
    assert find_b_sets(p) == []


def test_b_sets_empty_with_unmarked_singular_values():
    p = Portrait(ABCD, dict(exponential_portrait(1).images), "d", frozenset("ad"), {}, True, True)
    assert find_b_sets(p) == []


def test_totally_unobstructed_examples():
    assert totally_unobstructed(exponential_portrait(1)) == (False, ("b", "c"))
    assert totally_unobstructed(exponential_portrait(2)) == (True, None)
    assert totally_unobstructed(entire_portrait(2)) == (True, None)
    assert totally_unobstructed(entire_portrait(1)) == (False, ("b", "c"))


def test_totally_unobstructed_needs_b_set():
    p = Portrait(ABCD, {x: "a" for x in ABCD}, None, frozenset("a"), {}, False)
    with pytest.raises(PreconditionFailed):
        totally_unobstructed(p)


def test_totally_unobstructed_unknown_degree():
    with pytest.raises(UnknownDegree):
        totally_unobstructed(entire_portrait(None))


def test_unknown_degree_forced_to_one_off_singular_images():
    p = exponential_portrait(1)
    p = Portrait(p.points, p.images, p.essential, p.singular, {}, True)
    assert p.degree("b") == 1 and p.degree("c") == 1
    assert totally_unobstructed(p) == (False, ("b", "c"))


def test_json_roundtrip():
    p = entire_portrait(2)
    assert Portrait.from_json(p.to_json()) == p


# --- enumeration ------------------------------------------------------------

def _burnside_oracle(spec):
    """Orbit counts by brute force: all maps, orbits under the allowed label group."""
    pts = spec.points
    regular = [x for x in pts if x != spec.essential]
    targets = [x for x in pts if x not in spec.omitted]
    group = []
    for q in permutations(pts):
        perm = dict(zip(pts, q))
        if (frozenset(perm[x] for x in spec.singular) == spec.singular
                and frozenset(perm[x] for x in spec.omitted) == spec.omitted
                and (spec.essential is None or perm[spec.essential] == spec.essential)):
            group.append(perm)
    orbits = set()
    for imgs in product(targets, repeat=len(regular)):
        f = dict(zip(regular, imgs))
        reach = set()
        for s in spec.singular:
            x = s
            while x is not None and x not in reach:
                reach.add(x)
                x = f.get(x)
        if reach != set(pts):
            continue
        orbit = frozenset(tuple(sorted((g[x], g[y]) for x, y in f.items())) for g in group)
        orbits.add(orbit)
    ii = 0
    for orbit in orbits:
        f = dict(next(iter(orbit)))
        p = Portrait(pts, f, spec.essential, spec.singular, {}, spec.transcendental)
        ii += bool(find_b_sets(p))
    return len(orbits), ii


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_enumeration_matches_brute_force_oracle(name):
    spec = FAMILIES[name]
    members = enumerate_portraits(spec)
    assert (len(members), sum(m.condition_ii for m in members)) == _burnside_oracle(spec)


def test_enumeration_entire3_classes():
    # the eight relabeling classes, four of them with an admissible B-set
    members = enumerate_portraits(FAMILIES["entire3"])
    got = {tuple(m.portrait.images[x] for x in "abc"): m.condition_ii for m in members}
    assert got == {
        ("a", "c", "a"): True, ("a", "c", "b"): True, ("b", "c", "a"): True, ("b", "c", "b"): True,
        ("a", "c", "c"): False, ("b", "c", "c"): False, ("c", "c", "a"): False, ("c", "c", "c"): False,
    }


def test_enumeration_exponential():
    members = enumerate_portraits(FAMILIES["exponential"])
    assert len(members) == 2 and all(m.condition_ii for m in members)
    imgs = sorted(tuple(m.portrait.images[x] for x in "abc") for m in members)
    assert imgs == [("b", "c", "b"), ("b", "c", "c")]


def test_enumeration_empty_family():
    assert enumerate_portraits(FamilySpec(frozenset())) == []


def test_enumeration_fixed_labels_by_default():
    spec = FAMILIES["entire3"]
    fixed = FamilySpec(spec.singular, spec.essential, spec.omitted, True)
    assert len(enumerate_portraits(fixed)) > len(enumerate_portraits(spec))


def test_enumeration_deterministic():
    a = [m.portrait.to_json() for m in enumerate_portraits(FAMILIES["meromorphic3"])]
    b = [m.portrait.to_json() for m in enumerate_portraits(FAMILIES["meromorphic3"])]
    assert a == b


# --- Levy classes -------------------------------------------------------------

def test_cusp_to_levy_class_examples():
    b = find_b_sets(Portrait(ABCD, {"a": "b", "b": "c", "c": "b"}, "d", frozenset("ad"), {}, True))[0]
    # C = {a1, a3, a4}, j = 2
    assert (b.cset, b.j) == (("a", "c", "d"), 2)
    assert cusp_to_levy_class(b, 0).partition() == {frozenset("ba"), frozenset("cd")}
    assert cusp_to_levy_class(b, 1).partition() == {frozenset("bc"), frozenset("ad")}
    assert cusp_to_levy_class(b, INF).partition() == {frozenset("bd"), frozenset("ac")}
    assert cusp_to_levy_class(b, "inf") == cusp_to_levy_class(b, INF)


def _collision_oracle(b, cusp):
    """Send a_j to the C-point whose normalized position is the cusp value;
    the pinched curve separates that pair from the other two."""
    pos = dict(zip(b.cset, (0, 1, INF)))
    partner = next(x for x, v in pos.items() if v is cusp or (v == cusp and cusp is not INF))
    pair = frozenset({b.a_j, partner})
    return frozenset({pair, frozenset(b.points) - pair})


# --- hypothesis strategies ------------------------------------------------------

@st.composite
def portraits(draw):
    essential = draw(st.sampled_from([None, "a", "b", "c", "d"]))
    images = {x: draw(st.sampled_from(ABCD)) for x in ABCD if x != essential}
    singular = frozenset(draw(st.sets(st.sampled_from(ABCD), max_size=3)))
    if essential:
        singular |= {essential}
    degrees = {}
    for x, y in images.items():
        choice = draw(st.sampled_from([1, 2, None])) if y in singular else 1
        degrees[x] = choice
    return Portrait(ABCD, images, essential, singular, degrees, essential is not None)


@given(portraits())
def test_b_sets_contain_singular_values(p):
    assert validate(p).ok
    for b in find_b_sets(p):
        assert p.singular <= set(b.members)
        assert len(b.cset) == 3
        assert p.images[b.a_j] == b.a_i
        assert p.degree(b.a_j) in (1, None)


@given(portraits(), st.permutations(ABCD))
def test_totally_unobstructed_relabeling_invariant(p, q):
    if not find_b_sets(p):
        return
    perm = dict(zip(ABCD, q))
    # relabel but keep the index order a, b, c, d (the points are conjugated)
    r = p.relabeled(perm)
    r = Portrait(ABCD, r.images, r.essential, r.singular, r.degrees, r.transcendental)
    try:
        left = totally_unobstructed(p)[0]
    except UnknownDegree:
        with pytest.raises(UnknownDegree):
            totally_unobstructed(r)
        return
    assert totally_unobstructed(r)[0] == left


@given(portraits())
def test_witness_satisfies_literal_predicate(p):
    if not find_b_sets(p):
        return
    try:
        flag, witness = totally_unobstructed(p)
    except UnknownDegree:
        return
    if flag:
        return
    x, y = witness
    assert x != y and p.essential not in (x, y)
    assert p.degrees.get(x, 1) in (1, None) and p.degree(x) == 1 and p.degree(y) == 1
    img = {p.images[x], p.images[y]}
    assert img == {x, y} or img == set(ABCD) - {x, y}


@given(portraits())
def test_cusp_to_levy_class_is_bijection_and_matches_oracle(p):
    for b in find_b_sets(p):
        classes = [cusp_to_levy_class(b, c) for c in (0, 1, INF)]
        assert len({c.partition() for c in classes}) == 3
        for c, cls in zip((0, 1, INF), classes):
            assert isinstance(cls, LevyClass)
            assert b.a_j in cls.first
            assert set(cls.first) | set(cls.second) == set(ABCD)
            assert cls.partition() == _collision_oracle(b, c)
