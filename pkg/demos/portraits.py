"""
Portraits, B-sets and total unobstructedness
=============================================

Walk through the combinatorial side: enumerate the portraits of a family,
list the admissible B-sets and decide which portraits are totally
unobstructed.
"""

from pullback import (FAMILIES, cusp_to_levy_class, entire_portrait, enumerate_portraits,
                      exponential_portrait, find_b_sets, totally_unobstructed)
from pullback.moebius import CUSPS, cusp_name

# exponential maps: the asymptotic value a and the essential point d are singular
for name in ("exponential", "entire3"):
    members = enumerate_portraits(FAMILIES[name])
    good = sum(m.condition_ii for m in members)
    print(f"{name}: {len(members)} portraits up to relabeling, {good} with an admissible B-set")
    for m in members:
        p = m.portrait
        arrows = " ".join(f"{x}->{p.images[x]}" for x in p.points if x in p.images)
        print("   ", arrows, " B-sets:", [''.join(b.members) for b in m.b_sets])

# the two exponential portraits behave differently
for pre in (1, 2):
    p = exponential_portrait(pre)
    print(p.describe())
    print("   totally unobstructed:", totally_unobstructed(p))

# for the entire portrait the answer hinges on the local degree at c
for deg in (1, 2):
    print(f"entire portrait with deg(c) = {deg}:", totally_unobstructed(entire_portrait(deg)))

# each cusp of the moduli space names one class of curves
b = find_b_sets(exponential_portrait(1))[0]
for c in CUSPS:
    print(f"cusp {cusp_name(c):>3}:", cusp_to_levy_class(b, c).as_lists())
