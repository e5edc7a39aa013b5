"""
Backward orbits and the realized/obstructed dichotomy
======================================================

Follow x -> branch_m(x) for each branch m.  Orbits either settle on an
interior fixed point (a realized map) or sink into the repelling cusp 1 (an
obstruction, reported together with its class of curves).
"""

from pullback import (Constant, ExpPeriodic, ExpPreperiodic, backward_orbit, campaign,
                      dichotomy_consistency_check, exponential_portrait, find_b_sets, twist_sweep)

g = ExpPeriodic(1)
b = find_b_sets(exponential_portrait(1))[0]

o = backward_orbit(g, b, 0.5 + 0.3j, Constant(3))
print("branch 3:", o.verdict_json())
print("   tail ratio of the steps:", dichotomy_consistency_check(o, g).tail_ratio)

o = backward_orbit(g, b, 0.5 + 0.3j, Constant(1))
print("branch 1:", o.verdict_json())
print("   first index below each cusp threshold:", dichotomy_consistency_check(o, g).ladder)

rep = twist_sweep(g, b, 0.5 + 0.3j, range(-5, 6))
for m, v in rep.verdicts.items():
    print(f"m = {m:2d}: {v.to_json()['verdict']}")
print("realized fixed points pairwise distinct:", rep.realized_distinct)

# the preperiodic family never obstructs
h = ExpPreperiodic(1)
bh = find_b_sets(exponential_portrait(2))[0]
print("preperiodic obstructed branches:", twist_sweep(h, bh, 0.5 + 0.3j, range(-5, 6)).obstructed_branches)

# a small campaign over random starts
rep = campaign(g, b, n_starts=10, m_range=range(-2, 3), seed=1)
for m, row in rep.by_branch().items():
    print(m, row["counts"], row["obstructions"] or row["fixed_points"])
print("undecided rate:", rep.undecided_rate)
