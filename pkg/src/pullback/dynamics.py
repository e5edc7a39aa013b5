"""Backward orbits of moduli-space maps and the realized/obstructed verdict.

An orbit x_{n+1} = branch_{m_n}(x_n) is followed until it either settles on
an interior fixed point (hyperbolic steps below ``conv``) or sinks into a
cusp that is a repelling fixed point of the map.  Anything else after
``max_iter`` iterations is reported as undecided.
"""

from dataclasses import dataclass, field
import json
import math

import numpy as np

from .errors import BranchPole, ConvergenceFailure, InconsistentOrbit, OutOfModel, PreconditionFailed
from .gmap import FixedPoint, FixedPointRecord, classify
from .hyperbolic import GAMMA2_WORD_LENGTH, dist_uhp_lifted, lift_sigma
from .moebius import CUSPS, INF, chordal, connecting_map, cusp_name
from .portrait import cusp_to_levy_class


@dataclass(frozen=True)
class Tolerances:
    conv: float = 1e-10        # hyperbolic step size counted as converged
    fix: float = 1e-10         # |G(x) - x| for a realized verdict
    cusp: float = 1e-6         # chordal distance counted as "at the cusp"
    window: int = 25           # consecutive iterations required
    max_iter: int = 2000
    step_floor: float = 1e-4   # chordal distance to cusps below which steps are skipped
    recursion: float = 1e-10   # |G(x_{n+1}) - x_n| relative to max(1, |x_n|)
    max_word: int = GAMMA2_WORD_LENGTH


# --- branch rules --------------------------------------------------------------

@dataclass(frozen=True)
class Constant:
    m: int

    def __call__(self, n):
        return self.m


@dataclass(frozen=True)
class Periodic:
    ms: tuple

    def __call__(self, n):
        return self.ms[n % len(self.ms)]


@dataclass(frozen=True)
class Explicit:
    ms: tuple

    def __call__(self, n):
        return self.ms[n]


# --- verdicts -------------------------------------------------------------------

@dataclass(frozen=True)
class Realized:
    fixed_point: FixedPointRecord
    name = "realized"

    def to_json(self):
        out = {"verdict": self.name}
        fp = self.fixed_point.to_json()
        out["fixed_point"] = fp.pop("location")
        out.update(fp)
        return out


@dataclass(frozen=True)
class Obstructed:
    cusp: object
    levy_class: object
    multiplier: complex
    name = "obstructed"

    def to_json(self):
        return {"verdict": self.name, "cusp": cusp_name(self.cusp),
                "levy_pairs": self.levy_class.as_lists()}


@dataclass(frozen=True)
class Undecided:
    reason: str
    name = "undecided"

    def to_json(self):
        return {"verdict": self.name, "reason": self.reason}


@dataclass
class OrbitRecord:
    points: list
    branches: list
    steps: list
    verdict: object = None
    flags: set = field(default_factory=set)

    @property
    def iterations(self):
        return len(self.branches)

    def verdict_json(self):
        out = self.verdict.to_json()
        out["iterations"] = self.iterations
        if self.flags:
            out["flags"] = sorted(self.flags)
        return out

    def trace_rows(self):
        rows = []
        for n, z in enumerate(self.points):
            step = self.steps[n - 1] if n else None
            rows.append({
                "n": n, "re": z.real, "im": z.imag,
                "branch": self.branches[n - 1] if n else "",
                "step_hyp": "" if step is None else step,
                "chordal_dist_to_0": chordal(z, 0),
                "chordal_dist_to_1": chordal(z, 1),
                "chordal_dist_to_inf": chordal(z, INF),
            })
        return rows


TRACE_COLUMNS = ["n", "re", "im", "branch", "step_hyp",
                 "chordal_dist_to_0", "chordal_dist_to_1", "chordal_dist_to_inf"]


def _near_cusp(z, tol):
    for c in CUSPS:
        if chordal(z, c) < tol:
            return c
    return None


class _StepMeter:
    """Hyperbolic step lengths with each lift computed once."""

    def __init__(self, tol):
        self.tol = tol
        self.prev = None   # (point, lift or None)
        self.degraded = False

    def _lift(self, z):
        if _near_cusp(z, self.tol.step_floor) is not None:
            return None
        try:
            return lift_sigma(z)
        except ConvergenceFailure:
            self.degraded = True
            return False

    def step(self, x, z):
        if self.prev is None or self.prev[0] != x:
            self.prev = (x, self._lift(x))
        lx = self.prev[1]
        lz = self._lift(z)
        self.prev = (z, lz)
        if lx is None or lz is None:
            return None
        if lx is False or lz is False:
            return chordal(x, z)
        return dist_uhp_lifted(lx, lz, self.tol.max_word)


def _realized_ok(g, x, steps, tol):
    tail = steps[-tol.window:]
    if len(tail) < tol.window or any(s is None or s >= tol.conv for s in tail):
        return False
    return abs(g(x) - x) < tol.fix


def _cusp_ok(g, points, tol):
    tail = points[-tol.window:]
    if len(tail) < tol.window:
        return None
    c = _near_cusp(tail[-1], tol.cusp)
    if c is None or any(chordal(z, c) >= tol.cusp for z in tail):
        return None
    return c


def _decide(g, b, record, tol):
    x = record.points[-1]
    realized = _realized_ok(g, x, record.steps, tol)
    c = _cusp_ok(g, record.points, tol)
    obstructed = False
    if c is not None:
        info = g.cusp_info[c]
        obstructed = isinstance(info, FixedPoint) and info.repelling
    if realized and c is not None:
        record.flags.add("dichotomy-conflict")
        return Undecided("ConflictingCriteria")
    if realized:
        mult = g.derivative(x)
        return Realized(FixedPointRecord(x, mult, classify(mult), abs(g(x) - x)))
    if obstructed:
        y = connecting_map(b.i, b.j).inverse()(c)
        return Obstructed(c, cusp_to_levy_class(b, y), g.cusp_info[c].multiplier)
    return None


def _check_start(x0):
    if x0 is INF:
        raise OutOfModel("start point is a puncture")
    x0 = complex(x0)
    if x0 == 0 or x0 == 1 or not np.isfinite(x0):
        raise OutOfModel(f"start point {x0} is not in the thrice-punctured sphere")
    return x0


def backward_orbit(g, b, x0, rule, max_iter=None, tol=None):
    tol = tol or Tolerances()
    max_iter = tol.max_iter if max_iter is None else max_iter
    if isinstance(rule, int):
        rule = Constant(rule)
    if isinstance(rule, Explicit) and len(rule.ms) < max_iter:
        raise PreconditionFailed("explicit branch list shorter than max_iter")
    x = _check_start(x0)
    record = OrbitRecord([x], [], [])
    meter = _StepMeter(tol)
    for n in range(max_iter):
        m = rule(n)
        try:
            z = g.inverse_branch(m, x)
        except BranchPole as e:
            record.verdict = Undecided("BranchPole")
            raise BranchPole(str(e), orbit=record) from None
        if z is INF:
            record.verdict = Undecided("BranchPole")
            raise BranchPole(f"branch {m} sends {x} to infinity", orbit=record)
        z = complex(z)
        record.points.append(z)
        record.branches.append(m)
        record.steps.append(meter.step(x, z))
        x = z
        verdict = _decide(g, b, record, tol)
        if verdict is not None:
            record.verdict = verdict
            break
    else:
        record.verdict = Undecided(_undecided_reason(g, record, tol))
    if meter.degraded:
        record.flags.add("steps-degraded")
    return record


def _undecided_reason(g, record, tol):
    pole_hits = 0
    for m, z in zip(record.branches[-tol.window:], record.points[-tol.window - 1:-1]):
        w = g.branch_pole(m) if hasattr(g, "branch_pole") else None
        if w is not None and chordal(z, w) < math.sqrt(tol.cusp):
            pole_hits += 1
    if pole_hits:
        return "BranchPoleProximity"
    c = _near_cusp(record.points[-1], tol.cusp)
    if c is not None:
        return "CuspNotRepelling"
    return "MaxIterations"


# --- sweeps and campaigns -------------------------------------------------------------

def _cluster(points, tol=1e-8):
    reps = []
    for z in points:
        if all(abs(z - r) > tol for r in reps):
            reps.append(z)
    return reps


@dataclass
class TwistSweepReport:
    family: str
    k: int
    m_range: tuple
    verdicts: dict
    errors: dict

    @property
    def realized_points(self):
        return {m: v.fixed_point.location for m, v in self.verdicts.items() if isinstance(v, Realized)}

    @property
    def obstructed_branches(self):
        return [m for m, v in self.verdicts.items() if isinstance(v, Obstructed)]

    @property
    def realized_distinct(self):
        pts = list(self.realized_points.values())
        return len(_cluster(pts)) == len(pts)

    def to_json(self):
        return {
            "family": self.family, "k": self.k, "m_range": list(self.m_range),
            "verdicts": {str(m): v.to_json() for m, v in self.verdicts.items()},
            "errors": {str(m): e for m, e in self.errors.items()},
            "obstructed_branches": self.obstructed_branches,
            "realized_distinct": self.realized_distinct,
        }


def twist_sweep(g, b, x0, m_range, max_iter=None, tol=None):
    verdicts, errors = {}, {}
    for m in m_range:
        try:
            verdicts[m] = backward_orbit(g, b, x0, Constant(m), max_iter, tol).verdict
        except Exception as e:   # recorded per branch, the sweep continues
            errors[m] = f"{type(e).__name__}: {e}"
    return TwistSweepReport(getattr(g, "kind", "rational"), getattr(g, "k", 0),
                            tuple(m_range), verdicts, errors)


def sample_starts(n, seed, radius=2.0, margin=0.05):
    """Uniform points in |z| <= radius kept at chordal distance >= margin from the cusps."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        r = radius * math.sqrt(rng.random())
        t = 2 * math.pi * rng.random()
        z = complex(r * math.cos(t), r * math.sin(t))
        if min(chordal(z, c) for c in CUSPS) >= margin:
            out.append(z)
    return out


@dataclass
class CampaignReport:
    family: str
    k: int
    seed: int
    starts: list
    m_range: tuple
    runs: list      # (start index, m, verdict json)

    def by_branch(self):
        out = {}
        for m in self.m_range:
            rs = [v for (_, mm, v) in self.runs if mm == m]
            counts = {"realized": 0, "obstructed": 0, "undecided": 0, "error": 0}
            for v in rs:
                counts[v["verdict"]] += 1
            pts = _cluster([complex(*v["fixed_point"]) for v in rs if v["verdict"] == "realized"])
            levy = []
            for v in rs:
                if v["verdict"] == "obstructed":
                    key = [v["cusp"], v["levy_pairs"]]
                    if key not in levy:
                        levy.append(key)
            out[m] = {"counts": counts, "fixed_points": [[z.real, z.imag] for z in pts],
                      "obstructions": [{"cusp": c, "levy_pairs": p} for c, p in levy]}
        return out

    @property
    def undecided_rate(self):
        n = len(self.runs)
        return sum(v["verdict"] in ("undecided", "error") for _, _, v in self.runs) / n if n else 0.0

    def to_json(self):
        return {
            "family": self.family, "k": self.k, "seed": self.seed,
            "n_starts": len(self.starts), "m_range": [self.m_range[0], self.m_range[-1]] if self.m_range else [],
            "starts": [[z.real, z.imag] for z in self.starts],
            "branches": {str(m): v for m, v in self.by_branch().items()},
            "undecided_rate": self.undecided_rate,
            "runs": [{"start": s, "m": m, **v} for s, m, v in self.runs],
        }

    def dumps(self):
        return json.dumps(self.to_json(), indent=1)


def campaign(g, b, n_starts=50, m_range=range(-5, 6), seed=0, max_iter=None, tol=None):
    starts = sample_starts(n_starts, seed)
    runs = []
    for s, x0 in enumerate(starts):
        for m in m_range:
            try:
                v = backward_orbit(g, b, x0, Constant(m), max_iter, tol).verdict_json()
            except Exception as e:
                v = {"verdict": "error", "error": f"{type(e).__name__}: {e}"}
            runs.append((s, m, v))
    return CampaignReport(getattr(g, "kind", "rational"), getattr(g, "k", 0), seed,
                          starts, tuple(m_range), runs)


# --- consistency check --------------------------------------------------------------

@dataclass
class CheckReport:
    recursion_max: float
    tail_ratio: float = None
    tail_length: int = 0
    ladder: list = None
    vacuous: bool = False


CUSP_LADDER = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
STEP_NOISE = 1e-12


def dichotomy_consistency_check(o, g, tol=None):
    tol = tol or Tolerances()
    worst = 0.0
    for n in range(len(o.points) - 1):
        x, z = o.points[n], o.points[n + 1]
        err = abs(g(z) - x) / max(1.0, abs(x))
        worst = max(worst, err)
        if err > tol.recursion:
            raise InconsistentOrbit(f"recursion fails at index {n}: {err:.3g}", index=n)
    rep = CheckReport(worst)
    if isinstance(o.verdict, Realized):
        vals = [(n, s) for n, s in enumerate(o.steps) if s is not None and s > STEP_NOISE]
        if len(vals) < 3:
            rep.vacuous = True
            return rep
        k = len(vals) - 1
        while k > 0 and vals[k - 1][1] > vals[k][1]:
            k -= 1
        tail = vals[k:]
        if len(tail) < 3:
            raise InconsistentOrbit("steps are not eventually decreasing", index=vals[k][0])
        ns = np.array([n for n, _ in tail], dtype=float)
        ls = np.log([s for _, s in tail])
        slope = np.polyfit(ns, ls, 1)[0]
        rep.tail_ratio = float(math.exp(slope))
        rep.tail_length = len(tail)
        if not rep.tail_ratio < 1:
            raise InconsistentOrbit(f"tail ratio {rep.tail_ratio:.3g} >= 1", index=tail[0][0])
    elif isinstance(o.verdict, Obstructed):
        rep.ladder = []
        for thr in CUSP_LADDER:
            hit = next((n for n, z in enumerate(o.points) if chordal(z, o.verdict.cusp) < thr), None)
            if hit is None:
                raise InconsistentOrbit(f"threshold {thr:g} never crossed", index=len(o.points) - 1)
            rep.ladder.append(hit)
    else:
        rep.vacuous = True
    return rep
