"""Command-line entry point: ``pullback <group> <command> [options]``.

Groups: portrait, moebius, hyp, gmap, orbit.  Exit codes: 0 success,
1 domain error, 2 usage error.
"""

import argparse
import csv
import io
import json
import re
import sys

from . import dynamics, gmap, hyperbolic, modular, portrait
from .config import load_config
from .errors import PullbackError
from .moebius import INF, connecting_map, cusp_name


# --- value parsing ------------------------------------------------------------------

def parse_point(s):
    s = s.strip()
    if s.lower() in ("inf", "infinity"):
        return INF
    parts = s.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected re,im or inf, got {s!r}")


def parse_range(s):
    try:
        lo, hi = s.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo..hi, got {s!r}") from None
    return range(lo, hi + 1)


def fmt_point(z):
    if z is INF:
        return "inf"
    z = complex(z)
    return f"{z.real!r},{z.imag!r}"


def json_point(z):
    if z is INF:
        return "inf"
    z = complex(z)
    return [z.real, z.imag]


def emit_json(obj, out):
    out.write(json.dumps(obj, indent=1, allow_nan=False) + "\n")


def emit_csv(rows, columns, out):
    w = csv.DictWriter(out, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})


def emit_table(rows, columns, out):
    cells = [[str(c) for c in columns]] + [[_cell(r.get(c, "")) for c in columns] for r in rows]
    widths = [max(len(row[n]) for row in cells) for n in range(len(columns))]
    for row in cells:
        out.write("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n")


def _cell(v):
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


# --- portrait -----------------------------------------------------------------------

def _load_portrait(path):
    try:
        with open(path) as fh:
            return portrait.Portrait.from_json(json.load(fh))
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise PullbackError(f"cannot read portrait {path}: {e}") from None


def cmd_portrait_check(a, cfg, out):
    p = _load_portrait(a.file)
    rep = portrait.validate(p)
    if a.fmt == "json":
        emit_json({"valid": rep.ok, "issues": rep.issues}, out)
    else:
        out.write("valid\n" if rep.ok else "invalid\n")
        for issue in rep.issues:
            out.write(f"  {issue}\n")


def cmd_portrait_bsets(a, cfg, out):
    bs = portrait.find_b_sets(_load_portrait(a.file))
    rows = [b.to_json() for b in bs]
    if a.fmt == "json":
        emit_json(rows, out)
    else:
        emit_table([{"B": "".join(r["B"]), "C": "".join(r["C"]), "i": r["i"], "j": r["j"]} for r in rows],
                   ["B", "C", "i", "j"], out)


def cmd_portrait_unobstructed(a, cfg, out):
    flag, witness = portrait.totally_unobstructed(_load_portrait(a.file))
    if a.fmt == "json":
        emit_json({"totally_unobstructed": flag, "witness": list(witness) if witness else None}, out)
    else:
        out.write("totally unobstructed\n" if flag else
                  f"not totally unobstructed (witness {{{witness[0]},{witness[1]}}})\n")


def _family_spec(name):
    if name in portrait.FAMILIES:
        return portrait.FAMILIES[name]
    try:
        with open(name) as fh:
            d = json.load(fh)
    except OSError:
        raise PullbackError(f"unknown family {name!r}; known: {', '.join(portrait.FAMILIES)}") from None
    return portrait.FamilySpec(
        singular=frozenset(d["singular"]), essential=d.get("essential"),
        omitted=frozenset(d.get("omitted", [])), transcendental=bool(d.get("transcendental", False)),
        relabel=bool(d.get("relabel", False)), points=tuple(d.get("points", "abcd")))


def cmd_portrait_enumerate(a, cfg, out):
    members = portrait.enumerate_portraits(_family_spec(a.family))
    if a.fmt == "json":
        emit_json([{"portrait": m.portrait.to_json(), "condition_ii": m.condition_ii,
                    "b_sets": [b.to_json() for b in m.b_sets]} for m in members], out)
        return
    rows = []
    for n, m in enumerate(members, 1):
        p = m.portrait
        rows.append({"#": n, "images": " ".join(f"{x}->{p.images[x]}" for x in p.points if x in p.images),
                     "condition_ii": "yes" if m.condition_ii else "no",
                     "B-sets": " ".join("".join(b.members) for b in m.b_sets)})
    emit_table(rows, ["#", "images", "condition_ii", "B-sets"], out)
    out.write(f"{len(members)} portraits, {sum(m.condition_ii for m in members)} satisfying condition II\n")


# --- moebius ---------------------------------------------------------------------------

def cmd_moebius_mij(a, cfg, out):
    m = connecting_map(a.i, a.j)
    images = {cusp_name(c): cusp_name(m(c)) for c in (0, 1, INF)}
    if a.fmt == "json":
        emit_json({"i": a.i, "j": a.j, "formula": m.formula(), "matrix": list(m.entries),
                   "cusp_images": images}, out)
    else:
        out.write(m.formula() + "\n")
        out.write(", ".join(f"{k} -> {v}" for k, v in images.items()) + "\n")


# --- hyp -----------------------------------------------------------------------------------

MODELS = {m.value: m for m in hyperbolic.Model}


def _scalar(a, out, name, value):
    if a.fmt == "json":
        emit_json({name: json_point(value) if isinstance(value, complex) or value is INF else value}, out)
    elif isinstance(value, complex) or value is INF:
        out.write(fmt_point(value) + "\n")
    else:
        out.write(f"{value!r}\n")


def cmd_hyp_dist(a, cfg, out):
    model = MODELS[a.model]
    if model is hyperbolic.Model.SIGMA:
        for z in (a.z, a.w):
            hyperbolic.check_model(z, model)
        d = hyperbolic.dist_sigma(a.z, a.w, cfg.max_word)
    else:
        d = hyperbolic.distance(hyperbolic.HPoint(a.z, model), hyperbolic.HPoint(a.w, model))
    _scalar(a, out, "distance", d)


def cmd_hyp_density(a, cfg, out):
    _scalar(a, out, "density", hyperbolic.density(hyperbolic.HPoint(a.z, MODELS[a.model])))


def cmd_hyp_lambda(a, cfg, out):
    if a.tau is INF:
        raise PullbackError("tau must be finite")
    _scalar(a, out, "lambda", complex(modular.modular_lambda(a.tau)))


def cmd_hyp_inverse(a, cfg, out):
    _scalar(a, out, "tau", complex(modular.inverse_lambda(a.z)))


def cmd_hyp_bound(a, cfg, out):
    _scalar(a, out, "bound", hyperbolic.contraction_bound(a.s))


def cmd_hyp_threshold(a, cfg, out):
    _scalar(a, out, "threshold", hyperbolic.levy_modulus_threshold(a.d0))


# --- gmap ----------------------------------------------------------------------------------

def cmd_gmap_fixed_points(a, cfg, out):
    g = gmap.make_family(a.family, a.k)
    recs = gmap.find_fixed_points(g, a.radius)
    rows = [{"re": r.location.real, "im": r.location.imag, "mult_re": r.multiplier.real,
             "mult_im": r.multiplier.imag, "abs_mult": abs(r.multiplier), "class": r.classification}
            for r in recs]
    cols = ["re", "im", "mult_re", "mult_im", "abs_mult", "class"]
    if a.fmt == "json":
        emit_json([r.to_json() for r in recs], out)
    elif a.fmt == "table":
        emit_table(rows, cols, out)
    else:
        emit_csv(rows, cols, out)


def cmd_gmap_eval(a, cfg, out):
    g = gmap.make_family(a.family, a.k)
    w = g(a.z)
    if a.fmt == "json":
        d = None if a.z is INF else g.derivative(a.z)
        emit_json({"value": json_point(w), "derivative": None if d is None else json_point(d)}, out)
    else:
        out.write(fmt_point(w) + "\n")


def cmd_gmap_branch(a, cfg, out):
    g = gmap.make_family(a.family, a.k)
    _scalar(a, out, "preimage", g.inverse_branch(a.m, a.w))


# --- orbit ---------------------------------------------------------------------------------

def _orbit_setup(a):
    g = gmap.make_family(a.family, a.k)
    pre = 1 if a.family == "exp-periodic" else 2
    p = portrait.exponential_portrait(pre)
    return g, portrait.find_b_sets(p)[0]


def cmd_orbit_run(a, cfg, out):
    g, b = _orbit_setup(a)
    tol = cfg.tolerances()
    o = dynamics.backward_orbit(g, b, a.x0, dynamics.Constant(a.m), a.max_iter, tol)
    if a.json or a.fmt == "json":
        emit_json(o.verdict_json(), out)
    elif a.fmt == "table":
        emit_table(o.trace_rows(), dynamics.TRACE_COLUMNS, out)
        out.write(json.dumps(o.verdict_json()) + "\n")
    else:
        emit_csv(o.trace_rows(), dynamics.TRACE_COLUMNS, out)


def cmd_orbit_sweep(a, cfg, out):
    g, b = _orbit_setup(a)
    rep = dynamics.twist_sweep(g, b, a.x0, a.m_range, a.max_iter, cfg.tolerances())
    emit_json(rep.to_json(), out)


def cmd_orbit_campaign(a, cfg, out):
    g, b = _orbit_setup(a)
    seed = cfg.seed if a.seed is None else a.seed
    rep = dynamics.campaign(g, b, a.starts, a.m_range, seed, a.max_iter, cfg.tolerances())
    out.write(rep.dumps() + "\n")


# --- parser ----------------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML file with key = value settings")
    common.add_argument("--format", dest="format", choices=["json", "csv", "table"])

    top = argparse.ArgumentParser(prog="pullback", description=__doc__.splitlines()[0])
    groups = top.add_subparsers(dest="group", required=True)

    def leaf(sub, name, func, default_fmt, help):
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=func, default_fmt=default_fmt)
        return p

    g = groups.add_parser("portrait", help="portrait validation and classification")
    s = g.add_subparsers(dest="cmd", required=True)
    leaf(s, "check", cmd_portrait_check, "table", "validate a portrait JSON file").add_argument("file")
    leaf(s, "bsets", cmd_portrait_bsets, "table", "list admissible B-sets").add_argument("file")
    leaf(s, "unobstructed", cmd_portrait_unobstructed, "table",
         "decide total unobstructedness").add_argument("file")
    leaf(s, "enumerate", cmd_portrait_enumerate, "table",
         "enumerate a family").add_argument("--family", required=True)

    g = groups.add_parser("moebius", help="connecting maps")
    s = g.add_subparsers(dest="cmd", required=True)
    p = leaf(s, "mij", cmd_moebius_mij, "table", "connecting map for indices i, j")
    p.add_argument("--i", type=int, required=True, choices=[1, 2, 3, 4])
    p.add_argument("--j", type=int, required=True, choices=[1, 2, 3, 4])

    g = groups.add_parser("hyp", help="hyperbolic geometry")
    s = g.add_subparsers(dest="cmd", required=True)
    p = leaf(s, "dist", cmd_hyp_dist, "table", "hyperbolic distance")
    p.add_argument("--model", choices=sorted(MODELS), default="sigma")
    p.add_argument("z", type=parse_point)
    p.add_argument("w", type=parse_point)
    p = leaf(s, "density", cmd_hyp_density, "table", "hyperbolic density")
    p.add_argument("--model", choices=sorted(MODELS), default="sigma")
    p.add_argument("z", type=parse_point)
    leaf(s, "lambda", cmd_hyp_lambda, "table", "modular lambda").add_argument("tau", type=parse_point)
    leaf(s, "inverse-lambda", cmd_hyp_inverse, "table",
         "lift to the upper half-plane").add_argument("z", type=parse_point)
    leaf(s, "bound", cmd_hyp_bound, "table", "contraction bound").add_argument("--s", type=float, required=True)
    leaf(s, "threshold", cmd_hyp_threshold, "table",
         "Levy modulus threshold").add_argument("--d0", type=float, required=True)

    g = groups.add_parser("gmap", help="moduli-space maps")
    s = g.add_subparsers(dest="cmd", required=True)
    fam = dict(choices=sorted(gmap.FAMILY_KINDS), default="exp-periodic")
    p = leaf(s, "fixed-points", cmd_gmap_fixed_points, "csv", "fixed-point search")
    p.add_argument("--family", **fam)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--radius", type=float, default=50.0)
    p = leaf(s, "eval", cmd_gmap_eval, "table", "evaluate the map")
    p.add_argument("--family", **fam)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--z", type=parse_point, required=True)
    p = leaf(s, "branch", cmd_gmap_branch, "table", "evaluate an inverse branch")
    p.add_argument("--family", **fam)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--w", type=parse_point, required=True)

    g = groups.add_parser("orbit", help="backward orbits")
    s = g.add_subparsers(dest="cmd", required=True)
    for name, func, fmt in (("run", cmd_orbit_run, "csv"), ("sweep", cmd_orbit_sweep, "json"),
                            ("campaign", cmd_orbit_campaign, "json")):
        p = leaf(s, name, func, fmt, f"orbit {name}")
        p.add_argument("--family", **fam)
        p.add_argument("--k", type=int, default=1)
        p.add_argument("--max-iter", type=int, default=None)
        if name == "run":
            p.add_argument("--m", type=int, required=True)
            p.add_argument("--json", action="store_true")
        else:
            p.add_argument("--m-range", type=parse_range, default=range(-5, 6))
        if name == "campaign":
            p.add_argument("--starts", type=int, default=50)
            p.add_argument("--seed", type=int, default=None)
        else:
            p.add_argument("--x0", type=parse_point, default=complex(0.5, 0.3))
    return top


# negative points such as -1.2,0.7 would otherwise be read as flags
_NEGATIVE = re.compile(r"^-[\d.][\d.eE+-]*(,[-+]?[\d.][\d.eE+-]*)?$")


def _shield_negatives(argv):
    return [" " + t if _NEGATIVE.match(t) else t for t in argv]


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    argv = _shield_negatives(sys.argv[1:] if argv is None else list(argv))
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = load_config(a.config, overrides={"format": a.format})
        cfg.apply_globals()
        a.fmt = cfg.format or a.default_fmt
        buf = io.StringIO()
        a.func(a, cfg, buf)
        out.write(buf.getvalue())
        return 0
    except PullbackError as e:
        err.write(f"error: {type(e).__name__}: {e}\n")
        return 1
    except ValueError as e:
        err.write(f"error: {type(e).__name__}: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
