"""Command-line front end.

    mobreflect audit complex.json --output report.json
    mobreflect enumerate complex.json --max-length 4 --growth-csv growth.csv
    mobreflect plinv cube.json

Exit status: 0 when every requested check passes, 2 when checks ran but
found violations or counterexamples (or hit a cap), 1 on bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import random
import sys
from fractions import Fraction

from . import __version__
from .construction import (
    BallConfiguration,
    VertexConditionError,
    audit,
    canonical_map_check,
    coverage_check,
    generate_configuration,
    nerve,
)
from .coxeter import (
    DEFAULT_ELEMENT_CAP,
    PresentationError,
    ProbeError,
    QuotientError,
    abstract_growth,
    congruence_quotient,
    enumerate_group,
    lorentz_audit,
    orbit_tiling,
    presentation_from_audit,
    torsion_survival_check,
    verify_relations,
)
from .cubical import ComplexFormatError, complex_from_json
from .inversive import INFINITY, Sphere
from .plfold import CubeInversion, involution_check, pl_invert
from .serial import decimal_shadow, dumps, frac_str, parse_frac

log = logging.getLogger("mobreflect")

COMMANDS = ("generate", "audit", "nerve", "enumerate", "tile", "quotient", "plinv")

OK, ERROR, VIOLATION = 0, 1, 2


class InputError(Exception):
    pass


# -- input ----------------------------------------------------------------------

def _read_json(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _parse_balls(items):
    spheres = []
    for i, obj in enumerate(items):
        where = f"balls[{i}]"
        if not isinstance(obj, dict) or "center" not in obj or "radius_sq" not in obj:
            raise InputError(f"{where}: expected an object with 'center' and 'radius_sq'")
        try:
            center = [parse_frac(c) for c in obj["center"]]
            spheres.append(Sphere(center, parse_frac(obj["radius_sq"])))
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise InputError(f"{where}: {exc}") from None
    return spheres


def load_input(path):
    """A cubical complex (squares schema) or an explicit list of balls.

    Returns (complex or None, configuration).
    """
    data = _read_json(path)
    if isinstance(data, dict) and "balls" in data:
        if not isinstance(data["balls"], list) or not data["balls"]:
            raise InputError(f"{path}: balls: expected a non-empty list")
        return None, BallConfiguration.from_spheres(_parse_balls(data["balls"]))
    try:
        K = complex_from_json(data)
    except ComplexFormatError as exc:
        raise InputError(f"{path}: {exc}") from None
    try:
        conf = generate_configuration(K)
    except VertexConditionError as exc:
        raise InputError(f"{path}: vertex condition fails: {exc}") from None
    return K, conf


def load_cube(path):
    data = _read_json(path)
    if not isinstance(data, dict) or "center" not in data or "half_width" not in data:
        raise InputError(f"{path}: expected an object with 'center' and 'half_width'")
    try:
        center = [parse_frac(c) for c in data["center"]]
        ci = CubeInversion(center, parse_frac(data["half_width"]))
        points = [_parse_point(p) for p in data.get("points", [])]
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"{path}: {exc}") from None
    return ci, points


def _parse_point(p):
    if p == "inf":
        return INFINITY
    if isinstance(p, str):
        p = p.split(",")
    pt = tuple(parse_frac(c) for c in p)
    if len(pt) != 4:
        raise ValueError(f"point needs 4 coordinates: {p!r}")
    return pt


# -- report pieces ------------------------------------------------------------------

def _point_json(p):
    if p is INFINITY:
        return "inf"
    return [frac_str(c) for c in p]


def _pair_json(i, j, pc):
    out = {"i": i, "j": j, "tag": pc.tag.value, "dist_sq": frac_str(pc.dist_sq)}
    if pc.intersecting:
        out["cos_numerator"] = frac_str(pc.cos_ext_num)
        out["cos_sq"] = frac_str(pc.cos_ext_sq)
        out["coxeter_order"] = pc.coxeter_order
        out["angle_decimal_shadow"] = decimal_shadow(pc.exterior_angle())
    return out


def _claims_json(claims):
    return [{"name": c.name, "description": c.description, "stated": c.stated, "computed": list(c.computed),
             "agrees": c.agrees, "pairs_checked": c.pairs_checked, "evidence": c.evidence} for c in claims]


def _relations_json(rc):
    return {"ok": rc.ok, "pairs_checked": rc.pairs_checked, "involutions_checked": rc.involutions_checked,
            "failures": [{"i": f.i, "j": f.j, "expected_order": f.expected_order, "found_order": f.found_order}
                         for f in rc.failures]}


def _growth_csv(matrix_growth, abstract):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["length", "matrix", "abstract"])
    for k in range(max(len(matrix_growth), len(abstract))):
        w.writerow([k, matrix_growth[k] if k < len(matrix_growth) else "",
                    abstract[k] if k < len(abstract) else ""])
    return buf.getvalue()


def _presentation(report):
    try:
        return presentation_from_audit(report), None
    except PresentationError as exc:
        return None, str(exc)


# -- commands -----------------------------------------------------------------------

def cmd_generate(args, K, conf):
    report = {"balls": conf.to_json(decimals=True), "ball_count": len(conf),
              "decimal_fields": "every 'decimal' entry is a decimal shadow; exact values are 'p/q' strings"}
    if K is not None:
        report["complex"] = K.to_json()
    return report, OK


def cmd_audit(args, K, conf):
    rep = audit(conf, workers=args.workers, with_nerve=K is not None)
    pres, why = _presentation(rep)
    out = {
        "ball_count": rep.n,
        "pair_table": [_pair_json(i, j, pc) for (i, j), pc in sorted(rep.pair_table.items())],
        "coxeter_matrix": [["inf" if m is None else m for m in row] for row in rep.coxeter_matrix],
        "coxeter_entries": sorted(m for m in rep.coxeter_entries() if m not in (None, 1))
        + (["inf"] if None in rep.coxeter_entries() else []),
        "violations": [{"i": v.i, "j": v.j, "reason": v.reason} for v in rep.violations],
        "claims": _claims_json(rep.claims),
        "intersections_outside_common_square": [list(p) for p in rep.uncovered_intersections],
    }
    ok = rep.passed
    if rep.nerve_check is not None:
        out["nerve_check"] = rep.nerve_check.to_json()
        ok = ok and rep.nerve_check.isomorphism
    if pres is not None:
        rc = verify_relations(conf, pres)
        out["relations"] = _relations_json(rc)
        ok = ok and rc.ok
    else:
        out["relations"] = {"ok": False, "error": why}
    if K is not None:
        cov = coverage_check(conf, K, args.grid_step)
        out["coverage"] = {"grid_step": frac_str(cov.grid_step), "samples": cov.samples,
                           "uncovered": [_point_json(p) for p in cov.uncovered], "ok": cov.covered}
        ok = ok and cov.covered
    return out, OK if ok else VIOLATION


def cmd_nerve(args, K, conf):
    N = nerve(conf, workers=args.workers)
    out = {"nerve": N.to_json()}
    if K is None:
        return out, OK
    check = canonical_map_check(conf, K, nerve_complex=N)
    out["canonical_map"] = check.to_json()
    return out, OK if check.isomorphism else VIOLATION


def _growth_pair(args, conf, rep, keep=False):
    pres, why = _presentation(rep)
    enum = enumerate_group(conf, args.max_length, args.element_cap, keep_elements=keep)
    abstract = abstract_growth(pres, args.max_length, args.element_cap) if pres is not None else None
    return pres, why, enum, abstract


def cmd_enumerate(args, K, conf):
    rep = audit(conf, workers=args.workers, with_nerve=False)
    pres, why, enum, abstract = _growth_pair(args, conf, rep, keep=True)
    bad_lorentz = lorentz_audit(enum, seed=args.seed)
    out = {
        "max_length": args.max_length,
        "element_cap": args.element_cap,
        "matrix_growth": enum.growth,
        "matrix_truncated": enum.truncated,
        "lorentz_failures": [list(w) for w in bad_lorentz],
        "seed": args.seed,
    }
    ok = not enum.truncated and not bad_lorentz
    if pres is None:
        out["abstract_growth"] = None
        out["presentation_error"] = why
        ok = False
    else:
        rc = verify_relations(conf, pres)
        out["abstract_growth"] = abstract.growth
        out["abstract_truncated"] = abstract.truncated
        out["growth_agrees"] = abstract.growth == enum.growth
        out["relations"] = _relations_json(rc)
        ok = ok and rc.ok and out["growth_agrees"] and not abstract.truncated
    csv_text = _growth_csv(enum.growth, abstract.growth if abstract else [])
    if args.growth_csv:
        with open(args.growth_csv, "w") as fh:
            fh.write(csv_text)
    out["growth_csv"] = csv_text
    return out, OK if ok else VIOLATION


def cmd_tile(args, K, conf):
    try:
        probe = _parse_point(args.probe)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"--probe: {exc}") from None
    try:
        tiling = orbit_tiling(conf, args.max_length, probe, element_cap=args.element_cap)
    except ProbeError as exc:
        raise InputError(f"--probe: {exc}") from None
    out = {"max_length": args.max_length, "tiling": tiling.to_json(),
           "decimal_fields": "'decimal' entries are decimal shadows of the exact 'point' entries"}
    return out, OK if tiling.ok else VIOLATION


def cmd_quotient(args, K, conf):
    rep = audit(conf, workers=args.workers, with_nerve=False)
    pres, why = _presentation(rep)
    try:
        q = congruence_quotient(conf, args.prime, pres)
    except QuotientError as exc:
        raise InputError(f"--prime: {exc}") from None
    tc = torsion_survival_check(conf, q, args.max_length, element_cap=args.element_cap)
    out = {"quotient": q.to_json(), "torsion": tc.to_json(), "max_length": args.max_length}
    ok = q.homomorphism_ok and tc.ok and not tc.truncated
    if pres is None:
        out["presentation_error"] = why
        ok = False
    return out, OK if ok else VIOLATION


def cmd_plinv(args, ci, points):
    rng = random.Random(args.seed)
    s = ci.half_width
    samples = [ci.center, INFINITY]
    for _ in range(args.samples):
        samples.append(tuple(c + Fraction(rng.randint(-4000, 4000), rng.randint(1, 500)) * s
                             for c in ci.center))
    for _ in range(20):
        # boundary points: one coordinate pinned at +-s, the rest inside
        axis, sign = rng.randrange(4), rng.choice((-1, 1))
        p = [c + Fraction(rng.randint(-999, 999), 1000) * s for c in ci.center]
        p[axis] = ci.center[axis] + sign * s
        samples.append(tuple(p))
    failure = involution_check(ci, samples)
    out = {
        "cube": {"center": _point_json(ci.center), "half_width": frac_str(ci.half_width)},
        "samples_checked": len(samples),
        "seed": args.seed,
        "involution_ok": failure is None,
        "failure": None if failure is None else {"sample": _point_json(failure.sample),
                                                 "image": _point_json(failure.image), "reason": failure.reason},
        "images": [{"point": _point_json(p), "image": _point_json(pl_invert(ci, p))} for p in points],
    }
    return out, OK if failure is None else VIOLATION


HANDLERS = {"generate": cmd_generate, "audit": cmd_audit, "nerve": cmd_nerve, "enumerate": cmd_enumerate,
            "tile": cmd_tile, "quotient": cmd_quotient, "plinv": cmd_plinv}


def _fraction_arg(s):
    try:
        v = Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {s!r}")
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nonneg_int(s):
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors: status 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ERROR, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="mobreflect", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("input", help="cube spec JSON" if name == "plinv" else "complex (or balls) JSON")
        p.add_argument("--output", "-o", help="report path (default: stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=_positive_int, default=1)
        p.add_argument("--max-length", type=_nonneg_int, default=3)
        p.add_argument("--prime", type=int, default=5)
        p.add_argument("--grid-step", type=_fraction_arg, default=Fraction(1, 16))
        p.add_argument("--element-cap", type=_positive_int, default=DEFAULT_ELEMENT_CAP)
        p.add_argument("-v", "--verbose", action="store_true")
        if name == "enumerate":
            p.add_argument("--growth-csv", help="also write the growth table as CSV")
        if name == "tile":
            p.add_argument("--probe", default="inf", help="'inf' or comma-separated coordinates")
        if name == "plinv":
            p.add_argument("--samples", type=_nonneg_int, default=10000)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "quotient" and args.prime in (2, 3):
        print("error: --prime must not be 2 or 3", file=sys.stderr)
        return ERROR
    try:
        if args.command == "plinv":
            loaded = load_cube(args.input)
        else:
            loaded = load_input(args.input)
        report, status = HANDLERS[args.command](args, *loaded)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR
    report = {"command": args.command, "status": status, "report": report}
    text = dumps(report)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main():
    sys.exit(run())
