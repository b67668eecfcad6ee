"""``eqtodd`` command line."""
import argparse
import json
import sys

from . import todd
from .complement import GenericityError, NotAFunctionalError
from .cycle_ring import CartierError, CycleRing, EquivariantCycle, act
from .io import (
    SchemaError,
    load_divisor,
    load_fan,
    load_gram,
    load_polytope,
    parse_cone_label,
    parse_dpoly,
)
from .lattice_geom import ConeData, ConeError, FanError
from .linalg import as_int
from .polytope_em import PolytopeError, VerificationError, count_lattice_points, verify
from .series import DEFAULT_ORDER, format_series, series_to_json, symbol_names

EXIT_OK = 0
EXIT_SCHEMA = 3
EXIT_CARTIER = 4
EXIT_GENERICITY = 5
EXIT_MISMATCH = 6


def _series_out(s, args, n):
    if args.json:
        return series_to_json(s)
    return format_series(s, symbol_names(n, prefix="m"))


def _emit(obj, args):
    indent = None if args.json else 2
    print(json.dumps(obj, indent=indent))


def _cycle_out(cycle, args):
    return cycle.to_json(pretty=not args.json, base=args.base)


def cmd_act(args):
    fan = load_fan(args.fan)
    psi = load_gram(args.gram, fan.rank)
    D = load_divisor(args.divisor, fan)
    cones = [parse_cone_label(c, args.base) for c in args.cycle]
    for s in cones:
        if s not in fan:
            raise SchemaError(f"{sorted(i + args.base for i in s)} is not a cone of the fan")
    C = EquivariantCycle.basis(fan, cones[0], None)
    for s in cones[1:]:
        C = C + EquivariantCycle.basis(fan, s, None)
    _emit(_cycle_out(act(D, C, psi), args), args)


def _parse_generators(text):
    try:
        gens = json.loads(text)
    except json.JSONDecodeError:
        gens = [[x.strip() for x in g.split(",")] for g in text.split(";") if g.strip()]
    if not gens or not all(isinstance(g, list) for g in gens):
        raise SchemaError("cone generators must be a list of integer vectors")
    return [tuple(as_int(x) for x in g) for g in gens]


def cmd_rcoef(args):
    gens = _parse_generators(args.cone)
    cone = ConeData(tuple(gens))
    psi = load_gram(args.gram, cone.ambient_dim)
    r = todd.r_general(cone, psi, args.order)
    _emit({"cone": [list(g) for g in cone.generators], "order": args.order,
           "series": _series_out(r, args, cone.ambient_dim)}, args)


def cmd_todd(args):
    fan = load_fan(args.fan)
    psi = load_gram(args.gram, fan.rank)
    cycle = todd.todd_class(fan, psi, args.order, method=args.method)
    _emit(_cycle_out(cycle, args), args)


def cmd_count(args):
    P = load_polytope(args.polytope)
    psi = load_gram(args.gram, P.rank)
    count, cert = count_lattice_points(P, psi)
    _emit({"count": count, "certificate": cert}, args)


def cmd_verify(args):
    P = load_polytope(args.polytope)
    psi = load_gram(args.gram, P.rank)
    report = verify(P, psi, args.order)
    names = symbol_names(P.rank, prefix="m")
    diffs = {
        "*".join(f"{names[k]}^{e}" for k, e in enumerate(exp) if e) or "1": str(c)
        for exp, c in sorted(report["diff"].items())
    }
    _emit({"order": args.order, "max_abs_diff": str(report["max_abs_diff"]), "diff": diffs}, args)
    if report["max_abs_diff"] != 0:
        raise VerificationError(f"max coefficient difference {report['max_abs_diff']}")


def cmd_reduce(args):
    fan = load_fan(args.fan)
    psi = load_gram(args.gram, fan.rank)
    ring = CycleRing(fan, psi, args.order)
    poly = parse_dpoly(args.poly, len(fan.rays), fan.rank, args.base)
    sqf = ring.reduce({e: c.truncate(args.order) for e, c in poly.items()})
    out = {}
    for S in sorted(sqf, key=lambda s: (len(s), sorted(s))):
        label = "*".join(f"D{i + args.base}" for i in sorted(S)) or "1"
        out[label] = _series_out(sqf[S], args, fan.rank)
    _emit(out, args)


def build_parser():
    p = argparse.ArgumentParser(prog="eqtodd", description="Equivariant Todd classes of toric varieties.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--gram", help="JSON file {\"gram\": [[...]]}; identity if omitted")
    common.add_argument("--order", type=int, default=DEFAULT_ORDER, help="truncation order T")
    common.add_argument("--no-cache", action="store_true", help="disable the r-coefficient memo")
    common.add_argument("--base", type=int, default=1, choices=(0, 1), help="index base for ray labels")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="compact machine-readable output")
    fmt.add_argument("--pretty", action="store_true", help="indented output with readable series (default)")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("act", parents=[common], help="divisor action on a cycle")
    a.add_argument("fan")
    a.add_argument("divisor")
    a.add_argument("cycle", nargs="+", help="cone labels such as V13 (summed)")
    a.set_defaults(func=cmd_act)

    r = sub.add_parser("rcoef", parents=[common], help="Todd coefficient of one cone")
    r.add_argument("cone", help="generators, e.g. '[[1,0],[0,1]]' or '1,0;0,1'")
    r.set_defaults(func=cmd_rcoef)

    t = sub.add_parser("todd", parents=[common], help="equivariant Todd class of a fan")
    t.add_argument("fan")
    t.add_argument("--method", choices=("local", "expand"), default="local")
    t.set_defaults(func=cmd_todd)

    c = sub.add_parser("count", parents=[common], help="lattice points via Euler-Maclaurin")
    c.add_argument("polytope")
    c.set_defaults(func=cmd_count)

    v = sub.add_parser("verify", parents=[common], help="compare Euler-Maclaurin with the direct sum")
    v.add_argument("polytope")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("reduce", parents=[common], help="square-free normal form of a D-polynomial")
    d.add_argument("fan")
    d.add_argument("poly", help="e.g. 'D1^2 + 2*D1*D2'")
    d.set_defaults(func=cmd_reduce)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.order < 0:
        print("error: --order must be non-negative", file=sys.stderr)
        return EXIT_SCHEMA
    todd.set_cache_enabled(not args.no_cache)
    try:
        args.func(args)
    except CartierError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CARTIER
    except (GenericityError, NotAFunctionalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GENERICITY
    except VerificationError as exc:
        print(f"error: verification failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (SchemaError, FanError, ConeError, PolytopeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    finally:
        todd.set_cache_enabled(True)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
