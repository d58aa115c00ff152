"""Command line interface: generate, verify, group, trace, zeros, figure1.

Exit codes: 0 success / all checks pass, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import dynamics, fields, groups
from .calculus import check_lambent
from .exact import DiscriminantMismatch
from .serialize import (
    dumps,
    field_from_document,
    field_to_document,
    matrix_to_json,
    pretty_field,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _point(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad point {text!r}; expected e.g. 1,1") from None


CONSTRUCTORS = ("tetra", "octa", "tetra-precurl", "octa-precurl", "icosa-induced", "dihedral",
                "dihedral-order0", "dihedral-symmetric")


def build_field(name: str, args: argparse.Namespace):
    """Return ``(field, params)`` for a named constructor."""
    if name in ("tetra", "octa", "tetra-precurl", "octa-precurl"):
        make = {
            "tetra": fields.tetra_field,
            "octa": fields.octa_field,
            "tetra-precurl": fields.tetra_precurl,
            "octa-precurl": fields.octa_precurl,
        }[name]
        try:
            F = make(args.ell, args.variant, max_ell=args.max_ell)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return F, {"ell": args.ell, "variant": args.variant}
    if name == "icosa-induced":
        try:
            seed = fields.icosa_seed(args.seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        F = fields.induce_icosahedral(seed)
        if args.beltramize:
            F = fields.beltramize(F)
        return F, {"seed": args.seed, "beltramize": bool(args.beltramize)}
    if name == "dihedral":
        F = fields.dihedral_field(args.a, args.scale)
        return F, {"a": str(args.a), "scale": str(args.scale)}
    if name == "dihedral-order0":
        return fields.dihedral_order0_field(), {}
    if name == "dihedral-symmetric":
        return fields.dihedral_symmetric_field(), {}
    raise UsageError(f"unknown constructor {name!r}; choose from {', '.join(CONSTRUCTORS)}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_field(path: str | None):
    if path is None:
        return fields.dihedral_order0_field()
    try:
        doc = json.loads(Path(path).read_text())
        return field_from_document(doc)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read field document {path}: {exc}") from None


# -- subcommands ------------------------------------------------------------

def cmd_generate(args) -> int:
    F, params = build_field(args.constructor, args)
    if args.format == "pretty":
        _emit(pretty_field(F) + "\n", args.out)
    else:
        _emit(dumps(field_to_document(F, args.constructor, params)) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    F = _load_field(args.field)
    try:
        G = groups.named_group(args.group)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    if G.dimension != F.nvars:
        raise UsageError(f"group {args.group} acts on R^{G.dimension} but the field lives on R^{F.nvars}")
    if G.d != F.d:
        try:
            F = F.retag(G.d)
        except DiscriminantMismatch:
            raise UsageError(f"field is over Q(sqrt {F.d}) but group {args.group} is over Q(sqrt {G.d})") from None
    mode = args.mode or ("beltrami_3d" if F.nvars == 3 else "helmholtz_nd")
    report = check_lambent(F, G, mode)
    if args.format == "json":
        print(dumps(report.to_json(), pretty=True))
    else:
        print(report.table())
        for c in report.failures():
            if c.violators:
                for g in c.violators:
                    print("    violator:", g.matrix)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_group(args) -> int:
    try:
        G = groups.named_group(args.name)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    if args.format == "pretty":
        print(f"{G.name}: {len(G)} elements")
        for g in G:
            print(" ", g.matrix)
    else:
        print(dumps({"name": G.name, "order": len(G), "elements": [matrix_to_json(g.matrix) for g in G]}))
    return EXIT_OK


def cmd_trace(args) -> int:
    F = _load_field(args.field)
    if len(args.x0) != F.nvars:
        raise UsageError(f"start point needs {F.nvars} coordinates")
    t_span = (-args.t, args.t) if args.both else (0.0, args.t)
    orbit = dynamics.integrate_orbit(F, args.x0, t_span, args.dt, t_init=0.0)
    _emit(orbit.to_csv(), args.out)
    if F.nvars == 2 and args.x0[0] == args.x0[1]:
        dev = max(abs(p[0] - p[1]) for p in orbit.points)
        print(f"max|x-y| = {dev:.3e}", file=sys.stderr)
    return EXIT_OK


def cmd_zeros(args) -> int:
    F = _load_field(args.field)
    if F.nvars != 2:
        raise UsageError("zeros needs a planar field")
    zeros = dynamics.find_diagonal_zeros(F, (0.0, args.xmax), args.scan_step)
    print("i,tau,bracket_lo,bracket_hi,residual")
    for i, z in enumerate(zeros):
        print(f"{i},{z.x!r},{z.bracket[0]!r},{z.bracket[1]!r},{z.residual:.3e}")
    return EXIT_OK


def cmd_figure1(args) -> int:
    F = fields.dihedral_order0_field() if args.field is None else _load_field(args.field)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    orbits = dynamics.figure1_orbits(F, t_max=args.t, dt=args.dt)
    for orb in orbits:
        name = "orbit_" + "_".join(f"{c:g}" for c in orb.x0) + ".csv"
        (out / name).write_text(orb.to_csv())
        inside = orb.stays_within(*dynamics.VIEWBOX)
        print(f"{name}: {len(orb)} samples, max|coord| = {orb.max_abs():.3f}, inside window: {inside}")
    (out / "figure1.svg").write_text(dynamics.orbits_svg(orbits))
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lambent", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build a field and print its document")
    g.add_argument("constructor", help=", ".join(CONSTRUCTORS))
    g.add_argument("--ell", type=int, default=0)
    g.add_argument("--variant", default="4l+1", choices=fields.VARIANTS)
    g.add_argument("--max-ell", type=int, default=fields.MAX_ELL)
    g.add_argument("--seed", default="even-part", help="icosa-induced seed: even-part or golden")
    g.add_argument("--beltramize", action="store_true", help="add the curl of the induced field")
    g.add_argument("--a", type=_fraction, default=Fraction(0))
    g.add_argument("--scale", type=_fraction, default=Fraction(3, 8))
    g.add_argument("--format", choices=("json", "pretty"), default="json")
    g.add_argument("--pretty", dest="format", action="store_const", const="pretty")
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="check a field document against a group")
    v.add_argument("field")
    v.add_argument("--group", required=True, help=", ".join(groups.GROUPS))
    v.add_argument("--mode", choices=("beltrami_3d", "helmholtz_nd"))
    v.add_argument("--format", choices=("json", "pretty"), default="pretty")
    v.set_defaults(func=cmd_verify)

    gr = sub.add_parser("group", help="list the exact matrices of a named group")
    gr.add_argument("name", help=", ".join(groups.GROUPS))
    gr.add_argument("--format", choices=("json", "pretty"), default="json")
    gr.set_defaults(func=cmd_group)

    t = sub.add_parser("trace", help="integrate one orbit and write CSV")
    t.add_argument("--field", help="field document (default: order-0 dihedral field)")
    t.add_argument("--x0", type=_point, required=True)
    t.add_argument("--t", type=float, default=100.0)
    t.add_argument("--dt", type=float, default=dynamics.DEFAULT_DT)
    t.add_argument("--both", action="store_true", help="integrate over [-t, t]")
    t.add_argument("--out")
    t.set_defaults(func=cmd_trace)

    z = sub.add_parser("zeros", help="equilibria on the diagonal x = y")
    z.add_argument("--field")
    z.add_argument("--xmax", type=float, default=20.0)
    z.add_argument("--scan-step", type=float, default=dynamics.DEFAULT_SCAN_STEP)
    z.set_defaults(func=cmd_zeros)

    f = sub.add_parser("figure1", help="five reference orbits as CSV + SVG")
    f.add_argument("--field")
    f.add_argument("--out", required=True)
    f.add_argument("--t", type=float, default=200.0)
    f.add_argument("--dt", type=float, default=dynamics.DEFAULT_DT)
    f.set_defaults(func=cmd_figure1)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except fields.BeltramiPreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
