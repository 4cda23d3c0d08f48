"""Command-line front end: facet listings, bound tables, membership
certificates and identity residual checks.

Exit codes: 0 success, 1 usage or bad input, 2 capacity limit hit,
3 a verified quantity disagreed with its closed form.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import io
from .errors import CapacityError, ConvergenceError
from .inequalities import (
    LinearExpression,
    bounds,
    catalog,
    classical_maximum,
    extension_membership,
    facet_orbit_classify,
    gpt_maximum,
    identity_check,
    symmetry_group,
    verify_identity,
)
from .polytope import (
    classical_vpolytope,
    facet_enumeration,
    fourier_motzkin_project,
    no_signalling_polytope,
    vertex_enumeration,
)
from .quantum import (
    bonet_strategy,
    born_table,
    chained_strategy,
    chsh_strategy,
    rationalize_correlation,
    tilted_search,
)
from .scenario import (
    Correlation,
    Kind,
    Scenario,
    append_dummy_input,
    dummy_input_extension,
    postselect,
    random_mixture,
)

USAGE_ERROR = 1
CAPACITY_ERROR = 2
MISMATCH_ERROR = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; we reserve 2 for
    capacity, so remap to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _emit(text: str, args) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _expression_str(scenario, ineq) -> str:
    lhs = LinearExpression(scenario, ineq.coeffs)
    return f"{lhs} <= {io.fraction_to_str(ineq.bound)}"


# -- facets ----------------------------------------------------------------


def _wired_coordinates(s: Scenario) -> tuple[Scenario, list[int]]:
    ny = s.nA if s.kind is Kind.INSTRUMENTAL else s.nY
    bell = Scenario.bell(s.nX, ny, s.nA, s.nB)
    keep = [bell.index(x, s.wire(a, x), a, b) for x, a, b in s.coords()]
    return bell, keep


def cmd_facets(args) -> int:
    s = Scenario.instrumental(args.x, args.a, args.b)
    if args.classical:
        h = facet_enumeration(classical_vpolytope(s), max_rays=args.max_rays)
        side = "classical"
    else:
        bell, keep = _wired_coordinates(s)
        h = fourier_motzkin_project(
            no_signalling_polytope(bell), keep, max_rows=args.max_rays
        )
        side = "gpt"
    orbits = facet_orbit_classify(h.inequalities, symmetry_group(s))

    fmt = args.format
    if os.environ.get("PORTA_COMPAT") == "1":
        fmt = "porta"
    if fmt == "porta":
        _emit(io.write_ieq(h), args)
    elif fmt == "json":
        doc = {
            "scenario": io.scenario_to_json(s),
            "side": side,
            "orbits": [
                {
                    "tag": o.tag,
                    "size": len(o.members),
                    "representative": {
                        "coeffs": [io.fraction_to_str(c) for c in o.representative.coeffs],
                        "bound": io.fraction_to_str(o.representative.bound),
                    },
                }
                for o in orbits
            ],
            "polytope": io.hpolytope_to_json(h),
        }
        _emit(json.dumps(doc, indent=2) + "\n", args)
    else:
        lines = [
            f"scenario: instrumental nX={s.nX} nA={s.nA} nB={s.nB} ({side} side)",
            f"facets: {len(h.inequalities)}, equalities: {len(h.equalities)}",
            "orbits under input/output relabelling:",
        ]
        for o in orbits:
            lines.append(
                f"  {o.tag}: {len(o.members)} facets, "
                f"e.g. {_expression_str(s, o.representative)}"
            )
        _emit("\n".join(lines) + "\n", args)
    return 0


# -- bounds ----------------------------------------------------------------


def _parse_bounds_params(args):
    kind = args.kind
    alpha = n = None
    if kind in ("tilted", "tilted_chsh"):
        if args.param is None:
            raise ValueError(f"{kind} needs a weight parameter, e.g. `bounds {kind} 2`")
        alpha = Fraction(args.param)
    elif kind in ("chained", "chained_bell"):
        if args.param is None:
            raise ValueError(f"{kind} needs a length parameter, e.g. `bounds {kind} 4`")
        n = int(args.param)
    elif args.param is not None:
        raise ValueError(f"{kind} takes no parameter")
    return kind, alpha, n


def _quantum_value(kind, alpha, n) -> tuple[float, float]:
    """The value the named strategy actually reaches, and its tolerance."""
    if kind in ("bonet",) or (kind == "tilted" and alpha == 1):
        t = born_table(bonet_strategy(), Scenario.instrumental(3))
        return catalog("bonet").evaluate(t), 1e-9
    if kind == "tilted":
        return tilted_search(alpha).instrumental_value, 1e-6
    if kind == "chained":
        t = born_table(chained_strategy(n), Scenario.bell(n, n))
        wired = postselect(append_dummy_input(t, fixed_a=1), Scenario.chained(n))
        return catalog("chained", n=n).evaluate(wired), 1e-9
    if kind == "chsh" or (kind == "tilted_chsh" and alpha == 1):
        t = born_table(chsh_strategy(), Scenario.bell(2, 2))
        return catalog("chsh").evaluate(t), 1e-9
    if kind == "tilted_chsh":
        return tilted_search(alpha).bell_value, 1e-6
    t = born_table(chained_strategy(n), Scenario.bell(n, n))
    return catalog("chained_bell", n=n).evaluate(t), 1e-9


def cmd_bounds(args) -> int:
    kind, alpha, n = _parse_bounds_params(args)
    e = catalog(kind, alpha=alpha, n=n)
    triple = bounds(kind, alpha=alpha, n=n)

    checks: list[tuple[str, object, bool, str]] = []
    cmax, _ = classical_maximum(e)
    checks.append(
        (
            "classical",
            triple.classical,
            cmax == triple.classical.rational and triple.classical.coefficient == 0,
            f"vertex maximum {io.fraction_to_str(cmax)}",
        )
    )
    qval, qtol = _quantum_value(kind, alpha, n)
    checks.append(
        (
            "quantum",
            triple.quantum,
            abs(qval - float(triple.quantum)) <= qtol,
            f"strategy value {qval:.12f}",
        )
    )
    gmax, _ = gpt_maximum(e)
    checks.append(
        (
            "gpt",
            triple.gpt,
            gmax == triple.gpt.rational and triple.gpt.coefficient == 0,
            f"no-signalling maximum {io.fraction_to_str(gmax)}",
        )
    )

    rows = [(name, str(val), float(val)) for name, val, _, _ in checks]
    verified = all(ok for _, _, ok, _ in checks)
    if args.format == "csv":
        _emit(io.format_bounds_csv(rows), args)
    elif args.format == "json":
        doc = {
            "kind": kind,
            "alpha": None if alpha is None else io.fraction_to_str(alpha),
            "n": n,
            "rows": [
                {"theory": name, "exact": str(val), "approx": float(val),
                 "verified": ok, "computed": how}
                for name, val, ok, how in checks
            ],
        }
        _emit(json.dumps(doc, indent=2) + "\n", args)
    else:
        text = io.format_bounds_table(rows)
        if verified:
            text += "all three bounds verified\n"
        else:
            for name, val, ok, how in checks:
                if not ok:
                    text += f"MISMATCH {name}: expected {val}, {how}\n"
        _emit(text, args)
    return 0 if verified else MISMATCH_ERROR


# -- membership ------------------------------------------------------------

_CAVEAT = (
    "note: the wired table has a classical model, but that does not certify a "
    "classical source; a nonclassical parent can still show up after local "
    "pre-processing of an added input (rerun with --with-local-processing)."
)


def cmd_membership(args) -> int:
    p = io.load_correlation(args.table)
    from_bell = p.scenario.kind is Kind.BELL
    if not p.exact:
        p = rationalize_correlation(p)
    if from_bell:
        if args.with_local_processing:
            p = postselect(dummy_input_extension(p), Scenario.instrumental(3))
        else:
            p = postselect(p, Scenario.instrumental(p.scenario.nX))
    elif args.with_local_processing:
        raise ValueError("--with-local-processing applies to two-input Bell tables")

    cert = extension_membership(p, args.theory)
    caveat = (
        from_bell
        and cert.inside
        and args.theory == "classical"
        and not args.with_local_processing
    )
    if args.format == "json":
        doc = {
            "theory": args.theory,
            "inside": cert.inside,
            "scenario": io.scenario_to_json(p.scenario),
        }
        if cert.weights is not None:
            doc["weights"] = [io.fraction_to_str(w) for w in cert.weights]
        if cert.extension is not None:
            doc["extension"] = [io.fraction_to_str(v) for v in cert.extension]
        if cert.separator is not None:
            doc["separator"] = {
                "coeffs": [io.fraction_to_str(c) for c in cert.separator.coeffs],
                "bound": io.fraction_to_str(cert.separator.bound),
            }
            doc["margin"] = io.fraction_to_str(cert.margin)
        if caveat:
            doc["caveat"] = _CAVEAT
        _emit(json.dumps(doc, indent=2) + "\n", args)
    else:
        lines = [f"{args.theory}: {'inside' if cert.inside else 'outside'}"]
        if cert.inside and cert.weights is not None:
            support = sum(1 for w in cert.weights if w != 0)
            lines.append(
                f"  convex combination of {support} deterministic strategies"
            )
        if cert.inside and cert.extension is not None:
            lines.append("  extension: " + " ".join(
                io.fraction_to_str(v) for v in cert.extension
            ))
        if not cert.inside:
            lines.append(
                "  separating inequality: "
                + _expression_str(p.scenario, cert.separator)
            )
            lines.append(f"  violated by margin {io.fraction_to_str(cert.margin)}")
        if caveat:
            lines.append(_CAVEAT)
        _emit("\n".join(lines) + "\n", args)
    return 0


# -- identity --------------------------------------------------------------


def _identity_params(args):
    kind = args.kind
    if kind == "bonet":
        if args.alpha is not None or args.n is not None:
            raise ValueError("bonet takes neither --alpha nor --n")
        return dict(alpha=None, n=None), Scenario.bell(3, 2)
    if kind == "tilted":
        if args.alpha is None:
            raise ValueError("tilted needs --alpha")
        return dict(alpha=Fraction(args.alpha), n=None), Scenario.bell(3, 2)
    if kind == "chained":
        if args.n is None:
            raise ValueError("chained needs --n")
        return dict(alpha=None, n=args.n), Scenario.bell(args.n + 1, args.n)
    raise ValueError(f"unknown identity kind {kind!r}")


def cmd_identity(args) -> int:
    params, bell = _identity_params(args)
    symbolic = verify_identity(args.kind, **params)
    rng = random.Random(args.seed)
    # mix over true extremal boxes where the enumeration stays small, over
    # deterministic ones (the same affine span) otherwise
    if bell.dim <= 32:
        pool = [
            Correlation(bell, v)
            for v in vertex_enumeration(no_signalling_polytope(bell)).vertices
        ]
    else:
        pool = None
    worst = Fraction(0)
    for _ in range(args.trials):
        q = random_mixture(bell, rng, pool=pool)
        worst = max(worst, abs(identity_check(args.kind, q, **params)))
    doc = {
        "kind": args.kind,
        "symbolic": symbolic,
        "trials": args.trials,
        "max_abs_residual": io.fraction_to_str(worst),
    }
    if args.format == "json":
        _emit(json.dumps(doc, indent=2) + "\n", args)
    else:
        _emit(
            f"symbolic reduction to zero: {'yes' if symbolic else 'NO'}\n"
            f"max |residual| over {args.trials} sampled no-signalling points: "
            f"{io.fraction_to_str(worst)}\n",
            args,
        )
    return 0 if symbolic and worst == 0 else MISMATCH_ERROR


# -- wiring ----------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="instrumental")
    sub = parser.add_subparsers(dest="command", required=True)

    f = sub.add_parser("facets", help="enumerate and classify facets")
    f.add_argument("--kind", choices=["instrumental"], default="instrumental")
    side = f.add_mutually_exclusive_group(required=True)
    side.add_argument("--classical", action="store_true",
                      help="hull of the deterministic strategies")
    side.add_argument("--gpt", action="store_true",
                      help="projection of the no-signalling extension polytope")
    f.add_argument("-x", type=int, required=True, help="number of inputs")
    f.add_argument("-a", type=int, default=2, help="Alice outcomes")
    f.add_argument("-b", type=int, default=2, help="Bob outcomes")
    f.add_argument("--max-rays", type=int, default=10**6)
    f.add_argument("--format", choices=["table", "json", "porta"], default="table")
    f.add_argument("--output")
    f.set_defaults(func=cmd_facets)

    b = sub.add_parser("bounds", help="three-theory bound table with verification")
    b.add_argument("kind", choices=[
        "bonet", "tilted", "chained", "chsh", "tilted_chsh", "chained_bell",
    ])
    b.add_argument("param", nargs="?",
                   help="weight for tilted kinds, length for chained kinds")
    b.add_argument("--format", choices=["table", "json", "csv"], default="table")
    b.add_argument("--output")
    b.set_defaults(func=cmd_bounds)

    m = sub.add_parser("membership", help="certified membership test")
    m.add_argument("table", help="correlation JSON file")
    m.add_argument("--theory", choices=["classical", "nosignalling"],
                   required=True)
    m.add_argument("--with-local-processing", action="store_true",
                   help="extend a two-input Bell table with a fixed-outcome "
                        "input before wiring")
    m.add_argument("--format", choices=["table", "json"], default="table")
    m.add_argument("--output")
    m.set_defaults(func=cmd_membership)

    i = sub.add_parser("identity", help="check a lifting identity exactly")
    i.add_argument("kind", choices=["bonet", "tilted", "chained"])
    i.add_argument("--alpha", help="weight for the tilted family")
    i.add_argument("--n", type=int, help="length for the chained family")
    i.add_argument("--trials", type=int, default=500)
    i.add_argument("--seed", type=int, default=0)
    i.add_argument("--format", choices=["table", "json"], default="table")
    i.add_argument("--output")
    i.set_defaults(func=cmd_identity)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return CAPACITY_ERROR
    except ConvergenceError as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return MISMATCH_ERROR
    except (ValueError, TypeError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
