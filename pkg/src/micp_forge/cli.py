"""Command-line interface: ``micp-forge <command> [options]``.

Exit codes: 0 success, 2 analysis completed with a negative answer
(not periodic, not ideal, shape hypothesis fails), 1 error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import fixtures, serialize
from .convex import ConicSet, interval_of
from .errors import MicpError
from .formulations import (
    check_ideal,
    decompose_bounded,
    enumerate_slices,
    union_basic,
    union_ideal,
    union_projected,
    union_rational,
)
from .lower_bounds import strongest_witness
from .lpformat import emit_lp
from .naturals import (
    NaturalOracle,
    NotPeriodicUpTo,
    PeriodicNaturalSet,
    canonicalize,
    detect_periodicity,
    oracle_from_members,
    polyhedral_milp,
    to_milp,
)
from .pwl import NotPeriodic, PwlFunction, detect_pwl_period, pwl_decompose, pwl_to_milp
from .rational import format_rational, hermite_normal_form, parse_rational, unimodular_completion
from .shapes import classify_family, render_svg


def _ints(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    out = []
    for tok in text.split(","):
        q = parse_rational(tok)
        if q.denominator != 1:
            raise MicpError(f"expected an integer, got {tok!r}")
        out.append(int(q))
    return out


def _rationals(text: str) -> list:
    text = text.strip()
    return [parse_rational(t) for t in text.split(",")] if text else []


def _matrix(text: str) -> list[list[int]]:
    return [_ints(r) for r in text.split(";")]


def _window(text: str | None):
    if not text:
        return None
    out = []
    for part in text.split(","):
        lo, hi = part.split(":")
        out.append((int(lo), int(hi)))
    return out


def _read_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise MicpError(f"parameters are key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k] = _ints(v) if "," in v else v
    return out


def _q(v) -> str:
    return format_rational(v)


# ---------------------------------------------------------------------------
# commands; each returns (payload, text, exit code)


def cmd_build_union(args):
    data = _read_json(args.sets)
    items = data if isinstance(data, list) else data["sets"]
    objs = [serialize.from_json(d) for d in items]
    if args.kind == "rational":
        if len(objs) != 2:
            raise MicpError("the rational union joins exactly two formulations")
        F = union_rational(objs[0], objs[1])
    else:
        sets = [o if isinstance(o, ConicSet) else ConicSet.from_polyhedron(o) for o in objs]
        build = {"basic": union_basic, "projected": union_projected, "ideal": union_ideal}[args.kind]
        F = build(sets)
    if args.lp:
        with open(args.lp, "w") as fh:
            fh.write(emit_lp(F))
    payload = serialize.to_json(F)
    return payload, serialize.dumps(payload), 0


def cmd_check_ideal(args):
    F = serialize.from_json(_read_json(args.formulation))
    rep = check_ideal(F)
    payload = {
        "ideal": rep.ideal,
        "reduced_dim": rep.reduced_dim,
        "witness": None if rep.witness is None else [None if v is None else _q(v) for v in rep.witness],
        "note": rep.note,
    }
    verdict = {True: "ideal", False: "not ideal", None: "indeterminate"}[rep.ideal]
    text = f"{verdict} (relaxation dimension {rep.reduced_dim}) {rep.note}".rstrip()
    return payload, text, 0 if rep.ideal else 2


def cmd_lower_bound(args):
    if args.points:
        pts = _read_json(args.points)
        S = [tuple(parse_rational(str(x)) for x in p) if isinstance(p, list) else (parse_rational(str(p)),) for p in pts]
    elif args.fixture == "parity_cube":
        from .lower_bounds import even_parity_cube

        S = even_parity_cube(int(_params(args.param).get("n", 3)))
    elif args.fixture == "primes":
        S = fixtures.primes(int(_params(args.param).get("bound", 50)))
    else:
        raise MicpError("lower-bound needs --points or --fixture parity_cube|primes")
    W = strongest_witness(S, mode="exact" if args.exact else "greedy", w_target=args.target)
    payload = {"w": W.w, "bound": W.bound, "witness": [[_q(x) for x in p] for p in W.points]}
    text = f"w = {W.w}, MICP dimension >= {W.bound}"
    return payload, text, 0


def _natural_payload(res):
    payload = serialize.natural_set_to_json(res)
    if isinstance(res, NotPeriodicUpTo):
        text = f"no period <= {res.max_period} on [0, {res.certified_bound}]"
    else:
        text = (f"period {res.period}, offsets {list(res.offsets)}, exceptional {list(res.exceptional)}"
                + (" (finite)" if res.finite else ""))
    return payload, text


def cmd_nat_detect(args):
    if args.oracle == "s_epsilon":
        oracle = fixtures.s_epsilon(args.eps, args.bound)
    elif args.oracle == "file":
        if not args.members:
            raise MicpError("--members FILE is required with --oracle file")
        with open(args.members) as fh:
            vals = [int(line) for line in fh if line.strip()]
        oracle = oracle_from_members(vals, args.bound)
    else:
        raise MicpError(f"unknown oracle {args.oracle!r}")
    res = detect_periodicity(oracle, args.max_period)
    payload, text = _natural_payload(res)
    return payload, text, 2 if isinstance(res, NotPeriodicUpTo) else 0


def cmd_nat_compile(args):
    exc = _ints(args.exceptional)
    if args.exceptional_file:
        with open(args.exceptional_file) as fh:
            exc += [int(line) for line in fh if line.strip()]
    P = canonicalize(PeriodicNaturalSet(tuple(exc), tuple(_ints(args.offsets)), args.period))
    F = to_milp(P)
    if args.lp:
        # the union with exceptional points is conic; the LP uses S0 + intcone(t') when it exists
        G = F if F.is_polyhedral else polyhedral_milp(P)
        with open(args.lp, "w") as fh:
            fh.write(emit_lp(G))
    payload = {"set": serialize.natural_set_to_json(P), "formulation": serialize.to_json(F)}
    return payload, serialize.dumps(payload), 0


def cmd_pwl_compile(args):
    P = PwlFunction(tuple(_rationals(args.prefix)), tuple(_rationals(args.block_slopes)))
    per = detect_pwl_period(P, mode=args.mode)
    if isinstance(per, NotPeriodic):
        payload = {"periodic": False, "threshold": per.threshold, "t": per.t}
        return payload, f"not periodic from 0 (eventual period {per.t} from index {per.threshold})", 2
    if args.mode == "global":
        F, head = pwl_to_milp(P), []
        tail = F
    else:
        dec = pwl_decompose(P)
        F, head, tail = dec.formulation, dec.head.segments, dec.tail_formulation
    # the joined formulation is conic when a head exists; the LP file then holds the tail
    lp_scope = None
    if args.lp:
        lp_scope = "full" if F.is_polyhedral else "tail"
        with open(args.lp, "w") as fh:
            fh.write(emit_lp(F if F.is_polyhedral else tail))
    payload = {
        "periodic": True,
        "threshold": per.threshold,
        "t": per.t,
        "head": [{"i": s.i, "value": _q(s.x), "slope": _q(s.c)} for s in head],
        "formulation": serialize.to_json(F),
        "lp_scope": lp_scope,
    }
    lines = [f"tail period {per.t} from index {per.threshold}"]
    lines += [f"head segment [{s.i}, {s.i + 1}]: P = {_q(s.x)}, slope {_q(s.c)}" for s in head]
    lines.append(f"formulation: n={F.n} p={F.p} d={F.d}")
    return payload, "\n".join(lines), 0


def cmd_shape_check(args):
    F = serialize.family_from_json(_read_json(args.family))
    rep = classify_family(F)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_svg(F))
    zs = lambda z: [str(v) for v in z]
    payload = {
        "verdict": rep.verdict,
        "volumes": [{"z": zs(z), "volume": _q(v)} for z, v in sorted(rep.volumes.items())],
        "classes": [[zs(z) for z in c] for c in rep.classes],
        "translations": [{"z": zs(z), "base": zs(b), "vector": [_q(x) for x in v]} for z, (b, v) in sorted(rep.translations.items())],
        "representatives": [zs(z) for z in rep.representatives],
        "homothety_classes": [[zs(z) for z in c] for c in rep.homothety_classes],
        "violation": None if rep.violation is None else [zs(z) for z in rep.violation],
        "diagnostics": [[zs(a), zs(b)] for a, b in rep.diagnostics],
    }
    text = f"verdict: {rep.verdict}"
    if rep.violation:
        text += f"\nmidpoint triple outside the family: {rep.violation}"
    return payload, text, 0 if rep.verdict == "theorem-consistent" else 2


def cmd_hnf(args):
    H, U = hermite_normal_form(_matrix(args.matrix))
    payload = {"H": [[str(x) for x in r] for r in H], "U": [[str(x) for x in r] for r in U]}
    text = "H =\n" + "\n".join(" ".join(map(str, r)) for r in H) + "\nU =\n" + "\n".join(" ".join(map(str, r)) for r in U)
    return payload, text, 0


def cmd_unimodular_complete(args):
    U = unimodular_completion(_ints(args.vector), args.position)
    payload = {"U": [[str(x) for x in r] for r in U]}
    return payload, "\n".join(" ".join(map(str, r)) for r in U), 0


def cmd_decompose_bounded(args):
    V = serialize.polyhedron_v_from_json(_read_json(args.vertices))
    dec = decompose_bounded(V, args.n, args.p, args.d)
    pieces = []
    lines = []
    for z, P in dec.pieces:
        entry = {"z": [str(v) for v in z], "piece": serialize.polyhedron_to_json(P)}
        if P.dim == 1:
            lo, hi = interval_of(P)
            entry["interval"] = [None if lo is None else _q(lo), None if hi is None else _q(hi)]
            lines.append(f"z={list(z)}: [{lo}, {hi}]")
        pieces.append(entry)
    payload = {"pieces": pieces, "rays_x": [[_q(x) for x in r] for r in dec.rays_x]}
    lines.append(f"integer rays (x part): {[list(map(str, r)) for r in dec.rays_x]}")
    return payload, "\n".join(lines), 0


def cmd_fixture(args):
    art = fixtures.fixture(args.name, **_params(args.param))
    if isinstance(art, NaturalOracle):
        payload = {"name": args.name, "oracle": art.name, "certified_bound": str(art.certified_bound)}
    elif isinstance(art, list):
        payload = {"name": args.name, "members": [str(v) for v in art]}
    else:
        payload = serialize.to_json(art)
        if args.lp and hasattr(art, "M"):
            with open(args.lp, "w") as fh:
                fh.write(emit_lp(art))
    return payload, serialize.dumps(payload), 0


def cmd_slice_enum(args):
    F = serialize.from_json(_read_json(args.formulation))
    fam = enumerate_slices(F, _window(args.window))
    out = []
    lines = []
    for z in fam.index_points:
        S = fam.slices[z]
        entry = {"z": [str(v) for v in z]}
        if hasattr(S, "E"):
            entry["slice"] = serialize.polyhedron_to_json(S)
            if S.dim == 1:
                lo, hi = interval_of(S)
                lines.append(f"z={list(z)}: [{lo}, {hi}]")
        else:
            entry["slice"] = serialize.conic_set_to_json(S)
            lines.append(f"z={list(z)}: conic slice")
        out.append(entry)
    payload = {"window": [[a, b] for a, b in fam.window], "slices": out}
    return payload, "\n".join(lines) or "no nonempty slices", 0


COMMANDS = {
    "build-union": cmd_build_union,
    "check-ideal": cmd_check_ideal,
    "lower-bound": cmd_lower_bound,
    "nat-detect": cmd_nat_detect,
    "nat-compile": cmd_nat_compile,
    "pwl-compile": cmd_pwl_compile,
    "shape-check": cmd_shape_check,
    "hnf": cmd_hnf,
    "unimodular-complete": cmd_unimodular_complete,
    "decompose-bounded": cmd_decompose_bounded,
    "fixture": cmd_fixture,
    "slice-enum": cmd_slice_enum,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps (default 0)")
    common.add_argument("--window", help="z-window as lo:hi,lo:hi,...")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", help="write the report here instead of stdout")

    ap = argparse.ArgumentParser(prog="micp-forge", description="Exact MICP formulation tools.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-union", parents=[common], help="union formulation of convex sets")
    p.add_argument("--sets", required=True, help="JSON list of conic_set.v1 / polyhedron_h.v1 (or formulations for --kind rational)")
    p.add_argument("--kind", choices=("basic", "projected", "ideal", "rational"), default="ideal")
    p.add_argument("--lp", help="also write an LP file (polyhedral results only)")

    p = sub.add_parser("check-ideal", parents=[common], help="decide idealness of a formulation")
    p.add_argument("--formulation", required=True)

    p = sub.add_parser("lower-bound", parents=[common], help="midpoint-exclusion lower bound")
    p.add_argument("--points", help="JSON list of points")
    p.add_argument("--fixture", choices=("parity_cube", "primes"))
    p.add_argument("--param", action="append", help="fixture parameter key=value")
    p.add_argument("--exact", action="store_true", help="exact clique search (at most 40 points)")
    p.add_argument("--target", type=int, help="stop once a clique of this size is found")

    p = sub.add_parser("nat-detect", parents=[common], help="detect eventual periodicity of a set of naturals")
    p.add_argument("--oracle", choices=("s_epsilon", "file"), required=True)
    p.add_argument("--eps", default="2/5")
    p.add_argument("--members", help="newline-delimited integers (with --oracle file)")
    p.add_argument("--bound", type=int, default=100_000)
    p.add_argument("--max-period", type=int, default=500)

    p = sub.add_parser("nat-compile", parents=[common], help="MILP for a periodic set of naturals")
    p.add_argument("--offsets", required=True)
    p.add_argument("--period", type=int, required=True)
    p.add_argument("--exceptional", default="")
    p.add_argument("--exceptional-file", help="newline-delimited exceptional members")
    p.add_argument("--lp")

    p = sub.add_parser("pwl-compile", parents=[common], help="MILP for the graph of a PWL function")
    p.add_argument("--prefix", required=True, help="values P(0),...,P(m)")
    p.add_argument("--block-slopes", required=True)
    p.add_argument("--mode", choices=("global", "eventual"), default="eventual")
    p.add_argument("--lp")

    p = sub.add_parser("shape-check", parents=[common], help="classify an indexed family of polytopes")
    p.add_argument("--family", required=True)
    p.add_argument("--svg")

    p = sub.add_parser("hnf", parents=[common], help="Hermite normal form with the unimodular factor")
    p.add_argument("--matrix", required=True, help="rows separated by ';', entries by ','")

    p = sub.add_parser("unimodular-complete", parents=[common], help="unimodular matrix with a given column")
    p.add_argument("--vector", required=True)
    p.add_argument("--position", choices=("last", "first"), default="last")

    p = sub.add_parser("decompose-bounded", parents=[common], help="pieces and rays of a V-described formulation")
    p.add_argument("--vertices", required=True, help="polyhedron_v.v1 JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, default=0)
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("fixture", parents=[common], help="build a registered example")
    p.add_argument("name")
    p.add_argument("--param", action="append")
    p.add_argument("--lp")

    p = sub.add_parser("slice-enum", parents=[common], help="enumerate the integer slices of a formulation")
    p.add_argument("--formulation", required=True)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload, text, code = COMMANDS[args.command](args)
    except (MicpError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"micp-forge: error: {exc}", file=sys.stderr)
        return 1
    body = json.dumps(payload, indent=2) + "\n" if args.format == "json" else text.rstrip("\n") + "\n"
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(body)
        except OSError as exc:
            print(f"micp-forge: error: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(body)
    return code


if __name__ == "__main__":
    sys.exit(main())
