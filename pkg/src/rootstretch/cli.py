"""``rootstretch`` command line.

Exit status: 0 on success, 1 when a check fails, 2 on bad input.
A diagram argument is a JSON file or the name of a bundled fixture.
"""
from __future__ import annotations

import argparse
import json
import sys

from .arrangements import (
    CharPoly,
    InterpolationMismatch,
    RationalArrangement,
    char_poly_finite_field,
    char_poly_mobius,
    region_count,
)
from .classes import build_class_graph, downset_polynomial, n_zero
from .diagram import DiagramError, ElasticData, load_diagram, save_diagram, stretch_diagram, validate, validate_elastic
from .roots import NotARootError, depth, downset, generate_positive_roots
from .shards import (
    fracture_set_at,
    shard_count,
    stable_charpoly,
    to_beta_coords,
)
from .stretch import (
    classify_cover,
    depth_growth_rate,
    stretch_root,
    stretched,
    type1_expression,
    verify_stretched_cover,
)
from .verify import TAGS, VerifyConfig, load_fixture, run_verify

OK, CHECK_FAILED, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# argument helpers ------------------------------------------------------------------------


def _parse_root(text):
    try:
        return tuple(int(c) for c in text.replace(" ", "").split(","))
    except ValueError:
        raise InputError(f"cannot parse root {text!r}; expected comma separated integers") from None


def _parse_elastic(text):
    # x:left1,left2:right1
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError("elastic data must look like x:l1,l2:r1")
    x, left, right = parts
    return ElasticData(x, [v for v in left.split(",") if v], [v for v in right.split(",") if v])


def _load(args):
    try:
        fx = load_fixture(args.diagram)
    except FileNotFoundError as exc:
        raise InputError(str(exc)) from None
    except (json.JSONDecodeError, KeyError) as exc:
        raise InputError(f"malformed diagram file: {exc}") from None
    data = _parse_elastic(args.elastic) if getattr(args, "elastic", None) else fx.data
    problems = list(dict.fromkeys(validate(fx.diagram) + validate_elastic(fx.diagram, data)))
    if problems:
        raise InputError("; ".join(problems))
    return fx, data


def _root_arg(args, fx):
    if getattr(args, "root", None):
        return _parse_root(args.root)
    if len(fx.roots) == 1:
        return next(iter(fx.roots.values()))
    raise InputError("--root is required for this diagram")


def _emit(args, payload, text):
    if getattr(args, "as_json", False):
        print(json.dumps(payload, indent=2))
    else:
        print(text)


# diagram ----------------------------------------------------------------------------------


def cmd_diagram_validate(args):
    # plain diagram files without elastic data are fine here
    try:
        G = load_fixture(args.diagram).diagram
    except DiagramError:
        G = load_diagram(args.diagram)
    except FileNotFoundError as exc:
        raise InputError(str(exc)) from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed diagram file: {exc}") from None
    problems = validate(G)
    _emit(args, {"valid": not problems, "problems": problems},
          "valid" if not problems else "\n".join(problems))
    return OK if not problems else CHECK_FAILED


def cmd_diagram_stretch(args):
    fx, data = _load(args)
    H = stretch_diagram(fx.diagram, data, args.n)
    if args.output:
        save_diagram(H, args.output)
    _emit(args, H.to_json(), f"{len(H)} vertices: {' '.join(H.vertices)}")
    return OK


# roots -----------------------------------------------------------------------------------


def cmd_roots_gen(args):
    fx, _ = _load(args)
    sl = generate_positive_roots(fx.diagram, args.max_depth)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(sl.to_dot())
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(sl.to_json(), fh, indent=2)
    print(f"{len(sl)} positive roots in {len(sl.levels)} levels, {len(sl.cover_edges)} covers"
          + (" (complete)" if sl.complete else ""))
    for k, level in enumerate(sl.levels):
        print(f"  depth {k + 1}: " + " ".join(",".join(map(str, r)) for r in level))
    return OK


# stretch -----------------------------------------------------------------------------------


def cmd_stretch_root(args):
    fx, data = _load(args)
    root = _root_arg(args, fx)
    H = stretched(fx.diagram, data, args.n)
    out = stretch_root(fx.diagram, root, data, args.n)
    d = depth(H, out)
    _emit(args, {"vertices": list(H.vertices), "root": list(out), "depth": d},
          f"{','.join(map(str, out))}  depth {d}")
    return OK


def cmd_stretch_classify(args):
    fx, data = _load(args)
    root = _root_arg(args, fx)
    try:
        tri = classify_cover(fx.diagram, root, data)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    payload = {"case": tri.case, "S_L": tri.S_L, "S_R": tri.S_R, "b": tri.b,
               "b_prime": tri.b_prime, "swapped": tri.swapped}
    lines = [f"case {tri.case}: S_L={tri.S_L} S_R={tri.S_R} b={tri.b} b'={tri.b_prime}"
             + (" (sides swapped)" if tri.swapped else "")]
    if args.n is not None:
        chk = verify_stretched_cover(fx.diagram, root, data, args.n)
        payload.update(n=args.n, comparable=chk.comparable, depth_delta=chk.depth_delta)
        lines.append(f"n={args.n}: {'comparable' if chk.comparable else 'incomparable'}, depth delta {chk.depth_delta}")
    _emit(args, payload, "\n".join(lines))
    return OK


def cmd_stretch_rate(args):
    fx, data = _load(args)
    root = _root_arg(args, fx)
    t = depth_growth_rate(fx.diagram, root, data)
    d0 = depth(fx.diagram, root)
    rows = []
    for n in range(4):
        got = depth(stretched(fx.diagram, data, n), stretch_root(fx.diagram, root, data, n))
        rows.append({"n": n, "depth": got, "predicted": t * n + d0})
    expr = type1_expression(fx.diagram, root, data)
    payload = {"t": t, "table": rows, "n0": expr.n0, "pivot": expr.pivot, "word": list(expr.word)}
    text = [f"t = {t}   (type (1) expression: n0={expr.n0}, pivot {expr.pivot}, {expr.t} pivot reflections)"]
    text += [f"  n={r['n']}  depth {r['depth']:4d}  t*n+depth {r['predicted']:4d}" for r in rows]
    _emit(args, payload, "\n".join(text))
    return OK if all(r["depth"] == r["predicted"] for r in rows) else CHECK_FAILED


# classes -----------------------------------------------------------------------------------


def cmd_classes_build(args):
    fx, data = _load(args)
    root = _root_arg(args, fx)
    P = build_class_graph(fx.diagram, root, data)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(P.to_json(), fh, indent=2)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(P.to_dot())
    print(f"{len(P.nodes)} classes, {len(P.arrows)} arrows, n0 = {n_zero(P)}")
    for c in P.nodes:
        print("  " + c.notation())
    return OK


def cmd_classes_polynomial(args):
    fx, data = _load(args)
    root = _root_arg(args, fx)
    P = build_class_graph(fx.diagram, root, data)
    p = downset_polynomial(P)
    rows = []
    for n in range(p.threshold, p.threshold + args.checks):
        H = stretched(fx.diagram, data, n)
        size = len(downset(H, stretch_root(fx.diagram, root, data, n)))
        rows.append({"n": n, "p": int(p(n)), "downset": size})
    payload = {"p": str(p), "coefficients": [str(c) for c in p.coefficients], "degree": p.degree,
               "n0": p.n0, "valid_from": p.threshold, "table": rows}
    text = [f"p(n) = {p}", f"degree {p.degree}, n0 = {p.n0}, valid for n >= {p.threshold}"]
    text += [f"  n={r['n']}  p={r['p']}  |downset|={r['downset']}" for r in rows]
    _emit(args, payload, "\n".join(text))
    return OK if all(r["p"] == r["downset"] for r in rows) else CHECK_FAILED


# arrangements -------------------------------------------------------------------------------


def cmd_arr_charpoly(args):
    try:
        with open(args.normals) as fh:
            arr = RationalArrangement.from_json(json.load(fh))
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise InputError(f"cannot read arrangement: {exc}") from None
    chi = char_poly_mobius(arr)
    payload = {"dim": arr.dim, "hyperplanes": len(arr), "chi": list(chi.coefficients),
               "regions": region_count(chi)}
    text = [f"chi(q) = {chi}", f"regions: {region_count(chi)}"]
    status = OK
    if args.primes is not None:
        try:
            primes = [int(p) for p in args.primes.split(",")] if args.primes else None
            ff = char_poly_finite_field(arr, primes)
        except InterpolationMismatch as exc:
            payload["finite_field_error"] = str(exc)
            text.append(f"finite field: {exc}")
            _emit(args, payload, "\n".join(text))
            return CHECK_FAILED
        except ValueError as exc:
            raise InputError(str(exc)) from None
        agree = ff == chi
        payload.update(finite_field=list(ff.coefficients), agree=agree)
        text.append(f"finite field: {ff}  ({'agrees' if agree else 'DISAGREES'})")
        status = OK if agree else CHECK_FAILED
    _emit(args, payload, "\n".join(text))
    return status


# shards ----------------------------------------------------------------------------------


def cmd_shards_fractures(args):
    fx, data = _load(args)
    root = _root_arg(args, fx)
    fs = fracture_set_at(fx.diagram, root, data, args.n)
    H = stretched(fx.diagram, data, args.n)
    rows = [{"alpha": list(g), "beta": list(to_beta_coords(fx.diagram, data, args.n, g))} for g in fs.normals]
    payload = {"vertices": list(H.vertices), "carrier": list(fs.carrier), "fractures": rows}
    text = [f"{len(rows)} fractures of {','.join(map(str, fs.carrier))}"]
    text += [f"  alpha {','.join(map(str, r['alpha']))}   beta {','.join(map(str, r['beta']))}" for r in rows]
    _emit(args, payload, "\n".join(text))
    return OK


def cmd_shards_charpoly(args):
    fx, data = _load(args)
    root = _root_arg(args, fx)
    try:
        sc = stable_charpoly(fx.diagram, root, data, validate=args.validate)
    except AssertionError as exc:
        _emit(args, {"error": str(exc)}, f"validation failed: {exc}")
        return CHECK_FAILED
    form = sc.form.describe()
    payload = {"form": form, "p": sc.coefficients(), "validated_n": list(sc.validated),
               "shards": {n: sc.shards(n) for n in sc.validated}}
    text = [f"r = {form['r']}, e = {form['e']}, t = {form['t']}",
            "f: " + "; ".join(form["f"]), "g: " + "; ".join(form["g"])]
    for k, coeffs in sc.coefficients().items():
        text.append(f"p_{k}(q) = {CharPoly(tuple(coeffs))}")
    text.append(f"validated against the direct arrangement at n = {list(sc.validated)}")
    text.append("shards: " + ", ".join(f"n={n}: {sc.shards(n)}" for n in sc.validated))
    _emit(args, payload, "\n".join(text))
    return OK


def cmd_shards_count(args):
    fx, data = _load(args)
    root = _root_arg(args, fx)
    count = shard_count(fx.diagram, root, data, args.n)
    _emit(args, {"n": args.n, "shards": count}, str(count))
    return OK


# verify --------------------------------------------------------------------------------


def cmd_verify(args):
    tags = tuple(t for t in args.tags.split(",") if t) if args.tags else None
    fixtures = tuple(f for f in args.fixtures.split(",") if f) if args.fixtures else None
    try:
        rep = run_verify(VerifyConfig(fixtures, tags))
    except (ValueError, FileNotFoundError) as exc:
        raise InputError(str(exc)) from None
    if args.as_json:
        print(json.dumps(rep.to_json(), indent=2))
    else:
        print(rep.table())
    return OK if rep.ok else CHECK_FAILED


# parser ------------------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="rootstretch", description=__doc__.splitlines()[0])
    top = ap.add_subparsers(dest="group", required=True)

    def diagram_cmd(sub, name, func, help_, root=True):
        p = sub.add_parser(name, help=help_)
        p.add_argument("diagram", help="diagram JSON file or bundled fixture name")
        p.add_argument("--elastic", help="override elastic data as x:l1,l2:r1")
        if root:
            p.add_argument("--root", help="comma separated coefficients")
        p.add_argument("--json", dest="as_json", action="store_true", help="machine readable output")
        p.set_defaults(func=func)
        return p

    g = top.add_parser("diagram", help="validate or stretch a diagram").add_subparsers(dest="cmd", required=True)
    diagram_cmd(g, "validate", cmd_diagram_validate, "check Cartan invariants", root=False)
    p = diagram_cmd(g, "stretch", cmd_diagram_stretch, "stretch the elastic vertex", root=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("-o", "--output")

    g = top.add_parser("roots", help="root posets").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("gen", help="generate positive roots up to a depth")
    p.add_argument("diagram")
    p.add_argument("--max-depth", type=int, required=True)
    p.add_argument("--dot")
    p.add_argument("--json")
    p.set_defaults(func=cmd_roots_gen)

    g = top.add_parser("stretch", help="stretching single roots").add_subparsers(dest="cmd", required=True)
    p = diagram_cmd(g, "root", cmd_stretch_root, "stretch a root")
    p.add_argument("--n", type=int, required=True)
    p = diagram_cmd(g, "classify", cmd_stretch_classify, "trichotomy of the cover at x")
    p.add_argument("--n", type=int)
    diagram_cmd(g, "rate", cmd_stretch_rate, "depth growth rate and check table")

    g = top.add_parser("classes", help="stretching classes").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("build", help="build the class graph")
    p.add_argument("diagram")
    p.add_argument("--elastic")
    p.add_argument("--root")
    p.add_argument("--json")
    p.add_argument("--dot")
    p.set_defaults(func=cmd_classes_build)
    p = diagram_cmd(g, "polynomial", cmd_classes_polynomial, "downset size polynomial")
    p.add_argument("--checks", type=int, default=4)

    g = top.add_parser("arr", help="hyperplane arrangements").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("charpoly", help="characteristic polynomial")
    p.add_argument("normals", help='JSON {"dim": d, "normals": [[...], ...]}')
    p.add_argument("--primes", nargs="?", const="", help="also count over these primes (empty: automatic)")
    p.add_argument("--json", dest="as_json", action="store_true")
    p.set_defaults(func=cmd_arr_charpoly)

    g = top.add_parser("shards", help="fractures and shard counts").add_subparsers(dest="cmd", required=True)
    p = diagram_cmd(g, "fractures", cmd_shards_fractures, "fracture normals of a stretched root")
    p.add_argument("--n", type=int, default=0)
    p = diagram_cmd(g, "charpoly", cmd_shards_charpoly, "stable characteristic polynomial")
    p.add_argument("--validate", type=int, default=3)
    p = diagram_cmd(g, "count", cmd_shards_count, "number of shards")
    p.add_argument("--n", type=int, default=0)

    p = top.add_parser("verify", help="run the verification suite")
    p.add_argument("--tags", help="comma separated subset of: " + ",".join(TAGS))
    p.add_argument("--fixtures", help="comma separated fixture names or files")
    p.add_argument("--json", dest="as_json", action="store_true")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, DiagramError, NotARootError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
