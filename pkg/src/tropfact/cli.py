"""Command line interface.

Exit codes: 0 on success or a confirmed check, 1 when a check is
falsified (the report is still printed), 2 on usage errors, malformed
input and guard violations.
"""

import argparse
import json
import random
import sys
from fractions import Fraction

from . import __version__
from .io import (
    append_report, dumps, graph_to_dot, load_json, load_kinematic_point, parse_collection,
    parse_combination, parse_kn, parse_subset, thread_cap, to_jsonable,
)

USAGE = 2
FALSIFIED = 1


class UsageError(Exception):
    """Bad arguments or input detected after parsing."""


def _out(args, payload, text=None):
    if args.json or text is None:
        print(dumps(payload))
    else:
        print(text)


def _config(args):
    keep = {k: v for k, v in vars(args).items() if k not in ("func", "report")}
    keep["threads"] = thread_cap()
    keep["version"] = __version__
    return to_jsonable(keep)


# blades

def _dosp_arg(args):
    from .combinatorics import parse_dosp
    return parse_dosp(args.dosp, args.n)


def cmd_blades_eta(args):
    from .blades import expand_in_planar_basis, height_of_dosp
    d = _dosp_arg(args)
    h = height_of_dosp(d)
    exp = expand_in_planar_basis(h)
    payload = {"dosp": d.label(), "s_expansion": h.to_json(), "planar": to_jsonable(exp.nonzero())}
    _out(args, payload, f"eta{d.label()} = {h.format('s')}\n"
                        f"planar: {exp.format('eta')}")
    return 0


def cmd_blades_subset(args):
    from .blades import eta_of_dosp, eta_of_subset
    from .combinatorics import dosp_of_subset
    J = parse_subset(args.subset)
    d = dosp_of_subset(J, args.n)
    same = eta_of_subset(J, args.n) == eta_of_dosp(d)
    _out(args, {"subset": list(J), "dosp": d.label(), "equal": same},
         f"eta{''.join(map(str, J))} <-> eta{d.label()}: {'equal' if same else 'DIFFERENT'}")
    return 0 if same else FALSIFIED


def _combination_height(args):
    """Sum of c * h_J for ``--combination`` over k-subsets at ``--kn``."""
    from .blades import HeightVector, height_of_subset
    k, n = parse_kn(args.kn)
    h = HeightVector.zero(k, n)
    for c, J in parse_combination(args.combination):
        if len(J) != k or not all(1 <= j <= n for j in J):
            raise UsageError(f"{J} is not a {k}-subset of 1..{n}")
        h = h + c * height_of_subset(J, n)
    return h


def cmd_blades_expand(args):
    from .blades import expand_in_planar_basis
    if args.height:
        from .blades import HeightVector
        h = HeightVector.from_json(load_json(args.height))
    elif args.dosp:
        from .blades import height_of_dosp
        h = height_of_dosp(_dosp_arg(args))
    elif args.kn and args.combination:
        h = _combination_height(args)
    else:
        raise UsageError("give --heights, --dosp, or --kn with --combination")
    exp = expand_in_planar_basis(h)
    _out(args, to_jsonable(exp.nonzero()), exp.format("eta"))
    return 0


def cmd_blades_height(args):
    from .blades import height_of_subset
    J = parse_subset(args.subset)
    h = height_of_subset(J, args.n)
    _out(args, h.to_json(), str(h))
    return 0


# trop

def _root_height(collection, n, coeffs=None):
    from .tropical import GridVector, positive_root_vector, trop_plucker
    k = len(collection[0])
    y = GridVector.zero(k, n)
    for i, J in enumerate(collection):
        c = Fraction(coeffs[i]) if coeffs else 1
        y = y + positive_root_vector(J, n) * c
    return trop_plucker(y)


def cmd_trop_plucker(args):
    from .tropical import GridVector, trop_plucker
    data = _json_or_file(args.grid)
    if isinstance(data, dict):
        data = data["y"]
    rows = [[Fraction(str(x)) for x in row] for row in data]
    n = args.n
    if args.kn:
        k, n = parse_kn(args.kn)
        if k != len(rows) + 1:
            raise UsageError(f"--kn says k={k} but the grid has {len(rows)} rows")
    if n is None:
        raise UsageError("give --n or --kn")
    pi = trop_plucker(GridVector.from_rows(rows, n))
    _out(args, pi.to_json(), str(pi))
    return 0


def cmd_trop_root(args):
    from .blades import expand_in_planar_basis
    coll = parse_collection(args.collection)
    coeffs = [Fraction(x) for x in args.coeffs.split(",")] if args.coeffs else None
    pi = _root_height(coll, args.n, coeffs)
    exp = expand_in_planar_basis(pi)
    _out(args, {"height": pi.to_json(), "planar": to_jsonable(exp.nonzero())},
         f"{pi}\nplanar: {exp.format('h')}")
    return 0


def _json_or_file(text):
    """Inline JSON, or the path of a JSON file."""
    text = text.strip()
    if text[:1] in "[{":
        return json.loads(text)
    return load_json(text)


def _height_arg(args):
    from .blades import HeightVector
    if args.height:
        data = load_json(args.height)
        return HeightVector.from_json(data)
    return _combination_height(args)


def cmd_trop_check(args):
    from .tropical import three_term_violations
    pi = _height_arg(args)
    bad = three_term_violations(pi)
    payload = {"positive": not bad, "violations": len(bad),
               "first": [list(map(to_jsonable, b)) for b in bad[:5]]}
    _out(args, payload, "positive tropical Pluecker vector" if not bad
         else f"{len(bad)} three-term relations fail")
    return 0 if not bad else FALSIFIED


# subdiv

def _subdivision(args):
    from .polyhedra.subdivisions import subdivision_from_height
    from .combinatorics import parse_dosp
    if args.dosp:
        d = parse_dosp(args.dosp, args.n)
        return subdivision_from_height([(1, d)], d.k, d.n)
    if args.collection:
        from .blades import expand_in_planar_basis
        from .combinatorics import dosp_of_subset
        pi = _root_height(parse_collection(args.collection), args.n)
        exp = expand_in_planar_basis(pi).nonzero()
        return subdivision_from_height(
            [(c, dosp_of_subset(J, args.n)) for J, c in sorted(exp.items())], pi.k, pi.n)
    pi = _height_arg(args)
    return subdivision_from_height(pi)


def cmd_subdiv_cells(args):
    from .polyhedra.subdivisions import is_coarsest, is_positroidal
    sub = _subdivision(args)
    payload = {"cells": len(sub.cells), "positroidal": is_positroidal(sub),
               "coarsest": is_coarsest(sub), "method": sub.method}
    if args.list:
        payload["cell_vertices"] = sub.to_json()["cells"]
    _out(args, payload, f"cells={payload['cells']} positroidal={payload['positroidal']} "
                        f"coarsest={payload['coarsest']}")
    return 0


def cmd_subdiv_dot(args):
    from .polyhedra.subdivisions import dual_graph
    sub = _subdivision(args)
    text = graph_to_dot(dual_graph(sub), "cells")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# cone

def _channel(text, n=None):
    from .factorization import ChannelSpec
    return ChannelSpec.parse(text, n)


def cmd_cone_fvector(args):
    from .factorization import factorization_cone
    from .polyhedra.cones import f_vector
    S = _channel("12|34|56" if args.channel_k3 else args.channel, args.n)
    cone = factorization_cone(S, args.type)
    fv = list(f_vector(cone))
    _out(args, {"channel": S.label(), "type": args.type, "f_vector": fv},
         ",".join(map(str, fv)))
    return 0


def _span_heights(S):
    from .blades import height_of_dosp
    from .factorization import hatx_collection
    hs = [height_of_dosp(d) for d in hatx_collection(S, type_delta_only=False)]
    return [h for h in hs if not h.is_zero_mod_lineality()]


def cmd_cone_span(args):
    from .factorization import positive_fan_in_span
    from .polyhedra.cones import f_vector
    S = _channel(args.channel, args.n)
    F = positive_fan_in_span(_span_heights(S))
    cones = []
    for i, c in enumerate(F.cones):
        entry = {"rays": len(c), "dim": F.cone(i).dim}
        if args.fvectors:
            entry["f_vector"] = list(f_vector(F.cone(i)))
        cones.append(entry)
    payload = {"channel": S.label(), "rays": len(F.rays), "maximal_cones": cones}
    lines = [f"rays={len(F.rays)} maximal cones={len(cones)}"]
    lines += [f"  cone {i}: " + ", ".join(f"{k}={v}" for k, v in c.items())
              for i, c in enumerate(cones)]
    _out(args, payload, "\n".join(lines))
    return 0


# channel

def cmd_channel(args):
    from .factorization import (
        cone_generators, hatx_collection, k4_channel_tables, n_collection, x_collection,
    )
    from .blades import KinematicForm
    S = _channel(args.partition, args.n)
    t = args.type
    if t in ("I", "II"):
        table = k4_channel_tables(S)[0 if t == "I" else 1]
        rows = [{"label": lab, "form": str(f)} for lab, f in zip(table.labels, table.forms)]
    elif t == "nset":
        ps = n_collection(S)
        rows = [{"label": lab, "form": str(f)} for lab, f in zip(ps.labels, ps.forms)]
    elif t == "x":
        rows = [{"label": d.label()} for d in x_collection(S)]
    elif t == "hatx":
        rows = [{"label": d.label()} for d in hatx_collection(S, type_delta_only=False)]
    else:
        rows = [{"form": str(KinematicForm.from_height(h))} for h in cone_generators(S)]
    payload = {"channel": S.label(), "type": t, "count": len(rows), "rows": rows}
    text = "\n".join("  =  ".join(r[key] for key in ("label", "form") if key in r)
                     for r in rows)
    _out(args, payload, f"{len(rows)} entries\n{text}")
    return 0


# amp

def cmd_amp_compute(args):
    from .amplitudes import evaluate_amplitude, fan_for, m2_tree_oracle, random_conserving_point
    from .blades import is_conserving
    k, n = parse_kn(args.kn)
    if args.kin:
        s = load_kinematic_point(load_json(args.kin), k, n)
        if not is_conserving(s, k, n):
            raise UsageError("kinematic point does not conserve momentum")
    else:
        s = random_conserving_point(k, n, random.Random(args.seed))
    fan = fan_for(k, n, args.guard)
    val = evaluate_amplitude(fan, s)
    payload = {"k": k, "n": n, "seed": None if args.kin else args.seed, "value": val,
               "cones": len(fan.cones), "rays": len(fan.rays), "simplices": len(fan.simplices)}
    if k == 2:
        payload["tree_oracle"] = m2_tree_oracle(n, s)
    _out(args, to_jsonable(payload), f"m({k},{n}) = {to_jsonable(val)}")
    if k == 2 and payload["tree_oracle"] != val:
        return FALSIFIED
    return 0


def cmd_amp_residue(args):
    from .amplitudes import verify_factorization
    S = _channel(args.channel, args.n)
    orders = None
    if args.order:
        orders = [[int(x) for x in args.order.split(",")]]
    rep = verify_factorization(S, orders=orders, seed=args.seed, max_orders=args.max_orders,
                               guard=args.guard)
    data = rep.to_json()
    data.pop("seconds")
    if args.show and rep.result is not None:
        data["result"] = rep.result.format()
    _out(args, data, None)
    return 0 if rep.nonzero_orders else FALSIFIED


# conjecture checks

def _check_26(args):
    from .factorization import five_blade_relation
    from .blades import KinematicForm
    S = _channel(args.channel, args.n)
    lhs, rhs = five_blade_relation(S)
    ok = KinematicForm.from_height(lhs) == KinematicForm.from_height(rhs)
    out = {"channel": S.label(), "relation": ok}
    if args.residue:
        from .amplitudes import verify_factorization
        rep = verify_factorization(S, seed=args.seed, max_orders=args.max_orders)
        out["nonzero_orders"] = len(rep.nonzero_orders)
        out["separable"] = rep.separable
        out["product_constant"] = to_jsonable(rep.product_constant)
        ok = ok and bool(rep.nonzero_orders) and bool(rep.separable)
    return ok, out


def gamma_face_check(j1, j2, j3, n):
    """Codimension-3 faces of the gamma_{j1 j2 j3}-minimal face of N_{3,n}.

    Counts those with the f-vector of the predicted product and checks
    that the faces cut out by the eight rows are distinct such faces.
    """
    from .factorization import eight_gamma_rows
    from .polyhedra.newton import (
        codim_faces, minkowski_vertices, newton_face, polytope_f_vector, product_f_vector,
    )
    from .tropical import positive_root_vector

    def full(m):
        if m <= 4:
            return [1]
        return polytope_f_vector(minkowski_vertices(newton_face(3, m).pieces.values()))

    a, b, c = sorted((j1, j2, j3))
    F = newton_face(3, n, positive_root_vector((a, b, c), n))
    faces, _, _ = codim_faces(minkowski_vertices(F.pieces.values()), 3)
    target = product_f_vector(full(b - a + 2), full(c - b + 2), full(a - c + n + 2))
    faces = {tuple(sorted(f)) for f in faces}
    match = {f for f in faces if polytope_f_vector(list(f)) == target}
    rows = set()
    for row in eight_gamma_rows(a, b, c, n):
        w = [sum(x) for x in zip(*(positive_root_vector(J, n).entries for J in row))]
        rows.add(tuple(sorted(minkowski_vertices(newton_face(3, n, w).pieces.values()))))
    return {"facet_dim": F.dim, "codim3_faces": len(faces), "target_f_vector": target,
            "matching": len(match), "row_faces": len(rows),
            "rows_among_matching": rows <= match}


def _check_27(args):
    j = parse_subset(args.triple)
    res = gamma_face_check(*j, args.n)
    ok = res["matching"] == 8 and res["row_faces"] == 8 and res["rows_among_matching"]
    return ok, dict(res, triple=list(j), n=args.n)


def _check_211(args):
    from .amplitudes import verify_factorization
    S = _channel(args.channel, args.n)
    rep = verify_factorization(S, seed=args.seed, max_orders=args.max_orders, guard=args.guard)
    data = rep.to_json()
    data.pop("seconds")
    matched = all(m.get("matched") for m in rep.matches)
    ok = bool(rep.nonzero_orders) and bool(rep.separable) and matched
    return ok, data


def span_dimension_check(S):
    """Dimensions of the maximal cones of span(X-hat) in the positive
    tropical Grassmannian, against (d - 1)(k - 1)."""
    from .factorization import positive_fan_in_span
    F = positive_fan_in_span(_span_heights(S))
    dims = [F.cone(i).dim for i in range(len(F.cones))]
    want = (S.d - 1) * (S.k - 1)
    return F, dims, want


def newton_product_check(S, F, i=0):
    """f-vector of the Newton face at the centre of maximal cone i versus
    the product of the N_{k, n_l}."""
    from .blades import HeightVector
    from .amplitudes.verify import expected_factors
    from .polyhedra.newton import (
        minkowski_vertices, newton_face, polytope_f_vector, product_f_vector,
    )
    from .tropical import proj_rt
    k, n = S.k, S.n
    tot = [sum(F.rays[j][t] for j in F.cones[i]) for t in range(len(F.rays[0]))]
    pi = HeightVector(k, n, tuple(Fraction(x) for x in tot))
    face = newton_face(k, n, proj_rt(pi))
    got = polytope_f_vector(minkowski_vertices(face.pieces.values()))

    def full(m):
        if m <= k + 1:
            return [1]
        return polytope_f_vector(minkowski_vertices(newton_face(k, m).pieces.values()))

    want = product_f_vector(*(full(m) for m in expected_factors(S)))
    return got, want


def _check_212(args):
    S = _channel(args.channel, args.n)
    F, dims, want = span_dimension_check(S)
    out = {"channel": S.label(), "item1": {"cone_dims": dims, "expected": want,
                                           "rays": len(F.rays)},
           "item2": "not checked"}
    ok = bool(dims) and all(x == want for x in dims)
    if args.newton:
        got = []
        for i in range(len(F.cones)):
            fv, target = newton_product_check(S, F, i)
            got.append(fv)
        out["item3"] = {"f_vectors": got, "product_f_vector": target}
        ok = ok and all(fv == target for fv in got)
    if args.residue:
        from .amplitudes import verify_factorization
        rep = verify_factorization(S, seed=args.seed, max_orders=args.max_orders)
        out["item4"] = {"nonzero_orders": len(rep.nonzero_orders),
                        "zero_orders": len(rep.zero_orders), "separable": rep.separable,
                        "matches": rep.matches}
        ok = ok and bool(rep.nonzero_orders) and bool(rep.separable)
    return ok, out


def _check_31(args):
    from .factorization import ray_from_noncrossing
    k, n = parse_kn(args.kn)
    coll = parse_collection(args.collection)
    if any(len(J) != k for J in coll):
        raise UsageError(f"every subset must have {k} elements")
    r = ray_from_noncrossing(coll, n)
    out = {"collection": [list(J) for J in coll], "complete_graph": r.complete_graph,
           "is_ray": r.is_ray, "cells": r.cells, "expansion": to_jsonable(r.expansion)}
    if not r.complete_graph:
        out["note"] = "graph is not complete; nothing to check"
        return True, out
    return r.is_ray, out


CHECKS = {"2.6": _check_26, "2.7": _check_27, "2.11": _check_211, "2.12": _check_212,
          "3.1": _check_31}


def cmd_conjecture_check(args):
    ok, out = CHECKS[args.id](args)
    out = {"conjecture": args.id, "confirmed": ok, **out}
    print(dumps(out))
    if not args.json:
        print("CONFIRMED" if ok else "FALSIFIED")
    return 0 if ok else FALSIFIED


def cmd_ray(args):
    from .factorization import ray_from_noncrossing
    r = ray_from_noncrossing(parse_collection(args.collection), args.n)
    payload = {"is_ray": r.is_ray, "cells": r.cells, "complete_graph": r.complete_graph,
               "expansion": to_jsonable(r.expansion)}
    text = (f"{r.height}\nray={r.is_ray} cells={r.cells} complete_graph={r.complete_graph}")
    _out(args, payload, text)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="tropfact", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print JSON")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--guard", type=int, default=6, help="largest fan dimension to build")
    common.add_argument("--report", help="append a JSON line to this file")
    sub = p.add_subparsers(dest="cmd", required=True)

    def leaf(parent, name, func, **kw):
        q = parent.add_parser(name, parents=[common], **kw)
        q.set_defaults(func=func)
        return q

    # blades
    b = sub.add_parser("blades", help="kinematic blades").add_subparsers(dest="sub", required=True)
    q = leaf(b, "eta", cmd_blades_eta)
    q.add_argument("--dosp", required=True)
    q.add_argument("--n", type=int)
    q = leaf(b, "subset", cmd_blades_subset)
    q.add_argument("--subset", required=True)
    q.add_argument("--n", type=int, required=True)
    q = leaf(b, "expand", cmd_blades_expand)
    q.add_argument("--height", "--heights", help="HeightVector JSON file")
    q.add_argument("--dosp")
    q.add_argument("--n", type=int)
    q.add_argument("--kn")
    q.add_argument("--combination", help='e.g. "1:1,5,9;-1:2,5,10"')
    q = leaf(b, "height", cmd_blades_height)
    q.add_argument("--subset", required=True)
    q.add_argument("--n", type=int, required=True)

    # trop
    t = sub.add_parser("trop", help="tropical Pluecker vectors").add_subparsers(
        dest="sub", required=True)
    q = leaf(t, "plucker", cmd_trop_plucker, aliases=["pluecker"])
    q.add_argument("--grid", "--y", required=True,
                   help="JSON list of k-1 rows, inline or as a file")
    q.add_argument("--n", type=int)
    q.add_argument("--kn")
    q = leaf(t, "root", cmd_trop_root)
    q.add_argument("--collection", required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--coeffs")
    q = leaf(t, "check", cmd_trop_check)
    q.add_argument("--height", "--heights", help="HeightVector JSON file")
    q.add_argument("--kn")
    q.add_argument("--combination")

    # subdiv
    s = sub.add_parser("subdiv", help="hypersimplex subdivisions").add_subparsers(
        dest="sub", required=True)
    for name, func in (("cells", cmd_subdiv_cells), ("dot", cmd_subdiv_dot)):
        q = leaf(s, name, func)
        q.add_argument("--dosp")
        q.add_argument("--collection")
        q.add_argument("--n", type=int)
        q.add_argument("--height", "--heights")
        q.add_argument("--kn")
        q.add_argument("--combination")
        if name == "cells":
            q.add_argument("--list", action="store_true")
        else:
            q.add_argument("--out")

    # cone
    c = sub.add_parser("cone", help="factorization cones").add_subparsers(dest="sub", required=True)
    q = leaf(c, "fvector", cmd_cone_fvector)
    g = q.add_mutually_exclusive_group(required=True)
    g.add_argument("--channel-k3", action="store_true")
    g.add_argument("--channel")
    q.add_argument("--n", type=int)
    q.add_argument("--type", choices=["I", "II", "span"], default="I")
    q = leaf(c, "span", cmd_cone_span)
    q.add_argument("--channel", required=True)
    q.add_argument("--n", type=int)
    q.add_argument("--fvectors", action="store_true")

    # channel
    q = leaf(sub, "channel", cmd_channel, help="propagator sets of a channel")
    q.add_argument("--partition", required=True)
    q.add_argument("--n", type=int)
    q.add_argument("--type", choices=["I", "II", "cone", "nset", "x", "hatx"], default="cone")

    # amp
    a = sub.add_parser("amp", help="CEGM amplitudes").add_subparsers(dest="sub", required=True)
    q = leaf(a, "compute", cmd_amp_compute)
    q.add_argument("--kn", required=True)
    q.add_argument("--kin", help="JSON kinematic point")
    q = leaf(a, "residue", cmd_amp_residue)
    q.add_argument("--channel", required=True)
    q.add_argument("--n", type=int)
    q.add_argument("--order", help="comma separated propagator indices")
    q.add_argument("--max-orders", type=int)
    q.add_argument("--show", action="store_true")

    # conjecture
    cj = sub.add_parser("conjecture", help="conjecture checks").add_subparsers(
        dest="sub", required=True)
    q = leaf(cj, "check", cmd_conjecture_check)
    q.add_argument("id", choices=sorted(CHECKS))
    q.add_argument("--channel")
    q.add_argument("--n", type=int)
    q.add_argument("--triple")
    q.add_argument("--collection")
    q.add_argument("--kn")
    q.add_argument("--residue", action="store_true")
    q.add_argument("--newton", action="store_true")
    q.add_argument("--max-orders", type=int)

    q = leaf(sub, "ray", cmd_ray, help="ray test for a noncrossing collection")
    q.add_argument("--collection", required=True)
    q.add_argument("--n", type=int, required=True)
    return p


def _require(args):
    need = {"2.6": ["channel"], "2.11": ["channel"], "2.12": ["channel"],
            "2.7": ["triple", "n"], "3.1": ["collection", "kn"]}
    if getattr(args, "func", None) is cmd_conjecture_check:
        missing = [x for x in need[args.id] if getattr(args, x) is None]
        if missing:
            raise UsageError("missing --" + ", --".join(missing))


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    from .amplitudes.fan import FanGuardError
    from .amplitudes.termsum import PoleError
    try:
        _require(args)
        code = args.func(args)
    except (UsageError, ValueError, KeyError, json.JSONDecodeError, FanGuardError,
            PoleError, OSError) as e:
        print(f"tropfact: error: {e}", file=sys.stderr)
        return USAGE
    if args.report:
        append_report(args.report, {"command": args.cmd, "exit": code}, _config(args))
    return code


if __name__ == "__main__":
    sys.exit(main())
