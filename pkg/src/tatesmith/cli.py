"""Command-line front end: JSON in, JSON report out.

Exit codes: 0 all checks passed, 1 a check failed, 2 malformed input or
bad usage. Reports are deterministic for fixed inputs and seed except for
the wall_time_ms field.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from .field import field_make, Mat
from .sigma import (jordan_profile, module_from_json, profile_to_json,
                    tate_dims)
from .complexes import complex_from_json, tate_hyper_dims
from . import smith
from .groups import FiniteGroup, SigmaGroup, GroupRep
from .hecke import HeckeContext, tate_hecke_diagram
from .linkage import regular_extended
from . import excursion as exc
from .torus import TorusParityObj, bc_obj, nm_obj, res_bc_oracle
from .acceptance import run_all

SCHEMA_VERSION = 1


class InputError(Exception):
    pass


def _load_json(path):
    try:
        with open(path, "rb") as fh:
            data = fh.read()
        return json.loads(data)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON in {path} at byte offset {e.pos}: {e.msg}")


def _parse_inline_or_file(text):
    if os.path.exists(text):
        return _load_json(text)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed inline JSON at byte offset {e.pos}: {e.msg}")


def _coerce_scalar(ctx, v):
    if isinstance(v, int):
        return ctx.from_int(v) if ctx.m == 1 else ctx.encode([v])
    return ctx.encode(v)


def _mat_from_json(ctx, obj):
    rows = [[_coerce_scalar(ctx, v) for v in r] for r in obj["entries"]]
    return Mat(ctx, obj["rows"], obj["cols"],
               tuple(tuple(r) for r in rows))


def _field_from_flag(text):
    try:
        p, m = (int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"bad --field {text!r}; expected 'p,m'")
    return field_make(p, m)


def _group_from_json(obj, name="G"):
    return FiniteGroup.from_json(obj, name=name)


def _sigma_group_from_json(obj):
    G = _group_from_json(obj)
    p = obj.get("p")
    smap = obj.get("sigma")
    if p is None or smap is None:
        raise InputError("group JSON needs 'sigma' (element map) and 'p'")
    if isinstance(smap, dict):
        table = {int(k): int(v) for k, v in smap.items()}
        smap = [table[i] for i in range(G.order)]
    els = G.elements
    return SigmaGroup(G, lambda g: els[smap[G.index[g]]], p)


def _rep_from_json(obj, group, ctx):
    gens = [group.elements[i] for i in obj["gens"]]
    mats = {g: _mat_from_json(ctx, m) for g, m in zip(gens, obj["mats"])}
    words = {group.identity: []}
    queue = [group.identity]
    while queue:
        x = queue.pop(0)
        for g in gens:
            y = group.mul(x, g)
            if y not in words:
                words[y] = words[x] + [g]
                queue.append(y)
    if len(words) != group.order:
        raise InputError("rep generators do not generate the group")
    dim = obj["dim"]

    def mat_fn(g):
        out = Mat.identity(ctx, dim)
        for w in words[g]:
            out = out.mul(mats[w])
        return out
    return GroupRep(group, dim, mat_fn, ctx, name=obj.get("name", "rep"))


def _target_from_json(obj):
    if "bc" in obj:
        H = _group_from_json(obj["bc"]["Hhat"], name="Hhat")
        return exc.base_change_target(H, obj["bc"]["p"])
    Ghat = _group_from_json(obj["Ghat"], name="Ghat")
    if "Q" not in obj:
        return exc.split_target(Ghat)
    Q = _group_from_json(obj["Q"], name="Q")
    action = {}
    for k, images in obj["action"].items():
        q = Q.elements[int(k)]
        action[q] = {Ghat.elements[i]: Ghat.elements[images[i]]
                     for i in range(Ghat.order)}
    T = exc.make_target(Ghat, Q, action)
    if "sigma" in obj:
        smap = obj["sigma"]
        els = T.L.elements
        T.set_sigma(lambda l: els[smap[T.L.index[l]]], obj["sigma_p"])
    return T


def _stack_from_json(gamma_obj, target):
    gam = _group_from_json(gamma_obj["group"] if "group" in gamma_obj
                           else gamma_obj, name="Gamma")
    if "to_q" in gamma_obj:
        surj = {gam.elements[i]: target.Q.elements[q]
                for i, q in enumerate(gamma_obj["to_q"])}
    elif target.Q.order == 1:
        surj = {g: target.Q.identity for g in gam.elements}
    elif target.Q.order == gam.order:
        surj = {g: target.Q.elements[gam.index[g]] for g in gam.elements}
    else:
        raise InputError("gamma JSON needs 'to_q' for a nontrivial Q")
    return exc.RepStack(gam, surj, target)


def _digest(objs):
    blob = json.dumps(objs, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _emit(report, path=None):
    text = json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"
    sys.stdout.write(text)
    if path:
        with open(path, "w") as fh:
            fh.write(text)


def _finish(command, inputs, results, seed, t0, report_path=None):
    ok = all(r.get("pass", False) for r in results)
    report = {
        "command": command,
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "inputs_digest": _digest(inputs),
        "results": sorted(results, key=lambda r: r.get("id", "")),
        "pass": ok,
        "versions": {"tatesmith": __version__},
        "wall_time_ms": round((time.perf_counter() - t0) * 1000, 3),
    }
    _emit(report, report_path)
    return 0 if ok else 1


def _cmd_tate(args, t0):
    inputs = []
    results = []
    if args.module:
        obj = _load_json(args.module)
        inputs.append(obj)
        M = module_from_json(obj)
        (d0, d1), _ = tate_dims(M)
        results.append({"id": "tate_module", "pass": True,
                        "t0": d0, "t1": d1,
                        "profile": profile_to_json(jordan_profile(M))})
    if args.complex:
        obj = _load_json(args.complex)
        inputs.append(obj)
        C = complex_from_json(obj)
        d0, d1 = tate_hyper_dims(C)
        results.append({"id": "tate_complex", "pass": True, "t0": d0, "t1": d1})
    if not results:
        raise InputError("tate needs --module or --complex")
    return _finish("tate", inputs, results, args.seed, t0, args.report)


def _cmd_smith(args, t0):
    obj = _load_json(args.input)
    X = smith.SigmaComplex.from_json(obj)
    ctx = field_make(X.p, 1)
    subdivided = False
    if not smith.is_admissible(X):
        X = smith.barycentric_subdivide(X)
        subdivided = True
    rep = smith.smith_localization_report(X, ctx)
    results = [{"id": "smith_localization", "pass": rep["pass"],
                "tate_X": list(rep["tate_X"]),
                "tate_fixed": list(rep["tate_fixed"]),
                "subdivided": subdivided}]
    return _finish("smith", [obj], results, args.seed, t0, args.report)


def _cmd_hecke(args, t0):
    gobj = _load_json(args.group)
    sg = _sigma_group_from_json(gobj)
    K = [sg.G.elements[i] for i in _parse_inline_or_file(args.subgroup)]
    ctx = _field_from_flag(args.field)
    hctx = HeckeContext(sg, K, ctx)
    results = []
    if args.check == "plain":
        results.append({"id": "plain", "pass": hctx.is_plain(),
                        "fixed_cosets": len(hctx.fixed_cosets()),
                        "cosets": hctx.space.n})
    elif args.check == "brauer":
        ok = hctx.is_plain()
        pairs = 0
        if ok:
            hh = hctx.h_context()
            basis = hctx.sigma_invariant_basis()
            for f in basis:
                brf = hctx.brauer(f)
                for g in basis:
                    pairs += 1
                    if hctx.brauer(hctx.convolve(f, g)).values != \
                            hh.convolve(brf, hctx.brauer(g)).values:
                        ok = False
        results.append({"id": "brauer_multiplicative", "pass": ok,
                        "pairs": pairs})
    elif args.check == "diagram":
        ext = regular_extended(sg, ctx)
        ok = all(tate_hecke_diagram(hctx, ext, f)["pass"]
                 for f in hctx.sigma_invariant_basis())
        results.append({"id": "tate_hecke_diagram", "pass": ok,
                        "representation": "regular"})
    return _finish("hecke", [gobj], results, args.seed, t0, args.report)


def _cmd_excursion(args, t0):
    import random
    tobj = _load_json(args.target)
    gobj = _load_json(args.gamma)
    T = _target_from_json(tobj)
    st = _stack_from_json(gobj, T)
    ctx = _field_from_flag(args.field)
    rng = random.Random(args.seed)
    results = []
    if args.check == "relations":
        rep = exc.relation_suite(st, ctx, rng, count=args.count)
        results.append({"id": "relations", "pass": rep["pass"],
                        "checks": rep["checks"]})
    elif args.check == "bijection":
        rep = exc.character_bijection_report(st, ctx)
        results.append({"id": "bijection", "pass": rep["pass"],
                        "points": rep["points"],
                        "characters": rep["characters"]})
    elif args.check == "functoriality":
        ident = exc.TargetMap(T, T, lambda l: l)
        ok = all(exc.functoriality_check(st, ident,
                                         exc.random_gen2(st, ctx, rng))
                 for _ in range(args.count))
        results.append({"id": "functoriality_identity", "pass": ok})
    elif args.check == "norm":
        if T.sigma is None:
            raise InputError("norm check needs sigma-data on the target")
        ok = all(exc.norm_identities_check(st, ctx,
                                           exc.random_gen2(st, ctx, rng))
                 for _ in range(args.count))
        results.append({"id": "norm_identities", "pass": ok})
    return _finish("excursion", [tobj, gobj], results, args.seed, t0,
                   args.report)


def _cmd_bc_torus(args, t0):
    obj = _load_json(args.input)
    F = TorusParityObj.from_json(obj)
    out = bc_obj(F)
    oracle = res_bc_oracle(F.support)
    results = [{"id": "bc_torus", "pass": out.support == oracle,
                "bc": out.to_json(), "nm": nm_obj(F).to_json()}]
    return _finish("bc-torus", [obj], results, args.seed, t0, args.report)


def _cmd_linkage(args, t0):
    from .linkage import linkage_report
    gobj = _load_json(args.group)
    robj = _load_json(args.rep)
    H = _group_from_json(gobj, name="H")
    ctx = _field_from_flag(args.field)
    pi = _rep_from_json(robj, H, ctx)
    rep = linkage_report(pi, args.p)
    results = [{"id": "linkage", "pass": rep["pass"],
                "dims": list(rep["dims"]),
                "t0_isomorphic_to_twist": rep["t0_isomorphic_to_twist"],
                "t1_matches_twist_observation":
                    rep["t1_matches_twist_observation"]}]
    return _finish("linkage", [gobj, robj], results, args.seed, t0,
                   args.report)


def _cmd_selftest(args, t0):
    rep = run_all(seed=args.seed, verbose=not args.quiet)
    results = [{k: v for k, v in r.items()} for r in rep["results"]]
    return _finish("selftest", [{"seed": args.seed}], results, args.seed, t0,
                   args.report)


def build_parser():
    ap = argparse.ArgumentParser(prog="tatesmith")
    ap.add_argument("--seed", type=int, default=0)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("tate", help="Tate cohomology of a module or complex")
    p.add_argument("--module")
    p.add_argument("--complex")
    p.add_argument("--report")

    p = sub.add_parser("smith", help="Smith localization report")
    p.add_argument("--input", required=True)
    p.add_argument("--report")

    p = sub.add_parser("hecke", help="plainness / Brauer / diagram checks")
    p.add_argument("--group", required=True)
    p.add_argument("--subgroup", required=True,
                   help="JSON list of element indices (inline or file)")
    p.add_argument("--field", default="3,1")
    p.add_argument("--check", choices=["plain", "brauer", "diagram"],
                   required=True)
    p.add_argument("--report")

    p = sub.add_parser("excursion", help="excursion-algebra checks")
    p.add_argument("--gamma", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--field", default="5,1")
    p.add_argument("--check", choices=["relations", "bijection",
                                       "functoriality", "norm"],
                   required=True)
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--report")

    p = sub.add_parser("bc-torus", help="torus base change on an object")
    p.add_argument("--input", required=True)
    p.add_argument("--report")

    p = sub.add_parser("linkage", help="T^0(pi^box p) vs the Frobenius twist")
    p.add_argument("--group", required=True)
    p.add_argument("--rep", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--field", required=True)
    p.add_argument("--report")

    p = sub.add_parser("selftest", help="run the full acceptance battery")
    p.add_argument("--quiet", action="store_true")
    p.add_argument("--report")
    return ap


_DISPATCH = {"tate": _cmd_tate, "smith": _cmd_smith, "hecke": _cmd_hecke,
             "excursion": _cmd_excursion, "bc-torus": _cmd_bc_torus,
             "linkage": _cmd_linkage, "selftest": _cmd_selftest}


def main(argv=None):
    t0 = time.perf_counter()
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return _DISPATCH[args.cmd](args, t0)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
