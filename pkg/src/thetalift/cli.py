"""Command-line front end: enumeration, hom computation, presheaf dumps,
lifting verdicts, and the named verification suites, all as JSON on stdout.

Exit codes: 0 for success and positive verdicts, 1 for negative verification
verdicts, 2 for usage errors, 3 when an enumeration leaves the bounds.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import boxcalc, lifting, ncat, presheaf, sites, theta
from .presheaf import NerveTheta, count_elements, segal_check, terminal_map


def _named_category(name, n):
    """Small registry of finite categories addressable from the command line."""
    key = name.strip().lower()
    if key in ("terminal", "point", "d0"):
        return ncat.terminal(n)
    if key == "j":
        return ncat.raise_level(ncat.walking_iso(), n)
    if key.startswith("j") and key[1:].isdigit():
        k = int(key[1:])
        Jk = ncat.build_interval(k)[0]
        return ncat.raise_level(Jk, n) if k < n else Jk
    if key.startswith("d") and key[1:].isdigit():
        return ncat.globe(int(key[1:]), n)
    if key.startswith("gpd") and key[3:].isdigit():
        return ncat.simply_connected_groupoid(int(key[3:]), n)
    if key.startswith("ordinal") and key[7:].isdigit():
        return ncat.raise_level(presheaf.poset_category(int(key[7:])), n)
    raise ValueError(f"unknown category name: {name}")


def _collapse_map(k, n):
    Jk, jk, _, _ = ncat.build_interval(k)
    return jk if k == n else ncat.raise_level_map(jk, n)


def _site(args):
    return sites.ThetaSite(args.n, max_dim=getattr(args, "max_dim", None),
                           max_width=args.max_width)


def _bounds(site):
    return {"n": site.n, "max_dim": site.max_dim, "max_width": site.max_width}


# -- verb handlers: each returns (exit_code, report_dict) ----------------------


def cmd_objects(args):
    site = _site(args)
    return 0, {"bounds": _bounds(site),
               "objects": [str(t) for t in site.objects()],
               "count": len(site.objects())}


def cmd_hom(args):
    src = theta.parse_table(args.src)
    dst = theta.parse_table(args.dst)
    ms = theta.hom(src, dst, args.n)
    return 0, {"source": str(src), "target": str(dst), "n": args.n,
               "count": len(ms),
               "morphisms": [m.encoding for m in ms]}


def cmd_free(args):
    table = theta.parse_table(args.table)
    cat = theta.free_ncat(table, args.n)
    return 0, {"table": str(table), "n": args.n,
               "cells": cat.cell_counts(),
               "category": json.loads(ncat.ncat_to_json(cat))}


def cmd_nerve(args):
    site = _site(args)
    cat = _named_category(args.cat, args.n)
    X = NerveTheta(cat, args.n)
    doc = {"category": args.cat, "bounds": _bounds(site), "objects": []}
    for t in site.objects():
        doc["objects"].append({"table": str(t),
                               "elements": list(X.evaluate(t))})
    return 0, doc


def _sub_dump(args, build):
    site = _site(args)
    table = theta.parse_table(args.table)
    if table not in site.objects():
        raise presheaf.BoundExhaustion("table outside the supplied bounds")
    X = build(site, table)
    doc = {"table": str(table), "bounds": _bounds(site), "objects": []}
    for t in site.objects():
        doc["objects"].append({"table": str(t),
                               "elements": list(X.evaluate(t))})
    return 0, doc


def cmd_boundary(args):
    return _sub_dump(args, lambda site, t: presheaf.BoundaryTheta(site, t))


def cmd_spine(args):
    return _sub_dump(args, lambda site, t: presheaf.SpineTheta(site, t))


def cmd_lift(args):
    if args.square != "counterexample":
        raise ValueError(f"unknown square: {args.square}")
    p, site, objs = lifting.counterexample_square(args.n, args.max_width)
    rep = lifting.find_lift(p, site, objs)
    nlifts = lifting.count_lifts(p, site, objs)
    return 0, {"square": args.square, "status": rep.status,
               "lift_count": nlifts, "bounds": rep.bounds}


def _named_right_leg(args, fallback_cat=None, fallback_collapse=None):
    if args.collapse is None and args.cat is None:
        args.cat, args.collapse = fallback_cat, fallback_collapse
    if args.collapse is not None:
        return lifting.nerve_map(_collapse_map(args.collapse, args.n), args.n), \
            f"nerve-collapse:{args.collapse}"
    cat = _named_category(args.cat, args.n)
    return terminal_map(NerveTheta(cat, args.n)), f"to-point:{args.cat}"


def cmd_trivfib(args):
    right, label = _named_right_leg(args, fallback_cat="J")
    rep = lifting.check_trivial_fibration(right, args.n,
                                          max_dim=args.max_dim,
                                          max_width=args.max_width)
    doc = {"map": label, "trivial_fibration": rep.positive,
           "squares_checked": rep.squares_checked, "bounds": rep.bounds}
    if rep.witness:
        doc["witness"] = rep.witness
    return (0 if rep.positive else 1), doc


def cmd_anodyne(args):
    site = _site(args)
    objs = site.objects()
    right, label = _named_right_leg(args, fallback_collapse=args.n)
    gens = lifting.anodyne_generators(lifting.spine_generators(site, objs),
                                      args.n, args.depth, site, objs)
    rep = lifting.has_rlp(right, gens, site, objs)
    doc = {"map": label, "depth": args.depth, "rlp": rep.positive,
           "squares_checked": rep.squares_checked, "bounds": rep.bounds}
    if rep.witness:
        doc["witness"] = rep.witness
    return (0 if rep.positive else 1), doc


def cmd_verify_counterexample(args):
    rep = lifting.verify_counterexample(args.n, args.max_width, args.depth)
    return (0 if rep["verified"] else 1), rep


def cmd_verify_not_2qcat(args):
    rep = lifting.check_not_2qcat(args.max_width)
    return (0 if rep["confirmed_not_fibrant"] else 1), rep


def cmd_verify_segal(args):
    cat = _named_category(args.cat, args.n)
    site = _site(args)
    rows = [segal_check(cat, t, args.n, max_width=args.max_width)
            for t in site.objects()]
    ok = all(r["bijective"] for r in rows)
    return (0 if ok else 1), {"category": args.cat, "bounds": _bounds(site),
                              "all_bijective": ok, "tables": rows}


def cmd_verify_resolution(args):
    rep = boxcalc.resolution_check(args.n, args.k_max,
                                   max_dim=args.max_dim,
                                   max_width=args.max_width)
    return (0 if rep["positive"] else 1), rep


def cmd_verify_orthogonality(args):
    box = boxcalc.Box(args.n, max_width=args.max_width,
                      max_level=args.max_level)
    rep = boxcalc.sampled_orthogonality(box, args.samples, seed=args.seed)
    ok = rep["all_agree"]
    if not args.skip_named:
        named_box = boxcalc.Box(2, max_width=2, max_level=2)
        t1 = theta.parse_table("1")
        u = lifting.boundary_generators(named_box.tsite, [t1])[0][1]
        v = boxcalc.simplex_inclusion(named_box, 1)
        NJ = NerveTheta(ncat.raise_level(ncat.walking_iso(), 2), 2)
        f = boxcalc.p_star_map(terminal_map(NJ))
        named = boxcalc.orthogonality_equivalence_test(u, v, f, named_box)
        rep["named_instance"] = named
        ok = ok and named["agree"]
    return (0 if ok else 1), rep


_EXPORT_NEEDS = {"hom": ("src", "dst"), "free": ("table",),
                 "boundary": ("table",), "spine": ("table",),
                 "nerve": ("cat",)}


def cmd_export(args):
    for field in _EXPORT_NEEDS.get(args.what, ()):
        if getattr(args, field) is None:
            raise ValueError(f"export --what {args.what} requires --{field}")
    code, doc = VERBS[args.what][0](args)
    with open(args.out, "w") as fh:
        fh.write(json.dumps(doc, sort_keys=True, indent=2, default=str))
        fh.write("\n")
    return code, {"written": args.out, "what": args.what}


# -- wiring --------------------------------------------------------------------


def _std_bounds(p, n=2, width=2, dim=True):
    p.add_argument("--n", type=int, default=n)
    p.add_argument("--max-width", type=int, default=width)
    if dim:
        p.add_argument("--max-dim", type=int, default=None)


def _leg_options(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--cat", default=None,
                   help="named category; its nerve maps to the point")
    g.add_argument("--collapse", type=int, default=None,
                   help="use the nerve of the k-interval collapse instead")


VERBS = {}


def build_parser():
    ap = argparse.ArgumentParser(
        prog="thetalift",
        description="finite cell-table presheaves, nerves, and lifting checks")
    ap.add_argument("--out", default=None, help="write the report to a file")
    ap.add_argument("--timings", action="store_true",
                    help="include wall-clock time (breaks byte-identical output)")
    sub = ap.add_subparsers(dest="verb", required=True)

    def verb(name, handler, configure):
        p = sub.add_parser(name)
        configure(p)
        p.set_defaults(func=handler)
        VERBS[name] = (handler, p)

    verb("objects", cmd_objects, lambda p: _std_bounds(p))
    verb("hom", cmd_hom, lambda p: (
        p.add_argument("--src", "--from", dest="src", required=True),
        p.add_argument("--dst", "--to", dest="dst", required=True),
        p.add_argument("--n", type=int, default=2)))
    verb("free", cmd_free, lambda p: (
        p.add_argument("--table", required=True),
        p.add_argument("--n", type=int, default=2)))
    verb("nerve", cmd_nerve, lambda p: (
        p.add_argument("--cat", required=True), _std_bounds(p)))
    verb("boundary", cmd_boundary, lambda p: (
        p.add_argument("--table", required=True), _std_bounds(p)))
    verb("spine", cmd_spine, lambda p: (
        p.add_argument("--table", required=True), _std_bounds(p)))
    verb("lift", cmd_lift, lambda p: (
        p.add_argument("--square", default="counterexample"),
        _std_bounds(p, dim=False)))
    verb("trivfib", cmd_trivfib, lambda p: (
        _leg_options(p), _std_bounds(p)))
    verb("anodyne", cmd_anodyne, lambda p: (
        _leg_options(p), p.add_argument("--depth", type=int, default=1),
        _std_bounds(p, dim=False)))
    verb("verify-counterexample", cmd_verify_counterexample, lambda p: (
        p.add_argument("--n", type=int, default=2),
        p.add_argument("--k", "--max-width", dest="max_width", type=int,
                       default=2),
        p.add_argument("--depth", type=int, default=1)))
    verb("verify-not-2qcat", cmd_verify_not_2qcat, lambda p:
         p.add_argument("--max-width", type=int, default=2))
    verb("verify-segal", cmd_verify_segal, lambda p: (
        p.add_argument("--cat", required=True), _std_bounds(p)))
    verb("verify-resolution", cmd_verify_resolution, lambda p: (
        p.add_argument("--k-max", type=int, default=2), _std_bounds(p)))
    verb("verify-orthogonality", cmd_verify_orthogonality, lambda p: (
        p.add_argument("--samples", type=int, default=50),
        p.add_argument("--seed", type=int, default=0),
        p.add_argument("--max-level", type=int, default=2),
        p.add_argument("--skip-named", action="store_true"),
        _std_bounds(p, width=1, dim=False)))
    verb("export", cmd_export, lambda p: (
        p.add_argument("--what", required=True,
                       choices=["objects", "hom", "free", "nerve",
                                "boundary", "spine"]),
        p.add_argument("--table", default=None),
        p.add_argument("--src", "--from", dest="src", default=None),
        p.add_argument("--dst", "--to", dest="dst", default=None),
        p.add_argument("--cat", default=None),
        _std_bounds(p)))
    return ap


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verb == "export" and not args.out:
        parser.error("export requires --out")
    started = time.monotonic()
    try:
        code, doc = args.func(args)
    except presheaf.BoundExhaustion as exc:
        print(json.dumps({"error": "bounds", "message": str(exc)}),
              file=sys.stderr)
        return 3
    except (ValueError, theta.ThetaError, ncat.NCatError) as exc:
        print(json.dumps({"error": "usage", "message": str(exc)}),
              file=sys.stderr)
        return 2
    if args.timings:
        doc["elapsed_s"] = round(time.monotonic() - started, 3)
    text = json.dumps(doc, sort_keys=True, indent=2, default=str)
    if args.out and args.verb != "export":
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
