"""Command-line front end.

Loads fixture spaces, computes cohomology groups and cocycle classes,
validates torsor and gerbe data from JSON files, and runs a self-test
battery.  Output is deterministic: JSON with sorted keys by default,
`--format csv` for flat key/value tables.  Exit codes: 0 success, 1
validation or property failure, 2 malformed input.

Run as `python -m finsheaf.cli <subcommand> ...`.

JSON file schemas (all integer coordinates refer to the generators of
the section groups the package constructs for the named objects, in
construction order):

  space: a fixture name (PT, SIERP, C4, S2F, S3F, RP2F) or a path to
    `{"points": [...], "order": [[a, b], ...]}`.
  cover: `[[point, ...], ...]` — open components covering the space.
  rtc file: `{"space", "sheaf", "degree", "cover", "depth"?,
    "torsor": null | {"cover": [[point, ...], ...], "cocycle": [...]},
    "phi": [...]}`.
  gerbe file: `{"space", "sheaf", "cover", "depth"?,
    "pair_torsor": null | {"cover": ..., "cocycle": [...]},
    "multiplication": [...]}`.
"""

import argparse
import json
import random
import sys

from .abgrp import cyclic_group, free_group, hom_is_isomorphism
from .cochain import cech_complex, cech_to_sheaf, sheaf_cohomology
from .finsite import SiteMorphism, SiteObject, load_space
from .gerbe import GerbeData, bockstein, is_associative, reduction_map, to_rtc2, trivial_gerbe
from .rtc import RTC, neutral_rtc, rtc_class, rtc_coboundary, rtc_isomorphism_witness
from .semisimp import cech_covering
from .sheaf import constant_sheaf, godement_resolution
from .torsor import (
    TorsorAtom,
    alternating_pullback,
    atom_torsor,
    inverse_torsor,
    triple_face_orbits,
    trivial_torsor,
)


class InputError(Exception):
    """Malformed input: exit code 2."""


class CheckError(Exception):
    """A named invariant failed: exit code 1."""


def parse_sheaf(space, spec):
    if spec == "Z":
        return constant_sheaf(space, free_group(1))
    if spec.startswith("Z/"):
        try:
            m = int(spec[2:])
        except ValueError:
            raise InputError("bad sheaf spec: %r" % spec)
        if m < 2:
            raise InputError("modulus must be at least 2")
        return constant_sheaf(space, cyclic_group(m))
    raise InputError("bad sheaf spec: %r (use Z or Z/m)" % spec)


def group_report(group):
    rank, tors = group.invariants()
    parts = ["Z"] * rank + ["Z/%d" % d for d in tors]
    return {"H": "+".join(parts) if parts else "0", "rank": rank, "torsion": tors}


def whole_cover(space, comps):
    w = SiteObject(space, [frozenset(c) for c in comps])
    return SiteMorphism(w, space.whole(), [0] * len(w.components))


def sub_cover(space, comps, target):
    """Covering morphism onto `target` with components routed by inclusion."""
    w = SiteObject(space, [frozenset(c) for c in comps])
    cmap = []
    for c in w.components:
        for i, tc in enumerate(target.components):
            if c <= tc:
                cmap.append(i)
                break
        else:
            raise InputError("cover component %r fits no target component" % (sorted(c),))
    return SiteMorphism(w, target, cmap)


def rtc_from_json(data, h=None, F=None):
    try:
        space = load_space(data["space"])
        if F is None:
            F = parse_sheaf(space, data["sheaf"])
        n = int(data["degree"])
        if h is None:
            cover = whole_cover(space, data["cover"])
            depth = int(data.get("depth", n + 2))
            h = cech_covering(cover, depth=max(depth, n + 2))
        tdata = data.get("torsor")
        if tdata is None:
            t = trivial_torsor(F, h.level(n - 1))
        else:
            tc = sub_cover(space, tdata["cover"], h.level(n - 1))
            sg = F.sections(cech_covering(tc, depth=2).level(1))
            t = atom_torsor(TorsorAtom(tc, F, sg.group.element(list(tdata["cocycle"]))))
        alt = alternating_pullback(h, n, t)
        phi = alt.section_group().group.element(list(data["phi"]))
        return RTC(h, n, t, phi, check=False)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError("bad rtc data: %s" % e)


def gerbe_from_json(data):
    try:
        space = load_space(data["space"])
        F = parse_sheaf(space, data["sheaf"])
        cover = whole_cover(space, data["cover"])
        depth = int(data.get("depth", 4))
        h = cech_covering(cover, depth=max(depth, 4))
        tdata = data.get("pair_torsor")
        if tdata is None:
            t = trivial_torsor(F, h.level(1))
        else:
            tc = sub_cover(space, tdata["cover"], h.level(1))
            sg = F.sections(cech_covering(tc, depth=2).level(1))
            t = atom_torsor(TorsorAtom(tc, F, sg.group.element(list(tdata["cocycle"]))))
        alt = alternating_pullback(h, 2, inverse_torsor(t))
        mu = alt.section_group().group.element(list(data["multiplication"]))
        return GerbeData(cover, t, mu, h=h)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError("bad gerbe data: %s" % e)


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError("cannot read %s: %s" % (path, e))


# -- subcommands -------------------------------------------------------------


def cmd_cohomology(args):
    space = load_space(args.space)
    F = parse_sheaf(space, args.sheaf)
    return group_report(sheaf_cohomology(F, args.n).group)


def cmd_torsors(args):
    space = load_space(args.space)
    F = parse_sheaf(space, args.sheaf)
    group = sheaf_cohomology(F, 1).group
    out = group_report(group)
    if group.order() is not None:
        seen = []
        for el in group.elements():
            c = el.reduced()
            if c not in seen:
                seen.append(c)
        out["classes"] = sorted(seen)
        out["count"] = len(seen)
    return out


def cmd_rtc(args):
    a = rtc_from_json(load_json(args.files[0]))
    if args.action == "validate":
        try:
            a.validate()
        except ValueError as e:
            raise CheckError(str(e))
        return {"valid": True}
    if args.action == "class":
        cls = rtc_class(a)
        out = group_report(cls.group)
        out["coords"] = cls.reduced()
        out["zero"] = cls.is_zero()
        return out
    if args.action == "equiv":
        if len(args.files) != 2:
            raise InputError("rtc equiv needs two files")
        da, db = load_json(args.files[0]), load_json(args.files[1])
        same_site = (
            da["space"] == db["space"]
            and da["sheaf"] == db["sheaf"]
            and da["cover"] == db["cover"]
        )
        b = rtc_from_json(db, h=a.h if same_site else None, F=a.F if same_site else None)
        if a.h.base != b.h.base or a.n != b.n:
            raise InputError("cocycles must share cover and degree")
        ca, cb = rtc_class(a), rtc_class(b)
        if ca.group != cb.group:
            raise InputError("cocycles must share coefficients")
        out = {"equivalent": ca == cb}
        if args.witness and ca == cb:
            w = rtc_isomorphism_witness(a, b)
            out["witness"] = None if w is None else w.reduced()
        if not out["equivalent"]:
            raise CheckError("classes differ")
        return out
    raise InputError("unknown rtc action %r" % args.action)


def cmd_gerbe(args):
    g = gerbe_from_json(load_json(args.file))
    if args.action == "check":
        if not is_associative(g):
            raise CheckError("q_alt(mu) != 0")
        return {"associative": True}
    if args.action == "class":
        try:
            a = to_rtc2(g)
        except ValueError as e:
            raise CheckError(str(e))
        cls = rtc_class(a)
        out = group_report(cls.group)
        out["coords"] = cls.reduced()
        out["zero"] = cls.is_zero()
        return out
    raise InputError("unknown gerbe action %r" % args.action)


def cmd_bockstein(args):
    space = load_space(args.space)
    FZ = constant_sheaf(space, free_group(1))
    Fm = parse_sheaf(space, "Z/%d" % args.m)
    src = sheaf_cohomology(Fm, args.n).group
    tgt = sheaf_cohomology(FZ, args.n + 1).group
    images = [
        bockstein(FZ, Fm, args.m, args.n, src.gen(i)).reduced()
        for i in range(src.ngens)
    ]
    return {
        "source": group_report(src),
        "target": group_report(tgt),
        "images": images,
    }


def _selftest_checks(seed):
    """Named exact checks over the smallest fixture space."""
    x = load_space("C4")
    FZ = constant_sheaf(x, free_group(1))
    F2 = constant_sheaf(x, cyclic_group(2))
    w = SiteObject(x, [x.down("c"), x.down("d")])
    cover = SiteMorphism(w, x.whole(), [0, 0])
    h = cech_covering(cover, depth=4)
    rng = random.Random(seed)

    def circle_cohomology():
        return (
            sheaf_cohomology(FZ, 0).group.invariants() == (1, [])
            and sheaf_cohomology(FZ, 1).group.invariants() == (1, [])
            and sheaf_cohomology(FZ, 2).group.is_trivial()
        )

    def flasque_acyclic():
        chain = godement_resolution(FZ, 2)
        for q in range(3):
            cx = cech_complex(h, chain[q][0], 4)
            for p in range(1, 4):
                if not cx.cohomology(p).group.is_trivial():
                    return False
        return True

    def edge_map_iso():
        hom, _ = cech_to_sheaf(h, FZ, 1)
        return hom_is_isomorphism(hom)

    def dihedral_orbits():
        for m in range(1, 5):
            orbits = triple_face_orbits(m)
            if any(len(o) != 6 for o in orbits.values()):
                return False
        return True

    def neutral_validates():
        return neutral_rtc(h, 1, F2).validate()

    def coboundary_residue():
        sg = F2.sections(h.level(0))
        shift = sg.group.element([rng.randrange(2) for _ in range(sg.group.ngens)])
        return rtc_coboundary(h, 1, F2, shift).validate()

    def gerbe_trivial():
        return is_associative(trivial_gerbe(cover, F2))

    def bockstein_reduction_zero():
        red = reduction_map(FZ, F2, 1)
        gen = next(g for g in sheaf_cohomology(FZ, 1).group.gens() if not g.is_zero())
        return bockstein(FZ, F2, 2, 1, red(gen)).is_zero()

    return [
        ("cohomology pseudo-circle", circle_cohomology),
        ("flasque terms acyclic on cover", flasque_acyclic),
        ("degree-1 edge map isomorphism", edge_map_iso),
        ("dihedral orbit freeness", dihedral_orbits),
        ("neutral cocycle validates", neutral_validates),
        ("coboundary residue vanishes", coboundary_residue),
        ("trivial gerbe associative", gerbe_trivial),
        ("connecting map kills reduced classes", bockstein_reduction_zero),
    ]


def cmd_selftest(args):
    results = {}
    for name, fn in _selftest_checks(args.seed):
        ok = bool(fn())
        results[name] = "ok" if ok else "FAIL"
        if not ok:
            raise CheckError(name)
    return {"checks": results, "seed": args.seed}


# -- driver ------------------------------------------------------------------


def emit(data, fmt, out=None):
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(data, sort_keys=True, separators=(",", ":")))
        out.write("\n")
        return

    def flat(prefix, v):
        if isinstance(v, dict):
            for k in sorted(v):
                flat(prefix + (str(k),), v[k])
        elif isinstance(v, list):
            flat(prefix, ";".join(json.dumps(x, sort_keys=True) for x in v))
        else:
            rows.append((".".join(prefix), v))

    rows = []
    flat((), data)
    for k, v in rows:
        out.write("%s,%s\n" % (k, v))


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--csv", dest="format", action="store_const", const="csv")
    common.add_argument("--depth", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--witness", action="store_true")
    ap = argparse.ArgumentParser(prog="finsheaf", parents=[common])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cohomology", parents=[common])
    p.add_argument("space")
    p.add_argument("sheaf")
    p.add_argument("n", type=int)
    p.set_defaults(fn=cmd_cohomology)

    p = sub.add_parser("torsors", parents=[common])
    p.add_argument("space")
    p.add_argument("sheaf")
    p.set_defaults(fn=cmd_torsors)

    p = sub.add_parser("rtc", parents=[common])
    p.add_argument("action", choices=["validate", "class", "equiv"])
    p.add_argument("files", nargs="+")
    p.set_defaults(fn=cmd_rtc)

    p = sub.add_parser("gerbe", parents=[common])
    p.add_argument("action", choices=["check", "class"])
    p.add_argument("file")
    p.set_defaults(fn=cmd_gerbe)

    p = sub.add_parser("bockstein", parents=[common])
    p.add_argument("space")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.set_defaults(fn=cmd_bockstein)

    p = sub.add_parser("selftest", parents=[common])
    p.set_defaults(fn=cmd_selftest)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        emit(args.fn(args), args.format)
        return 0
    except CheckError as e:
        emit({"error": str(e)}, args.format, sys.stderr)
        return 1
    except InputError as e:
        emit({"error": str(e)}, args.format, sys.stderr)
        return 2
    except FileNotFoundError as e:
        emit({"error": str(e)}, args.format, sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
