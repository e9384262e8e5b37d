"""Acceptance suite: one test per criterion, exact integer checks only.

Shared spaces, sheaves, and coverings are built lazily and cached at
module scope so the flasque resolutions are computed once per sheaf.
"""

import itertools
import random

import pytest

import oracle
from finsheaf.abgrp import (
    SubQuot,
    cyclic_group,
    free_group,
    hom_is_isomorphism,
)
from finsheaf.cochain import (
    ThreeTermComplex,
    cech_complex,
    cech_diff,
    cech_to_sheaf,
    cohomology_invariants,
    homotopy_operator,
    sheaf_cohomology,
)
from finsheaf.finsite import CoveringFamily, SiteMorphism, SiteObject, load_space
from finsheaf.gerbe import bockstein, is_associative, translate_gerbe, trivial_gerbe
from finsheaf.rtc import (
    RTC,
    comparison,
    from_three_term,
    neutral_rtc,
    rtc_class,
    rtc_coboundary,
    rtc_isomorphic,
    rtc_pullback,
)
from finsheaf.semisimp import (
    cech_covering,
    cech_homotopy,
    constant_covering,
    raise_type,
    refine_hypercovering,
    refinement_from_cover_map,
)
from finsheaf.sheaf import constant_sheaf, godement_resolution
from finsheaf.torsor import (
    TorsorAtom,
    alternating_pullback,
    atom_torsor,
    canonical_section,
    swap_inner,
    swap_outer,
    triple_face_orbits,
)

_cache = {}


def shared(key, builder):
    if key not in _cache:
        _cache[key] = builder()
    return _cache[key]


def minimal_cover(space):
    return space.minimal_open_cover().covering_single()


def two_open_cover(space, opens):
    u = space.whole()
    w = SiteObject(space, [frozenset(o) for o in opens])
    return SiteMorphism(w, u, [0] * len(opens))


def poset_oracle(space):
    return oracle.order_complex(space.points, lambda a, b: a != b and space.le(a, b))


def down_union(space, points):
    out = set()
    for p in points:
        out |= set(space.down(p))
    return frozenset(out)


def split_refinement(h, comp_splits):
    """Type-1 hypercovering refining level 1 by splitting the listed
    components into down-sets of the given points."""
    u1 = h.level(1)
    members, cmaps = [], []
    x = u1.space
    for ci, comp in enumerate(u1.components):
        if comp in comp_splits:
            for p in comp_splits[comp]:
                members.append(SiteObject(x, [x.down(p)]))
                cmaps.append(ci)
        else:
            members.append(SiteObject(x, [comp]))
            cmaps.append(ci)
    fam = CoveringFamily(u1, [SiteMorphism(m, u1, [c]) for m, c in zip(members, cmaps)])
    return refine_hypercovering(raise_type(h, 1), 1, fam)


# -- shared fixtures ---------------------------------------------------------


def c4_data():
    def build():
        x = load_space("C4")
        FZ = constant_sheaf(x, free_group(1))
        F2 = constant_sheaf(x, cyclic_group(2))
        cover = two_open_cover(x, [x.down("c"), x.down("d")])
        h = cech_covering(cover, depth=5)
        return x, FZ, F2, cover, h

    return shared("c4", build)


def c4_type1():
    def build():
        _, _, _, _, h = c4_data()
        x = h.base.space
        h1, ref = split_refinement(h, {frozenset(["a", "b"]): ["a", "b"]})
        return h1, ref

    return shared("c4t1", build)


def s2f_data():
    def build():
        x = load_space("S2F")
        FZ = constant_sheaf(x, free_group(1))
        F2 = constant_sheaf(x, cyclic_group(2))
        cover = two_open_cover(x, [x.down("c1"), x.down("c2")])
        h = cech_covering(cover, depth=5)
        return x, FZ, F2, cover, h

    return shared("s2f", build)


def s2f_type1():
    def build():
        x, _, _, _, h = s2f_data()
        overlap = frozenset(["a1", "a2", "b1", "b2"])
        h1, ref = split_refinement(h, {overlap: ["b1", "b2"]})
        return h1, ref

    return shared("s2ft1", build)


def rp2f_data():
    def build():
        x = load_space("RP2F")
        FZ = constant_sheaf(x, free_group(1))
        F2 = constant_sheaf(x, cyclic_group(2))
        tris = [p for p in x.points if p.startswith("t")]
        u1 = down_union(x, tris[:5])
        u2 = down_union(x, tris[5:])
        cover = two_open_cover(x, [u1, u2])
        h = cech_covering(cover, depth=4)
        return x, FZ, F2, cover, h

    return shared("rp2f", build)


def s3f_data():
    def build():
        x = load_space("S3F")
        F2 = constant_sheaf(x, cyclic_group(2))
        cover = two_open_cover(x, [x.down("d1"), x.down("d2")])
        h = cech_covering(cover, depth=5)
        overlap = down_union(x, ["c1", "c2"])
        h1, ref = split_refinement(h, {overlap: ["c1", "c2"]})
        return x, F2, cover, h, h1

    return shared("s3f", build)


def three_term_instances():
    def build():
        _, FZ4, F24, _, h4 = c4_data()
        _, FZs, _, _, hs = s2f_data()
        _, _, F2r, _, hr = rp2f_data()
        return [
            ThreeTermComplex(h4, FZ4, 1),
            ThreeTermComplex(h4, F24, 1),
            ThreeTermComplex(hs, FZs, 2),
            ThreeTermComplex(hr, F2r, 2),
        ]

    return shared("threeterm", build)


# -- criteria ----------------------------------------------------------------


def test_01_cohomology_matches_order_complex_oracle():
    for name, degrees in [("C4", (0, 1, 2)), ("S2F", (0, 1, 2)), ("SIERP", (0, 1))]:
        if name == "C4":
            _, FZ, _, _, _ = c4_data()
        elif name == "S2F":
            _, FZ, _, _, _ = s2f_data()
        else:
            x = load_space(name)
            FZ = constant_sheaf(x, free_group(1))
        oc = poset_oracle(FZ.space)
        for k in degrees:
            assert cohomology_invariants(FZ, k) == oc.integral_cohomology(k), (name, k)
    # frozen expectations
    _, FZ4, _, _, _ = c4_data()
    assert [cohomology_invariants(FZ4, k) for k in (0, 1, 2)] == [(1, []), (1, []), (0, [])]
    _, FZs, _, _, _ = s2f_data()
    assert [cohomology_invariants(FZs, k) for k in (0, 1, 2)] == [(1, []), (0, []), (1, [])]
    x, FZr, F2r, _, _ = rp2f_data()
    oc = poset_oracle(x)
    assert cohomology_invariants(FZr, 2) == oc.integral_cohomology(2) == (0, [2])
    h1 = sheaf_cohomology(F2r, 1).group
    assert h1.invariants() == (0, [2])
    assert oc.mod_cohomology(1, 2) == 1


def test_02_three_term_complex_computes_cohomology():
    for tt in three_term_instances():
        assert hom_is_isomorphism(tt.to_sheaf_hom()), (tt.F.name, tt.n)


def test_03_comparison_round_trip_on_generators():
    for tt in three_term_instances():
        gens = [g for g in tt.cohomology.group.gens() if not g.is_zero()]
        assert gens or tt.cohomology.group.is_trivial()
        for g in gens:
            a = from_three_term(tt, tt.cohomology.lift(g))
            _, el = comparison(a, tt)
            assert tt.cohomology.project(el) == g
            b = from_three_term(tt, el)
            _, el2 = comparison(b, tt)
            assert tt.cohomology.project(el2) == g


def test_04_degree_one_classification_is_exhaustive():
    x, FZ, F2, _, _ = c4_data()
    hm = cech_covering(minimal_cover(x), depth=3)
    z1 = SubQuot(cech_diff(hm, F2, 1), None)
    edge, cech_h1 = cech_to_sheaf(hm, F2, 1)
    cocycles = [z1.lift(el) for el in z1.group.elements()]
    classes = {}
    for z in cocycles:
        cls = edge(cech_h1.project(z))
        classes.setdefault(tuple(cls.reduced()), z)
    assert len(classes) == 2
    assert sheaf_cohomology(F2, 1).group.invariants() == (0, [2])
    # the comparison map realizes both classes from cocycle data on the
    # constant covering and is a bijection onto them
    hc = constant_covering(x.whole(), depth=3)
    seen = set()
    for key, z in sorted(classes.items()):
        t = atom_torsor(TorsorAtom(minimal_cover(x), F2, z))
        alt = alternating_pullback(hc, 1, t)
        a = RTC(hc, 1, t, canonical_section(alt))
        cls = rtc_class(a)
        assert tuple(cls.reduced()) == key
        seen.add(tuple(cls.reduced()))
    assert len(seen) == 2


def test_05_randomized_coboundaries_have_zero_residue():
    rng = random.Random(20260826)
    _, FZ4, F24, cover4, h4 = c4_data()
    _, _, F2s, _, hs = s2f_data()
    h4t1, _ = c4_type1()
    hst1, _ = s2f_type1()
    x4 = FZ4.space

    def random_shift(F, h, n):
        sg = F.sections(h.level(n - 1))
        return sg.group.element([rng.randrange(-2, 3) for _ in range(sg.group.ngens)])

    def small_cover(h):
        # redundant two-members-per-component cover of level 0, kept small
        # so the leg combinatorics of the coboundary torsor stay bounded
        x = h.base.space
        lvl = h.level(0)
        comps, cmap = [], []
        for ci, comp in enumerate(lvl.components):
            comps.append(comp)
            cmap.append(ci)
            comps.append(frozenset(x.down(min(comp))))
            cmap.append(ci)
        w = SiteObject(x, comps)
        return SiteMorphism(w, lvl, cmap)

    def random_low(F, h, n, allow):
        if n == 2 and allow and rng.random() < 0.4:
            cover = small_cover(h)
            hq = cech_covering(cover, depth=2)
            sg = F.sections(hq.level(0))
            s = sg.group.element([rng.randrange(-1, 2) for _ in range(sg.group.ngens)])
            return atom_torsor(TorsorAtom(cover, F, cech_diff(hq, F, 0)(s)))
        return None

    checked = 0
    plan = [
        (F24, h4, 2, 90, True),
        (FZ4, h4, 2, 40, True),
        (F24, h4t1, 2, 25, False),
        (F2s, hst1, 2, 25, False),
        (F24, h4, 3, 15, False),
        (F2s, hs, 3, 5, False),
    ]
    for F, h, n, reps, allow_low in plan:
        for _ in range(reps):
            shift = random_shift(F, h, n)
            a = rtc_coboundary(h, n, F, shift, low=random_low(F, h, n, allow_low))
            assert a.validate()
            checked += 1
    assert checked >= 200


def test_06_triple_face_symmetries_form_free_dihedral_orbits():
    for m in range(1, 7):
        orbits = triple_face_orbits(m)
        triples = sorted(itertools.chain.from_iterable(orbits.values()))
        assert all(len(members) == 6 for members in orbits.values())
        index = {t: i for i, t in enumerate(triples)}
        sigma = tuple(index[swap_outer(t)] for t in triples)
        eta = tuple(index[swap_inner(t)] for t in triples)
        identity = tuple(range(len(triples)))
        group = {identity}
        frontier = [identity]
        while frontier:
            g = frontier.pop()
            for s in (sigma, eta):
                ns = tuple(s[i] for i in g)
                if ns not in group:
                    group.add(ns)
                    frontier.append(ns)
        assert len(group) == 6
        for g in group:
            if g != identity:
                assert all(g[i] != i for i in range(len(triples)))


def _c4_cover_maps():
    x, _, _, _, h = c4_data()
    hu = shared("c4min", lambda: cech_covering(minimal_cover(x), depth=6))
    maps = []
    for ma in (0, 1):
        for mb in (0, 1):
            maps.append(SiteMorphism(hu.level(0), h.level(0), [ma, mb, 0, 1]))
    return hu, h, maps


def test_07_homotopy_operator_identities():
    x, FZ4, F24, _, h4 = c4_data()
    hu, hv, maps = _c4_cover_maps()
    xs, FZs, _, _, hs = s2f_data()
    hus = shared("s2fmin", lambda: cech_covering(minimal_cover(xs), depth=6))
    smaps = [
        SiteMorphism(hus.level(0), hs.level(0), c)
        for c in ([0] * 10, [1] * 4 + [0] * 6)
        if all(hus.level(0).components[i] <= hs.level(0).components[j] for i, j in enumerate(c))
    ]
    count = 0
    cases = [(hu, hv, ka, la, F) for ka, la in itertools.product(maps, maps) for F in (FZ4, F24) if ka is not la]
    cases += [(hus, hs, ka, la, FZs) for ka, la in itertools.product(smaps, smaps) if ka is not la]
    for hu_, hv_, kappa, lam, F in cases:
        ht = cech_homotopy(hu_, hv_, kappa, lam, depth=4)
        cu = cech_complex(hu_, F, 5)
        cv = cech_complex(hv_, F, 5)
        for n in range(1, 5):
            lhs = F.pullback(ht.theta.map(n)) - F.pullback(ht.zeta.map(n))
            s_n = homotopy_operator(ht, F, n)
            s_prev = homotopy_operator(ht, F, n - 1)
            assert lhs.equals(s_n.compose(cv.diff(n)) + cu.diff(n - 1).compose(s_prev))
        count += 1
    assert count >= 20


def test_08_homotopic_refinements_give_equal_classes():
    from tests.test_torsor import generator_atom

    x, FZ, _, cover, h = c4_data()
    hu, _, maps = _c4_cover_maps()
    atom = generator_atom(FZ, cover)
    t0 = atom_torsor(atom)
    t = __import__("finsheaf.torsor", fromlist=["pullback_torsor"]).pullback_torsor(
        t0, h.structure_map(0)
    )
    alt = alternating_pullback(h, 1, t)
    a = RTC(h, 1, t, canonical_section(alt))
    tt = None
    results = []
    for kappa in maps:
        ref = refinement_from_cover_map(hu, h, kappa)
        b = rtc_pullback(a, ref)
        assert b.validate()
        tt, el = comparison(b, tt)
        results.append((b, tt.cohomology.project(el)))
    for (b1, c1), (b2, c2) in itertools.combinations(results, 2):
        assert c1 == c2
    assert not results[0][1].is_zero()
    for (b1, _), (b2, _) in itertools.combinations(results[:3], 2):
        assert rtc_isomorphic(b1, b2)


def test_09_flasque_terms_are_acyclic_on_all_hypercoverings():
    x4, FZ4, F24, _, h4 = c4_data()
    _, FZs, F2s, _, hs = s2f_data()
    _, _, F2r, _, hr = rp2f_data()
    h4t1, _ = c4_type1()
    hst1, _ = s2f_type1()
    hc = constant_covering(x4.whole(), depth=4)
    hm = cech_covering(minimal_cover(x4), depth=4)
    pairs = [
        (h4, FZ4),
        (h4, F24),
        (hm, F24),
        (hc, F24),
        (h4t1, F24),
        (hs, FZs),
        (hst1, F2s),
        (hr, F2r),
    ]
    for h, F in pairs:
        chain = godement_resolution(F, 2)
        for q in range(3):
            cx = cech_complex(h, chain[q][0], 4)
            for p in range(1, 4):
                assert cx.cohomology(p).group.is_trivial(), (F.name, q, p)


def test_10_edge_maps():
    _, FZ4, _, _, h4 = c4_data()
    hom, _ = cech_to_sheaf(h4, FZ4, 1)
    assert hom_is_isomorphism(hom)
    _, FZs, _, _, hs = s2f_data()
    hst1, _ = s2f_type1()
    for n in (1, 2):
        hom, _ = cech_to_sheaf(hst1, FZs, n)
        assert hom_is_isomorphism(hom), n
    # recorded behavior one degree past the type bound: the cover-level
    # cochains see none of the sphere's top cohomology
    hom, cech_h2 = cech_to_sheaf(hs, FZs, 2)
    assert cech_h2.group.is_trivial()
    assert sheaf_cohomology(FZs, 2).group.invariants() == (1, [])


def test_11_gerbe_associativity_iff_cocycle_exhaustive():
    x, _, F2, cover, _ = c4_data()
    g0 = trivial_gerbe(cover, F2)
    assert is_associative(g0)
    h = g0.h
    sg2 = F2.sections(h.level(2))
    d2 = cech_diff(h, F2, 2)
    assert sg2.group.order() == 2 ** 14
    for t in sg2.group.elements():
        gt = translate_gerbe(g0, t)
        assert is_associative(gt) == d2(t).is_zero(), t.coords


def test_12_bockstein_realizes_projective_plane_torsion():
    _, FZ, F2, _, _ = rp2f_data()
    h1 = sheaf_cohomology(F2, 1).group
    assert h1.invariants() == (0, [2])
    gen = next(g for g in h1.gens() if not g.is_zero())
    img = bockstein(FZ, F2, 2, 1, gen)
    assert sheaf_cohomology(FZ, 2).group.invariants() == (0, [2])
    assert not img.is_zero()
    assert (img + img).is_zero()
    zero = bockstein(FZ, F2, 2, 1, h1.zero())
    assert zero.is_zero()


def test_13_degree_three_classes_on_three_sphere():
    x, F2, cover, h, h1 = s3f_data()
    assert h1.type_r == 1
    assert sheaf_cohomology(F2, 3).group.invariants() == (0, [2])
    tt = ThreeTermComplex(h1, F2, 3)
    assert tt.cohomology.group.invariants() == (0, [2])
    gens = [g for g in tt.cohomology.group.gens() if not g.is_zero()]
    a = from_three_term(tt, tt.cohomology.lift(gens[0]))
    assert a.validate()
    assert not rtc_class(a, tt).is_zero()
    b = neutral_rtc(h1, 3, F2)
    assert rtc_class(b, tt).is_zero()
