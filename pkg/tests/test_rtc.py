import pytest

from finsheaf.abgrp import cyclic_group, free_group
from finsheaf.cochain import ThreeTermComplex, sheaf_cohomology
from finsheaf.finsite import SiteMorphism, SiteObject, load_space
from finsheaf.rtc import (
    RTC,
    comparison,
    from_three_term,
    neutral_rtc,
    rtc_class,
    rtc_coboundary,
    rtc_equivalent,
    rtc_inverse,
    rtc_isomorphic,
    rtc_isomorphism_witness,
    rtc_pullback,
    rtc_wedge,
)
from finsheaf.semisimp import cech_covering, refinement_from_cover_map
from finsheaf.sheaf import constant_sheaf
from finsheaf.torsor import (
    atom_torsor,
    canonical_section,
    pullback_torsor,
    torsor_class,
)

from test_torsor import c4_setup, generator_atom, two_open_cover


def c4_rtc():
    x, F, cover = c4_setup()
    h = cech_covering(cover, depth=3)
    t = atom_torsor(generator_atom(F, cover))
    t0 = pullback_torsor(t, h.structure_map(0))
    ta = None
    from finsheaf.torsor import alternating_pullback

    ta = alternating_pullback(h, 1, t0)
    a = RTC(h, 1, t0, canonical_section(ta))
    return x, F, cover, h, t, a


def test_neutral_rtc_validates_and_has_zero_class():
    x, F, cover = c4_setup()
    h = cech_covering(cover, depth=3)
    a = neutral_rtc(h, 1, F)
    assert a.validate()
    assert rtc_class(a).is_zero()


def test_degree_one_rtc_of_generator_torsor():
    x, F, cover, h, t, a = c4_rtc()
    assert a.validate()
    cls = rtc_class(a)
    assert not cls.is_zero()
    assert cls in (torsor_class(t), -torsor_class(t))


def test_coboundary_has_zero_class():
    x, F, cover = c4_setup()
    h = cech_covering(cover, depth=3)
    sg0 = F.sections(h.level(0))
    shift = sg0.group.gen(0)
    a = rtc_coboundary(h, 1, F, shift)
    assert a.validate()
    assert rtc_class(a).is_zero()
    assert rtc_isomorphic(a, neutral_rtc(h, 1, F))


def test_wedge_and_inverse_are_additive_on_classes():
    x, F, cover, h, t, a = c4_rtc()
    cls = rtc_class(a)
    assert rtc_class(rtc_inverse(a)) == -cls
    assert rtc_class(rtc_wedge(a, a)) == cls + cls
    assert rtc_class(rtc_wedge(a, rtc_inverse(a))).is_zero()


def test_isomorphism_checks():
    x, F, cover, h, t, a = c4_rtc()
    assert rtc_isomorphic(a, a)
    assert not rtc_isomorphic(a, neutral_rtc(h, 1, F))
    assert rtc_isomorphic(rtc_wedge(a, rtc_inverse(a)), neutral_rtc(h, 1, F))
    w = rtc_isomorphism_witness(a, a)
    assert w is not None


def test_equivalence_matches_classes():
    x, F, cover, h, t, a = c4_rtc()
    assert rtc_equivalent(a, a)
    assert not rtc_equivalent(a, neutral_rtc(h, 1, F))
    sg0 = F.sections(h.level(0))
    b = rtc_wedge(a, rtc_coboundary(h, 1, F, sg0.group.gen(0)))
    assert rtc_equivalent(a, b)


def test_round_trip_degree_one():
    x, F, cover = c4_setup()
    h = cech_covering(cover, depth=3)
    tt = ThreeTermComplex(h, F, 1)
    gen = next(g for g in tt.cohomology.group.gens() if not g.is_zero())
    el = tt.cohomology.lift(gen)
    a = from_three_term(tt, el)
    assert a.validate()
    tt2, el2 = comparison(a, tt)
    assert tt.cohomology.project(el2) == gen


def test_round_trip_degree_two_sphere():
    x = load_space("S2F")
    F = constant_sheaf(x, free_group(1))
    h = cech_covering(two_open_cover(x, [x.down("c1"), x.down("c2")]), depth=4)
    tt = ThreeTermComplex(h, F, 2)
    assert tt.cohomology.group.invariants() == (1, [])
    gen = next(g for g in tt.cohomology.group.gens() if not g.is_zero())
    a = from_three_term(tt, tt.cohomology.lift(gen))
    assert a.validate()
    _, el2 = comparison(a, tt)
    assert tt.cohomology.project(el2) == gen
    assert not rtc_class(a).is_zero()


def test_pullback_along_refinement():
    x, F, cover, h, t, a = c4_rtc()
    hu = cech_covering(x.minimal_open_cover().covering_single(), depth=3)
    kappa = SiteMorphism(hu.level(0), h.level(0), [0, 0, 0, 1])
    ref = refinement_from_cover_map(hu, h, kappa)
    b = rtc_pullback(a, ref)
    assert b.validate()
    assert not rtc_class(b).is_zero()
