"""Rigidified torsor cocycles on hypercoverings.

A degree-n cocycle is a torsor on level n-1 of a hypercovering together
with a rigidifying section of its alternating face pullback on level n
whose obstruction on level n+1 vanishes.  The comparison map identifies
isomorphism classes (up to coboundary) with degree-n sheaf cohomology
through the two-step comparison complex.
"""

from .abgrp import solve_hom, stacked_hom
from .cochain import ThreeTermComplex, cech_diff
from .finsite import SiteMorphism
from .semisimp import cech_covering
from .sheaf import godement_resolution
from .torsor import (
    TorsorAtom,
    alternating_pullback,
    alternating_residue,
    alternating_transport_hom,
    atom_torsor,
    canonical_section,
    inverse_torsor,
    leg_select_hom,
    pullback_section,
    pullback_torsor,
    trivial_torsor,
    wedge,
)


class RTC:
    """A rigidified torsor cocycle of degree n >= 1 on a hypercovering."""

    def __init__(self, h, n, torsor, phi, check=True):
        if n < 1:
            raise ValueError("cocycle degree must be at least 1")
        self.h = h
        self.n = n
        self.torsor = torsor
        self.alt = alternating_pullback(h, n, torsor)
        self.phi = phi
        if phi.group != self.alt.section_group().group:
            raise ValueError("rigidification in the wrong section group")
        if check:
            self.validate()

    @property
    def F(self):
        return self.torsor.F

    def validate(self):
        if self.torsor.base != self.h.level(self.n - 1):
            raise ValueError("torsor must live on level n-1")
        if not self.alt.is_section(self.phi):
            raise ValueError(
                "rigidification does not trivialize the alternating pullback"
            )
        if not alternating_residue(self.h, self.n, self.alt, self.phi).is_zero():
            raise ValueError("rigidity obstruction does not vanish")
        return True


def neutral_rtc(h, n, F):
    """The trivial torsor with its zero rigidification."""
    t = trivial_torsor(F, h.level(n - 1))
    ta = alternating_pullback(h, n, t)
    return RTC(h, n, t, ta.section_group().group.zero(), check=False)


def rtc_inverse(a):
    """Sign flip of all legs and the rigidification."""
    return RTC(a.h, a.n, inverse_torsor(a.torsor), -a.phi, check=False)


def _split_positions(a, b, n):
    ka, kb = len(a.torsor.legs), len(b.torsor.legs)
    k = ka + kb
    pos_a = [i * k + j for i in range(n + 1) for j in range(ka)]
    pos_b = [i * k + ka + j for i in range(n + 1) for j in range(kb)]
    return pos_a, pos_b


def rtc_wedge(a, b):
    """Combination of two cocycles of the same degree and hypercovering."""
    if a.h is not b.h or a.n != b.n or a.F is not b.F:
        raise ValueError("wedge needs cocycles on one hypercovering")
    n = a.n
    t = wedge(a.torsor, b.torsor)
    ta = alternating_pullback(a.h, n, t)
    pos_a, pos_b = _split_positions(a, b, n)
    fa = leg_select_hom(ta, a.alt, None, pos_a)
    fb = leg_select_hom(ta, b.alt, None, pos_b)
    return RTC(a.h, n, t, fa(a.phi) + fb(b.phi), check=False)


def rtc_pullback(a, ref):
    """Transport along a refinement of hypercoverings of the same base."""
    n = a.n
    t2 = pullback_torsor(a.torsor, ref.map(n - 1))
    _, phi2 = pullback_section(a.alt, ref.map(n), a.phi)
    return RTC(ref.source, n, t2, phi2, check=False)


def rtc_coboundary(h, n, F, shift, low=None, check=True):
    """Degree-n coboundary of a lower-degree datum.

    For n >= 2 the datum is a torsor on level n-2 (whose alternating
    pullback carries its tautological rigidification) and a shifting
    section of the sheaf over level n-1.  For n = 1 there is no torsor
    and the datum is just the shift, a section over level 0.
    """
    if n == 1:
        t = trivial_torsor(F, h.level(0))
        ta = alternating_pullback(h, 1, t)
        ta._build()
        phi = F.pullback(ta.structure)(cech_diff(h, F, 0)(shift))
        return RTC(h, 1, t, phi, check=check)
    if low is None:
        low = trivial_torsor(F, h.level(n - 2))
    t = alternating_pullback(h, n - 1, low)
    ta = alternating_pullback(h, n, t)
    ta._build()
    phi = canonical_section(ta)
    if shift is not None:
        phi = phi + F.pullback(ta.structure)(cech_diff(h, F, n - 1)(shift))
    return RTC(h, n, t, phi, check=check)


def rtc_isomorphism_witness(a, b):
    """A trivializing section of the difference torsor compatible with both
    rigidifications, or None when the cocycles are not isomorphic."""
    if a.h is not b.h or a.n != b.n or a.F is not b.F:
        raise ValueError("cocycles must live on one hypercovering")
    n = a.n
    d = wedge(a.torsor, inverse_torsor(b.torsor))
    da, s = alternating_transport_hom(a.h, n, d)
    pos_a, pos_b = _split_positions(a, b, n)
    fa = leg_select_hom(da, a.alt, None, pos_a)
    fb = leg_select_hom(da, b.alt, None, pos_b)
    target = fa(a.phi) - fb(b.phi)
    delta = d.delta()
    tgt, stacked = stacked_hom(delta.source, [delta, s])
    return solve_hom(stacked, tgt.assemble([d.cocycle(), target]))


def rtc_isomorphic(a, b):
    return rtc_isomorphism_witness(a, b) is not None


# -- comparison with sheaf cohomology ----------------------------------------


def comparison(a, tt=None):
    """Middle-term cocycle of the comparison complex attached to a
    rigidified torsor cocycle; its class computes the degree-n sheaf
    cohomology class of the cocycle.

    Returns (tt, el) with el in the middle term of tt.
    """
    h, n, F = a.h, a.n, a.F
    if tt is None:
        tt = ThreeTermComplex(h, F, n)
    chain = godement_resolution(F, 2)
    (i0, aug), (i1, d0), _ = chain
    t = a.torsor
    t._build()
    # trivialize the image of the combined cocycle in the flasque cover
    g0 = aug.on_sections(t.pairs_obj)(t.cocycle())
    delta0 = i0.pullback(t.p1) - i0.pullback(t.p0)
    s = solve_hom(delta0, g0)
    if s is None:
        raise ValueError("flasque image of the cocycle must trivialize")
    ds = d0.on_sections(t.cover_obj)(s)
    sg_low = i1.sections(h.level(n - 1))
    low = solve_hom(i1.pullback(t.structure), ds)
    if low is None:
        raise ValueError("differential of the trivialization must descend")
    alpha_low = (-tt.eps) * low
    # combine the rigidification with the transported trivialization
    ta = a.alt
    strans_i0 = _transport_on(i0, h, n, t, ta)
    mixed = aug.on_sections(ta.cover_obj)(a.phi) - strans_i0(s)
    alpha_high = solve_hom(i0.pullback(ta.structure), mixed)
    if alpha_high is None:
        raise ValueError("mixed cochain must descend to level n")
    el = tt.pair(alpha_low, alpha_high)
    if not tt.phi(el).is_zero():
        raise ValueError("comparison image is not a cocycle")
    return tt, el


def _transport_on(sheaf, h, m, t, ta):
    """Alternating transport hom for sections of another sheaf over the
    combined covers of a torsor and its alternating pullback."""
    ta._build()
    t._build()
    k = len(t.legs)
    s = None
    for i in range(m + 1):
        f = h.face(m, i)
        cm = [
            t.key_index[(f.cmap[b], combo[i * k : (i + 1) * k])]
            for b, combo in ta.keys
        ]
        hom = sheaf.pullback(SiteMorphism(ta.cover_obj, t.cover_obj, cm))
        if i % 2 == 1:
            hom = -hom
        s = hom if s is None else s + hom
    return s


def rtc_class(a, tt=None):
    """Degree-n sheaf cohomology class of a rigidified torsor cocycle."""
    tt, el = comparison(a, tt)
    return tt.class_of(el)


def from_three_term(tt, el, check=True):
    """A rigidified torsor cocycle realizing a comparison-complex cocycle.

    The trivializing cover is by the minimal opens of level n-1; the
    torsor cocycle and rigidification are produced by solving the
    resolution differentials on that cover.
    """
    h, F, n = tt.h, tt.F, tt.n
    if not tt.phi(el).is_zero():
        raise ValueError("element is not a cocycle")
    alpha_low, alpha_high = tt.components(el)
    chain = godement_resolution(F, 2)
    (i0, aug), (i1, d0), _ = chain
    lvl = h.level(n - 1)
    fam = lvl.space.minimal_open_cover(lvl)
    cover = fam.covering_single()
    # solve the resolution differential for a cover cochain
    t_coch = solve_hom(
        d0.on_sections(cover.source), (-tt.eps) * i1.pullback(cover)(alpha_low)
    )
    if t_coch is None:
        raise ValueError("cocycle data must trivialize on minimal opens")
    # its pair-cover difference lands in the subsheaf
    hq = cech_covering(cover, depth=2)
    dt = (i0.pullback(hq.face(1, 0)) - i0.pullback(hq.face(1, 1)))(t_coch)
    gamma = solve_hom(aug.on_sections(hq.level(1)), dt)
    if gamma is None:
        raise ValueError("pair difference must come from the sheaf")
    atom = TorsorAtom(cover, F, gamma)
    torsor = atom_torsor(atom)
    ta = alternating_pullback(h, n, torsor)
    ta._build()
    torsor._build()
    # rigidification: correct the pulled-back middle component by the
    # transported cover cochain and descend to the subsheaf
    strans_i0 = _transport_on(i0, h, n, torsor, ta)
    tor_coch = i0.pullback(_cover_select(torsor))(t_coch)
    mixed = i0.pullback(ta.structure)(alpha_high) + strans_i0(tor_coch)
    phi = solve_hom(aug.on_sections(ta.cover_obj), mixed)
    if phi is None:
        raise ValueError("rigidification must come from the sheaf")
    return RTC(h, n, torsor, phi, check=check)


def _cover_select(t):
    """Cover map from the combined cover of a one-leg torsor to the leg's
    own trivializing cover."""
    t._build()
    atom, route, _ = t.legs[0]
    cm = [combo[0] for _, combo in t.keys]
    return SiteMorphism(t.cover_obj, atom.cover.source, cm)


def rtc_equivalent(a, b):
    """Whether two cocycles on one hypercovering have the same class and an
    isomorphism witnessing it after a coboundary twist."""
    tt, ea = comparison(a)
    _, eb = comparison(b, tt)
    return tt.cohomology.project(ea) == tt.cohomology.project(eb)
