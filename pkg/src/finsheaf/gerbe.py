"""Discrete bundle-gerbe data and coefficient connecting maps.

A gerbe over a cover Y -> X consists of a torsor on the pair object
Y_1 = Y x_X Y together with a multiplication section over the triple
object Y_2; associativity is the vanishing of the alternating residue
on Y_3.  Associative gerbes are exactly the degree-2 rigidified torsor
cocycles on the Cech covering of Y, which gives them a class in H^2.

The module also computes the connecting map of the coefficient
sequence 0 -> Z --m--> Z -> Z/m -> 0 on the flasque resolutions, the
discrete stand-in for a Dixmier-Douady class.
"""

from .abgrp import GroupHom, induced_hom, solve_hom
from .cochain import godement_complex, sheaf_cohomology
from .rtc import RTC
from .semisimp import cech_covering
from .sheaf import godement_hom, sheaf_hom_constant
from .torsor import (
    alternating_pullback,
    alternating_residue,
    inverse_torsor,
    trivial_torsor,
)


class GerbeData:
    """A cover with a pair torsor and a multiplication section.

    `cover` is a morphism onto the whole space, `pair_torsor` a torsor
    under F on the pair object of its Cech covering, and
    `multiplication` a section of the alternating face pullback of the
    inverse torsor over the triple object.
    """

    def __init__(self, cover, pair_torsor, multiplication, depth=4, h=None):
        self.cover = cover
        self.h = cech_covering(cover, depth=depth) if h is None else h
        if pair_torsor.base != self.h.level(1):
            raise ValueError("pair torsor must live on the pair object")
        self.pair_torsor = pair_torsor
        self.torsor = inverse_torsor(pair_torsor)
        self.alt = alternating_pullback(self.h, 2, self.torsor)
        if multiplication.group != self.alt.section_group().group:
            raise ValueError("multiplication in the wrong section group")
        self.mu = multiplication

    @property
    def F(self):
        return self.pair_torsor.F


def trivial_gerbe(cover, F, depth=4):
    """The trivial pair torsor with zero multiplication."""
    h = cech_covering(cover, depth=depth)
    t = trivial_torsor(F, h.level(1))
    ta = alternating_pullback(h, 2, t)
    return GerbeData(cover, t, ta.section_group().group.zero(), h=h)


def gerbe_residue(g):
    """Alternating pullback of the multiplication to the quadruple
    object, a section of the coefficient sheaf there."""
    return alternating_residue(g.h, 2, g.alt, g.mu)


def is_associative(g):
    """Whether the multiplication trivializes the alternating torsor
    with vanishing residue on the quadruple object."""
    if not g.alt.is_section(g.mu):
        return False
    return gerbe_residue(g).is_zero()


def to_rtc2(g):
    """The degree-2 cocycle carried by an associative gerbe."""
    if not is_associative(g):
        raise ValueError("q_alt(mu) != 0")
    return RTC(g.h, 2, g.torsor, g.mu, check=False)


def gerbe_from_rtc(a, cover):
    """Repackage a degree-2 cocycle on the Cech covering of `cover`."""
    if a.n != 2:
        raise ValueError("gerbe data needs a degree-2 cocycle")
    return GerbeData(cover, inverse_torsor(a.torsor), a.phi, h=a.h)


def translate_gerbe(g, t):
    """Shift the multiplication by a section of F over the triple
    object; the residue shifts by the Cech differential of t."""
    g.alt._build()
    shift = g.F.pullback(g.alt.structure)(t)
    return GerbeData(g.cover, g.pair_torsor, g.mu + shift, h=g.h)


def reduction_sheaf_hom(FZ, Fm):
    """Stalkwise reduction between two constant sheaves."""
    p = FZ.space.points[0]
    return sheaf_hom_constant(FZ, Fm, GroupHom(FZ.stalk(p), Fm.stalk(p), [[1]]))


def reduction_map(FZ, Fm, n):
    """Induced coefficient map H^n(X, Z) -> H^n(X, Z/m)."""
    whole = FZ.space.whole()
    f = godement_hom(reduction_sheaf_hom(FZ, Fm), n).on_sections(whole)
    return induced_hom(sheaf_cohomology(FZ, n), sheaf_cohomology(Fm, n), f)


def bockstein(FZ, Fm, m, n, cls):
    """Connecting-map image in H^{n+1}(X, Z) of a class in H^n(X, Z/m).

    A representing cocycle is lifted through the resolution-level
    reduction, its differential divided by m, and the result projected
    to degree-(n+1) cohomology with integer coefficients.
    """
    whole = FZ.space.whole()
    rep = sheaf_cohomology(Fm, n).lift(cls)
    lift = solve_hom(godement_hom(reduction_sheaf_hom(FZ, Fm), n).on_sections(whole), rep)
    if lift is None:
        raise ValueError("lift failed")
    db = godement_complex(FZ).diff(n)(lift)
    p = FZ.space.points[0]
    mult = sheaf_hom_constant(FZ, FZ, GroupHom(FZ.stalk(p), FZ.stalk(p), [[m]]))
    c = solve_hom(godement_hom(mult, n + 1).on_sections(whole), db)
    if c is None:
        raise ValueError("differential of the lift is not divisible")
    return sheaf_cohomology(FZ, n + 1).project(c)
