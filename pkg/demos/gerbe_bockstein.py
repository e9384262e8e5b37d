"""Discrete bundle gerbes and the Bockstein operator.

Two computations.  First, the face poset of the six-vertex
triangulation of the real projective plane has H^1(-, Z/2) = Z/2 and
H^2(-, Z) = Z/2; the Bockstein operator of 0 -> Z --2--> Z -> Z/2 -> 0
carries the degree-one mod-2 generator to the integral two-torsion
class, and this script computes that connecting map exactly.  Second,
on the finite model of the two-sphere the integral degree-two generator
is realized as a discrete bundle gerbe whose associativity defect
vanishes and whose class survives the round trip through the comparison
complex.
"""

from finsheaf.abgrp import cyclic_group, free_group
from finsheaf.cochain import ThreeTermComplex, sheaf_cohomology
from finsheaf.finsite import SiteMorphism, SiteObject, load_space
from finsheaf.gerbe import gerbe_from_rtc, is_associative, to_rtc2
from finsheaf.rtc import comparison, from_three_term
from finsheaf.semisimp import cech_covering
from finsheaf.sheaf import constant_sheaf
from finsheaf.gerbe import bockstein


def main():
    x = load_space("RP2F")
    FZ = constant_sheaf(x, free_group(1))
    F2 = constant_sheaf(x, cyclic_group(2))

    h1 = sheaf_cohomology(F2, 1)
    print("H^1(RP2, Z/2) invariants:", h1.group.invariants())
    gen = next(g for g in h1.group.gens() if not g.is_zero())

    img = bockstein(FZ, F2, 2, 1, gen)
    print("Bockstein of the generator is zero:", img.is_zero())
    print("it lands in H^2(RP2, Z) =", img.group.invariants())
    print()

    y = load_space("S2F")
    G = constant_sheaf(y, free_group(1))
    w = SiteObject(y, [frozenset(y.down("c1")), frozenset(y.down("c2"))])
    cover = SiteMorphism(w, y.whole(), [0, 0])
    h = cech_covering(cover, depth=4)

    tt = ThreeTermComplex(h, G, 2)
    print("three-term H^2 of the two-sphere:", tt.cohomology.group.invariants())
    g2 = next(g for g in tt.cohomology.group.gens() if not g.is_zero())

    a = from_three_term(tt, tt.cohomology.lift(g2))
    g = gerbe_from_rtc(a, cover)
    print("gerbe multiplication is associative:", is_associative(g))
    _, el = comparison(to_rtc2(g), tt)
    print("gerbe class is the generator:", tt.cohomology.project(el) == g2)


if __name__ == "__main__":
    main()
