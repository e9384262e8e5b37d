import pytest

from finsheaf.abgrp import hom_is_isomorphism
from finsheaf.cochain import (
    CochainComplex,
    ThreeTermComplex,
    TotalComplex,
    cech_complex,
    cech_to_sheaf,
    cohomology_invariants,
    homotopy_operator,
    sheaf_cohomology,
)
from finsheaf.finsite import SiteMorphism, SiteObject, load_space
from finsheaf.semisimp import cech_covering, cech_homotopy
from finsheaf.sheaf import constant_sheaf
from finsheaf.abgrp import cyclic_group, free_group

import oracle


def minimal_cover(space):
    return space.minimal_open_cover().covering_single()


def two_open_cover(space, opens):
    u = space.whole()
    w = SiteObject(space, [frozenset(o) for o in opens])
    return SiteMorphism(w, u, [0] * len(opens))


def poset_oracle(space):
    return oracle.order_complex(
        space.points, lambda a, b: a != b and space.le(a, b)
    )


# -- sheaf cohomology against the simplicial oracle -------------------------


@pytest.mark.parametrize(
    "name,degrees",
    [("C4", (0, 1, 2)), ("S2F", (0, 1, 2)), ("RP2F", (0, 1, 2)), ("SIERP", (0, 1))],
)
def test_integral_cohomology_matches_oracle(name, degrees):
    x = load_space(name)
    F = constant_sheaf(x, free_group(1))
    oc = poset_oracle(x)
    for k in degrees:
        rank, tors = cohomology_invariants(F, k)
        assert (rank, tors) == oc.integral_cohomology(k), (name, k)


def test_frozen_integral_values():
    # pseudo-circle, minimal 2-sphere, minimal projective plane
    c4 = constant_sheaf(load_space("C4"), free_group(1))
    assert cohomology_invariants(c4, 0) == (1, [])
    assert cohomology_invariants(c4, 1) == (1, [])
    assert cohomology_invariants(c4, 2) == (0, [])
    s2 = constant_sheaf(load_space("S2F"), free_group(1))
    assert cohomology_invariants(s2, 1) == (0, [])
    assert cohomology_invariants(s2, 2) == (1, [])
    rp2 = constant_sheaf(load_space("RP2F"), free_group(1))
    assert cohomology_invariants(rp2, 1) == (0, [])
    assert cohomology_invariants(rp2, 2) == (0, [2])


def test_mod_two_cohomology_matches_oracle():
    x = load_space("RP2F")
    F = constant_sheaf(x, cyclic_group(2))
    oc = poset_oracle(x)
    for k in (0, 1, 2):
        rank, tors = cohomology_invariants(F, k)
        assert rank == 0
        assert len(tors) == oc.mod_cohomology(k, 2), k
        assert all(t == 2 for t in tors)


def test_three_sphere_top_degree():
    x = load_space("S3F")
    F = constant_sheaf(x, free_group(1))
    assert cohomology_invariants(F, 3) == (1, [])
    assert cohomology_invariants(F, 2) == (0, [])


# -- Cech and total complexes ------------------------------------------------


def test_cech_complex_is_a_complex():
    x = load_space("C4")
    h = cech_covering(minimal_cover(x), depth=3)
    F = constant_sheaf(x, free_group(1))
    cc = cech_complex(h, F, 3)
    CochainComplex(cc.groups, cc.diffs, check=True)


def test_total_transport_is_iso():
    x = load_space("C4")
    h = cech_covering(minimal_cover(x), depth=3)
    F = constant_sheaf(x, free_group(1))
    tot = TotalComplex(h, F, 1)
    assert hom_is_isomorphism(tot.transport(0))
    assert hom_is_isomorphism(tot.transport(1))


def test_edge_map_iso_for_open_cover_degree_one():
    x = load_space("C4")
    h = cech_covering(minimal_cover(x), depth=3)
    F = constant_sheaf(x, free_group(1))
    g, sq = cech_to_sheaf(h, F, 1)
    assert sq.group.invariants() == (1, [])
    assert hom_is_isomorphism(g)


def test_homotopy_operator_identity():
    x = load_space("C4")
    hu = cech_covering(minimal_cover(x), depth=3)
    hv = cech_covering(two_open_cover(x, [x.down("c"), x.down("d")]), depth=4)
    kappa = SiteMorphism(hu.level(0), hv.level(0), [0, 0, 0, 1])
    lam = SiteMorphism(hu.level(0), hv.level(0), [1, 1, 0, 1])
    ht = cech_homotopy(hu, hv, kappa, lam, depth=2)
    F = constant_sheaf(x, cyclic_group(4))
    cu = cech_complex(hu, F, 3)
    cv = cech_complex(hv, F, 3)
    for n in (1, 2):
        lhs = F.pullback(ht.theta.map(n)) - F.pullback(ht.zeta.map(n))
        s_n = homotopy_operator(ht, F, n)
        s_prev = homotopy_operator(ht, F, n - 1)
        rhs = s_n.compose(cv.diff(n)) + cu.diff(n - 1).compose(s_prev)
        assert lhs.equals(rhs), n


# -- comparison complex ------------------------------------------------------


def test_three_term_degree_one_pseudocircle():
    x = load_space("C4")
    h = cech_covering(minimal_cover(x), depth=3)
    F = constant_sheaf(x, free_group(1))
    tt = ThreeTermComplex(h, F, 1)
    assert tt.cohomology.group.invariants() == (1, [])
    assert hom_is_isomorphism(tt.to_sheaf_hom())


def test_three_term_degree_two_sphere():
    x = load_space("S2F")
    h = cech_covering(two_open_cover(x, [x.down("c1"), x.down("c2")]), depth=4)
    F = constant_sheaf(x, free_group(1))
    tt = ThreeTermComplex(h, F, 2)
    assert tt.cohomology.group.invariants() == (1, [])
    assert hom_is_isomorphism(tt.to_sheaf_hom())
