import pytest

from finsheaf.finsite import CoveringFamily, SiteMorphism, SiteObject, load_space
from finsheaf.semisimp import (
    Homotopy,
    Refinement,
    cech_covering,
    cech_homotopy,
    common_refinement,
    constant_covering,
    coskeleton,
    identity_refinement,
    raise_type,
    refine_hypercovering,
    refinement_from_cover_map,
)


def minimal_cover(space):
    return space.minimal_open_cover().covering_single()


def two_open_cover(space, opens):
    u = space.whole()
    w = SiteObject(space, [frozenset(o) for o in opens])
    return SiteMorphism(w, u, [0] * len(opens))


def test_cech_levels_of_c4_minimal_cover():
    x = load_space("C4")
    h = cech_covering(minimal_cover(x), depth=3)
    assert [len(h.level(n)) for n in range(4)] == [4, 14, 46, 146]
    assert h.validate(3)


def test_cech_level_one_is_fiber_square():
    x = load_space("C4")
    u = minimal_cover(x)
    h = cech_covering(u, depth=2)
    from finsheaf.finsite import fiber_product

    p, pa, pb = fiber_product(u, u)
    assert h.level(1) == p
    # degree-1 faces: p_0 is the second projection, p_1 the first
    assert h.face(1, 0).cmap == pb.cmap
    assert h.face(1, 1).cmap == pa.cmap


def test_constant_covering_levels_are_the_base():
    x = load_space("C4")
    h = constant_covering(x.whole(), depth=3)
    for n in range(4):
        assert h.level(n) == x.whole()
        if n >= 1:
            for i in range(n + 1):
                assert h.face(n, i).cmap == (0,)
    assert h.validate(3)


def test_coskeleton_of_cech_one_truncation_reproduces_cech():
    x = load_space("C4")
    u = minimal_cover(x)
    h = cech_covering(u, depth=3)
    k = coskeleton(
        x.whole(),
        [h.level(0), h.level(1)],
        [[], h.face_list(1)],
        h.aug,
        1,
        depth=3,
    )
    for n in range(4):
        assert len(k.level(n)) == len(h.level(n))
        assert sorted(k.level(n).key) == sorted(h.level(n).key)
    assert k.validate(3)


def test_face_value_composites_agree():
    x = load_space("C4")
    h = cech_covering(minimal_cover(x), depth=3)
    # dropping to a singleton equals composing the right face operators
    for c in range(len(h.level(2))):
        for j in range(3):
            direct = h.face_value(2, c, (j,))
            if j == 0:
                via = h.face(1, 1).cmap[h.face(2, 2).cmap[c]]
            elif j == 1:
                via = h.face(1, 0).cmap[h.face(2, 2).cmap[c]]
            else:
                via = h.face(1, 0).cmap[h.face(2, 0).cmap[c]]
            assert direct == via


def test_type_one_hypercovering_on_s2f():
    x = load_space("S2F")
    u = two_open_cover(x, [x.down("c1"), x.down("c2")])
    h = cech_covering(u, depth=2)
    u1 = h.level(1)
    # split the overlap components into the two middle opens
    members = []
    cmaps = []
    for ci, comp in enumerate(u1.components):
        if comp == frozenset(["a1", "a2", "b1", "b2"]):
            for b in ("b1", "b2"):
                members.append(SiteObject(x, [x.down(b)]))
                cmaps.append(ci)
        else:
            members.append(SiteObject(x, [comp]))
            cmaps.append(ci)
    fam = CoveringFamily(u1, [SiteMorphism(m, u1, [c]) for m, c in zip(members, cmaps)])
    h2, ref = refine_hypercovering(raise_type(h, 1), 1, fam)
    assert h2.type_r == 1
    assert h2.validate(2)
    ref.validate()
    assert len(h2.level(1)) == 6
    assert len(h2.level(2)) > len(h2.level(1))


def test_refine_cech_at_degree_zero():
    x = load_space("C4")
    u = two_open_cover(x, [x.down("c"), x.down("d")])
    h = cech_covering(u, depth=2)
    u0 = h.level(0)
    # split the first member into two smaller opens
    fam = CoveringFamily(
        u0,
        [
            SiteMorphism(SiteObject(x, [frozenset("ab")]), u0, [0]),
            SiteMorphism(SiteObject(x, [x.down("c")]), u0, [0]),
            SiteMorphism(SiteObject(x, [x.down("d")]), u0, [1]),
        ],
    )
    h2, ref = refine_hypercovering(h, 0, fam)
    assert h2.type_r == 0
    assert len(h2.level(0)) == 3
    assert h2.validate(2)
    ref.validate()


def test_refine_rejects_bad_degree():
    x = load_space("C4")
    h = cech_covering(minimal_cover(x), depth=2)
    fam = x.minimal_open_cover()
    with pytest.raises(ValueError):
        refine_hypercovering(h, 1, CoveringFamily(h.level(1), [SiteMorphism(h.level(1), h.level(1), range(len(h.level(1))))]))


def test_common_refinement_of_two_cech_coverings():
    x = load_space("C4")
    h1 = cech_covering(minimal_cover(x), depth=2)
    h2 = cech_covering(two_open_cover(x, [x.down("c"), x.down("d")]), depth=2)
    p, r1, r2 = common_refinement(h1, h2, depth=2)
    assert p.validate(2)
    r1.validate()
    r2.validate()
    # the common refinement covers with nonempty pairs (minimal open, big open)
    assert len(p.level(0)) == 8


def test_identity_refinement_validates():
    x = load_space("C4")
    h = cech_covering(minimal_cover(x), depth=2)
    identity_refinement(h, depth=2).validate()


def test_cech_homotopy_satisfies_identities():
    x = load_space("C4")
    hu = cech_covering(minimal_cover(x), depth=3)
    hv = cech_covering(two_open_cover(x, [x.down("c"), x.down("d")]), depth=4)
    w = hu.level(0)
    # two different ways to map the minimal cover into the two-open cover:
    # {a} and {b} can go into either big open
    kappa = SiteMorphism(w, hv.level(0), [0, 0, 0, 1])
    lam = SiteMorphism(w, hv.level(0), [1, 1, 0, 1])
    h = cech_homotopy(hu, hv, kappa, lam, depth=3)
    assert h.validate()


def test_refinement_from_cover_map_validates():
    x = load_space("S2F")
    hu = cech_covering(minimal_cover(x), depth=2)
    hv = cech_covering(two_open_cover(x, [x.down("c1"), x.down("c2")]), depth=2)
    w = hu.level(0)
    cmap = []
    for comp in w.components:
        cmap.append(0 if comp <= x.down("c1") else 1)
    kappa = SiteMorphism(w, hv.level(0), cmap)
    refinement_from_cover_map(hu, hv, kappa, depth=2).validate()
