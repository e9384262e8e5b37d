"""Torsors under an abelian sheaf on a finite space.

A torsor is presented by a trivializing cover together with a difference
1-cocycle on the pair cover (a "torsor atom"); general torsors are signed
combinations of atoms pulled back along routes into their bases.  Keeping
the legs of the combination explicit makes the tautological sections of
canceling combinations exact, computable data.
"""

from itertools import product as _iproduct

from .abgrp import solve_hom
from .cochain import cech_diff, cech_to_sheaf
from .finsite import SiteMorphism, SiteObject, fiber_product, identity_morphism
from .semisimp import cech_covering


class TorsorAtom:
    """A torsor on a site object presented by a trivializing cover W -> B
    and a 1-cocycle on the pair cover W x_B W."""

    def __init__(self, cover, F, cocycle, check=True):
        if not cover.is_cover():
            raise ValueError("a torsor atom needs a covering morphism")
        self.cover = cover
        self.F = F
        self.h = cech_covering(cover, depth=2)
        self.pairs = self.h.level(1)
        if cocycle.group != F.sections(self.pairs).group:
            raise ValueError("cocycle must be a section over the pair cover")
        self.cocycle = cocycle
        if check and not cech_diff(self.h, F, 1)(cocycle).is_zero():
            raise ValueError("cocycle identity fails")

    def pair_index(self, a, b):
        """Component of the pair cover refining components (a, b)."""
        return self.h.family_index[1][(((0,), a), ((1,), b))]


class ContractedTorsor:
    """A signed combination of pulled-back torsor atoms over a base object.

    legs[i] = (atom, route, sign): route maps the base into the atom's
    base and sign is +-1.  The underlying torsor is the combination of the
    signed route pullbacks; an empty combination is the trivial torsor.
    """

    def __init__(self, F, base, legs):
        self.F = F
        self.base = base
        self.legs = list(legs)
        for atom, route, sign in self.legs:
            if atom.F is not F:
                raise ValueError("leg atom under a different sheaf")
            if route.source != base or route.target != atom.cover.target:
                raise ValueError("leg route with wrong endpoints")
            if sign not in (1, -1):
                raise ValueError("leg sign must be +-1")
        self._built = False
        self._cocycle = None

    # -- the combined trivializing cover -----------------------------------

    def _build(self):
        if self._built:
            return
        space = self.base.space
        comps, keys = [], []
        for b, bopen in enumerate(self.base.components):
            choice_lists = []
            for atom, route, _ in self.legs:
                tgt = route.cmap[b]
                choice_lists.append(
                    [
                        w
                        for w in range(len(atom.cover.source.components))
                        if atom.cover.cmap[w] == tgt
                    ]
                )
            for combo in _iproduct(*choice_lists):
                op = frozenset(bopen)
                for (atom, _, _), w in zip(self.legs, combo):
                    op = op & atom.cover.source.components[w]
                    if not op:
                        break
                if op:
                    comps.append(op)
                    keys.append((b, combo))
        self.cover_obj = SiteObject(space, comps)
        self.keys = keys
        self.key_index = {k: i for i, k in enumerate(keys)}
        self.structure = SiteMorphism(
            self.cover_obj, self.base, [b for b, _ in keys]
        )
        self.pairs_obj, self.p0, self.p1 = fiber_product(
            self.structure, self.structure
        )
        self.pair_list = list(zip(self.p0.cmap, self.p1.cmap))
        self._built = True

    def section_group(self):
        """Sections of the sheaf over the combined trivializing cover."""
        self._build()
        return self.F.sections(self.cover_obj)

    def cocycle_on(self, obj, pair_list):
        """Signed sum of the atom cocycles over an object refining the
        given pairs of cover components."""
        self._build()
        total = self.F.sections(obj).group.zero()
        for li, (atom, _, sign) in enumerate(self.legs):
            cmap = [
                atom.pair_index(self.keys[a][1][li], self.keys[b][1][li])
                for a, b in pair_list
            ]
            val = self.F.pullback(SiteMorphism(obj, atom.pairs, cmap))(
                atom.cocycle
            )
            total = total + val if sign == 1 else total - val
        return total

    def cocycle(self):
        """The combined difference cocycle on the pair cover."""
        if self._cocycle is None:
            self._build()
            self._cocycle = self.cocycle_on(self.pairs_obj, self.pair_list)
        return self._cocycle

    def delta(self):
        """Difference operator from cover sections to pair-cover sections."""
        self._build()
        return self.F.pullback(self.p1) - self.F.pullback(self.p0)

    # -- sections ----------------------------------------------------------

    def is_section(self, phi):
        """Whether phi (over the combined cover) trivializes the cocycle.

        Checked stalk by stalk on the pair cover, which avoids building
        the section group of the pair cover.
        """
        self._build()
        sg = self.section_group()
        amb = sg.ambient_coords(phi)
        gambs = {}
        for pi, (a, b) in enumerate(self.pair_list):
            for p in self.pairs_obj.components[pi]:
                stalk = self.F.stalk(p)
                oa = sg.offsets[sg.slot_index[(a, p)]]
                ob = sg.offsets[sg.slot_index[(b, p)]]
                val = [
                    amb[ob + i] - amb[oa + i] for i in range(stalk.ngens)
                ]
                for li, (atom, _, sign) in enumerate(self.legs):
                    ga = gambs.get(id(atom))
                    if ga is None:
                        sgg = self.F.sections(atom.pairs)
                        ga = (sgg, sgg.ambient_coords(atom.cocycle))
                        gambs[id(atom)] = ga
                    sgg, vg = ga
                    wi = atom.pair_index(
                        self.keys[a][1][li], self.keys[b][1][li]
                    )
                    off = sgg.offsets[sgg.slot_index[(wi, p)]]
                    for i in range(stalk.ngens):
                        val[i] -= sign * vg[off + i]
                if not stalk.in_relation_lattice(val):
                    return False
        return True

    def find_section(self):
        """A trivializing section, or None when the torsor is nontrivial."""
        return solve_hom(self.delta(), self.cocycle())

    def is_trivial(self):
        return self.find_section() is not None

    def descend(self, el):
        """Express a cover section invariant under both projections as a
        section over the base; raises when it does not descend."""
        self._build()
        out = solve_hom(self.F.pullback(self.structure), el)
        if out is None:
            raise ValueError("element does not descend to the base")
        return out


def trivial_torsor(F, base):
    return ContractedTorsor(F, base, [])


def atom_torsor(atom):
    """The one-leg torsor of an atom over its own base."""
    base = atom.cover.target
    return ContractedTorsor(
        atom.F, base, [(atom, identity_morphism(base), 1)]
    )


def inverse_torsor(t):
    return ContractedTorsor(t.F, t.base, [(a, r, -s) for a, r, s in t.legs])


def wedge(t1, t2):
    """Combination of two torsors over the same base."""
    if t1.base != t2.base or t1.F is not t2.F:
        raise ValueError("wedge needs torsors over one base and sheaf")
    return ContractedTorsor(t1.F, t1.base, t1.legs + t2.legs)


def wedge_sections(t1, phi1, t2, phi2):
    """(wedge, section): combine trivializing sections."""
    tw = wedge(t1, t2)
    tw._build()
    t1._build()
    t2._build()
    k1 = len(t1.legs)
    cm1 = [t1.key_index[(b, c[:k1])] for b, c in tw.keys]
    cm2 = [t2.key_index[(b, c[k1:])] for b, c in tw.keys]
    f1 = tw.F.pullback(SiteMorphism(tw.cover_obj, t1.cover_obj, cm1))
    f2 = tw.F.pullback(SiteMorphism(tw.cover_obj, t2.cover_obj, cm2))
    return tw, f1(phi1) + f2(phi2)


def pullback_torsor(t, mor):
    """Pull the torsor back along a morphism into its base."""
    return ContractedTorsor(
        t.F, mor.source, [(a, r.compose(mor), s) for a, r, s in t.legs]
    )


def pullback_section(t, mor, phi):
    """(pulled torsor, pulled section)."""
    tp = pullback_torsor(t, mor)
    tp._build()
    t._build()
    cm = [t.key_index[(mor.cmap[b], combo)] for b, combo in tp.keys]
    q = SiteMorphism(tp.cover_obj, t.cover_obj, cm)
    return tp, t.F.pullback(q)(phi)


# -- alternating face operations --------------------------------------------


def alternating_pullback(h, m, t):
    """Signed combination of the face pullbacks of a torsor on level m-1 of
    a hypercovering, landing on level m."""
    if t.base != h.level(m - 1):
        raise ValueError("torsor must live on level m-1")
    legs = []
    for i in range(m + 1):
        f = h.face(m, i)
        sgn = 1 if i % 2 == 0 else -1
        for a, r, s in t.legs:
            legs.append((a, r.compose(f), s * sgn))
    return ContractedTorsor(t.F, h.level(m), legs)


def leg_select_hom(t_big, t_small, base_map, positions):
    """Pullback of sheaf sections along the cover map that keeps the listed
    leg positions, over a base map (identity when None).

    The atoms and routes of the kept legs must match those of the small
    torsor up to composition with the base map.
    """
    t_big._build()
    t_small._build()
    cm = []
    for b, combo in t_big.keys:
        bb = base_map.cmap[b] if base_map is not None else b
        cm.append(
            t_small.key_index[(bb, tuple(combo[p] for p in positions))]
        )
    return t_big.F.pullback(
        SiteMorphism(t_big.cover_obj, t_small.cover_obj, cm)
    )


def alternating_transport_hom(h, m, t, ta=None):
    """(alternating pullback, transport hom) for cover sections.

    The hom takes sections over the combined cover of a torsor on level
    m-1 to sections over that of its alternating pullback; it carries
    trivializing sections to trivializing sections.
    """
    if ta is None:
        ta = alternating_pullback(h, m, t)
    k = len(t.legs)
    s = None
    for i in range(m + 1):
        f = h.face(m, i)
        hom = leg_select_hom(ta, t, f, list(range(i * k, (i + 1) * k)))
        if i % 2 == 1:
            hom = -hom
        s = hom if s is None else s + hom
    return ta, s


def alternating_section(h, m, t, phi):
    """(alternating pullback, alternating transport of a cover section)."""
    ta, s = alternating_transport_hom(h, m, t)
    return ta, s(phi)


def canonical_pairing(t):
    """Match legs with the same atom and route and opposite signs; raises
    when the legs do not cancel."""
    groups = {}
    for idx, (a, r, s) in enumerate(t.legs):
        groups.setdefault((id(a), r), {1: [], -1: []})[s].append(idx)
    pairs = []
    for d in groups.values():
        if len(d[1]) != len(d[-1]):
            raise ValueError("legs do not cancel in pairs")
        pairs.extend(zip(d[1], d[-1]))
    return pairs


def canonical_section(t, pairing=None):
    """Tautological trivializing section of a torsor whose legs cancel.

    For each matched pair the atom cocycle evaluated between the two leg
    choices is subtracted; the result is independent of the pairing.
    """
    if pairing is None:
        pairing = canonical_pairing(t)
    t._build()
    seen = set()
    for ip, im in pairing:
        ap, rp, sp = t.legs[ip]
        am, rm, sm = t.legs[im]
        if ap is not am or rp != rm or sp != 1 or sm != -1:
            raise ValueError("invalid pairing")
        seen.update((ip, im))
    if len(seen) != len(t.legs):
        raise ValueError("pairing must cover all legs")
    total = t.section_group().group.zero()
    for ip, im in pairing:
        atom = t.legs[ip][0]
        cmap = [
            atom.pair_index(combo[ip], combo[im]) for _, combo in t.keys
        ]
        val = t.F.pullback(SiteMorphism(t.cover_obj, atom.pairs, cmap))(
            atom.cocycle
        )
        total = total - val
    return total


def alternating_residue(h, m, ta, phi, pick=min):
    """Obstruction cochain on level m+1 of a sectioned torsor on level m.

    The alternating pullback of a torsor that is itself an alternating
    pullback cancels leg by leg, and the transported section differs from
    the tautological one by a section of the sheaf over level m+1.  The
    difference is computed stalk by stalk through a local choice of
    trivializing component (the result is independent of the choice), so
    the combined cover of the canceled torsor is never materialized.
    """
    F = ta.F
    ta._build()
    k = len(ta.legs)
    tb = alternating_pullback(h, m + 1, ta)
    pairing = canonical_pairing(tb)
    lvl = h.level(m + 1)
    sg_out = F.sections(lvl)
    sg_a = ta.section_group()
    amb_a = sg_a.ambient_coords(phi)
    atom_amb = {}
    faces = [h.face(m + 1, j) for j in range(m + 2)]
    out = []
    for c, p in sg_out.slots:
        # one leg choice per signed face copy of each leg of ta, valid at p
        combo = []
        for j in range(m + 2):
            for atom, route, _ in ta.legs:
                tgt = route.cmap[faces[j].cmap[c]]
                w = pick(
                    wi
                    for wi in range(len(atom.cover.source.components))
                    if atom.cover.cmap[wi] == tgt
                    and p in atom.cover.source.components[wi]
                )
                combo.append(w)
        combo = tuple(combo)
        stalk = F.stalk(p)
        val = [0] * stalk.ngens
        for j in range(m + 2):
            ai = ta.key_index[(faces[j].cmap[c], combo[j * k : (j + 1) * k])]
            off = sg_a.offsets[sg_a.slot_index[(ai, p)]]
            piece = amb_a[off : off + stalk.ngens]
            for a, x in enumerate(piece):
                val[a] += x if j % 2 == 0 else -x
        for ip, im in pairing:
            atom = tb.legs[ip][0]
            amb_g = atom_amb.get(id(atom))
            if amb_g is None:
                sg_g = F.sections(atom.pairs)
                amb_g = (sg_g, sg_g.ambient_coords(atom.cocycle))
                atom_amb[id(atom)] = amb_g
            sg_g, vg = amb_g
            pi = atom.pair_index(combo[ip], combo[im])
            off = sg_g.offsets[sg_g.slot_index[(pi, p)]]
            piece = vg[off : off + stalk.ngens]
            for a, x in enumerate(piece):
                val[a] += x
        out.extend(val)
    return sg_out.from_ambient(out)


# -- classification ----------------------------------------------------------


def torsor_class(t):
    """Degree-1 cohomology class of a torsor over the whole space."""
    t._build()
    if t.base != t.base.space.whole():
        raise ValueError("classification needs a torsor over the space")
    hq = cech_covering(t.structure, depth=2)
    lv1 = hq.level(1)
    pair_list = [None] * len(lv1.components)
    for key, idx in hq.family_index[1].items():
        ((_, a), (_, b)) = key
        pair_list[idx] = (a, b)
    g = t.cocycle_on(lv1, pair_list)
    if not cech_diff(hq, t.F, 1)(g).is_zero():
        raise ValueError("combined cocycle fails the cocycle identity")
    hom, sq = cech_to_sheaf(hq, t.F, 1)
    return hom(sq.project(g))


# -- combinatorics of iterated face composites -------------------------------


def triple_face_orbits(m):
    """Triples (i, j, k) indexing composites of three face maps from level
    m+2, grouped by the induced injection.  Each orbit has six members and
    the alternating signs (-1)^(i+j+k) cancel within it."""
    orbits = {}
    for i in range(m + 3):
        for j in range(m + 2):
            for k in range(m + 1):
                kept = list(range(m + 3))
                kept.pop(i)
                kept.pop(j)
                kept.pop(k)
                orbits.setdefault(tuple(kept), []).append((i, j, k))
    return orbits


def swap_outer(t):
    """Exchange the first two omissions of a triple composite; preserves
    the composite and flips the sign."""
    i, j, k = t
    return (j + 1, i, k) if i <= j else (j, i - 1, k)


def swap_inner(t):
    """Exchange the last two omissions of a triple composite; preserves
    the composite and flips the sign."""
    i, j, k = t
    return (i, k + 1, j) if j <= k else (i, k, j - 1)
