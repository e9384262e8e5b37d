"""Abelian sheaves on finite spaces and their section groups.

A sheaf is a functor on the specialization order: one stalk per point and
a restriction map stalk(x) -> stalk(y) for every y <= x.  Sections over a
site object are the limit of the stalks over each component, computed as
an explicit kernel lattice; the empty object has zero sections.

The flasque resolution I^0, I^1, ... replaces injectives: I^0 has stalk
prod_{x <= p} F_x at p, and I^{k+1} is I^0 of the cokernel of the previous
augmentation.  Quotient sheaves are computed pointwise and reuse the
generator coordinates of the ambient stalks.
"""

from __future__ import annotations

from . import abgrp
from .abgrp import DirectSum, Element, FpAbGroup, GroupHom
from .finsite import SiteMorphism, SiteObject


class Sheaf:
    def __init__(self, space, stalks, res, name=None, check=True):
        """res maps pairs (x, y) with y < x to GroupHom stalk(x)->stalk(y)."""
        self.space = space
        self.stalks = dict(stalks)
        self.name = name
        self._res = dict(res)
        self._sections = {}
        self._pullbacks = {}
        self._hom_sections = {}
        self._godement = None
        self._zq = None
        self._cohomology = {}
        if check:
            for (x, y), h in self._res.items():
                if not space.le(y, x) or x == y:
                    raise ValueError("restriction for a non-specialization pair")
                if h.source != self.stalks[x] or h.target != self.stalks[y]:
                    raise ValueError("restriction with wrong source or target")
            for x in space.points:
                for y in space.points:
                    if y != x and space.le(y, x) and (x, y) not in self._res:
                        raise ValueError("missing restriction %r -> %r" % (x, y))
            # functoriality along covering chains
            for (x, y) in space.hasse_down:
                for z in space.points:
                    if z != y and z != x and space.le(z, y):
                        lhs = self._res[(y, z)].compose(self._res[(x, y)])
                        if not lhs.equals(self._res[(x, z)]):
                            raise ValueError("restrictions are not functorial")

    def stalk(self, x):
        return self.stalks[x]

    def res(self, x, y):
        if x == y:
            return abgrp.identity_hom(self.stalks[x])
        return self._res[(x, y)]

    def is_zero(self):
        return all(g.is_trivial() for g in self.stalks.values())

    def __repr__(self):
        return "Sheaf(%s on %s)" % (self.name or "?", self.space.name or "?")

    # -- sections ----------------------------------------------------------

    def sections(self, obj):
        sg = self._sections.get(obj.key)
        if sg is None:
            sg = SectionGroup(self, obj)
            self._sections[obj.key] = sg
        return sg

    def pullback(self, mor):
        """Restriction of sections along a site morphism, as a GroupHom."""
        key = (mor.source.key, mor.target.key, mor.cmap)
        h = self._pullbacks.get(key)
        if h is None:
            src = self.sections(mor.target)
            tgt = self.sections(mor.source)
            cols = []
            for i in range(src.group.ngens):
                amb = src.ambient_coords(src.group.gen(i))
                cols.append(tgt.from_ambient(tgt.transport_ambient(mor, src, amb)).coords)
            h = GroupHom(src.group, tgt.group, abgrp.from_columns(cols, tgt.group.ngens), check=False)
            self._pullbacks[key] = h
        return h


class AmbientLayout:
    """Slot and offset bookkeeping for ambient stalk vectors over a site
    object, without the section-lattice computation.  Slots are grouped by
    component, points sorted in space order within each component."""

    def __init__(self, F, obj):
        self.sheaf = F
        self.obj = obj
        space = F.space
        self.slots = []
        for ci, comp in enumerate(obj.components):
            for p in sorted(comp, key=space.index.get):
                self.slots.append((ci, p))
        self.slot_index = {s: k for k, s in enumerate(self.slots)}
        self.slot_groups = [F.stalk(p) for _, p in self.slots]
        self.offsets = []
        n = 0
        for g in self.slot_groups:
            self.offsets.append(n)
            n += g.ngens
        self.ambient_ngens = n

    def transport_ambient(self, mor, src_sg, amb):
        """Ambient coords over mor.source of a family given over mor.target."""
        out = [0] * self.ambient_ngens
        for k, (ci, p) in enumerate(self.slots):
            j = mor.cmap[ci]
            sk = src_sg.slot_index[(j, p)]
            soff = src_sg.offsets[sk]
            off = self.offsets[k]
            g = self.slot_groups[k]
            out[off : off + g.ngens] = amb[soff : soff + g.ngens]
        return out

    def component_slices(self):
        """(component index, start, stop) ambient ranges, in order."""
        out = []
        start = 0
        pos = 0
        for ci in range(len(self.obj.components)):
            stop = start
            while pos < len(self.slots) and self.slots[pos][0] == ci:
                stop += self.slot_groups[pos].ngens
                pos += 1
            out.append((ci, start, stop))
            start = stop
        return out


class SectionGroup(AmbientLayout):
    """Sections of a sheaf over a site object: the limit of the stalks over
    each component, as a sublattice of the product of all stalks."""

    def __init__(self, F, obj):
        AmbientLayout.__init__(self, F, obj)
        space = F.space
        n = self.ambient_ngens
        self._blocks = None
        if len(obj.components) > 1:
            # sections split as a direct sum over components; reuse the
            # cached single-component groups blockwise
            singles = [
                F.sections(SiteObject(space, [c])) for c in obj.components
            ]
            basis, rels, blocks = [], [], []
            aoff = goff = 0
            for sg in singles:
                for col in sg.basis:
                    v = [0] * n
                    v[aoff : aoff + sg.ambient_ngens] = col
                    basis.append(v)
                blocks.append((aoff, goff, sg))
                aoff += sg.ambient_ngens
                goff += sg.group.ngens
            total = goff
            for _, go, sg in blocks:
                for r in sg.group.rels:
                    rr = [0] * total
                    rr[go : go + sg.group.ngens] = r
                    rels.append(rr)
            self.basis = basis
            self.group = FpAbGroup(total, rels)
            self._blocks = blocks
            return
        # compatibility rows: res(x, y) s_x = s_y over covering pairs within
        # a component (down-closedness makes covering pairs sufficient)
        pairs = []
        for ci, comp in enumerate(obj.components):
            for (x, y) in space.hasse_down:
                if x in comp and y in comp:
                    pairs.append((ci, x, y))
        rows = []
        rels = []
        row_groups = []
        for ci, x, y in pairs:
            gy = F.stalk(y)
            row_groups.append(gy)
            block = [[0] * n for _ in range(gy.ngens)]
            hx = F.res(x, y)
            ox = self.offsets[self.slot_index[(ci, x)]]
            oy = self.offsets[self.slot_index[(ci, y)]]
            for a in range(gy.ngens):
                for b in range(F.stalk(x).ngens):
                    block[a][ox + b] = hx.matrix[a][b]
                block[a][oy + a] -= 1
            rows.extend(block)
        # relations of the product group
        amb_rels = []
        for off, g in zip(self.offsets, self.slot_groups):
            for r in g.rels:
                c = [0] * n
                c[off : off + g.ngens] = r
                amb_rels.append(c)
        # relations of the target product (one block per pair row group)
        tgt_rels = []
        nrows = len(rows)
        roff = 0
        for g in row_groups:
            for r in g.rels:
                c = [0] * nrows
                c[roff : roff + g.ngens] = r
                tgt_rels.append(c)
            roff += g.ngens
        aug = abgrp.hstack(rows, abgrp.from_columns(tgt_rels, nrows)) if rows else []
        if rows:
            kb = abgrp.kernel_basis(aug)
            lat = [c[:n] for c in kb] + amb_rels
        else:
            lat = abgrp.columns(abgrp.identity(n))
        self.basis = abgrp.column_hnf(lat, n)
        self._pivots = abgrp.basis_pivots(self.basis)
        grels = []
        for r in amb_rels:
            e = abgrp.express_in_basis(self.basis, r, self._pivots)
            grels.append(e)
        self.group = FpAbGroup(len(self.basis), grels)

    def ambient_coords(self, el):
        if self._blocks is not None:
            v = []
            for _, go, sg in self._blocks:
                sub = Element(sg.group, el.coords[go : go + sg.group.ngens])
                v.extend(sg.ambient_coords(sub))
            return v
        v = [0] * self.ambient_ngens
        for q, col in zip(el.coords, self.basis):
            if q:
                for i, x in enumerate(col):
                    v[i] += q * x
        return v

    def from_ambient(self, v):
        e = self._express(v)
        if e is None:
            raise ValueError("ambient vector is not a compatible family")
        return Element(self.group, e)

    def try_from_ambient(self, v):
        e = self._express(v)
        return None if e is None else Element(self.group, e)

    def _express(self, v):
        if self._blocks is not None:
            coords = []
            for ao, _, sg in self._blocks:
                e = sg._express(v[ao : ao + sg.ambient_ngens])
                if e is None:
                    return None
                coords.extend(e)
            return coords
        return abgrp.express_in_basis(self.basis, v, self._pivots)

    def value(self, el, ci, p):
        """Stalk value of a section at point p of component ci."""
        k = self.slot_index[(ci, p)]
        off = self.offsets[k]
        amb = self.ambient_coords(el)
        return Element(self.slot_groups[k], amb[off : off + self.slot_groups[k].ngens])

    def assemble(self, values):
        """Section from per-slot stalk elements (must be compatible)."""
        v = []
        for g, el in zip(self.slot_groups, values):
            if el.group != g:
                raise ValueError("stalk value in wrong group")
            v.extend(el.coords)
        return self.from_ambient(v)

class SheafHom:
    def __init__(self, source, target, comps, check=True):
        if source.space is not target.space:
            raise ValueError("sheaf hom between different spaces")
        self.source = source
        self.target = target
        self.comps = dict(comps)
        if check:
            space = source.space
            for x in space.points:
                h = self.comps[x]
                if h.source != source.stalk(x) or h.target != target.stalk(x):
                    raise ValueError("bad component at %r" % (x,))
            for (x, y) in space.hasse_down:
                lhs = target.res(x, y).compose(self.comps[x])
                rhs = self.comps[y].compose(source.res(x, y))
                if not lhs.equals(rhs):
                    raise ValueError("sheaf hom is not natural")

    def compose(self, other):
        return SheafHom(
            other.source,
            self.target,
            {x: self.comps[x].compose(other.comps[x]) for x in self.comps},
            check=False,
        )

    def on_sections(self, obj):
        """Induced hom on sections over a site object."""
        key = (id(self.source), id(self.target), obj.key, id(self))
        cache = self.source._hom_sections
        h = cache.get(key)
        if h is not None:
            return h
        src = self.source.sections(obj)
        tgt = self.target.sections(obj)
        cols = []
        for i in range(src.group.ngens):
            amb = src.ambient_coords(src.group.gen(i))
            out = [0] * tgt.ambient_ngens
            for k, (ci, p) in enumerate(src.slots):
                hp = self.comps[p]
                soff = src.offsets[k]
                toff = tgt.offsets[k]
                piece = abgrp.mat_vec(hp.matrix, amb[soff : soff + hp.source.ngens])
                for a, x in enumerate(piece):
                    out[toff + a] += x
            cols.append(tgt.from_ambient(out).coords)
        h = GroupHom(src.group, tgt.group, abgrp.from_columns(cols, tgt.group.ngens), check=False)
        cache[key] = h
        return h

    def apply_ambient(self, src_layout, tgt_layout, amb):
        """Stalkwise image of an ambient family, as an ambient vector."""
        out = [0] * tgt_layout.ambient_ngens
        for k, (ci, p) in enumerate(src_layout.slots):
            hp = self.comps[p]
            soff = src_layout.offsets[k]
            toff = tgt_layout.offsets[k]
            piece = abgrp.mat_vec(hp.matrix, amb[soff : soff + hp.source.ngens])
            for a, x in enumerate(piece):
                out[toff + a] += x
        return out

    def solve_sections(self, obj, amb, layout=None):
        """Source section x over obj with hom(x) equal to the family given
        by a target-ambient vector, or None; solved component by component
        so the target section group over obj is never assembled."""
        if layout is None:
            layout = AmbientLayout(self.target, obj)
        space = self.source.space
        solvers = self.source._hom_sections.setdefault(("solver", id(self)), {})
        coords = []
        for ci, start, stop in layout.component_slices():
            single = SiteObject(space, [obj.components[ci]])
            tgt_sg = self.target.sections(single)
            rhs = tgt_sg.try_from_ambient(amb[start:stop])
            if rhs is None:
                return None
            solver = solvers.get(single.key)
            if solver is None:
                solver = abgrp.HomSolver(self.on_sections(single))
                solvers[single.key] = solver
            x = solver.solve(rhs)
            if x is None:
                return None
            coords.extend(x.coords)
        return self.source.sections(obj).group.element(coords)


def solve_pullback_sections(F, mor, amb, layout=None):
    """Section y of F over mor.target whose pullback along mor equals the
    family given by an ambient vector over mor.source, or None.  Solved as
    one small stacked system per target component, so the section group of
    a large source object is never assembled."""
    space = F.space
    if layout is None:
        layout = AmbientLayout(F, mor.source)
    slices = layout.component_slices()
    by_target = {}
    for ci, start, stop in slices:
        by_target.setdefault(mor.cmap[ci], []).append((ci, start, stop))
    coords = []
    for j, compj in enumerate(mor.target.components):
        singlej = SiteObject(space, [compj])
        sgj = F.sections(singlej)
        homs, parts = [], []
        for ci, start, stop in by_target.get(j, []):
            single = SiteObject(space, [mor.source.components[ci]])
            sgc = F.sections(single)
            homs.append(F.pullback(SiteMorphism(single, singlej, (0,))))
            rhs = sgc.try_from_ambient(amb[start:stop])
            if rhs is None:
                return None
            parts.append(rhs)
        if not homs:
            coords.extend([0] * sgj.group.ngens)
            continue
        tgt, stacked = abgrp.stacked_hom(sgj.group, homs)
        y = abgrp.solve_hom(stacked, tgt.assemble(parts))
        if y is None:
            return None
        coords.extend(y.coords)
    return F.sections(mor.target).group.element(coords)


def constant_sheaf(space, group, name=None):
    stalks = {p: group for p in space.points}
    res = {}
    for x in space.points:
        for y in space.points:
            if y != x and space.le(y, x):
                res[(x, y)] = abgrp.identity_hom(group)
    return Sheaf(space, stalks, res, name=name or "const", check=False)


def skyscraper_sheaf(space, point, group, name=None):
    zero = FpAbGroup(0)
    stalks = {p: (group if space.le(point, p) else zero) for p in space.points}
    res = {}
    for x in space.points:
        for y in space.points:
            if y != x and space.le(y, x):
                if space.le(point, y):
                    res[(x, y)] = abgrp.identity_hom(group)
                else:
                    res[(x, y)] = abgrp.zero_hom(stalks[x], zero)
    return Sheaf(space, stalks, res, name=name or "sky(%r)" % (point,), check=False)


def sheaf_hom_constant(source, target, hom):
    """Sheaf hom between constant-style sheaves from one GroupHom applied
    at every stalk (stalk groups must match pointwise)."""
    return SheafHom(source, target, {p: hom for p in source.space.points}, check=False)


def zero_sheaf(space):
    return constant_sheaf(space, FpAbGroup(0), name="0")


# ---------------------------------------------------------------------------
# flasque (Godement-style) resolution


def _stalk_product_sheaf(F):
    """(I0, aug, slot table): I0 has stalk prod_{x <= p} F_x, aug is the
    canonical inclusion of F."""
    space = F.space
    slot_lists = {
        p: sorted(space.down(p), key=space.index.get) for p in space.points
    }
    sums = {p: DirectSum([F.stalk(x) for x in slot_lists[p]]) for p in space.points}
    stalks = {p: sums[p].group for p in space.points}
    res = {}
    for x in space.points:
        for y in space.points:
            if y != x and space.le(y, x):
                m = abgrp.zeros(stalks[y].ngens, stalks[x].ngens)
                for k, pt in enumerate(slot_lists[y]):
                    src_k = slot_lists[x].index(pt)
                    soff = sums[x].offsets[src_k]
                    toff = sums[y].offsets[k]
                    for a in range(F.stalk(pt).ngens):
                        m[toff + a][soff + a] = 1
                res[(x, y)] = GroupHom(stalks[x], stalks[y], m, check=False)
    name = "I0(%s)" % (F.name or "?")
    I0 = Sheaf(space, stalks, res, name=name, check=False)
    aug = {}
    for p in space.points:
        rows = []
        for pt in slot_lists[p]:
            rows.extend(F.res(p, pt).matrix)
        aug[p] = GroupHom(F.stalk(p), stalks[p], rows, check=False)
    I0._slot_lists = slot_lists
    I0._slot_sums = sums
    return I0, SheafHom(F, I0, aug, check=False)


def quotient_sheaf(h):
    """Pointwise cokernel of an injective-enough sheaf hom, with the
    projection.  Generator coordinates of the target are reused."""
    space = h.source.space
    stalks = {}
    proj = {}
    for p in space.points:
        c, pr = abgrp.cokernel(h.comps[p])
        stalks[p] = c
        proj[p] = pr
    res = {}
    for x in space.points:
        for y in space.points:
            if y != x and space.le(y, x):
                res[(x, y)] = GroupHom(stalks[x], stalks[y], h.target.res(x, y).matrix, check=True)
    q = Sheaf(space, stalks, res, name="(%s)/im" % (h.target.name or "?"), check=False)
    return q, SheafHom(h.target, q, proj, check=False)


def godement_resolution(F, length):
    """Terms [(I^0, aug), (I^1, d^0), ..., (I^length, d^{length-1})].

    The resolution of a sheaf on a finite poset vanishes beyond the height
    of the poset; trailing terms are genuine zero sheaves.
    """
    if F._godement is None:
        F._godement = []
        F._zq = []
    chain = F._godement
    while len(chain) <= length:
        k = len(chain)
        if k == 0:
            I0, aug = _stalk_product_sheaf(F)
            chain.append((I0, aug))
            F._zq.append(None)
        else:
            # augmentation into I^{k-1}: from F when k = 1, else from Z^{k-1}
            into = chain[0][1] if k == 1 else F._zq[k - 1][2]
            zk, proj = quotient_sheaf(into)
            Ik, aug_z = _stalk_product_sheaf(zk)
            d = aug_z.compose(proj)
            F._zq.append((zk, proj, aug_z))
            chain.append((Ik, d))
    return chain[: length + 1]


def godement_quotient(F):
    """(Q, proj, incl): Q = I^0/F computed pointwise, proj : I^0 -> Q, and
    the canonical inclusion incl : Q -> I^1."""
    godement_resolution(F, 1)
    zk, proj, aug_z = F._zq[1]
    return zk, proj, aug_z


def godement_hom(h, k):
    """Functorial hom I^k(F) -> I^k(G) induced by a sheaf hom h : F -> G."""
    F, G = h.source, h.target
    rf = godement_resolution(F, k)
    rg = godement_resolution(G, k)
    if k == 0:
        return _stalk_product_hom(h, rf[0][0], rg[0][0])
    # quotient-level hom Z^k(F) -> Z^k(G) reuses the I^{k-1} matrices
    hk_prev = godement_hom(h, k - 1)
    zf, _, _ = F._zq[k]
    zg, _, _ = G._zq[k]
    zh = SheafHom(
        zf,
        zg,
        {p: GroupHom(zf.stalk(p), zg.stalk(p), hk_prev.comps[p].matrix) for p in F.space.points},
        check=False,
    )
    return _stalk_product_hom(zh, rf[k][0], rg[k][0])


def _stalk_product_hom(h, I0f, I0g):
    space = h.source.space
    comps = {}
    for p in space.points:
        slot = I0f._slot_lists[p]
        m = abgrp.zeros(I0g.stalk(p).ngens, I0f.stalk(p).ngens)
        for k, pt in enumerate(slot):
            soff = I0f._slot_sums[p].offsets[k]
            toff = I0g._slot_sums[p].offsets[k]
            hp = h.comps[pt]
            for a, row in enumerate(hp.matrix):
                for b, x in enumerate(row):
                    if x:
                        m[toff + a][soff + b] = x
        comps[p] = GroupHom(I0f.stalk(p), I0g.stalk(p), m, check=False)
    return SheafHom(I0f, I0g, comps, check=False)
