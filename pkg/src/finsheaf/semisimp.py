"""Semi-simplicial coverings of a finite-space site: Cech coverings,
coskeleta, hypercoverings, refinements and homotopies.

A semi-simplicial covering has levels U_0, U_1, ... over a base object,
face operators U_n -> U_{n-1} satisfying f_i f_j = f_{j-1} f_i for i < j,
and jointly surjective structure maps.  A hypercovering of type r is
determined by its truncation in degrees <= r; higher levels are computed
as coskeleton levels by enumerating matching families over the injections
[m] -> [n] with m <= r.  Type -1 is the constant covering, type 0 the
Cech covering of a cover.
"""

from __future__ import annotations

from itertools import combinations

from .finsite import (
    CoveringFamily,
    SiteMorphism,
    SiteObject,
    fiber_product,
    identity_morphism,
)


def _subsets_upto(n, size):
    """Nonempty subsets of {0..n} with at most `size` elements, sorted."""
    out = []
    for k in range(1, size + 1):
        out.extend(combinations(range(n + 1), k))
    return out


class Hypercovering:
    """A hypercovering of type r, materialized up to a chosen depth.

    trunc_levels / trunc_faces / aug describe degrees <= r; degrees above r
    are coskeleton levels whose components are matching families, stored as
    tuples ((subset, component), ...) sorted by subset.
    """

    def __init__(self, base, trunc_levels, trunc_faces, aug, type_r, depth):
        self.base = base
        self.space = base.space
        self.type_r = type_r
        self.trunc_levels = list(trunc_levels)
        self.trunc_faces = [list(fs) for fs in trunc_faces]
        self.aug = aug
        if type_r >= 0:
            if len(self.trunc_levels) != type_r + 1:
                raise ValueError("truncation must have levels 0..r")
            if aug is None or aug.source != self.trunc_levels[0] or not aug.is_cover():
                raise ValueError("augmentation must cover the base")
        else:
            self.aug = identity_morphism(base)
        self.levels = []
        self.faces = []  # faces[n] : list of morphisms level n -> n-1 (None at 0)
        self.family_index = []
        self._base_comp = []  # per level: component -> base component index
        self.depth = -1
        self._validate_truncation()
        self.extend(depth)

    # -- truncation checks -------------------------------------------------

    def _validate_truncation(self):
        r = self.type_r
        for n in range(1, r + 1):
            fs = self.trunc_faces[n]
            if len(fs) != n + 1:
                raise ValueError("level %d needs %d faces" % (n, n + 1))
            for f in fs:
                if f.source != self.trunc_levels[n] or f.target != self.trunc_levels[n - 1]:
                    raise ValueError("face with wrong endpoints at level %d" % n)
                if not f.is_cover():
                    raise ValueError("face maps must be coverings")
            for i in range(n):
                for j in range(i + 1, n + 1):
                    if n >= 2:
                        lhs = self.trunc_faces[n - 1][i].compose(fs[j])
                        rhs = self.trunc_faces[n - 1][j - 1].compose(fs[i])
                        if lhs != rhs:
                            raise ValueError("simplicial identity fails at level %d" % n)
            if n == 1:
                if self.aug.compose(fs[0]) != self.aug.compose(fs[1]):
                    raise ValueError("faces do not agree over the base")

    # -- level construction ------------------------------------------------

    def extend(self, depth):
        while self.depth < depth:
            n = self.depth + 1
            if n <= self.type_r:
                self.levels.append(self.trunc_levels[n])
                self.faces.append(list(self.trunc_faces[n]) if n >= 1 else None)
                self.family_index.append(None)
            else:
                self._build_coskeleton_level(n)
            lv = self.levels[n]
            if n == 0:
                bc = list(self.aug.cmap) if self.type_r >= 0 else list(range(len(lv.components)))
            else:
                f0 = self.faces[n][0]
                bc = [self._base_comp[n - 1][f0.cmap[i]] for i in range(len(lv.components))]
            self._base_comp.append(bc)
            self.depth = n
        return self

    def face_value(self, n, comp, subset):
        """Component of level |subset|-1 obtained from a component of level
        n by the monotone injection with image `subset` of {0..n}."""
        cur = list(range(n + 1))
        c = comp
        lvl = n
        keep = set(subset)
        while lvl + 1 > len(keep):
            # remove the largest index not kept
            for pos in range(lvl, -1, -1):
                if cur[pos] not in keep:
                    break
            c = self.faces[lvl][pos].cmap[c]
            del cur[pos]
            lvl -= 1
        return c

    def _build_coskeleton_level(self, n):
        r = self.type_r
        space = self.space
        subsets = _subsets_upto(n, r + 1)
        tops = [s for s in subsets if len(s) == r + 1]
        found = []

        if r < 0:
            # constant covering: every level is the base with identity faces
            self.levels.append(self.base)
            self.family_index.append(None)
            self.faces.append(
                [identity_morphism(self.base) for _ in range(n + 1)] if n >= 1 else None
            )
            return
        else:
            base_open = [set(c) for c in self.base.components]

            def backtrack(ti, assign, open_now, bcomp):
                if ti == len(tops):
                    key = tuple(sorted(assign.items()))
                    found.append((key, frozenset(open_now), bcomp))
                    return
                top = tops[ti]
                lvl = r
                for c in range(len(self.trunc_levels[r].components)):
                    if bcomp is not None and self._trunc_base_comp(r, c) != bcomp:
                        continue
                    sub_vals = {}
                    ok = True
                    for s in _subsets_upto(n, r + 1):
                        if not set(s) <= set(top):
                            continue
                        rel = tuple(sorted(top.index(x) for x in s))
                        v = self._trunc_face_value(r, c, rel)
                        prev = assign.get(s, sub_vals.get(s))
                        if prev is not None and prev != v:
                            ok = False
                            break
                        sub_vals[s] = v
                    if not ok:
                        continue
                    new_open = open_now & self.trunc_levels[r].components[c]
                    if not new_open:
                        continue
                    new_assign = dict(assign)
                    new_assign.update(sub_vals)
                    backtrack(
                        ti + 1,
                        new_assign,
                        new_open,
                        self._trunc_base_comp(r, c) if bcomp is None else bcomp,
                    )

            for bi in range(len(self.base.components)):
                backtrack(0, {}, set(self.base.components[bi]), bi)
            if tops:
                # bcomp recorded during search; recompute key ordering
                fixed = []
                for key, op, bc in found:
                    if bc is None:
                        bc = self._trunc_base_comp(0, dict(key)[(0,)])
                    fixed.append((key, op, bc))
                found = fixed
                # deduplicate identical families found from the seed loop
                seen = {}
                for key, op, bc in found:
                    seen[key] = (key, op, bc)
                found = list(seen.values())
        found.sort(key=lambda t: t[0])
        comps = [frozenset(op) for _, op, _ in found]
        lv = SiteObject(space, comps)
        fidx = {key: i for i, (key, _, _) in enumerate(found)}
        self.levels.append(lv)
        self.family_index.append(fidx)
        # faces by precomposition with the coface [n-1] -> [n] skipping j
        faces = []
        for j in range(n + 1):
            cmap = []
            for key, _, _ in found:
                fam = dict(key)
                if n - 1 <= self.type_r:
                    full = tuple(range(n))
                    img = tuple(x if x < j else x + 1 for x in full)
                    cmap.append(fam[img])
                else:
                    sub = {}
                    for s in _subsets_upto(n - 1, self.type_r + 1):
                        img = tuple(x if x < j else x + 1 for x in s)
                        sub[s] = fam[img]
                    skey = tuple(sorted(sub.items()))
                    cmap.append(self.family_index[n - 1][skey])
            faces.append(SiteMorphism(lv, self.levels[n - 1], cmap))
        self.faces.append(faces)

    def _trunc_base_comp(self, m, comp):
        c = comp
        for lvl in range(m, 0, -1):
            c = self.trunc_faces[lvl][0].cmap[c]
        return self.aug.cmap[c]

    def _trunc_face_value(self, m, comp, rel_subset):
        """Like face_value but inside the truncation (level m <= r)."""
        cur = list(range(m + 1))
        c = comp
        lvl = m
        keep = set(rel_subset)
        while lvl + 1 > len(keep):
            for pos in range(lvl, -1, -1):
                if cur[pos] not in keep:
                    break
            c = self.trunc_faces[lvl][pos].cmap[c] if lvl >= 1 else c
            del cur[pos]
            lvl -= 1
        return c

    # -- accessors ---------------------------------------------------------

    def level(self, n):
        self.extend(n)
        return self.levels[n]

    def face(self, n, i):
        self.extend(n)
        return self.faces[n][i]

    def face_list(self, n):
        self.extend(n)
        return list(self.faces[n])

    def structure_map(self, n):
        """Canonical morphism level n -> base (any face path gives it)."""
        self.extend(n)
        mor = self.aug
        for lvl in range(1, n + 1):
            mor = mor.compose(self.faces[lvl][0])
        return mor

    def validate(self, depth=None):
        depth = self.depth if depth is None else depth
        self.extend(depth)
        for n in range(1, depth + 1):
            fs = self.faces[n]
            for f in fs:
                if not f.is_cover():
                    raise ValueError("face at level %d is not a covering" % n)
            if n >= 2:
                for i in range(n):
                    for j in range(i + 1, n + 1):
                        if self.faces[n - 1][i].compose(fs[j]) != self.faces[n - 1][j - 1].compose(fs[i]):
                            raise ValueError("simplicial identity fails at level %d" % n)
            else:
                if self.aug.compose(fs[0]) != self.aug.compose(fs[1]):
                    raise ValueError("faces do not agree over the base")
        if not self.aug.is_cover():
            raise ValueError("augmentation is not a covering")
        return True


def constant_covering(base, depth=4):
    """Type -1: every level is the base itself."""
    return Hypercovering(base, [], [[]], None, -1, depth)


def cech_covering(u, depth=4):
    """Type 0: Cech covering of a covering morphism u."""
    if not u.is_cover():
        raise ValueError("cech_covering needs a covering morphism")
    return Hypercovering(u.target, [u.source], [[]], u, 0, depth)


def coskeleton(base, trunc_levels, trunc_faces, aug, r, depth=4):
    """Hypercovering of type r from a truncation in degrees <= r."""
    return Hypercovering(base, trunc_levels, trunc_faces, aug, r, depth)


def raise_type(h, r_new, depth=None):
    """Re-present a hypercovering of type r as one of type r_new >= r by
    taking its degree-<= r_new truncation as the generating data."""
    if r_new < h.type_r:
        raise ValueError("raise_type cannot lower the type")
    if depth is None:
        depth = max(h.depth, r_new + 1)
    levels = [h.level(n) for n in range(r_new + 1)]
    faces = [h.face_list(n) if n >= 1 else [] for n in range(r_new + 1)]
    return Hypercovering(h.base, levels, faces, h.aug, r_new, depth)


class Refinement:
    """A morphism of semi-simplicial coverings over the same base."""

    def __init__(self, source, target, maps, check=True):
        self.source = source
        self.target = target
        self.maps = list(maps)
        if check:
            self.validate()

    def map(self, n):
        while len(self.maps) <= n:
            self.maps.append(induced_coskeleton_map(self.source, self.target, len(self.maps), self.maps))
        return self.maps[n]

    def validate(self):
        depth = len(self.maps) - 1
        for n in range(depth + 1):
            m = self.maps[n]
            if m.source != self.source.level(n) or m.target != self.target.level(n):
                raise ValueError("refinement level %d has wrong endpoints" % n)
        if self.target.aug.compose(self.maps[0]) != self.source.aug:
            raise ValueError("refinement does not respect the augmentation")
        for n in range(1, depth + 1):
            for i in range(n + 1):
                lhs = self.target.face(n, i).compose(self.maps[n])
                rhs = self.maps[n - 1].compose(self.source.face(n, i))
                if lhs != rhs:
                    raise ValueError("refinement does not commute with face %d at level %d" % (i, n))
        return True


def induced_coskeleton_map(src, tgt, n, lower_maps):
    """Level-n morphism src level -> tgt level induced by the truncation
    morphism recorded in lower_maps (levels <= tgt.type_r)."""
    r = tgt.type_r
    if n <= r:
        raise ValueError("level %d is part of the truncation" % n)
    src_lv = src.level(n)
    tgt.extend(n)
    cmap = []
    for c in range(len(src_lv.components)):
        if r < 0:
            key = ()
            # constant target: component is the base component
            bci = src._base_comp[n][c]
            cmap.append(bci)
            continue
        fam = {}
        for s in _subsets_upto(n, r + 1):
            v = src.face_value(n, c, s)
            fam[s] = lower_maps[len(s) - 1].cmap[v]
        key = tuple(sorted(fam.items()))
        cmap.append(tgt.family_index[n][key])
    return SiteMorphism(src_lv, tgt.level(n), cmap)


def refinement_from_truncation(src, tgt, lower_maps, depth=None):
    """Refinement whose maps in degrees <= tgt.type_r are given and whose
    higher degrees are induced on coskeleton levels."""
    depth = depth if depth is not None else min(src.depth, tgt.depth)
    maps = list(lower_maps)
    while len(maps) <= depth:
        maps.append(induced_coskeleton_map(src, tgt, len(maps), lower_maps))
    return Refinement(src, tgt, maps)


def identity_refinement(h, depth=None):
    depth = depth if depth is not None else h.depth
    return Refinement(h, h, [identity_morphism(h.level(n)) for n in range(depth + 1)], check=False)


def refine_hypercovering(h, d, w):
    """Refine a hypercovering at degree d by a covering family w of its
    degree-d level; degrees above d are re-coskeletonized.

    Returns (refined hypercovering, canonical Refinement into h).  Only
    refinement at the top truncation degree d = type r is supported.
    """
    r = h.type_r
    if d > r:
        raise ValueError("cannot refine at degree %d > type %d" % (d, r))
    if d < r:
        raise NotImplementedError("refinement below the top truncation degree")
    if not isinstance(w, CoveringFamily) or w.target != h.level(d):
        raise ValueError("w must be a covering family of the degree-%d level" % d)
    c = w.covering_single()
    trunc_levels = [h.level(e) for e in range(d)] + [c.source]
    trunc_faces = [[]] + [[h.face(e, i) for i in range(e + 1)] for e in range(1, d)]
    if d >= 1:
        trunc_faces.append([h.face(d, i).compose(c) for i in range(d + 1)])
        aug = h.aug
    else:
        aug = h.aug.compose(c)
    new = Hypercovering(h.base, trunc_levels, trunc_faces, aug, r, h.depth)
    lower = [identity_morphism(h.level(e)) for e in range(d)] + [c]
    ref = refinement_from_truncation(new, h, lower, depth=h.depth)
    return new, ref


def common_refinement(h1, h2, depth=None):
    """Degree-wise fiber product of truncations, coskeletonized.

    Returns (P, Refinement P -> h1, Refinement P -> h2).
    """
    if h1.base != h2.base:
        raise ValueError("hypercoverings over different bases")
    depth = depth if depth is not None else min(h1.depth, h2.depth)
    r = max(h1.type_r, h2.type_r)
    if r < 0:
        p = constant_covering(h1.base, depth)
        return (
            p,
            refinement_from_truncation(p, h1, [], depth=depth),
            refinement_from_truncation(p, h2, [], depth=depth),
        )
    levels = []
    faces = [[]]
    pr1, pr2 = [], []
    pair_index = []
    for e in range(r + 1):
        pe, a, b = fiber_product(h1.structure_map(e), h2.structure_map(e))
        levels.append(pe)
        pr1.append(a)
        pr2.append(b)
        pair_index.append({(a.cmap[k], b.cmap[k]): k for k in range(len(pe.components))})
        if e >= 1:
            fs = []
            for i in range(e + 1):
                cmap = [
                    pair_index[e - 1][(h1.face(e, i).cmap[a.cmap[k]], h2.face(e, i).cmap[b.cmap[k]])]
                    for k in range(len(pe.components))
                ]
                fs.append(SiteMorphism(pe, levels[e - 1], cmap))
            faces.append(fs)
    aug = h1.aug.compose(pr1[0])
    p = Hypercovering(h1.base, levels, faces, aug, r, depth)
    ref1 = refinement_from_truncation(p, h1, [pr1[e] for e in range(h1.type_r + 1)], depth=depth)
    ref2 = refinement_from_truncation(p, h2, [pr2[e] for e in range(h2.type_r + 1)], depth=depth)
    return p, ref1, ref2


class Homotopy:
    """A simplicial homotopy between two refinements theta, zeta : U -> V.

    maps[n] is the list h_0, ..., h_n of morphisms U_n -> V_{n+1}; the
    operators satisfy f_0 h_0 = theta, f_{n+1} h_n = zeta and the usual
    interchange identities with the faces.
    """

    def __init__(self, theta, zeta, maps, check=True):
        if theta.source is not zeta.source or theta.target is not zeta.target:
            raise ValueError("homotopy needs parallel refinements")
        self.theta = theta
        self.zeta = zeta
        self.maps = [list(ms) for ms in maps]
        if check:
            self.validate()

    @property
    def source(self):
        return self.theta.source

    @property
    def target(self):
        return self.theta.target

    def validate(self):
        u, v = self.source, self.target
        for n, hs in enumerate(self.maps):
            if len(hs) != n + 1:
                raise ValueError("level %d needs %d homotopy operators" % (n, n + 1))
            for j, h in enumerate(hs):
                if h.source != u.level(n) or h.target != v.level(n + 1):
                    raise ValueError("homotopy operator with wrong endpoints")
            if v.face(n + 1, 0).compose(hs[0]) != self.theta.map(n):
                raise ValueError("f_0 h_0 != theta at level %d" % n)
            if v.face(n + 1, n + 1).compose(hs[n]) != self.zeta.map(n):
                raise ValueError("f_{n+1} h_n != zeta at level %d" % n)
            for i in range(n + 2):
                for j in range(n + 1):
                    f = v.face(n + 1, i)
                    if i < j:
                        if n >= 1:
                            lhs = f.compose(hs[j])
                            rhs = self.maps[n - 1][j - 1].compose(u.face(n, i))
                            if lhs != rhs:
                                raise ValueError("homotopy identity i<j fails")
                    elif i == j and 1 <= i <= n:
                        if not f.compose(hs[i]).__eq__(f.compose(hs[i - 1])):
                            raise ValueError("homotopy identity i=j fails")
                    elif i == j + 1 and 1 <= i <= n:
                        if f.compose(hs[j]) != f.compose(hs[i]):
                            raise ValueError("homotopy identity i=j+1 fails")
                    elif i > j + 1:
                        if n >= 1:
                            lhs = f.compose(hs[j])
                            rhs = self.maps[n - 1][j].compose(u.face(n, i - 1))
                            if lhs != rhs:
                                raise ValueError("homotopy identity i>j+1 fails")
        return True


def refinement_from_cover_map(hu, hv, kappa, depth=None):
    """Refinement of Cech coverings induced by a map of covers."""
    if hu.type_r != 0 or hv.type_r != 0:
        raise ValueError("cover-map refinements need Cech coverings")
    if hv.aug.compose(kappa) != hu.aug:
        raise ValueError("cover map does not commute with the covers")
    depth = depth if depth is not None else min(hu.depth, hv.depth)
    return refinement_from_truncation(hu, hv, [kappa], depth=depth)


def cech_homotopy(hu, hv, kappa, lam, depth=None):
    """The prism homotopy between the refinements of Cech coverings induced
    by two maps of covers kappa, lam : W_U -> W_V."""
    depth = depth if depth is not None else min(hu.depth, hv.depth - 1)
    theta = refinement_from_cover_map(hu, hv, kappa, depth=depth + 1)
    zeta = refinement_from_cover_map(hu, hv, lam, depth=depth + 1)
    maps = []
    for n in range(depth + 1):
        un = hu.level(n)
        hs = []
        for i in range(n + 1):
            cmap = []
            for c in range(len(un.components)):
                verts = [hu.face_value(n, c, (j,)) for j in range(n + 1)]
                fam = {}
                for jp in range(n + 2):
                    if jp <= i:
                        fam[(jp,)] = lam.cmap[verts[jp]]
                    else:
                        fam[(jp,)] = kappa.cmap[verts[jp - 1]]
                key = tuple(sorted(fam.items()))
                cmap.append(hv.family_index[n + 1][key])
            hs.append(SiteMorphism(un, hv.level(n + 1), cmap))
        maps.append(hs)
    return Homotopy(theta, zeta, maps)
