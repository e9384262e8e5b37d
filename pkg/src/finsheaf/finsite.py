"""Finite topological spaces and their site of open-set families.

A finite space is a finite poset; the opens are the down-closed subsets,
so the minimal open neighbourhood of a point x is the down-set of x.
Site objects are formal finite disjoint unions of opens, morphisms are
componentwise inclusions, and covering families are jointly surjective
families.  Fiber products are computed componentwise by intersection,
omitting empty components, with components ordered lexicographically.
"""

from __future__ import annotations

import json
from itertools import product as _iproduct


class FinSpace:
    """A finite poset, presented by points and generating order relations."""

    def __init__(self, points, order_pairs, name=None):
        self.points = list(points)
        if len(set(self.points)) != len(self.points):
            raise ValueError("duplicate points")
        self.index = {p: i for i, p in enumerate(self.points)}
        self.name = name
        leq = {(p, p) for p in self.points}
        for a, b in order_pairs:
            if a not in self.index or b not in self.index:
                raise ValueError("order pair mentions unknown point")
            leq.add((a, b))
        # transitive closure
        changed = True
        while changed:
            changed = False
            for a, b in list(leq):
                for c in self.points:
                    if (b, c) in leq and (a, c) not in leq:
                        leq.add((a, c))
                        changed = True
        for a, b in leq:
            if a != b and (b, a) in leq:
                raise ValueError("order is not antisymmetric")
        self.leq = leq
        self._down = {
            p: frozenset(q for q in self.points if (q, p) in self.leq) for p in self.points
        }
        # covering pairs (x, y): y < x with nothing strictly between
        self.hasse_down = []
        for x in self.points:
            for y in self.points:
                if y != x and (y, x) in leq:
                    if not any(
                        z != x and z != y and (y, z) in leq and (z, x) in leq
                        for z in self.points
                    ):
                        self.hasse_down.append((x, y))

    def le(self, a, b):
        return (a, b) in self.leq

    def down(self, p):
        return self._down[p]

    def is_open(self, s):
        s = frozenset(s)
        return all(self._down[p] <= s for p in s)

    def open_sets(self):
        """All open subsets (use only on small spaces)."""
        opens = []
        pts = self.points
        for mask in range(1 << len(pts)):
            s = frozenset(p for i, p in enumerate(pts) if mask >> i & 1)
            if self.is_open(s):
                opens.append(s)
        return opens

    def whole(self):
        return SiteObject(self, [frozenset(self.points)])

    def minimal_open_cover(self, obj=None):
        """Cover of obj (default: the whole space) by minimal opens of its
        points, as a CoveringFamily."""
        if obj is None:
            obj = self.whole()
        mors = []
        for ci, comp in enumerate(obj.components):
            for p in sorted(comp, key=self.index.get):
                src = SiteObject(self, [self._down[p]])
                mors.append(SiteMorphism(src, obj, [ci]))
        return CoveringFamily(obj, mors)

    def point_key(self, s):
        return tuple(sorted(self.index[p] for p in s))

    def to_json(self):
        pairs = sorted(
            [list(p) for p in self.leq if p[0] != p[1]],
            key=lambda ab: (self.index[ab[0]], self.index[ab[1]]),
        )
        return {"points": list(self.points), "order": pairs}

    @staticmethod
    def from_json(data, name=None):
        return FinSpace(data["points"], [tuple(p) for p in data["order"]], name=name)

    def __repr__(self):
        return "FinSpace(%s, %d points)" % (self.name or "?", len(self.points))


class SiteObject:
    """A formal finite disjoint union of opens of a fixed finite space."""

    def __init__(self, space, components):
        self.space = space
        comps = []
        for c in components:
            c = frozenset(c)
            if not space.is_open(c):
                raise ValueError("component is not open: %r" % (sorted(c),))
            if not c:
                raise ValueError("empty components are omitted, not listed")
            comps.append(c)
        self.components = tuple(comps)
        self.key = tuple(space.point_key(c) for c in self.components)

    def is_empty(self):
        return not self.components

    def __len__(self):
        return len(self.components)

    def __eq__(self, other):
        return (
            isinstance(other, SiteObject)
            and self.space is other.space
            and self.key == other.key
        )

    def __hash__(self):
        return hash((id(self.space), self.key))

    def to_json(self):
        return {"components": [sorted(c, key=self.space.index.get) for c in self.components]}

    @staticmethod
    def from_json(space, data):
        return SiteObject(space, [frozenset(c) for c in data["components"]])

    def __repr__(self):
        return "SiteObject(%d components)" % len(self.components)


def empty_object(space):
    return SiteObject(space, [])


class SiteMorphism:
    """Componentwise inclusion: component i of the source is contained in
    component cmap[i] of the target."""

    def __init__(self, source, target, cmap):
        if source.space is not target.space:
            raise ValueError("morphism between different spaces")
        self.source = source
        self.target = target
        self.cmap = tuple(cmap)
        if len(self.cmap) != len(source.components):
            raise ValueError("component map length mismatch")
        for i, j in enumerate(self.cmap):
            if not 0 <= j < len(target.components):
                raise ValueError("component map out of range")
            if not source.components[i] <= target.components[j]:
                raise ValueError("component %d is not included in its image" % i)

    def compose(self, other):
        """self after other."""
        if other.target != self.source:
            raise ValueError("composition mismatch")
        return SiteMorphism(other.source, self.target, [self.cmap[j] for j in other.cmap])

    def is_cover(self):
        """Jointly surjective onto every component of the target."""
        hit = [set() for _ in self.target.components]
        for i, j in enumerate(self.cmap):
            hit[j] |= self.source.components[i]
        return all(hit[j] == set(c) for j, c in enumerate(self.target.components))

    def __eq__(self, other):
        return (
            isinstance(other, SiteMorphism)
            and self.source == other.source
            and self.target == other.target
            and self.cmap == other.cmap
        )

    def __hash__(self):
        return hash((self.source.key, self.target.key, self.cmap))

    def __repr__(self):
        return "SiteMorphism(%d -> %d comps)" % (len(self.source), len(self.target))


def identity_morphism(obj):
    return SiteMorphism(obj, obj, range(len(obj.components)))


class CoveringFamily:
    """A jointly surjective family of morphisms into a common target."""

    def __init__(self, target, morphisms):
        self.target = target
        self.morphisms = list(morphisms)
        hit = [set() for _ in target.components]
        for m in self.morphisms:
            if m.target != target:
                raise ValueError("family member with wrong target")
            for i, j in enumerate(m.cmap):
                hit[j] |= m.source.components[i]
        for j, c in enumerate(target.components):
            if hit[j] != set(c):
                raise ValueError("family is not jointly surjective on component %d" % j)

    def covering_single(self):
        """Merge the family into a single covering morphism from the
        disjoint union of the sources."""
        comps = []
        cmap = []
        for m in self.morphisms:
            for i, j in enumerate(m.cmap):
                comps.append(m.source.components[i])
                cmap.append(j)
        src = SiteObject(self.target.space, comps)
        return SiteMorphism(src, self.target, cmap)


def fiber_product(f, g):
    """Fiber product of f : A -> U and g : B -> U.

    Returns (P, pA, pB).  Components are indexed by pairs (i, j) in
    lexicographic order with matching image component and nonempty
    intersection; empty components are omitted.
    """
    if f.target != g.target:
        raise ValueError("fiber product needs a common target")
    space = f.source.space
    comps = []
    cma, cmb = [], []
    for i, ca in enumerate(f.source.components):
        for j, cb in enumerate(g.source.components):
            if f.cmap[i] != g.cmap[j]:
                continue
            inter = ca & cb
            if inter:
                comps.append(inter)
                cma.append(i)
                cmb.append(j)
    p = SiteObject(space, comps)
    return p, SiteMorphism(p, f.source, cma), SiteMorphism(p, g.source, cmb)


def multi_fiber_product(morphisms):
    """Iterated fiber product over a common target.

    Components are tuples (i_0, ..., i_k) in lexicographic order.  Returns
    (P, [projections]).
    """
    if not morphisms:
        raise ValueError("need at least one morphism")
    target = morphisms[0].target
    space = target.space
    for m in morphisms:
        if m.target != target:
            raise ValueError("common target required")
    tuples = [((), j, frozenset(target.components[j])) for j in range(len(target.components))]
    # build up index tuples with running intersections
    for m in morphisms:
        new = []
        for idx, j, op in tuples:
            for i, c in enumerate(m.source.components):
                if m.cmap[i] != j:
                    continue
                inter = op & c
                if inter:
                    new.append((idx + (i,), j, inter))
        tuples = new
    tuples.sort(key=lambda t: t[0])
    p = SiteObject(space, [t[2] for t in tuples])
    projs = []
    for k, m in enumerate(morphisms):
        projs.append(SiteMorphism(p, m.source, [t[0][k] for t in tuples]))
    return p, projs


# ---------------------------------------------------------------------------
# fixtures

import importlib.resources as _res

_FIXTURE_NAMES = ("PT", "SIERP", "C4", "S2F", "S3F", "RP2F")
_fixture_cache = {}


def load_space(name_or_path):
    """Load a fixture space by name (PT, SIERP, C4, S2F, S3F, RP2F) or a
    JSON file path."""
    if name_or_path in _FIXTURE_NAMES:
        if name_or_path not in _fixture_cache:
            ref = _res.files("finsheaf") / "fixtures" / (name_or_path + ".json")
            data = json.loads(ref.read_text())
            _fixture_cache[name_or_path] = FinSpace.from_json(data, name=name_or_path)
        return _fixture_cache[name_or_path]
    with open(name_or_path) as fh:
        data = json.load(fh)
    return FinSpace.from_json(data, name=name_or_path)
