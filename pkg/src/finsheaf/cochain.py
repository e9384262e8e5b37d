"""Cochain complexes over a hypercovering.

Cech complexes of a sheaf, the total complex of the Cech/Godement double
complex, sheaf cohomology via global sections of the canonical flasque
resolution, and the two-step comparison complex that computes a single
cohomology group from low-degree resolution data.
"""

from . import abgrp
from .abgrp import (
    DirectSum,
    FpAbGroup,
    GroupHom,
    SubQuot,
    block_hom,
    hom_inverse,
    induced_hom,
    zero_hom,
)
from .sheaf import godement_quotient, godement_resolution

_TRIVIAL = FpAbGroup(0)


class CochainComplex:
    """A bounded complex of finitely presented abelian groups.

    groups[n] are the terms, diffs[n] : groups[n] -> groups[n+1] the
    differentials (one fewer than the terms).  Terms outside the stored
    range are trivial.
    """

    def __init__(self, groups, diffs, check=True):
        self.groups = list(groups)
        self.diffs = list(diffs)
        if len(self.diffs) != len(self.groups) - 1:
            raise ValueError("need one differential per adjacent pair")
        if check:
            for n, d in enumerate(self.diffs):
                if d.source != self.groups[n] or d.target != self.groups[n + 1]:
                    raise ValueError("differential %d has wrong endpoints" % n)
                if n + 1 < len(self.diffs):
                    if not self.diffs[n + 1].compose(d).is_zero():
                        raise ValueError("d.d != 0 at degree %d" % n)
        self._cohom = {}

    def group(self, n):
        if 0 <= n < len(self.groups):
            return self.groups[n]
        return _TRIVIAL

    def diff(self, n):
        if 0 <= n < len(self.diffs):
            return self.diffs[n]
        return zero_hom(self.group(n), self.group(n + 1))

    def cohomology(self, n):
        """ker(d^n)/im(d^{n-1}) as a SubQuot of the degree-n term."""
        sq = self._cohom.get(n)
        if sq is None:
            d_in = self.diff(n - 1) if n >= 1 else None
            sq = SubQuot(self.diff(n), d_in)
            self._cohom[n] = sq
        return sq


def cech_diff(h, F, p):
    """Alternating sum of face pullbacks on sections of F over level p."""
    d = None
    for i in range(p + 2):
        t = F.pullback(h.face(p + 1, i))
        if i % 2 == 1:
            t = -t
        d = t if d is None else d + t
    return d


def cech_complex(h, F, length):
    """Cech complex of sections of F over the levels of a hypercovering."""
    groups = [F.sections(h.level(p)).group for p in range(length + 1)]
    diffs = [cech_diff(h, F, p) for p in range(length)]
    return CochainComplex(groups, diffs, check=False)


def homotopy_operator(ht, F, n):
    """Degree-lowering operator of a simplicial homotopy on Cech cochains.

    Returns s_n : C^{n+1}(target, F) -> C^n(source, F), the alternating sum
    of the homotopy pullbacks; it satisfies
    theta^* - zeta^* = s d + d s.
    """
    s = None
    for i, hmap in enumerate(ht.maps[n]):
        t = F.pullback(hmap)
        if i % 2 == 1:
            t = -t
        s = t if s is None else s + t
    return s


def godement_complex(F):
    """Global sections of the canonical flasque resolution of F."""
    cached = F._cohomology.get("complex")
    if cached is not None:
        return cached
    length = 1
    while not godement_resolution(F, length)[-1][0].is_zero():
        length += 1
    chain = godement_resolution(F, length)
    whole = F.space.whole()
    groups = [term.sections(whole).group for term, _ in chain]
    diffs = [chain[q + 1][1].on_sections(whole) for q in range(length)]
    cx = CochainComplex(groups, diffs, check=False)
    F._cohomology["complex"] = cx
    return cx


def sheaf_cohomology(F, n):
    """H^n of the space with coefficients in F, as a SubQuot of the global
    sections of the degree-n flasque resolution term."""
    sq = F._cohomology.get(n)
    if sq is None:
        sq = godement_complex(F).cohomology(n)
        F._cohomology[n] = sq
    return sq


def cohomology_invariants(F, n):
    """(rank, torsion list) of H^n of the space with coefficients in F."""
    return sheaf_cohomology(F, n).group.invariants()


class TotalComplex:
    """Total complex of the Cech/Godement double complex of a hypercovering.

    Term m is the direct sum over p + q = m (p ascending) of the sections
    of the degree-q resolution term over level p; the differential is the
    Cech differential plus (-1)^p times the resolution differential.
    """

    def __init__(self, h, F, degree):
        self.h = h
        self.F = F
        self.degree = degree
        chain = godement_resolution(F, degree + 1)
        self.sums = []
        self.slot = {}
        for m in range(degree + 2):
            parts = []
            for p in range(m + 1):
                q = m - p
                parts.append(chain[q][0].sections(h.level(p)).group)
                self.slot[(p, q)] = (m, p)
            self.sums.append(DirectSum(parts))
        diffs = []
        for m in range(degree + 1):
            blocks = [[None] * (m + 1) for _ in range(m + 2)]
            for p in range(m + 1):
                q = m - p
                blocks[p + 1][p] = cech_diff(h, chain[q][0], p)
                vert = chain[q + 1][1].on_sections(h.level(p))
                blocks[p][p] = vert if p % 2 == 0 else -vert
            diffs.append(block_hom(self.sums[m], self.sums[m + 1], blocks))
        self.complex = CochainComplex(
            [s.group for s in self.sums], diffs, check=False
        )
        self._transport = {}

    def inject(self, p, q, el):
        """Element of the total term p+q supported in the (p, q) slot."""
        m, i = self.slot[(p, q)]
        return self.sums[m].inject(i, el)

    def transport(self, n):
        """Induced map from H^n of global resolution sections to H^n of the
        total complex; pull back along the level-0 structure map into the
        (0, n) slot.  An isomorphism for hypercoverings."""
        f = self._transport.get(n)
        if f is None:
            chain = godement_resolution(self.F, n)
            pull = chain[n][0].pullback(self.h.structure_map(0))
            emb = self.sums[n].injection_hom(0).compose(pull)
            f = induced_hom(
                sheaf_cohomology(self.F, n), self.complex.cohomology(n), emb
            )
            self._transport[n] = f
        return f

    def class_from_total(self, n, el):
        """Class in H^n of the space of a degree-n total cocycle."""
        cls = self.complex.cohomology(n).project(el)
        return hom_inverse(self.transport(n))(cls)


def cech_to_sheaf(h, F, n):
    """Edge map from Cech cohomology to sheaf cohomology.

    Returns (hom, cech_subquot): the induced map from H^n of the Cech
    complex of F over the hypercovering into H^n of the space.
    """
    cc = cech_complex(h, F, n + 1)
    sq = cc.cohomology(n)
    tot = TotalComplex(h, F, n)
    chain = godement_resolution(F, 0)
    aug_n = chain[0][1].on_sections(h.level(n))
    m, i = tot.slot[(n, 0)]
    emb = tot.sums[m].injection_hom(i).compose(aug_n)
    f = induced_hom(sq, tot.complex.cohomology(n), emb)
    g = hom_inverse(tot.transport(n)).compose(f)
    return g, sq


class ThreeTermComplex:
    """Comparison complex computing H^n from degree <= 2 resolution data.

    With Q the quotient of the degree-0 resolution term by the sheaf, the
    three terms are

        Gamma(U_{n-2}, Q) (+) Gamma(U_{n-1}, I0)
        Gamma(U_{n-1}, I1) (+) Gamma(U_n, I0)
        Gamma(U_{n-1}, I2) (+) Gamma(U_n, I1) (+) Gamma(U_{n+1}, I0)

    with maps psi and phi mixing the Cech differential with a fixed sign
    eps = (-1)^(n-1) times the resolution differential.  For n = 1 the
    first summand of the low term is zero.
    """

    def __init__(self, h, F, n):
        if n < 1:
            raise ValueError("the comparison complex needs degree n >= 1")
        self.h = h
        self.F = F
        self.n = n
        self.eps = 1 if n % 2 == 1 else -1
        chain = godement_resolution(F, 2)
        (I0, _), (I1, d0), (I2, d1) = chain
        Q, _, incl = godement_quotient(F)
        if n >= 2:
            g_q = Q.sections(h.level(n - 2)).group
        else:
            g_q = _TRIVIAL
        self.low = DirectSum([g_q, I0.sections(h.level(n - 1)).group])
        self.mid = DirectSum(
            [I1.sections(h.level(n - 1)).group, I0.sections(h.level(n)).group]
        )
        self.high = DirectSum(
            [
                I2.sections(h.level(n - 1)).group,
                I1.sections(h.level(n)).group,
                I0.sections(h.level(n + 1)).group,
            ]
        )
        eps = self.eps
        d0_low = d0.on_sections(h.level(n - 1)).scaled(eps)
        if n >= 2:
            into_i1 = cech_diff(h, I1, n - 2).compose(
                incl.on_sections(h.level(n - 2))
            )
        else:
            into_i1 = None
        self.psi = block_hom(
            self.low,
            self.mid,
            [
                [into_i1, d0_low],
                [None, cech_diff(h, I0, n - 1)],
            ],
        )
        d1_mid = d1.on_sections(h.level(n - 1)).scaled(eps)
        d0_mid = d0.on_sections(h.level(n)).scaled(-eps)
        self.phi = block_hom(
            self.mid,
            self.high,
            [
                [d1_mid, None],
                [cech_diff(h, I1, n - 1), d0_mid],
                [None, cech_diff(h, I0, n)],
            ],
        )
        if not self.phi.compose(self.psi).is_zero():
            raise ValueError("comparison complex is not a complex")
        self.cohomology = SubQuot(self.phi, self.psi)
        self._tot = None
        self._to_sheaf = None

    def total(self):
        if self._tot is None:
            self._tot = TotalComplex(self.h, self.F, self.n)
        return self._tot

    def pair(self, a_low, a_high):
        """Middle-term element from its two components."""
        return self.mid.assemble([a_low, a_high])

    def components(self, el):
        return self.mid.project(0, el), self.mid.project(1, el)

    def embed_total(self):
        """Ambient embedding of the middle term into the degree-n total term,
        sending the two summands to the (n-1, 1) and (n, 0) slots."""
        tot = self.total()
        n = self.n
        _, i0 = tot.slot[(n - 1, 1)]
        _, i1 = tot.slot[(n, 0)]
        blocks = [[None, None] for _ in range(n + 1)]
        blocks[i0][0] = abgrp.identity_hom(self.mid.parts[0])
        blocks[i1][1] = abgrp.identity_hom(self.mid.parts[1])
        return block_hom(self.mid, tot.sums[n], blocks)

    def to_sheaf_hom(self):
        """Induced map from the comparison cohomology to H^n of the space,
        via the embedding into the total complex."""
        if self._to_sheaf is None:
            tot = self.total()
            f = induced_hom(
                self.cohomology,
                tot.complex.cohomology(self.n),
                self.embed_total(),
            )
            self._to_sheaf = hom_inverse(tot.transport(self.n)).compose(f)
        return self._to_sheaf

    def class_of(self, el):
        """Class in H^n of the space of a middle-term cocycle."""
        return self.to_sheaf_hom()(self.cohomology.project(el))
