"""Exact linear algebra over the integers and finitely presented abelian groups.

Everything downstream (section groups, cochain complexes, cohomology) reduces
to integer matrices: Smith normal form, lattice membership, kernels, cokernels
and subquotients.  All arithmetic uses Python integers, so no overflow is
possible.

Conventions
-----------
* A matrix is a list of rows, each row a list of ints.
* A homomorphism matrix has shape (target generators) x (source generators)
  and acts on column vectors of source coordinates.
* A finitely presented abelian group is Z^n modulo the column span of a
  relation matrix.
"""

from __future__ import annotations

from itertools import product as _iproduct


# ---------------------------------------------------------------------------
# plain integer matrices


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    if a and b and len(a[0]) != len(b):
        raise ValueError("shape mismatch in mat_mul")
    n = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * n
        for k, c in enumerate(row):
            if c:
                bk = b[k]
                for j in range(n):
                    if bk[j]:
                        acc[j] += c * bk[j]
        out.append(acc)
    return out


def mat_vec(a, v):
    nz = [(j, x) for j, x in enumerate(v) if x]
    out = []
    for row in a:
        s = 0
        for j, x in nz:
            c = row[j]
            if c:
                s += c * x
        out.append(s)
    return out


def transpose(a):
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def hstack(a, b):
    if not a:
        return [list(r) for r in b]
    if not b:
        return [list(r) for r in a]
    return [list(ra) + list(rb) for ra, rb in zip(a, b)]


def vstack(a, b):
    return [list(r) for r in a] + [list(r) for r in b]


def mat_eq(a, b):
    return a == b


def columns(a):
    return [list(col) for col in zip(*a)] if a else []


def from_columns(cols, nrows):
    if not cols:
        return [[] for _ in range(nrows)]
    return [list(row) for row in zip(*cols)]


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(m_in, need_u=True, need_v=True):
    """Return (s, u, v) with u * m * v = s in Smith normal form.

    s is diagonal with nonnegative entries d_1 | d_2 | ... ; u and v are
    unimodular.  When need_u or need_v is False the corresponding matrix is
    returned as None (saves time on large inputs).
    """
    s = [list(row) for row in m_in]
    rows = len(s)
    cols_ = len(s[0]) if s else 0
    u = identity(rows) if need_u else None
    v = identity(cols_) if need_v else None

    def row_op(i, j, q):
        # row_i -= q * row_j
        si, sj = s[i], s[j]
        for k in range(cols_):
            if sj[k]:
                si[k] -= q * sj[k]
        if u is not None:
            ui, uj = u[i], u[j]
            for k in range(rows):
                if uj[k]:
                    ui[k] -= q * uj[k]

    def col_op(i, j, q):
        # col_i -= q * col_j
        for r in s:
            if r[j]:
                r[i] -= q * r[j]
        if v is not None:
            for r in v:
                if r[j]:
                    r[i] -= q * r[j]

    def row_swap(i, j):
        s[i], s[j] = s[j], s[i]
        if u is not None:
            u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for r in s:
            r[i], r[j] = r[j], r[i]
        if v is not None:
            for r in v:
                r[i], r[j] = r[j], r[i]

    def row_negate(i):
        s[i] = [-x for x in s[i]]
        if u is not None:
            u[i] = [-x for x in u[i]]

    t = 0
    n = min(rows, cols_)
    while t < n:
        # find pivot: smallest nonzero absolute value in s[t:, t:]
        piv = None
        best = None
        for i in range(t, rows):
            ri = s[i]
            for j in range(t, cols_):
                a = ri[j]
                if a:
                    a = abs(a)
                    if best is None or a < best:
                        best = a
                        piv = (i, j)
                        if a == 1:
                            break
            if best == 1:
                break
        if piv is None:
            break
        pi, pj = piv
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        # eliminate column t and row t
        while True:
            again = False
            for i in range(t + 1, rows):
                a = s[i][t]
                if a:
                    q = a // s[t][t]
                    row_op(i, t, q)
                    if s[i][t]:
                        row_swap(t, i)
                        again = True
            for j in range(t + 1, cols_):
                a = s[t][j]
                if a:
                    q = a // s[t][t]
                    col_op(j, t, q)
                    if s[t][j]:
                        col_swap(t, j)
                        again = True
            if not again:
                clean = all(s[i][t] == 0 for i in range(t + 1, rows)) and all(
                    s[t][j] == 0 for j in range(t + 1, cols_)
                )
                if clean:
                    break
        if s[t][t] < 0:
            row_negate(t)
        # enforce divisibility: s[t][t] must divide everything below-right
        d = s[t][t]
        bad = None
        for i in range(t + 1, rows):
            ri = s[i]
            for j in range(t + 1, cols_):
                if ri[j] % d:
                    bad = (i, j)
                    break
            if bad:
                break
        if bad:
            # add offending row to row t and redo this pivot
            bi = bad[0]
            si, sb = s[t], s[bi]
            for k in range(cols_):
                si[k] += sb[k]
            if u is not None:
                ut, ub = u[t], u[bi]
                for k in range(rows):
                    ut[k] += ub[k]
            continue
        t += 1
    return s, u, v


def snf_diagonal(m):
    """Diagonal entries of the Smith normal form (nonzero ones only)."""
    s, _, _ = smith_normal_form(m, need_u=False, need_v=False)
    out = []
    for i in range(min(len(s), len(s[0]) if s else 0)):
        if s[i][i]:
            out.append(s[i][i])
    return out


def _augmented_echelon(m):
    """Column echelon basis of the lattice spanned by the columns (m e_j, e_j).

    Stacking an identity block under m lets one reduction recover both the
    image lattice (top parts with a pivot above the identity block) and the
    kernel lattice (bottom parts of columns whose top part vanished).
    """
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    cols = []
    for j in range(ncols):
        c = [m[i][j] for i in range(nrows)]
        c += [1 if k == j else 0 for k in range(ncols)]
        cols.append(c)
    return column_hnf(cols, nrows + ncols)


class MatrixSolver:
    """Solve m x = b for many right-hand sides, echelonizing m once."""

    def __init__(self, m):
        self.rows = len(m)
        self.ncols = len(m[0]) if m else 0
        self.img = []
        self.pre = []
        if self.rows:
            for c in _augmented_echelon(m):
                top = c[: self.rows]
                if any(top):
                    self.img.append(top)
                    self.pre.append(c[self.rows :])
        self.pivots = basis_pivots(self.img)

    def solve(self, b):
        if self.rows == 0:
            return [0] * self.ncols
        coeffs = express_in_basis(self.img, b, self.pivots)
        if coeffs is None:
            return None
        x = [0] * self.ncols
        for q, u in zip(coeffs, self.pre):
            if q:
                for i, y in enumerate(u):
                    if y:
                        x[i] += q * y
        return x


def solve_matrix(m, b):
    """One integer solution x of m x = b, or None."""
    return MatrixSolver(m).solve(b)


def kernel_basis(m):
    """Columns spanning the integer kernel of m (a list of column vectors)."""
    ncols = len(m[0]) if m else 0
    if not m or ncols == 0:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    rows = len(m)
    basis = _augmented_echelon(m)
    return [c[rows:] for c in basis if not any(c[:rows])]


def column_hnf(cols, nrows):
    """Echelon basis (list of columns) for the lattice spanned by cols.

    Each basis column has its first nonzero entry positive, and the pivot
    rows strictly increase.
    """
    basis = {}
    stack = []
    for c in cols:
        p = next((i for i, x in enumerate(c) if x), None)
        if p is not None:
            stack.append((p, list(c)))
    while stack:
        p, c = stack.pop()
        while True:
            b = basis.get(p)
            if b is None:
                if c[p] < 0:
                    c = [-x for x in c]
                basis[p] = c
                break
            q = c[p] // b[p]
            if q:
                for i in range(p, nrows):
                    if b[i]:
                        c[i] -= q * b[i]
            if c[p]:
                # remainder becomes the new, smaller pivot; keep reducing
                basis[p], c = c, b
                continue
            p = next((i for i in range(p + 1, nrows) if c[i]), None)
            if p is None:
                break
    return [basis[p] for p in sorted(basis)]


def basis_pivots(basis):
    """Pivot row of each column in an echelon basis."""
    return [next(i for i, x in enumerate(col) if x) for col in basis]


def express_in_basis(basis, v, pivots=None):
    """Coefficients expressing v in an echelon column basis, or None."""
    c = list(v)
    coeffs = []
    if pivots is None:
        pivots = basis_pivots(basis)
    for col, p in zip(basis, pivots):
        if c[p] % col[p]:
            return None
        q = c[p] // col[p]
        coeffs.append(q)
        if q:
            for i in range(p, len(c)):
                if col[i]:
                    c[i] -= q * col[i]
    if any(c):
        return None
    return coeffs


# ---------------------------------------------------------------------------
# finitely presented abelian groups


class FpAbGroup:
    """Z^ngens modulo the column span of a relation matrix."""

    def __init__(self, ngens, rels=None):
        self.ngens = ngens
        self.rels = [list(c) for c in (rels or [])]
        for c in self.rels:
            if len(c) != ngens:
                raise ValueError("relation length mismatch")
        self._hnf = column_hnf(self.rels, ngens)
        self._pivots = [next(i for i, x in enumerate(c) if x) for c in self._hnf]
        self._inv = None

    def reduce(self, v):
        c = list(v)
        for col, p in zip(self._hnf, self._pivots):
            q = c[p] // col[p]
            if q:
                for i in range(p, self.ngens):
                    c[i] -= q * col[i]
        return c

    def in_relation_lattice(self, v):
        return not any(self.reduce(v))

    def element(self, coords):
        return Element(self, coords)

    def zero(self):
        return Element(self, [0] * self.ngens)

    def gen(self, i):
        return Element(self, [1 if j == i else 0 for j in range(self.ngens)])

    def gens(self):
        return [self.gen(i) for i in range(self.ngens)]

    def invariants(self):
        """(free rank, [torsion orders > 1])."""
        if not self.rels:
            return (self.ngens, [])
        diag = snf_diagonal(from_columns(self.rels, self.ngens))
        tors = [d for d in diag if d > 1]
        rank = self.ngens - len(diag)
        return (rank, sorted(tors))

    def is_trivial(self):
        rank, tors = self.invariants()
        return rank == 0 and not tors

    def order(self):
        rank, tors = self.invariants()
        if rank:
            return None
        n = 1
        for d in tors:
            n *= d
        return n

    def elements(self):
        """All elements (requires the group to be finite)."""
        if not self.rels:
            if self.ngens:
                raise ValueError("infinite group")
            return [self.zero()]
        m = from_columns(self.rels, self.ngens)
        s, u, _ = smith_normal_form(m)
        diag = [s[i][i] if i < (len(s[0]) if s else 0) else 0 for i in range(self.ngens)]
        if any(d == 0 for d in diag):
            raise ValueError("infinite group")
        if self._inv is None:
            self._inv = [solve_matrix(u, [1 if i == j else 0 for i in range(self.ngens)]) for j in range(self.ngens)]
            self._inv = transpose(self._inv)
        out = []
        for y in _iproduct(*[range(d) for d in diag]):
            out.append(self.element(mat_vec(self._inv, list(y))))
        return out

    def __eq__(self, other):
        return (
            isinstance(other, FpAbGroup)
            and self.ngens == other.ngens
            and self._hnf == other._hnf
        )

    def __hash__(self):
        return hash((self.ngens, tuple(tuple(c) for c in self._hnf)))

    def __repr__(self):
        rank, tors = self.invariants()
        parts = ["Z"] * rank + ["Z/%d" % d for d in tors]
        return "FpAbGroup(%s)" % (" + ".join(parts) if parts else "0")


def free_group(n):
    return FpAbGroup(n)


def cyclic_group(m):
    if m == 0:
        return FpAbGroup(1)
    return FpAbGroup(1, [[m]])


class Element:
    """An element of an FpAbGroup, stored by generator coordinates."""

    __slots__ = ("group", "coords")

    def __init__(self, group, coords):
        if len(coords) != group.ngens:
            raise ValueError("coordinate length mismatch")
        self.group = group
        self.coords = [int(x) for x in coords]

    def reduced(self):
        return self.group.reduce(self.coords)

    def is_zero(self):
        return not any(self.reduced())

    def __add__(self, other):
        self._check(other)
        return Element(self.group, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._check(other)
        return Element(self.group, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return Element(self.group, [-a for a in self.coords])

    def __rmul__(self, k):
        return Element(self.group, [k * a for a in self.coords])

    def _check(self, other):
        if other.group is not self.group and other.group != self.group:
            raise ValueError("elements of different groups")

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        return self.reduced() == other.reduced()

    def __hash__(self):
        return hash(tuple(self.reduced()))

    def __repr__(self):
        return "Element(%r)" % (self.reduced(),)


class GroupHom:
    """Homomorphism of finitely presented abelian groups.

    The matrix has one column per source generator; well-definedness (the
    matrix carries source relations into target relations) is verified at
    construction.
    """

    def __init__(self, source, target, matrix, check=True):
        self.source = source
        self.target = target
        if len(matrix) != target.ngens:
            raise ValueError("matrix row count != target generators")
        for row in matrix:
            if len(row) != source.ngens:
                raise ValueError("matrix column count != source generators")
        self.matrix = [list(r) for r in matrix]
        if check:
            for rel in source.rels:
                if not target.in_relation_lattice(mat_vec(self.matrix, rel)):
                    raise ValueError("matrix does not respect relations")

    def __call__(self, el):
        if el.group is not self.source and el.group != self.source:
            raise ValueError("element not in source")
        return Element(self.target, mat_vec(self.matrix, el.coords))

    def compose(self, other):
        """self after other."""
        return GroupHom(other.source, self.target, mat_mul(self.matrix, other.matrix), check=False)

    def __add__(self, other):
        return GroupHom(
            self.source,
            self.target,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.matrix, other.matrix)],
            check=False,
        )

    def __sub__(self, other):
        return GroupHom(
            self.source,
            self.target,
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.matrix, other.matrix)],
            check=False,
        )

    def __neg__(self):
        return GroupHom(self.source, self.target, [[-a for a in r] for r in self.matrix], check=False)

    def scaled(self, k):
        return GroupHom(self.source, self.target, [[k * a for a in r] for r in self.matrix], check=False)

    def is_zero(self):
        for col in columns(self.matrix):
            if not self.target.in_relation_lattice(col):
                return False
        return True

    def equals(self, other):
        return (self - other).is_zero()

    def __repr__(self):
        return "GroupHom(%r -> %r)" % (self.source, self.target)


def identity_hom(g):
    return GroupHom(g, g, identity(g.ngens), check=False)


def zero_hom(source, target):
    return GroupHom(source, target, zeros(target.ngens, source.ngens), check=False)


class HomSolver:
    """Solve f(x) = b for many targets b, factoring f once."""

    def __init__(self, f):
        self.f = f
        aug = hstack(f.matrix, from_columns(f.target.rels, f.target.ngens))
        self._ms = MatrixSolver(aug)

    def solve(self, b):
        sol = self._ms.solve(b.coords)
        if sol is None:
            return None
        return Element(self.f.source, sol[: self.f.source.ngens])


def solve_hom(f, b):
    """Source element x with f(x) = b in the target group, or None."""
    return HomSolver(f).solve(b)


def kernel(f):
    """(K, incl) with K the kernel of f and incl : K -> source."""
    g = f.source
    aug = hstack(f.matrix, from_columns(f.target.rels, f.target.ngens))
    kb = kernel_basis(aug)
    lat = [c[: g.ngens] for c in kb] + [list(r) for r in g.rels]
    basis = column_hnf(lat, g.ngens)
    rels = []
    for r in g.rels:
        e = express_in_basis(basis, r)
        rels.append(e)
    k = FpAbGroup(len(basis), rels)
    incl = GroupHom(k, g, from_columns(basis, g.ngens), check=False)
    return k, incl


def cokernel(f):
    """(C, proj) reusing the generator coordinates of the target."""
    rels = [list(c) for c in columns(f.matrix)] + [list(r) for r in f.target.rels]
    c = FpAbGroup(f.target.ngens, rels)
    proj = GroupHom(f.target, c, identity(f.target.ngens), check=False)
    return c, proj


class SubQuot:
    """Subquotient ker(d_out)/im(d_in) of a group g, with project and lift."""

    def __init__(self, d_out, d_in):
        if d_out is not None and d_in is not None:
            if not d_out.compose(d_in).is_zero():
                raise ValueError("d_out after d_in is not zero")
        g = d_out.source if d_out is not None else d_in.target
        self.ambient = g
        if d_out is None:
            lat = columns(identity(g.ngens))
        else:
            aug = hstack(d_out.matrix, from_columns(d_out.target.rels, d_out.target.ngens))
            kb = kernel_basis(aug)
            lat = [c[: g.ngens] for c in kb] + [list(r) for r in g.rels]
        self.basis = column_hnf(lat, g.ngens)
        self._pivots = basis_pivots(self.basis)
        rels = []
        srcs = [list(r) for r in g.rels]
        if d_in is not None:
            srcs += columns(d_in.matrix)
        for v in srcs:
            e = express_in_basis(self.basis, v, self._pivots)
            if e is None:
                raise ValueError("image does not land in the kernel lattice")
            rels.append(e)
        self.group = FpAbGroup(len(self.basis), rels)

    def project(self, el):
        """Class of a cocycle (an ambient element whose coords lie in ker)."""
        e = express_in_basis(self.basis, el.coords, self._pivots)
        if e is None:
            raise ValueError("element is not a cocycle")
        return Element(self.group, e)

    def lift(self, el):
        """An ambient representative of a class."""
        v = [0] * self.ambient.ngens
        for q, col in zip(el.coords, self.basis):
            if q:
                for i, x in enumerate(col):
                    v[i] += q * x
        return Element(self.ambient, v)

    def contains_cocycle(self, el):
        return express_in_basis(self.basis, el.coords, self._pivots) is not None


def induced_hom(sq_src, sq_tgt, f):
    """Hom on subquotients induced by an ambient chain map f."""
    cols = []
    for i in range(sq_src.group.ngens):
        lifted = sq_src.lift(sq_src.group.gen(i))
        cols.append(sq_tgt.project(f(lifted)).coords)
    return GroupHom(sq_src.group, sq_tgt.group, from_columns(cols, sq_tgt.group.ngens))


def hom_is_injective(f):
    k, _ = kernel(f)
    return k.is_trivial()


def hom_is_surjective(f):
    c, _ = cokernel(f)
    return c.is_trivial()


def hom_is_isomorphism(f):
    return hom_is_injective(f) and hom_is_surjective(f)


def hom_inverse(f):
    """Inverse of an isomorphism."""
    solver = HomSolver(f)
    cols = []
    for i in range(f.target.ngens):
        x = solver.solve(f.target.gen(i))
        if x is None:
            raise ValueError("not surjective")
        cols.append(x.coords)
    return GroupHom(f.target, f.source, from_columns(cols, f.source.ngens))


# ---------------------------------------------------------------------------
# direct sums and block homomorphisms


class DirectSum:
    """Direct sum of FpAbGroups with coordinate bookkeeping."""

    def __init__(self, groups):
        self.parts = list(groups)
        self.offsets = []
        n = 0
        for g in self.parts:
            self.offsets.append(n)
            n += g.ngens
        rels = []
        for off, g in zip(self.offsets, self.parts):
            for r in g.rels:
                c = [0] * n
                c[off : off + g.ngens] = r
                rels.append(c)
        self.group = FpAbGroup(n, rels)

    def inject(self, i, el):
        v = [0] * self.group.ngens
        off = self.offsets[i]
        v[off : off + self.parts[i].ngens] = el.coords
        return Element(self.group, v)

    def project(self, i, el):
        off = self.offsets[i]
        return Element(self.parts[i], el.coords[off : off + self.parts[i].ngens])

    def assemble(self, els):
        v = []
        for g, el in zip(self.parts, els):
            if el.group is not g and el.group != g:
                raise ValueError("component in wrong group")
            v.extend(el.coords)
        return Element(self.group, v)

    def injection_hom(self, i):
        m = zeros(self.group.ngens, self.parts[i].ngens)
        off = self.offsets[i]
        for j in range(self.parts[i].ngens):
            m[off + j][j] = 1
        return GroupHom(self.parts[i], self.group, m, check=False)

    def projection_hom(self, i):
        m = zeros(self.parts[i].ngens, self.group.ngens)
        off = self.offsets[i]
        for j in range(self.parts[i].ngens):
            m[j][off + j] = 1
        return GroupHom(self.group, self.parts[i], m, check=False)


def block_hom(src_sum, tgt_sum, blocks):
    """Hom between direct sums from a matrix of blocks.

    blocks[i][j] is a GroupHom src_sum.parts[j] -> tgt_sum.parts[i], or None
    for a zero block.
    """
    m = zeros(tgt_sum.group.ngens, src_sum.group.ngens)
    for i, row in enumerate(blocks):
        roff = tgt_sum.offsets[i]
        for j, blk in enumerate(row):
            if blk is None:
                continue
            coff = src_sum.offsets[j]
            for a, brow in enumerate(blk.matrix):
                ra = m[roff + a]
                for b, x in enumerate(brow):
                    if x:
                        ra[coff + b] += x
    return GroupHom(src_sum.group, tgt_sum.group, m, check=False)


def stacked_hom(source, homs):
    """Hom from one source into the direct sum of the targets of homs."""
    tgt = DirectSum([h.target for h in homs])
    m = []
    for h in homs:
        m.extend([list(r) for r in h.matrix])
    return tgt, GroupHom(source, tgt.group, m, check=False)
