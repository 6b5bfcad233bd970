"""Matrix factorizations: construction, pullback, morphisms, supertraces.

A factorization of w is stored as the two odd blocks d0 (even -> odd) and
d1 (odd -> even) with d1 d0 = d0 d1 = w, or equivalently as the full odd
square matrix in the generator order (all even generators, then all odd).
Morphisms are kept as full matrices with a declared parity; composition is
then plain matrix multiplication and the Koszul sign bookkeeping lives only
in the constructors that need it (koszul_mf, tensor_mf).
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .groebner import GradedModulePresentation, buchberger, free_resolution, normal_form
from .polyring import (
    PolyRing,
    Polynomial,
    difference_quotients,
    extend_ring,
    scale_substitute,
)
from .scalars import RootOfUnity, Scalar, as_scalar


class MFValidationError(ValueError):
    pass


def _poly_mat_mul(a, b, ring, cols=None):
    rows, inner = len(a), len(b)
    if cols is None:
        cols = len(b[0]) if inner else 0
    out = [[ring.zero() for _ in range(cols)] for _ in range(rows)]
    for i in range(rows):
        for k in range(inner):
            entry = a[i][k]
            if entry.is_zero():
                continue
            for j in range(cols):
                if not b[k][j].is_zero():
                    out[i][j] = out[i][j] + entry * b[k][j]
    return out


def _poly_mat_scale(a, c):
    return [[entry * c for entry in row] for row in a]


def _zeros(rows, cols, ring):
    return [[ring.zero() for _ in range(cols)] for _ in range(rows)]


def _coerce_scales(t):
    return [s.to_scalar() if isinstance(s, RootOfUnity) else as_scalar(s) for s in t]


class MatrixFactorization:
    """Z/2-graded free module with an odd operator squaring to w."""

    __slots__ = ("ring", "potential", "r0", "r1", "d0", "d1", "gradings")

    def __init__(self, potential: Polynomial, d0, d1, r0=None, r1=None,
                 gradings=None, check=True):
        self.ring = potential.ring
        self.potential = potential
        if r0 is None:
            r0 = len(d0[0]) if d0 else (len(d1) if d1 else 0)
        if r1 is None:
            r1 = len(d0) if d0 else (len(d1[0]) if d1 else 0)
        self.r0, self.r1 = r0, r1
        self.d0 = [list(row) for row in d0]
        self.d1 = [list(row) for row in d1]
        if len(self.d0) != r1 or any(len(row) != r0 for row in self.d0):
            raise MFValidationError("d0 must be an (odd rank) x (even rank) matrix")
        if len(self.d1) != r0 or any(len(row) != r1 for row in self.d1):
            raise MFValidationError("d1 must be an (even rank) x (odd rank) matrix")
        if gradings is not None:
            even, odd = gradings
            gradings = (tuple(Fraction(g) for g in even), tuple(Fraction(g) for g in odd))
            if len(gradings[0]) != r0 or len(gradings[1]) != r1:
                raise MFValidationError("grading lists must match the ranks")
        self.gradings = gradings
        if check:
            validate_mf(self)

    @property
    def total_rank(self):
        return self.r0 + self.r1

    def parities(self):
        return [0] * self.r0 + [1] * self.r1

    def grading_list(self):
        if self.gradings is None:
            return None
        return list(self.gradings[0]) + list(self.gradings[1])

    def full_matrix(self):
        """The odd operator as one (r0+r1) square matrix, evens first."""
        n = self.total_rank
        out = _zeros(n, n, self.ring)
        for i in range(self.r1):
            for j in range(self.r0):
                out[self.r0 + i][j] = self.d0[i][j]
        for i in range(self.r0):
            for j in range(self.r1):
                out[i][self.r0 + j] = self.d1[i][j]
        return out

    def shift(self):
        """The parity shift E[1]: swaps the blocks and negates the operator."""
        gradings = None if self.gradings is None else (self.gradings[1], self.gradings[0])
        minus = Scalar.from_rational(-1)
        return MatrixFactorization(
            self.potential,
            _poly_mat_scale(self.d1, minus),
            _poly_mat_scale(self.d0, minus),
            r0=self.r1,
            r1=self.r0,
            gradings=gradings,
            check=False,
        )

    def __repr__(self):
        return f"MatrixFactorization(w={self.potential}, ranks=({self.r0},{self.r1}))"


def validate_mf(mf: MatrixFactorization):
    """Check d1 d0 = w id and d0 d1 = w id exactly; raise with details."""
    ring, w = mf.ring, mf.potential
    prod10 = _poly_mat_mul(mf.d1, mf.d0, ring, cols=mf.r0)
    for i in range(mf.r0):
        for j in range(mf.r0):
            expected = w if i == j else ring.zero()
            if not (prod10[i][j] == expected):
                raise MFValidationError(f"(d1*d0)[{i}][{j}] = {prod10[i][j]}, expected {expected}")
    prod01 = _poly_mat_mul(mf.d0, mf.d1, ring, cols=mf.r1)
    for i in range(mf.r1):
        for j in range(mf.r1):
            expected = w if i == j else ring.zero()
            if not (prod01[i][j] == expected):
                raise MFValidationError(f"(d0*d1)[{i}][{j}] = {prod01[i][j]}, expected {expected}")
    if not w.is_zero() and mf.r0 != mf.r1:
        raise MFValidationError("nonzero potential forces equal even and odd ranks")
    return True


class MFMorphism:
    """A parity-homogeneous matrix between the modules of two factorizations."""

    __slots__ = ("source", "target", "parity", "matrix")

    def __init__(self, source, target, parity, matrix, check_parity=True):
        self.source = source
        self.target = target
        self.parity = parity & 1
        self.matrix = [list(row) for row in matrix]
        if len(self.matrix) != target.total_rank or (
            self.matrix and len(self.matrix[0]) != source.total_rank
        ):
            raise ValueError("morphism matrix has wrong shape")
        if check_parity:
            sp, tp = source.parities(), target.parities()
            for i in range(target.total_rank):
                for j in range(source.total_rank):
                    if not self.matrix[i][j].is_zero() and (tp[i] + sp[j]) % 2 != self.parity:
                        raise ValueError("matrix entry violates the declared parity")

    @staticmethod
    def from_blocks(source, target, parity, block_a, block_b):
        """Even: blocks (A0->B0, A1->B1).  Odd: blocks (A0->B1, A1->B0)."""
        ring = source.ring
        mat = _zeros(target.total_rank, source.total_rank, ring)
        if parity % 2 == 0:
            for i in range(target.r0):
                for j in range(source.r0):
                    mat[i][j] = block_a[i][j]
            for i in range(target.r1):
                for j in range(source.r1):
                    mat[target.r0 + i][source.r0 + j] = block_b[i][j]
        else:
            for i in range(target.r1):
                for j in range(source.r0):
                    mat[target.r0 + i][j] = block_a[i][j]
            for i in range(target.r0):
                for j in range(source.r1):
                    mat[i][source.r0 + j] = block_b[i][j]
        return MFMorphism(source, target, parity, mat, check_parity=False)

    @staticmethod
    def identity(mf):
        mat = _zeros(mf.total_rank, mf.total_rank, mf.ring)
        for i in range(mf.total_rank):
            mat[i][i] = mf.ring.one()
        return MFMorphism(mf, mf, 0, mat, check_parity=False)

    @staticmethod
    def diagonal(source, target, scalars):
        mat = _zeros(target.total_rank, source.total_rank, source.ring)
        for i, c in enumerate(scalars):
            mat[i][i] = source.ring.const(as_scalar(c))
        return MFMorphism(source, target, 0, mat)

    def compose(self, other: "MFMorphism") -> "MFMorphism":
        """self after other."""
        return MFMorphism(
            other.source,
            self.target,
            self.parity + other.parity,
            _poly_mat_mul(self.matrix, other.matrix, self.source.ring,
                          cols=other.source.total_rank),
            check_parity=False,
        )

    def __add__(self, other):
        if self.parity != other.parity:
            raise ValueError("cannot add morphisms of different parity")
        return MFMorphism(
            self.source, self.target, self.parity,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.matrix, other.matrix)],
            check_parity=False,
        )

    def scale(self, c):
        return MFMorphism(self.source, self.target, self.parity,
                          _poly_mat_scale(self.matrix, as_scalar(c)), check_parity=False)

    def differential(self) -> "MFMorphism":
        """D(phi) = d_B phi - (-1)^{|phi|} phi d_A."""
        ring = self.source.ring
        left = _poly_mat_mul(self.target.full_matrix(), self.matrix, ring,
                             cols=self.source.total_rank)
        right = _poly_mat_mul(self.matrix, self.source.full_matrix(), ring,
                              cols=self.source.total_rank)
        sign = Scalar.from_rational(1 if self.parity % 2 == 0 else -1)
        mat = [[l - r * sign for l, r in zip(lr, rr)] for lr, rr in zip(left, right)]
        return MFMorphism(self.source, self.target, self.parity + 1, mat, check_parity=False)

    def is_closed(self) -> bool:
        return all(e.is_zero() for row in self.differential().matrix for e in row)

    def inverse(self) -> "MFMorphism":
        """Inverse of a morphism with scalar entries (unit determinant)."""
        n = self.source.total_rank
        if self.target.total_rank != n:
            raise ValueError("only square morphisms can be inverted")
        if not all(e.is_zero() or e.is_constant() for row in self.matrix for e in row):
            raise ValueError("inverse implemented for scalar-entry morphisms only")
        scal = [[e.constant_term() for e in row] for row in self.matrix]
        inv = linalg.invert(scal)
        ring = self.source.ring
        mat = [[ring.const(c) for c in row] for row in inv]
        return MFMorphism(self.target, self.source, self.parity, mat, check_parity=False)

    def __repr__(self):
        return (f"MFMorphism(parity={self.parity}, "
                f"{self.target.total_rank}x{self.source.total_rank})")


def morphism_closed(phi: MFMorphism) -> bool:
    return phi.is_closed()


# -- constructions ------------------------------------------------------------


def koszul_mf(a_seq, b_seq, gradings=None) -> MatrixFactorization:
    """The Koszul factorization {a ; b} of sum a_i b_i on an exterior algebra.

    Generators e_S are ordered by increasing subset bitmask inside each parity;
    signs follow the fixed convention e_{i_1} ^ ... ^ e_{i_j}, i_1 < ... < i_j.
    Optional `gradings` gives the weighted degree of each b_i (with the
    potential normalized to weighted degree 1); generator e_S then carries
    degree sum_{i in S} (deg b_i - 1/2) and the odd operator is homogeneous
    of degree 1/2.
    """
    a_seq, b_seq = list(a_seq), list(b_seq)
    if len(a_seq) != len(b_seq) or not a_seq:
        raise ValueError("need equally long nonempty sequences")
    ring = a_seq[0].ring
    r = len(a_seq)
    w = ring.zero()
    for a, b in zip(a_seq, b_seq):
        w = w + a * b
    evens = [s for s in range(1 << r) if bin(s).count("1") % 2 == 0]
    odds = [s for s in range(1 << r) if bin(s).count("1") % 2 == 1]
    even_index = {s: i for i, s in enumerate(evens)}
    odd_index = {s: i for i, s in enumerate(odds)}
    d0 = _zeros(len(odds), len(evens), ring)
    d1 = _zeros(len(evens), len(odds), ring)

    def act(sources, target_index, block):
        for col, s in enumerate(sources):
            for i in range(r):
                bit = 1 << i
                sign = Scalar.from_rational((-1) ** bin(s & (bit - 1)).count("1"))
                if not (s & bit):
                    row = target_index[s | bit]
                    block[row][col] = block[row][col] + a_seq[i] * sign
                else:
                    row = target_index[s & ~bit]
                    block[row][col] = block[row][col] + b_seq[i] * sign

    act(evens, odd_index, d0)
    act(odds, even_index, d1)

    mf_gradings = None
    if gradings is not None:
        b_degs = [Fraction(g) for g in gradings]

        def subset_degree(s):
            return sum((b_degs[i] - Fraction(1, 2) for i in range(r) if s & (1 << i)),
                       Fraction(0))

        mf_gradings = (tuple(subset_degree(s) for s in evens),
                       tuple(subset_degree(s) for s in odds))
    return MatrixFactorization(w, d0, d1, gradings=mf_gradings)


def unit_mf(ring: PolyRing) -> MatrixFactorization:
    """Rank-(1,0) unit object of potential 0."""
    return MatrixFactorization(ring.zero(), [], [[]], r0=1, r1=0,
                               gradings=((Fraction(0),), ()), check=False)


def _merged_ring(r1: PolyRing, r2: PolyRing) -> PolyRing:
    if r1 == r2:
        return r1
    return PolyRing(tuple(list(r1.vars) + [v for v in r2.vars if v not in r1.vars]))


def _tensor_basis(e1: MatrixFactorization, e2: MatrixFactorization):
    """Pairs of generators of a tensor product, evens first; with index map."""
    gens1 = [(0, i) for i in range(e1.r0)] + [(1, i) for i in range(e1.r1)]
    gens2 = [(0, i) for i in range(e2.r0)] + [(1, i) for i in range(e2.r1)]
    pairs = [(g1, g2) for g1 in gens1 for g2 in gens2]
    evens = [p for p in pairs if (p[0][0] + p[1][0]) % 2 == 0]
    odds = [p for p in pairs if (p[0][0] + p[1][0]) % 2 == 1]
    index = {p: k for k, p in enumerate(evens)}
    index.update({p: len(evens) + k for k, p in enumerate(odds)})
    return pairs, evens, odds, index


def tensor_mf(e1: MatrixFactorization, e2: MatrixFactorization) -> MatrixFactorization:
    """Graded tensor product: a factorization of w1 + w2 with Koszul signs."""
    ring = _merged_ring(e1.ring, e2.ring)

    def lift(p):
        return p if p.ring == ring else extend_ring(p, ring)

    w = lift(e1.potential) + lift(e2.potential)
    pairs, evens, odds, index = _tensor_basis(e1, e2)
    gens1 = [(0, i) for i in range(e1.r0)] + [(1, i) for i in range(e1.r1)]
    gens2 = [(0, i) for i in range(e2.r0)] + [(1, i) for i in range(e2.r1)]

    f1 = [[lift(x) for x in row] for row in e1.full_matrix()]
    f2 = [[lift(x) for x in row] for row in e2.full_matrix()]

    def flat1(g):
        return g[1] if g[0] == 0 else e1.r0 + g[1]

    def flat2(g):
        return g[1] if g[0] == 0 else e2.r0 + g[1]

    n = len(pairs)
    full = _zeros(n, n, ring)
    for g1, g2 in pairs:
        col = index[(g1, g2)]
        for h1 in gens1:
            entry = f1[flat1(h1)][flat1(g1)]
            if not entry.is_zero():
                full[index[(h1, g2)]][col] = full[index[(h1, g2)]][col] + entry
        sign = Scalar.from_rational((-1) ** g1[0])
        for h2 in gens2:
            entry = f2[flat2(h2)][flat2(g2)]
            if not entry.is_zero():
                full[index[(g1, h2)]][col] = full[index[(g1, h2)]][col] + entry * sign

    n0 = len(evens)
    d0 = [[full[n0 + i][j] for j in range(n0)] for i in range(len(odds))]
    d1 = [[full[i][n0 + j] for j in range(len(odds))] for i in range(n0)]
    gradings = None
    if e1.gradings is not None and e2.gradings is not None:
        def gdeg(mf, g):
            return mf.gradings[g[0]][g[1]]

        gradings = (
            tuple(gdeg(e1, p[0]) + gdeg(e2, p[1]) for p in evens),
            tuple(gdeg(e1, p[0]) + gdeg(e2, p[1]) for p in odds),
        )
    return MatrixFactorization(w, d0, d1, r0=n0, r1=len(odds), gradings=gradings)


def tensor_morphisms(m1: MFMorphism, m2: MFMorphism,
                     source: MatrixFactorization | None = None,
                     target: MatrixFactorization | None = None) -> MFMorphism:
    """m1 (x) m2 on tensor products, with the sign (m1 (x) m2)(a (x) b) =
    (-1)^(|m2||a|) m1(a) (x) m2(b).

    `source` and `target` default to fresh tensor products; passing existing
    ones (built by tensor_mf from the same factors) keeps object identity.
    """
    if source is None:
        source = tensor_mf(m1.source, m2.source)
    if target is None:
        target = tensor_mf(m1.target, m2.target)
    ring = source.ring

    def lift(p):
        return p if p.ring == ring else extend_ring(p, ring)

    _, _, _, idx_src = _tensor_basis(m1.source, m2.source)
    pairs_src, _, _, _ = _tensor_basis(m1.source, m2.source)
    _, _, _, idx_dst = _tensor_basis(m1.target, m2.target)

    def flat(mf, g):
        return g[1] if g[0] == 0 else mf.r0 + g[1]

    out = _zeros(target.total_rank, source.total_rank, ring)
    for g1, g2 in pairs_src:
        col = idx_src[(g1, g2)]
        sign = Scalar.from_rational((-1) ** (m2.parity * g1[0]))
        for i1 in range(m1.target.total_rank):
            v1 = m1.matrix[i1][flat(m1.source, g1)]
            if v1.is_zero():
                continue
            h1 = (0, i1) if i1 < m1.target.r0 else (1, i1 - m1.target.r0)
            for i2 in range(m2.target.total_rank):
                v2 = m2.matrix[i2][flat(m2.source, g2)]
                if v2.is_zero():
                    continue
                h2 = (0, i2) if i2 < m2.target.r0 else (1, i2 - m2.target.r0)
                row = idx_dst[(h1, h2)]
                out[row][col] = out[row][col] + lift(v1) * lift(v2) * sign
    return MFMorphism(source, target, m1.parity + m2.parity, out, check_parity=False)


def odd_rank11_generator(mf: MatrixFactorization) -> MFMorphism:
    """The minimal odd closed endomorphism of a rank-(1,1) factorization
    (f, g) with monomial entries: blocks u = f/h, v = -g/h for the monomial
    gcd h, satisfying g u = -v f.  For f = g this is (1 -> -e, e -> 1)."""
    if (mf.r0, mf.r1) != (1, 1):
        raise ValueError("defined for rank-(1,1) factorizations")
    f, g = mf.d0[0][0], mf.d1[0][0]
    if len(f.terms) != 1 or len(g.terms) != 1:
        raise ValueError("odd generator construction needs monomial entries")
    ring = mf.ring
    (mf_mono, cf), = f.terms.items()
    (mg_mono, cg), = g.terms.items()
    h = tuple(min(a, b) for a, b in zip(mf_mono, mg_mono))
    u = ring.monomial(tuple(a - b for a, b in zip(mf_mono, h)), cf)
    v = ring.monomial(tuple(a - b for a, b in zip(mg_mono, h)), -cg)
    phi = MFMorphism.from_blocks(mf, mf, 1, [[u]], [[v]])
    if not phi.is_closed():
        raise AssertionError("odd generator failed to close")
    return phi


def pullback(t, mf: MatrixFactorization) -> MatrixFactorization:
    """Entrywise substitution x_i -> t_i x_i; t must fix the potential."""
    scales = _coerce_scales(t)
    if not (scale_substitute(mf.potential, scales) == mf.potential):
        raise ValueError("t is not a symmetry of the potential")
    d0 = [[scale_substitute(e, scales) for e in row] for row in mf.d0]
    d1 = [[scale_substitute(e, scales) for e in row] for row in mf.d1]
    return MatrixFactorization(mf.potential, d0, d1, r0=mf.r0, r1=mf.r1,
                               gradings=mf.gradings, check=False)


def stabilized_diagonal(w: Polynomial) -> MatrixFactorization:
    """Koszul factorization of w(y) - w(x) built from difference quotients."""
    n = w.ring.nvars
    if n == 0:
        raise ValueError("need at least one variable")
    quotients = difference_quotients(w)
    big = quotients[0].ring
    b_seq = [big.var(n + i) - big.var(i) for i in range(n)]
    return koszul_mf(quotients, b_seq)


def equivariance_power_check(t, alpha: MFMorphism, p: int) -> bool:
    """True iff t^((p-1)*)(alpha) o ... o t^*(alpha) o alpha is the identity."""
    scales = _coerce_scales(t)
    for s in scales:
        if not (s**p == 1):
            raise ValueError("symmetry entries must have order dividing p")
    ring = alpha.source.ring
    composite = alpha.matrix
    power = scales
    for _ in range(p - 1):
        twisted = [[scale_substitute(e, power) for e in row] for row in alpha.matrix]
        composite = _poly_mat_mul(twisted, composite, ring, cols=alpha.source.total_rank)
        power = [a * b for a, b in zip(power, scales)]
    n = alpha.source.total_rank
    for i in range(n):
        for j in range(n):
            expected = ring.one() if i == j else ring.zero()
            if not (composite[i][j] == expected):
                return False
    return True


class OriginComplex:
    """The Z/2-graded scalar complex E|_0 with its square-zero odd operator."""

    __slots__ = ("r0", "r1", "delta0")

    def __init__(self, mf: MatrixFactorization):
        if not mf.potential.constant_term().is_zero():
            raise ValueError("potential must vanish at the origin")
        self.r0, self.r1 = mf.r0, mf.r1
        self.delta0 = [[e.constant_term() for e in row] for row in mf.full_matrix()]
        square = linalg.mat_mul(self.delta0, self.delta0)
        for i in range(self.r0 + self.r1):
            for j in range(self.r0 + self.r1):
                if not square[i][j].is_zero():
                    raise ValueError(
                        "restriction to the origin does not square to zero; "
                        "the potential has terms outside the square of the maximal ideal"
                    )


def restrict_to_origin(mf: MatrixFactorization) -> OriginComplex:
    return OriginComplex(mf)


def supertrace_at_origin(phi: MFMorphism) -> Scalar:
    """str(phi|_0): trace on the even block minus trace on the odd block.

    Odd morphisms have zero diagonal blocks, so their supertrace is 0.
    """
    mf = phi.source
    if phi.target.r0 != mf.r0 or phi.target.r1 != mf.r1:
        raise ValueError("supertrace needs equal source and target ranks")
    total = Scalar.zero()
    for i in range(mf.r0):
        total = total + phi.matrix[i][i].constant_term()
    for i in range(mf.r0, mf.total_rank):
        total = total - phi.matrix[i][i].constant_term()
    return total


# -- stabilization of graded modules ------------------------------------------


def _annihilates(w: Polynomial, pres: GradedModulePresentation) -> bool:
    n_gens = len(pres.gen_degrees)
    if not pres.relations or not pres.relations[0]:
        return w.is_zero()
    cols = [[pres.relations[i][j] for i in range(n_gens)] for j in range(pres.num_relations)]
    gb = buchberger(cols, rank=n_gens)
    for i in range(n_gens):
        target = [w if k == i else w.ring.zero() for k in range(n_gens)]
        if not normal_form(target, gb).is_zero():
            return False
    return True


def stabilize_module(pres: GradedModulePresentation, w: Polynomial):
    """Matrix factorization from a null-homotopy for w on a free resolution.

    Takes the minimal graded resolution (F, d) of the module, then solves
    (d + s)^2 = w id: first a homotopy with d s + s d = w id, then higher
    corrections raising the homological degree until the square is exact.
    Each solve is graded scalar linear algebra with deterministic pivoting.

    Returns (mf, alpha): alpha is the transferred Z/2-equivariant structure
    diag((-1)^(internal degree)) when deg w is even (else None).  Solving in
    graded-homogeneous unknowns makes alpha closed automatically.
    """
    if not _annihilates(w, pres):
        raise ValueError("the potential does not annihilate the module")
    res = free_resolution(pres)
    ring = pres.ring
    steps = len(res.degrees)
    ranks = [len(d) for d in res.degrees]
    offsets = [0]
    for r in ranks:
        offsets.append(offsets[-1] + r)
    total = offsets[-1]
    w_deg = w.total_degree()

    blocks: dict = {}
    for k, mat in enumerate(res.matrices):
        blocks[(k, k + 1)] = mat  # d_{k+1}: F_{k+1} -> F_k

    def total_matrix():
        out = _zeros(total, total, ring)
        for (ti, si), mat in blocks.items():
            for i in range(ranks[ti]):
                for j in range(ranks[si]):
                    out[offsets[ti] + i][offsets[si] + j] = mat[i][j]
        return out

    def residual_of(op):
        sq = _poly_mat_mul(op, op, ring, cols=total)
        for i in range(total):
            sq[i][i] = sq[i][i] - w
        return [[-e for e in row] for row in sq]  # w id - op^2

    operator = total_matrix()
    residual = residual_of(operator)
    guard = 0
    while any(not e.is_zero() for row in residual for e in row):
        guard += 1
        if guard > steps + 2:
            raise AssertionError("homotopy iteration failed to terminate")
        shift = None
        for si in range(steps):
            for ti in range(steps):
                nonzero = any(
                    not residual[offsets[ti] + i][offsets[si] + j].is_zero()
                    for i in range(ranks[ti])
                    for j in range(ranks[si])
                )
                if nonzero:
                    h = ti - si
                    shift = h if shift is None else min(shift, h)
        if shift is None or shift < 0 or shift % 2:
            raise AssertionError("residual has an inconsistent homological shift")
        correction = _solve_homotopy(res, ring, ranks, offsets, residual, shift, w_deg)
        for key, mat in correction.items():
            if key in blocks:
                old = blocks[key]
                blocks[key] = [[old[i][j] + mat[i][j] for j in range(len(mat[0]))]
                               for i in range(len(mat))]
            else:
                blocks[key] = mat
        operator = total_matrix()
        residual = residual_of(operator)

    even_slots = [(k, i) for k in range(0, steps, 2) for i in range(ranks[k])]
    odd_slots = [(k, i) for k in range(1, steps, 2) for i in range(ranks[k])]
    slot_index = {slot: pos for pos, slot in enumerate(even_slots)}
    slot_index.update({slot: len(even_slots) + pos for pos, slot in enumerate(odd_slots)})

    def reindex(flat):
        for k in range(steps):
            if offsets[k] <= flat < offsets[k + 1]:
                return slot_index[(k, flat - offsets[k])]
        raise IndexError(flat)

    perm = [reindex(i) for i in range(total)]
    full = _zeros(total, total, ring)
    for i in range(total):
        for j in range(total):
            full[perm[i]][perm[j]] = operator[i][j]
    n0 = len(even_slots)
    d0 = [[full[n0 + i][j] for j in range(n0)] for i in range(total - n0)]
    d1 = [[full[i][n0 + j] for j in range(total - n0)] for i in range(n0)]
    gradings = (
        tuple(Fraction(res.degrees[k][i]) for (k, i) in even_slots),
        tuple(Fraction(res.degrees[k][i]) for (k, i) in odd_slots),
    )
    mf = MatrixFactorization(w, d0, d1, r0=n0, r1=total - n0, gradings=gradings)

    alpha = None
    if w_deg % 2 == 0 and ring.nvars > 0:
        signs = [Scalar.from_rational((-1) ** int(res.degrees[k][i]))
                 for (k, i) in even_slots + odd_slots]
        minus = [Scalar.from_rational(-1)] * ring.nvars
        alpha = MFMorphism.diagonal(mf, pullback(minus, mf), signs)
        if not alpha.is_closed():
            raise AssertionError("canonical Z/2 structure failed to close")
    return mf, alpha


def _solve_homotopy(res, ring, ranks, offsets, residual, shift, w_deg):
    """Solve d s + s d = residual-at-shift for s raising homological degree by
    shift + 1; unknowns are graded entries of operator degree ((shift+2)/2) deg w."""
    steps = len(ranks)
    degrees = res.degrees
    op_degree = w_deg * ((shift + 2) // 2)

    def entry_monos(source_step, j, target_step, i):
        return _monomials_of_degree(
            ring, degrees[source_step][j] + op_degree - degrees[target_step][i]
        )

    unknown_slots = []
    for k in range(steps):
        kt = k + shift + 1
        if kt >= steps:
            continue
        for i in range(ranks[kt]):
            for j in range(ranks[k]):
                for m in entry_monos(k, j, kt, i):
                    unknown_slots.append((k, i, j, m))
    index = {slot: pos for pos, slot in enumerate(unknown_slots)}
    d_mats = res.matrices

    rows, rhs = [], []
    for k in range(steps):
        kt = k + shift
        if kt >= steps:
            continue
        for i in range(ranks[kt]):
            for j in range(ranks[k]):
                target = residual[offsets[kt] + i][offsets[k] + j]
                coeffs: dict = {}

                def add(mono, pos, c):
                    bucket = coeffs.setdefault(mono, {})
                    bucket[pos] = bucket.get(pos, Scalar.zero()) + c

                # d_{kt+1} s_k
                if kt + 1 < steps:
                    dmat = d_mats[kt]
                    for b in range(ranks[kt + 1]):
                        entry = dmat[i][b]
                        if entry.is_zero():
                            continue
                        for m, c in entry.terms.items():
                            for sm in entry_monos(k, j, kt + 1, b):
                                slot = (k, b, j, sm)
                                if slot in index:
                                    add(tuple(x + y for x, y in zip(m, sm)), index[slot], c)
                # s_{k-1} d_k
                if k >= 1:
                    dmat = d_mats[k - 1]
                    for b in range(ranks[k - 1]):
                        entry = dmat[b][j]
                        if entry.is_zero():
                            continue
                        for m, c in entry.terms.items():
                            for sm in entry_monos(k - 1, b, kt, i):
                                slot = (k - 1, i, b, sm)
                                if slot in index:
                                    add(tuple(x + y for x, y in zip(m, sm)), index[slot], c)
                monos = set(coeffs) | set(target.terms)
                for mono in sorted(monos):
                    row = [Scalar.zero()] * len(unknown_slots)
                    for pos, c in coeffs.get(mono, {}).items():
                        row[pos] = c
                    rows.append(row)
                    rhs.append(target.terms.get(mono, Scalar.zero()))
    if not unknown_slots:
        raise AssertionError("homotopy solve has no unknowns but nonzero residual")
    solution = linalg.solve(rows, rhs)
    if solution is None:
        raise AssertionError("graded homotopy solve is singular")
    out: dict = {}
    for slot, pos in index.items():
        k, i, j, m = slot
        c = solution[pos]
        if c.is_zero():
            continue
        key = (k + shift + 1, k)
        if key not in out:
            out[key] = _zeros(ranks[k + shift + 1], ranks[k], ring)
        out[key][i][j] = out[key][i][j] + ring.monomial(m, c)
    return out


def _monomials_of_degree(ring, degree):
    if degree != int(degree) or degree < 0:
        return []
    degree = int(degree)
    n = ring.nvars
    if n == 0:
        return [()] if degree == 0 else []
    out = []

    def rec(prefix, remaining, pos):
        if pos == n - 1:
            out.append(tuple(prefix + [remaining]))
            return
        for e in range(remaining + 1):
            rec(prefix + [e], remaining - e, pos + 1)

    rec([], degree, 0)
    return out
