"""Cohomology of the Z/2-graded Hom complex of two matrix factorizations.

Two engines compute supertraces of the twisted endomorphism
phi -> beta o t^*(phi) o alpha:

* the Groebner engine presents H = ker D / im D as the cokernel of a column
  module (kernel via syzygies, image lifted through the kernel basis plus the
  kernel's own syzygies) and reduces cocycles to a standard-monomial basis;
* the graded Euler engine works degree by degree: for each internal degree of
  a quasi-homogeneous Hom complex the trace on the cohomology subquotient of
  the finite three-term strand is plain scalar linear algebra.

They are independent; the corpus runner cross-checks them.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .groebner import Vec, buchberger, normal_form, standard_monomials, syzygy_basis
from .milnor import NonIsolatedError
from .mfcore import MatrixFactorization, MFMorphism, _poly_mat_mul, _zeros
from .polyring import Polynomial, WeightSystem, scale_substitute
from .scalars import RootOfUnity, Scalar, as_scalar


def _coerce_scales(t):
    return [s.to_scalar() if isinstance(s, RootOfUnity) else as_scalar(s) for s in t]


class HomComplex:
    """Hom(A, B) as two free modules (even, odd) with the odd differential."""

    __slots__ = ("source", "target", "ring", "pairs", "pair_index", "d_matrices")

    def __init__(self, source: MatrixFactorization, target: MatrixFactorization):
        if source.ring != target.ring:
            raise ValueError("factorizations live over different rings")
        if not (source.potential == target.potential):
            raise ValueError("factorizations have different potentials")
        self.source, self.target = source, target
        self.ring = source.ring
        ps, pt = source.parities(), target.parities()
        pairs = ([], [])
        for a in range(target.total_rank):
            for b in range(source.total_rank):
                pairs[(pt[a] + ps[b]) % 2].append((a, b))
        self.pairs = (tuple(pairs[0]), tuple(pairs[1]))
        self.pair_index = (
            {p: i for i, p in enumerate(pairs[0])},
            {p: i for i, p in enumerate(pairs[1])},
        )
        self.d_matrices = (self._build_d(0), self._build_d(1))
        for parity in (0, 1):
            square = _poly_mat_mul(
                self.d_matrices[1 - parity], self.d_matrices[parity], self.ring,
                cols=len(self.pairs[parity]),
            )
            if any(not e.is_zero() for row in square for e in row):
                raise AssertionError("Hom-complex differential does not square to zero")

    def _build_d(self, parity):
        """Matrix of D = d_B phi - (-1)^parity phi d_A on the parity block."""
        ring = self.ring
        src_pairs = self.pairs[parity]
        dst_pairs = self.pairs[1 - parity]
        dst_index = self.pair_index[1 - parity]
        db = self.target.full_matrix()
        da = self.source.full_matrix()
        sign = Scalar.from_rational(1 if parity == 0 else -1)
        mat = _zeros(len(dst_pairs), len(src_pairs), ring)
        for col, (a, b) in enumerate(src_pairs):
            for i in range(self.target.total_rank):
                entry = db[i][a]
                if not entry.is_zero():
                    row = dst_index[(i, b)]
                    mat[row][col] = mat[row][col] + entry
            for j in range(self.source.total_rank):
                entry = da[b][j]
                if not entry.is_zero():
                    row = dst_index[(a, j)]
                    mat[row][col] = mat[row][col] - entry * sign
        return mat

    def flatten(self, phi: MFMorphism):
        """Column of phi's entries in the flattened basis of its parity."""
        parity = phi.parity
        return [phi.matrix[a][b] for (a, b) in self.pairs[parity]]

    def unflatten(self, parity, column) -> MFMorphism:
        mat = _zeros(self.target.total_rank, self.source.total_rank, self.ring)
        for (a, b), entry in zip(self.pairs[parity], column):
            mat[a][b] = entry
        return MFMorphism(self.source, self.target, parity, mat, check_parity=False)


def hom_complex(source: MatrixFactorization, target: MatrixFactorization) -> HomComplex:
    return HomComplex(source, target)


class CohomologyBasis:
    """Even/odd bases of H(Hom(A,B)) with reduction of cocycles to coordinates."""

    __slots__ = ("hom", "std", "_kernel_cols", "_lift_gb", "_rel_gb")

    def __init__(self, hom: HomComplex):
        self.hom = hom
        ring = hom.ring
        std = []
        kernels = []
        lift_gbs = []
        rel_gbs = []
        for parity in (0, 1):
            d_out = hom.d_matrices[parity]
            d_in = hom.d_matrices[1 - parity]
            npairs = len(hom.pairs[parity])
            kernel_cols = syzygy_basis(d_out) if d_out else [
                [ring.one() if i == j else ring.zero() for i in range(npairs)]
                for j in range(npairs)
            ]
            s = len(kernel_cols)
            kernels.append(kernel_cols)
            if s == 0:
                std.append(())
                lift_gbs.append(None)
                rel_gbs.append(None)
                continue
            # relations: {v : K v lies in im D} via syzygies of [K | image]
            image_cols = (
                [[d_in[i][j] for i in range(npairs)] for j in range(len(d_in[0]))]
                if d_in and d_in[0]
                else []
            )
            combined = [
                [
                    (kernel_cols[j][i] if j < s else image_cols[j - s][i])
                    for j in range(s + len(image_cols))
                ]
                for i in range(npairs)
            ]
            rel_cols = syzygy_basis(combined)
            rel_vecs = [Vec.from_column(col[:s], s) for col in rel_cols]
            rel_vecs = [v for v in rel_vecs if not v.is_zero()]
            rel_gb = buchberger(rel_vecs, rank=s) if rel_vecs else buchberger([], rank=s)
            monos = standard_monomials(rel_gb, nvars=ring.nvars)
            if monos is None:
                raise NonIsolatedError(
                    "Hom-complex cohomology is infinite-dimensional; "
                    "the potential is not an isolated singularity"
                )
            std.append(tuple(monos))
            rel_gbs.append(rel_gb)
            # lifting basis: GB of columns of K augmented by unit tails
            augmented = []
            for j in range(s):
                terms = {}
                for i in range(npairs):
                    for m, c in kernel_cols[j][i].terms.items():
                        terms[(i, m)] = c
                terms[(npairs + j, (0,) * ring.nvars)] = Scalar.one()
                augmented.append(Vec(ring, npairs + s, terms))
            lift_gbs.append(buchberger(augmented))
        self.std = tuple(std)
        self._kernel_cols = tuple(kernels)
        self._lift_gb = tuple(lift_gbs)
        self._rel_gb = tuple(rel_gbs)

    @property
    def dims(self):
        return (len(self.std[0]), len(self.std[1]))

    def parities(self):
        return [0] * len(self.std[0]) + [1] * len(self.std[1])

    def total_dim(self):
        return len(self.std[0]) + len(self.std[1])

    def representative(self, parity, index) -> MFMorphism:
        comp, mono = self.std[parity][index]
        column = [
            self.hom.ring.monomial(mono) * entry
            for entry in self._kernel_cols[parity][comp]
        ]
        return self.hom.unflatten(parity, column)

    def reduce(self, phi: MFMorphism):
        """Coordinates of a closed morphism's class in the chosen basis."""
        parity = phi.parity
        column = self.hom.flatten(phi)
        s = len(self._kernel_cols[parity])
        if s == 0:
            if any(not e.is_zero() for e in column):
                raise ValueError("morphism is not a cocycle")
            return []
        npairs = len(self.hom.pairs[parity])
        ring = self.hom.ring
        terms = {}
        for i, entry in enumerate(column):
            for m, c in entry.terms.items():
                terms[(i, m)] = c
        vec = Vec(ring, npairs + s, terms)
        rem = normal_form(vec, self._lift_gb[parity])
        coeff_cols = [dict() for _ in range(s)]
        for (comp, m), c in rem.terms.items():
            if comp < npairs:
                raise ValueError("morphism is not a cocycle (lift through the kernel failed)")
            coeff_cols[comp - npairs][m] = -c
        coeffs = Vec.from_column([Polynomial(ring, d) for d in coeff_cols], s)
        nf = normal_form(coeffs, self._rel_gb[parity])
        coords = [Scalar.zero()] * len(self.std[parity])
        lookup = {key: k for k, key in enumerate(self.std[parity])}
        for key, c in nf.terms.items():
            if key not in lookup:
                raise AssertionError("normal form left a non-standard monomial")
            coords[lookup[key]] = c
        return coords


def cohomology(hom: HomComplex) -> CohomologyBasis:
    return CohomologyBasis(hom)


def twisted_endomorphism_image(t, alpha: MFMorphism, beta: MFMorphism, phi: MFMorphism) -> MFMorphism:
    """(-1)^(|phi||beta|) beta o t^*(phi) o alpha as a morphism A -> B.

    The sign is the Koszul rule for moving phi into the middle slot of the
    fixed pair (beta, alpha); it only matters when the twisting morphisms are
    odd, where dropping it would make every supertrace vanish identically.
    """
    scales = _coerce_scales(t)
    twisted = MFMorphism(
        alpha.target,
        beta.source,
        phi.parity,
        [[scale_substitute(e, scales) for e in row] for row in phi.matrix],
        check_parity=False,
    )
    result = beta.compose(twisted).compose(alpha)
    if phi.parity and beta.parity:
        result = result.scale(Scalar.from_rational(-1))
    return result


def induced_endomorphism(t, alpha: MFMorphism, beta: MFMorphism, basis: CohomologyBasis):
    """Matrix of phi -> beta o t^*(phi) o alpha on the cohomology basis.

    Rows and columns run over the even basis then the odd basis.  alpha and
    beta must be closed; the result is representative-independent.
    """
    if not alpha.is_closed() or not beta.is_closed():
        raise ValueError("alpha and beta must be closed morphisms")
    n = basis.total_dim()
    dims = basis.dims
    out = [[Scalar.zero() for _ in range(n)] for _ in range(n)]
    shift = (alpha.parity + beta.parity) % 2
    for parity in (0, 1):
        for k in range(dims[parity]):
            phi = basis.representative(parity, k)
            psi = twisted_endomorphism_image(t, alpha, beta, phi)
            coords = basis.reduce(psi)
            target_parity = (parity + shift) % 2
            col = k if parity == 0 else dims[0] + k
            row_offset = 0 if target_parity == 0 else dims[0]
            for i, c in enumerate(coords):
                out[row_offset + i][col] = c
    return out


def supertrace_on_cohomology(matrix, parities) -> Scalar:
    total = Scalar.zero()
    for i, parity in enumerate(parities):
        term = matrix[i][i]
        total = total + (term if parity == 0 else -term)
    return total


def euler_characteristic(basis: CohomologyBasis) -> int:
    dims = basis.dims
    return dims[0] - dims[1]


# -- graded Euler engine -------------------------------------------------------


def _monomials_of_weighted_degree(ring, weights, value):
    """All exponent tuples of exact weighted degree `value` (weights > 0)."""
    n = ring.nvars
    out = []

    def rec(prefix, remaining, pos):
        if pos == n:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        q = weights[pos]
        limit = int(remaining / q) if remaining >= 0 else -1
        for e in range(limit + 1):
            rec(prefix + [e], remaining - q * e, pos + 1)

    rec([], Fraction(value), 0)
    return out


def _operator_shift(mf: MatrixFactorization, weights):
    """Common weighted degree shift of the odd operator; validates homogeneity."""
    grading = mf.grading_list()
    if grading is None:
        raise ValueError("factorization carries no internal grading")
    full = mf.full_matrix()
    shift = None
    for i in range(mf.total_rank):
        for j in range(mf.total_rank):
            entry = full[i][j]
            if entry.is_zero():
                continue
            s = entry.weighted_degree([Fraction(q) for q in weights]) + grading[i] - grading[j]
            if shift is None:
                shift = s
            elif shift != s:
                raise ValueError("operator is not homogeneous for the declared grading")
    return shift


def _morphism_degree(phi, weights, src_grading, dst_grading):
    """Common internal degree of a homogeneous morphism; raises otherwise."""
    degree = None
    for i in range(len(phi.matrix)):
        for j in range(len(phi.matrix[0])):
            entry = phi.matrix[i][j]
            if entry.is_zero():
                continue
            d = entry.weighted_degree(weights) + dst_grading[i] - src_grading[j]
            if degree is None:
                degree = d
            elif degree != d:
                raise ValueError("morphism is not homogeneous for the declared gradings")
    return Fraction(0) if degree is None else degree


class GradedHomPiece:
    """Basis of one internal degree of the Hom complex, one parity."""

    __slots__ = ("elements", "index")

    def __init__(self, elements):
        self.elements = elements  # list of (a, b, mono)
        self.index = {e: i for i, e in enumerate(elements)}


def default_window(w: Polynomial, a: MatrixFactorization, b: MatrixFactorization):
    """[-B, B] with B = socle degree + grading spread + 1 (degree of w)."""
    ws = WeightSystem.of(w)
    if ws is None:
        raise ValueError("potential is not quasi-homogeneous")
    socle = sum((1 - 2 * q) for q in ws.weights)
    gradings = list(a.grading_list() or []) + list(b.grading_list() or [])
    spread = (max(gradings) - min(gradings)) if gradings else Fraction(0)
    return socle + spread + 1


def graded_euler_supertrace(a, b, t, alpha, beta, window=None):
    """Supertrace of the twisted endomorphism via per-degree linear algebra.

    For each internal degree d the three-term strand C^{1-P}_{d-s} -> C^P_d ->
    C^{1-P}_{d+s} is a finite scalar complex preserved by the twisted
    endomorphism; the trace on its middle cohomology is computed directly and
    summed over the window (outside of which cohomology vanishes).
    """
    w = a.potential
    ws = WeightSystem.of(w)
    if ws is None:
        raise ValueError("potential is not quasi-homogeneous")
    weights = [Fraction(q) for q in ws.weights]
    shift_a = _operator_shift(a, weights)
    shift_b = _operator_shift(b, weights)
    if shift_a != shift_b:
        raise ValueError("source and target gradings use different operator shifts")
    s_deg = shift_a
    ga, gb = a.grading_list(), b.grading_list()
    twist_degree = _morphism_degree(alpha, weights, ga, ga) + _morphism_degree(
        beta, weights, gb, gb
    )
    if twist_degree != 0:
        # a homogeneous degree-shifting operator has no diagonal on graded
        # cohomology, so its supertrace vanishes identically
        return Scalar.zero()
    if (alpha.parity + beta.parity) % 2:
        raise ValueError("parity-reversing twists have no supertrace")
    if window is None:
        window = default_window(w, a, b)
    window = Fraction(window)

    ring = a.ring
    pa, pb = a.parities(), b.parities()
    scales = _coerce_scales(t)

    # candidate internal degrees inside [-window, window]
    degrees = set()
    for ai in range(b.total_rank):
        for bj in range(a.total_rank):
            offset = gb[ai] - ga[bj]
            # monomial degrees are multiples of min weight; enumerate by scan
            for mono in _monomials_up_to(ring, weights, window - offset + abs(s_deg)):
                d = _wdeg(mono, weights) + offset
                if -window <= d <= window:
                    degrees.add(d)
    total = Scalar.zero()
    for d in sorted(degrees):
        for parity in (0, 1):
            piece = _piece(a, b, weights, ga, gb, pa, pb, parity, d)
            if not piece.elements:
                continue
            piece_in = _piece(a, b, weights, ga, gb, pa, pb, 1 - parity, d - s_deg)
            piece_out = _piece(a, b, weights, ga, gb, pa, pb, 1 - parity, d + s_deg)
            m_out = _d_matrix(a, b, piece, piece_out, parity, ring)
            m_in = _d_matrix(a, b, piece_in, piece, 1 - parity, ring)
            t_mat = _twist_matrix(a, b, piece, scales, alpha, beta, ring)
            tr = _subquotient_trace(m_out, m_in, t_mat)
            total = total + (tr if parity == 0 else -tr)
    return total


def graded_cohomology_dimensions(a, b, window=None):
    """Brute-force degree-truncated oracle for the cohomology dimensions."""
    w = a.potential
    ws = WeightSystem.of(w)
    weights = [Fraction(q) for q in ws.weights]
    s_deg = _operator_shift(a, weights)
    ga, gb = a.grading_list(), b.grading_list()
    pa, pb = a.parities(), b.parities()
    ring = a.ring
    if window is None:
        window = default_window(w, a, b)
    degrees = set()
    for ai in range(b.total_rank):
        for bj in range(a.total_rank):
            offset = gb[ai] - ga[bj]
            for mono in _monomials_up_to(ring, weights, window - offset + abs(s_deg)):
                d = _wdeg(mono, weights) + offset
                if -window <= d <= window:
                    degrees.add(d)
    dims = [0, 0]
    for d in sorted(degrees):
        for parity in (0, 1):
            piece = _piece(a, b, weights, ga, gb, pa, pb, parity, d)
            if not piece.elements:
                continue
            piece_in = _piece(a, b, weights, ga, gb, pa, pb, 1 - parity, d - s_deg)
            piece_out = _piece(a, b, weights, ga, gb, pa, pb, 1 - parity, d + s_deg)
            m_out = _d_matrix(a, b, piece, piece_out, parity, ring)
            m_in = _d_matrix(a, b, piece_in, piece, 1 - parity, ring)
            kernel = linalg.nullspace(m_out) if m_out else [
                [Scalar.one() if i == j else Scalar.zero() for i in range(len(piece.elements))]
                for j in range(len(piece.elements))
            ]
            image_rank = linalg.rank(m_in) if m_in and m_in[0] else 0
            dims[parity] += len(kernel) - image_rank
    return tuple(dims)


def _wdeg(mono, weights):
    return sum(q * e for q, e in zip(weights, mono))


def _monomials_up_to(ring, weights, bound):
    if bound < 0:
        return []
    out = []
    n = ring.nvars

    def rec(prefix, remaining, pos):
        if pos == n:
            out.append(tuple(prefix))
            return
        q = weights[pos]
        limit = int(remaining / q)
        for e in range(limit + 1):
            rec(prefix + [e], remaining - q * e, pos + 1)

    rec([], Fraction(bound), 0)
    return out


def _piece(a, b, weights, ga, gb, pa, pb, parity, degree) -> GradedHomPiece:
    elements = []
    for ai in range(b.total_rank):
        for bj in range(a.total_rank):
            if (pb[ai] + pa[bj]) % 2 != parity:
                continue
            need = degree - (gb[ai] - ga[bj])
            for mono in _monomials_of_weighted_degree(a.ring, weights, need):
                elements.append((ai, bj, mono))
    return GradedHomPiece(elements)


def _d_matrix(a, b, src: GradedHomPiece, dst: GradedHomPiece, parity, ring):
    """Scalar matrix of D between two degree pieces."""
    da, db = a.full_matrix(), b.full_matrix()
    sign = Scalar.from_rational(1 if parity == 0 else -1)
    rows = [[Scalar.zero() for _ in src.elements] for _ in dst.elements]
    for col, (ai, bj, mono) in enumerate(src.elements):
        for i in range(b.total_rank):
            entry = db[i][ai]
            if entry.is_zero():
                continue
            for m, c in entry.terms.items():
                key = (i, bj, tuple(x + y for x, y in zip(m, mono)))
                row = dst.index.get(key)
                if row is not None:
                    rows[row][col] = rows[row][col] + c
        for j in range(a.total_rank):
            entry = da[bj][j]
            if entry.is_zero():
                continue
            for m, c in entry.terms.items():
                key = (ai, j, tuple(x + y for x, y in zip(m, mono)))
                row = dst.index.get(key)
                if row is not None:
                    rows[row][col] = rows[row][col] - c * sign
    return rows


def _twist_matrix(a, b, piece: GradedHomPiece, scales, alpha, beta, ring):
    pa, pb = a.parities(), b.parities()
    rows = [[Scalar.zero() for _ in piece.elements] for _ in piece.elements]
    for col, (ai, bj, mono) in enumerate(piece.elements):
        factor = Scalar.one()
        # Koszul sign for moving the element past the (odd) post-twist
        if beta.parity and (pb[ai] + pa[bj]) % 2:
            factor = Scalar.from_rational(-1)
        for t, e in zip(scales, mono):
            if e:
                factor = factor * t**e
        for i in range(b.total_rank):
            beta_entry = beta.matrix[i][ai]
            if beta_entry.is_zero():
                continue
            for mb, cb in beta_entry.terms.items():
                for j in range(a.total_rank):
                    alpha_entry = alpha.matrix[bj][j]
                    if alpha_entry.is_zero():
                        continue
                    for ma, ca in alpha_entry.terms.items():
                        key = (
                            i,
                            j,
                            tuple(x + y + z for x, y, z in zip(mono, mb, ma)),
                        )
                        row = piece.index.get(key)
                        if row is not None:
                            rows[row][col] = rows[row][col] + factor * cb * ca
    return rows


def _subquotient_trace(m_out, m_in, t_mat):
    """Trace of t_mat on ker(m_out)/im(m_in); t_mat must preserve both."""
    n = len(t_mat)
    if n == 0:
        return Scalar.zero()
    kernel = linalg.nullspace(m_out) if m_out else [
        [Scalar.one() if i == j else Scalar.zero() for i in range(n)] for j in range(n)
    ]
    k = len(kernel)
    if k == 0:
        return Scalar.zero()
    K = [[kernel[j][i] for j in range(k)] for i in range(n)]  # n x k
    # T restricted to the kernel, in kernel coordinates
    TK = []
    for j in range(k):
        tv = linalg.mat_vec(t_mat, [kernel[j][i] for i in range(n)])
        coords = linalg.solve(K, tv)
        if coords is None:
            raise AssertionError("twist does not preserve the kernel")
        TK.append(coords)
    Z = [[TK[j][i] for j in range(k)] for i in range(k)]  # k x k, columns = images
    trace_total = Scalar.zero()
    for i in range(k):
        trace_total = trace_total + Z[i][i]
    # image inside kernel coordinates
    image_cols = []
    ncols_in = len(m_in[0]) if m_in and m_in[0] else 0
    for j in range(ncols_in):
        col = [m_in[i][j] for i in range(n)]
        coords = linalg.solve(K, col)
        if coords is None:
            raise AssertionError("image does not lie in the kernel")
        image_cols.append(coords)
    if not image_cols:
        return trace_total
    W = [[image_cols[j][i] for j in range(len(image_cols))] for i in range(k)]
    basis_vecs = _column_space_basis(W)
    if not basis_vecs:
        return trace_total
    E = [[basis_vecs[j][i] for j in range(len(basis_vecs))] for i in range(k)]
    trace_w = Scalar.zero()
    for j in range(len(basis_vecs)):
        zv = linalg.mat_vec(Z, basis_vecs[j])
        coords = linalg.solve(E, zv)
        if coords is None:
            raise AssertionError("twist does not preserve the image")
        trace_w = trace_w + coords[j]
    return trace_total - trace_w


def _column_space_basis(mat):
    """A maximal independent set of columns of mat, deterministic selection."""
    if not mat or not mat[0]:
        return []
    nrows, ncols = len(mat), len(mat[0])
    chosen = []
    current_rank = 0
    for j in range(ncols):
        trial = [[mat[i][c] for c in chosen + [j]] for i in range(nrows)]
        if linalg.rank(trial) > current_rank:
            chosen.append(j)
            current_rank += 1
    return [[mat[i][j] for i in range(nrows)] for j in chosen]
