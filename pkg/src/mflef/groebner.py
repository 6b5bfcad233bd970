"""Buchberger Groebner bases for ideals and submodules of free modules.

Elements of a rank-r free module are sparse maps (component, monomial) ->
Scalar.  The term order is degree-reverse-lexicographic on monomials, extended
position-over-term to modules with lower component index taking priority; that
fixed priority is what makes the syzygy computation below an elimination.
All pair selection and reduction choices are deterministic, so reduced bases
and everything derived from them are reproducible bit for bit.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .polyring import (
    Monomial,
    PolyRing,
    Polynomial,
    degrevlex_key,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
)
from .scalars import Scalar


class NotInModuleError(ValueError):
    """A lift was requested for an element outside the submodule."""


@dataclass(frozen=True)
class MonomialOrder:
    kind: str = "degrevlex"
    module_extension: str = "position-over-term"


DEFAULT_ORDER = MonomialOrder()


def term_key(term):
    comp, mono = term
    return (-comp, degrevlex_key(mono))


class Vec:
    """Sparse element of a free module R^rank over the polynomial ring."""

    __slots__ = ("ring", "rank", "terms")

    def __init__(self, ring: PolyRing, rank: int, terms: dict):
        self.ring = ring
        self.rank = rank
        self.terms = terms

    @staticmethod
    def zero(ring, rank):
        return Vec(ring, rank, {})

    @staticmethod
    def from_column(column, rank=None):
        ring = column[0].ring
        rank = len(column) if rank is None else rank
        terms = {}
        for comp, poly in enumerate(column):
            for m, c in poly.terms.items():
                terms[(comp, m)] = c
        return Vec(ring, rank, terms)

    @staticmethod
    def from_poly(poly):
        return Vec.from_column([poly], 1)

    def to_column(self):
        cols = [dict() for _ in range(self.rank)]
        for (comp, m), c in self.terms.items():
            cols[comp][m] = c
        return [Polynomial(self.ring, d) for d in cols]

    def to_poly(self):
        if self.rank != 1:
            raise ValueError("not a rank-1 element")
        return self.to_column()[0]

    def is_zero(self):
        return not self.terms

    def lead(self):
        return max(self.terms, key=term_key)

    def scaled(self, coeff: Scalar, mono: Monomial):
        terms = {}
        for (comp, m), c in self.terms.items():
            terms[(comp, monomial_mul(m, mono))] = c * coeff
        return Vec(self.ring, self.rank, terms)

    def sub_scaled(self, other, coeff: Scalar, mono: Monomial):
        terms = dict(self.terms)
        for (comp, m), c in other.terms.items():
            key = (comp, monomial_mul(m, mono))
            s = terms.get(key)
            s = -(c * coeff) if s is None else s - c * coeff
            if s.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = s
        return Vec(self.ring, self.rank, terms)

    def monic(self):
        if not self.terms:
            return self
        inv = self.terms[self.lead()].inverse()
        return Vec(self.ring, self.rank, {k: c * inv for k, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Vec):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(c == other.terms[k] for k, c in self.terms.items())

    __hash__ = None

    def __repr__(self):
        return f"Vec({self.to_column()})"


def _coerce_vec(element, rank=None):
    if isinstance(element, Vec):
        return element
    if isinstance(element, Polynomial):
        return Vec.from_poly(element)
    if isinstance(element, (list, tuple)):
        return Vec.from_column(list(element), rank)
    raise TypeError(f"cannot interpret {element!r} as a module element")


class GroebnerBasis:
    """A reduced Groebner basis of a submodule of R^rank (R^1 = ideal case)."""

    __slots__ = ("ring", "rank", "generators", "order", "reduced", "_leads_by_comp")

    def __init__(self, ring, rank, generators, order=DEFAULT_ORDER):
        self.ring = ring
        self.rank = rank
        self.generators = generators
        self.order = order
        self.reduced = True
        leads = {}
        for idx, g in enumerate(generators):
            comp, mono = g.lead()
            leads.setdefault(comp, []).append((mono, idx))
        self._leads_by_comp = leads

    def __len__(self):
        return len(self.generators)

    def generator_polys(self):
        if self.rank != 1:
            raise ValueError("not an ideal basis")
        return [g.to_poly() for g in self.generators]


def _heap_key(comp, mono):
    # min-heap ordering that pops the LARGEST term (position-over-term degrevlex)
    return (comp, -sum(mono), tuple(reversed(mono)))


def _full_reduce(vec: Vec, gens, with_quotients=False):
    """Unique remainder with no term divisible by any generator lead.

    Works on a mutable term dict with a lazy max-heap of candidate leading
    terms; each reduction step touches only the terms of one generator.
    """
    leads = {}
    lead_data = []
    for idx, g in enumerate(gens):
        key = g.lead()
        comp, mono = key
        leads.setdefault(comp, []).append((mono, idx))
        lead_data.append((key, g.terms[key].inverse()))
    quotients = [dict() for _ in gens] if with_quotients else None
    remainder: dict = {}
    work = dict(vec.terms)
    heap = [_heap_key(c, m) + (c, m) for (c, m) in work]
    heapq.heapify(heap)
    while heap:
        entry = heapq.heappop(heap)
        comp, mono = entry[3], entry[4]
        coeff = work.get((comp, mono))
        if coeff is None:
            continue  # stale heap entry
        reducer = None
        for lead_mono, idx in leads.get(comp, ()):
            if monomial_divides(lead_mono, mono):
                reducer = (lead_mono, idx)
                break
        if reducer is None:
            remainder[(comp, mono)] = coeff
            del work[(comp, mono)]
            continue
        lead_mono, idx = reducer
        g = gens[idx]
        lead_key, lead_inv = lead_data[idx]
        factor = coeff * lead_inv
        qmono = monomial_div(mono, lead_mono)
        del work[(comp, mono)]
        for (gc, gm), gcoef in g.terms.items():
            if (gc, gm) == lead_key:
                continue  # the lead cancels exactly
            tkey = (gc, monomial_mul(gm, qmono))
            old = work.get(tkey)
            if old is None:
                val = -(factor * gcoef)
                if not val.is_zero():
                    work[tkey] = val
                    heapq.heappush(heap, _heap_key(*tkey) + tkey)
            else:
                val = old - factor * gcoef
                if val.is_zero():
                    del work[tkey]
                else:
                    work[tkey] = val
        if with_quotients:
            q = quotients[idx]
            s = q.get(qmono)
            s = factor if s is None else s + factor
            if s.is_zero():
                q.pop(qmono, None)
            else:
                q[qmono] = s
    rem = Vec(vec.ring, vec.rank, remainder)
    if with_quotients:
        return rem, [Polynomial(vec.ring, q) for q in quotients]
    return rem


def buchberger(generators, order: MonomialOrder = DEFAULT_ORDER, rank=None) -> GroebnerBasis:
    """Reduced Groebner basis; normal selection strategy (lowest lcm first)."""
    if order != DEFAULT_ORDER:
        raise ValueError("only the fixed degrevlex/position-over-term order is supported")
    items = [_coerce_vec(g, rank) for g in generators]
    items = [v for v in items if not v.is_zero()]
    if not items:
        if rank is None:
            raise ValueError("rank required for an empty generating set")
        return GroebnerBasis(None, rank, [])
    ring = items[0].ring
    rank = items[0].rank
    basis = []
    heap: list = []
    counter = 0

    def push_pairs(new_idx):
        nonlocal counter
        comp_new, mono_new = basis[new_idx].lead()
        for old_idx in range(new_idx):
            comp_old, mono_old = basis[old_idx].lead()
            if comp_old != comp_new:
                continue
            if rank == 1 and monomial_mul(mono_old, mono_new) == monomial_lcm(mono_old, mono_new):
                continue  # coprime leads: S-polynomial reduces to zero (ideal case)
            lcm = monomial_lcm(mono_old, mono_new)
            heapq.heappush(heap, (sum(lcm), degrevlex_key(lcm), counter, old_idx, new_idx))
            counter += 1

    for v in items:
        basis.append(v.monic())
        push_pairs(len(basis) - 1)

    while heap:
        _, _, _, i, j = heapq.heappop(heap)
        gi, gj = basis[i], basis[j]
        (comp, mi), (_, mj) = gi.lead(), gj.lead()
        lcm = monomial_lcm(mi, mj)
        s = gi.scaled(Scalar.one(), monomial_div(lcm, mi)).sub_scaled(
            gj, Scalar.one(), monomial_div(lcm, mj)
        )
        rem = _full_reduce(s, basis)
        if not rem.is_zero():
            basis.append(rem.monic())
            push_pairs(len(basis) - 1)

    # inter-reduce to the unique reduced basis: prune redundant leads, then
    # one tail-reduction pass (tails depend only on the fixed set of leads)
    kept = []
    leads = [g.lead() for g in basis]
    for i, g in enumerate(basis):
        comp_i, mono_i = leads[i]
        redundant = False
        for j in range(len(basis)):
            if j == i:
                continue
            comp_j, mono_j = leads[j]
            if comp_j != comp_i or not monomial_divides(mono_j, mono_i):
                continue
            if mono_j != mono_i or j < i:
                redundant = True
                break
        if not redundant:
            kept.append(g)
    basis = kept
    reduced = []
    for i, g in enumerate(basis):
        others = basis[:i] + basis[i + 1 :]
        reduced.append(_full_reduce(g, others).monic() if others else g)
    basis = reduced
    basis.sort(key=lambda g: term_key(g.lead()), reverse=True)
    return GroebnerBasis(ring, rank, basis, order)


def normal_form(element, gb: GroebnerBasis):
    """Remainder modulo the basis; idempotent and scalar-linear."""
    was_poly = isinstance(element, Polynomial)
    vec = _coerce_vec(element, gb.rank)
    if not gb.generators:
        return element
    rem = _full_reduce(vec, gb.generators)
    return rem.to_poly() if was_poly else rem


def lift_through(targets, gb: GroebnerBasis):
    """Write each target as a ring-combination of the basis generators.

    Returns one coefficient row (list of Polynomials, aligned with
    gb.generators) per target; raises NotInModuleError on nonzero remainder.
    """
    rows = []
    for target in targets:
        vec = _coerce_vec(target, gb.rank)
        rem, quotients = _full_reduce(vec, gb.generators, with_quotients=True)
        if not rem.is_zero():
            raise NotInModuleError(f"{target!r} is not in the submodule")
        rows.append(quotients)
    return rows


def standard_monomials(gb: GroebnerBasis, nvars=None):
    """All module monomials outside the leading-term module, or None if infinite.

    Entries are (component, monomial) pairs in (component, degrevlex) order;
    their number is the scalar dimension of the quotient.
    """
    nvars = gb.ring.nvars if gb.ring is not None else nvars
    if nvars is None:
        raise ValueError("variable count needed for an empty basis")
    leads: dict = {}
    for g in gb.generators:
        comp, mono = g.lead()
        leads.setdefault(comp, []).append(mono)
    # finite iff every component sees a pure power of every variable
    unit = (0,) * nvars
    for comp in range(gb.rank):
        monos = leads.get(comp, [])
        if unit in monos:
            continue  # unit leading term: component quotient is zero
        if not monos and nvars > 0:
            return None
        for var in range(nvars):
            if not any(m[var] and sum(m) == m[var] for m in monos):
                return None
    result = []
    for comp in range(gb.rank):
        monos = leads.get(comp, [])
        if (0,) * nvars in monos:
            continue
        seen = set()
        queue = [(0,) * nvars]
        standard = []
        while queue:
            m = queue.pop()
            if m in seen:
                continue
            seen.add(m)
            if any(monomial_divides(lead, m) for lead in monos):
                continue
            standard.append(m)
            for var in range(nvars):
                bumped = m[:var] + (m[var] + 1,) + m[var + 1 :]
                if bumped not in seen:
                    queue.append(bumped)
        standard.sort(key=degrevlex_key)
        result.extend((comp, m) for m in standard)
    return result


def syzygy_basis(mat):
    """Generators of {v : mat . v = 0} for a row-major matrix over the ring.

    Computed by the augmented-module elimination: a Groebner basis of the
    columns extended by unit vectors in fresh trailing components; basis
    elements supported only on the trailing block are the syzygies.
    Returns a list of columns (lists of Polynomials of length ncols).
    """
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    if ncols == 0:
        return []
    ring = mat[0][0].ring
    augmented = []
    for j in range(ncols):
        terms = {}
        for i in range(nrows):
            for m, c in mat[i][j].terms.items():
                terms[(i, m)] = c
        terms[(nrows + j, (0,) * ring.nvars)] = Scalar.one()
        augmented.append(Vec(ring, nrows + ncols, terms))
    gb = buchberger(augmented)
    syzygies = []
    for g in gb.generators:
        if any(comp < nrows for comp, _ in g.terms):
            continue
        cols = [dict() for _ in range(ncols)]
        for (comp, m), c in g.terms.items():
            cols[comp - nrows][m] = c
        syzygies.append([Polynomial(ring, d) for d in cols])
    return syzygies


# -- graded presentations and free resolutions -------------------------------


class GradedModulePresentation:
    """coker of a homogeneous matrix between graded free modules.

    `relations` is row-major: rows are indexed by the generators (with the
    given degrees, deg x_i = 1 grading), columns by the relations.
    """

    __slots__ = ("ring", "gen_degrees", "relations")

    def __init__(self, ring: PolyRing, gen_degrees, relations):
        self.ring = ring
        self.gen_degrees = tuple(int(d) for d in gen_degrees)
        self.relations = [list(row) for row in relations]
        if self.relations and len(self.relations) != len(self.gen_degrees):
            raise ValueError("relation matrix needs one row per generator")
        _column_degrees(self.relations, self.gen_degrees)  # validates homogeneity

    @property
    def num_relations(self):
        return len(self.relations[0]) if self.relations and self.relations[0] else 0

    @staticmethod
    def cyclic(ring, relation_polys, degree=0):
        """R/(f_1, ..., f_k) with its generator in the given degree."""
        return GradedModulePresentation(ring, [degree], [list(relation_polys)])


class NonHomogeneousError(ValueError):
    pass


def _column_degrees(mat, row_degrees):
    """Degrees of the column generators; raises unless homogeneous."""
    if not mat or not mat[0]:
        return []
    degrees = []
    for j in range(len(mat[0])):
        degree = None
        for i, row in enumerate(mat):
            entry = row[j]
            if entry.is_zero():
                continue
            terms_deg = {sum(m) for m in entry.terms}
            if len(terms_deg) != 1:
                raise NonHomogeneousError("matrix entry is not homogeneous")
            d = terms_deg.pop() + row_degrees[i]
            if degree is None:
                degree = d
            elif degree != d:
                raise NonHomogeneousError("column mixes degrees")
        degrees.append(degree)  # None for a zero column (dropped by minimization)
    return degrees


class FreeResolution:
    """A minimal graded free resolution: F_0 <- F_1 <- ... <- F_len."""

    __slots__ = ("ring", "degrees", "matrices")

    def __init__(self, ring, degrees, matrices):
        self.ring = ring
        self.degrees = [tuple(d) for d in degrees]
        self.matrices = matrices

    @property
    def length(self):
        return len(self.matrices)

    def rank(self, step):
        return len(self.degrees[step])


def _minimize(mat, col_degrees):
    """Cancel constant entries; returns (mat, col_degrees, kept_row_indices)."""
    nrows = len(mat)
    kept_rows = list(range(nrows))
    mat = [row[:] for row in mat]
    while True:
        unit = None
        for i in range(len(mat)):
            for j in range(len(mat[0]) if mat else 0):
                entry = mat[i][j]
                if not entry.is_zero() and entry.is_constant():
                    unit = (i, j)
                    break
            if unit:
                break
        if unit is None:
            break
        i, j = unit
        c_inv = mat[i][j].constant_term().inverse()
        for j2 in range(len(mat[0])):
            if j2 == j or mat[i][j2].is_zero():
                continue
            factor = mat[i][j2] * c_inv
            for i2 in range(len(mat)):
                mat[i2][j2] = mat[i2][j2] - factor * mat[i2][j]
        for row in mat:
            del row[j]
        del col_degrees[j]
        del mat[i]
        del kept_rows[i]
    # drop zero columns left behind
    j = 0
    while mat and j < (len(mat[0]) if mat else 0):
        if all(row[j].is_zero() for row in mat):
            for row in mat:
                del row[j]
            del col_degrees[j]
        else:
            j += 1
    return mat, col_degrees, kept_rows


def free_resolution(pres: GradedModulePresentation) -> FreeResolution:
    """Minimal graded free resolution by iterated syzygies plus minimization.

    Consecutive composites vanish and no matrix carries a unit entry, so the
    generator degrees per step are the graded Betti numbers.  The length is
    bounded by the variable count (Hilbert syzygy theorem), asserted here.
    """
    ring = pres.ring
    gen_degrees = list(pres.gen_degrees)
    mat = [row[:] for row in pres.relations]
    if not mat or not mat[0]:
        return FreeResolution(ring, [gen_degrees], [])
    col_degs = _column_degrees(mat, gen_degrees)
    # a None column degree marks a zero column; strip them up front
    keep = [j for j, d in enumerate(col_degs) if d is not None]
    mat = [[row[j] for j in keep] for row in mat]
    col_degs = [col_degs[j] for j in keep]

    degrees = [gen_degrees]
    matrices = []
    while mat and mat[0]:
        mat, col_degs, kept_rows = _minimize(mat, col_degs)
        if len(kept_rows) != len(degrees[-1]):
            # rows of `mat` are the generators of the current step, i.e. the
            # columns of the previously emitted matrix: drop those columns too
            degrees[-1] = [degrees[-1][i] for i in kept_rows]
            if matrices:
                prev = matrices[-1]
                matrices[-1] = [[row[j] for j in kept_rows] for row in prev]
        if not mat or not mat[0]:
            break
        matrices.append(mat)
        degrees.append(list(col_degs))
        syz = syzygy_basis(mat)
        if not syz:
            break
        mat = [[syz[j][i] for j in range(len(syz))] for i in range(len(syz[0]))]
        col_degs = _column_degrees(mat, degrees[-1])
        keep = [j for j, d in enumerate(col_degs) if d is not None]
        mat = [[row[j] for j in keep] for row in mat]
        col_degs = [col_degs[j] for j in keep]
    if len(matrices) > ring.nvars:
        raise AssertionError("resolution exceeds the syzygy bound; minimization failed")
    return FreeResolution(ring, degrees, matrices)
