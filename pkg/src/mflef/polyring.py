"""Sparse multivariate polynomials over cyclotomic scalars.

Monomials are exponent tuples indexed by the ring's variables; a polynomial
stores a monomial -> nonzero Scalar map.  The canonical term order used for
display and leading terms is degree-reverse-lexicographic.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import RootOfUnity, Scalar, as_scalar

Monomial = tuple  # tuple[int, ...]


class PolyRing:
    """Variable context for polynomials: an ordered tuple of variable names."""

    __slots__ = ("vars",)

    def __init__(self, variables):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        object.__setattr__(self, "vars", variables)

    def __setattr__(self, *args):
        raise AttributeError("PolyRing is immutable")

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.vars == other.vars

    def __hash__(self):
        return hash(self.vars)

    def __repr__(self):
        return f"PolyRing{self.vars}"

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return self.const(1)

    def const(self, value) -> Polynomial:
        c = as_scalar(value)
        if c.is_zero():
            return Polynomial(self, {})
        return Polynomial(self, {(0,) * self.nvars: c})

    def var(self, name_or_index) -> Polynomial:
        if isinstance(name_or_index, str):
            index = self.vars.index(name_or_index)
        else:
            index = name_or_index
        exps = [0] * self.nvars
        exps[index] = 1
        return Polynomial(self, {tuple(exps): Scalar.one()})

    def monomial(self, exps, coeff=1) -> Polynomial:
        exps = tuple(exps)
        if len(exps) != self.nvars or any(e < 0 for e in exps):
            raise ValueError("bad exponent vector")
        c = as_scalar(coeff)
        return Polynomial(self, {exps: c} if not c.is_zero() else {})


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def degrevlex_key(m: Monomial):
    return (sum(m), tuple(-e for e in reversed(m)))


class Polynomial:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, *args):
        raise AttributeError("Polynomial is immutable")

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, mono: Monomial) -> Scalar:
        return self.terms.get(tuple(mono), Scalar.zero())

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.ring.nvars, Scalar.zero())

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def weighted_degree(self, weights) -> Fraction:
        """Common weighted degree of all terms; raises if inhomogeneous."""
        if not self.terms:
            raise ValueError("the zero polynomial has no weighted degree")
        degrees = {sum(Fraction(w) * e for w, e in zip(weights, m)) for m in self.terms}
        if len(degrees) != 1:
            raise ValueError("polynomial is not weighted-homogeneous")
        return degrees.pop()

    def is_homogeneous(self, weights, degree) -> bool:
        return all(
            sum(Fraction(w) * e for w, e in zip(weights, m)) == degree for m in self.terms
        )

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial")
        return max(self.terms, key=degrevlex_key)

    def sorted_terms(self):
        """Terms in descending degrevlex order (deterministic serialization)."""
        return sorted(self.terms.items(), key=lambda kv: degrevlex_key(kv[0]), reverse=True)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        if isinstance(other, (int, Fraction, Scalar, RootOfUnity)):
            return self.ring.const(as_scalar(other))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                terms.pop(m, None)
            else:
                terms[m] = s
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar, RootOfUnity)):
            c = as_scalar(other)
            if c.is_zero():
                return self.ring.zero()
            return Polynomial(self.ring, {m: a * c for m, a in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = monomial_mul(m1, m2)
                c = c1 * c2
                s = terms.get(m)
                s = c if s is None else s + c
                if s.is_zero():
                    terms.pop(m, None)
                else:
                    terms[m] = s
        return Polynomial(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial powers take nonnegative integer exponents")
        result = self.ring.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(c == other.terms[m] for m, c in self.terms.items())

    def __ne__(self, other):
        result = self.__eq__(other)
        return NotImplemented if result is NotImplemented else not result

    __hash__ = None

    # -- display -----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                f"{v}^{e}" if e > 1 else v for v, e in zip(self.ring.vars, m) if e
            )
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append(f"-{mono}")
            elif ("+" in cs) or ("-" in cs[1:]) or (" " in cs):
                parts.append(f"({cs})*{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        text = parts[0]
        for p in parts[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text

    def __repr__(self):
        return f"Poly({self})"


# -- calculus and substitution ----------------------------------------------


def partial_derivative(f: Polynomial, i: int) -> Polynomial:
    if not 0 <= i < f.ring.nvars:
        raise ValueError("variable index out of range")
    terms: dict = {}
    for m, c in f.terms.items():
        e = m[i]
        if e:
            dm = m[:i] + (e - 1,) + m[i + 1 :]
            s = terms.get(dm)
            s = c * e if s is None else s + c * e
            if s.is_zero():
                terms.pop(dm, None)
            else:
                terms[dm] = s
    return Polynomial(f.ring, terms)


def scale_substitute(f: Polynomial, scales) -> Polynomial:
    """f(t_1 x_1, ..., t_n x_n) for scalar (root-of-unity) multipliers t_i."""
    ts = [as_scalar(t) for t in scales]
    if len(ts) != f.ring.nvars:
        raise ValueError("one multiplier per variable required")
    terms: dict = {}
    for m, c in f.terms.items():
        factor = c
        for t, e in zip(ts, m):
            if e:
                factor = factor * t**e
        if not factor.is_zero():
            terms[m] = factor
    return Polynomial(f.ring, terms)


def substitute(f: Polynomial, ring: PolyRing, images) -> Polynomial:
    """Ring map sending variable i to images[i] (a polynomial of `ring`)."""
    images = list(images)
    if len(images) != f.ring.nvars:
        raise ValueError("one image per variable required")
    cache: dict = {}

    def var_power(i, e):
        key = (i, e)
        if key not in cache:
            cache[key] = images[i] ** e
        return cache[key]

    result = ring.zero()
    for m, c in f.terms.items():
        term = ring.const(c)
        for i, e in enumerate(m):
            if e:
                term = term * var_power(i, e)
        result = result + term
    return result


def extend_ring(f: Polynomial, ring: PolyRing) -> Polynomial:
    """Reinterpret f inside a ring containing all of f's variables by name."""
    index = [ring.vars.index(v) for v in f.ring.vars]
    terms = {}
    for m, c in f.terms.items():
        exps = [0] * ring.nvars
        for src, dst in enumerate(index):
            exps[dst] = m[src]
        terms[tuple(exps)] = c
    return Polynomial(ring, terms)


def set_variables_to_zero(f: Polynomial, indices, target_ring: PolyRing | None = None) -> Polynomial:
    """Kill the listed variables; the result lives in the ring of the rest."""
    dead = set(indices)
    keep = [i for i in range(f.ring.nvars) if i not in dead]
    if target_ring is None:
        target_ring = PolyRing(tuple(f.ring.vars[i] for i in keep))
    terms = {}
    for m, c in f.terms.items():
        if any(m[i] for i in dead):
            continue
        terms[tuple(m[i] for i in keep)] = c
    return Polynomial(target_ring, terms)


def exact_divide(f: Polynomial, g: Polynomial) -> Polynomial:
    """The quotient f/g when the division is exact; raises otherwise."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    quotient = f.ring.zero()
    rem = f
    lm = g.leading_monomial()
    lc = g.terms[lm]
    while not rem.is_zero():
        m = rem.leading_monomial()
        if not monomial_divides(lm, m):
            raise ArithmeticError("division is not exact")
        q = f.ring.monomial(monomial_div(m, lm), rem.terms[m] / lc)
        quotient = quotient + q
        rem = rem - q * g
    return quotient


def mirror_ring(ring: PolyRing, prefix: str = "y_") -> PolyRing:
    """The ring in x-variables plus a mirrored copy (used for w(y) - w(x))."""
    mirrored = tuple(prefix + v for v in ring.vars)
    if set(mirrored) & set(ring.vars):
        raise ValueError("mirrored variable names collide")
    return PolyRing(ring.vars + mirrored)


def difference_quotients(w: Polynomial) -> list[Polynomial]:
    """The telescoping difference quotients of w in doubled variables.

    Returns the unique polynomials D_i(x, y) with exactly

        w(y) - w(x) = sum_i D_i(x, y) * (y_i - x_i),

    where D_i = (w(y_1..y_i, x_{i+1}..x_n) - w(y_1..y_{i-1}, x_i..x_n))
    divided exactly by (y_i - x_i).
    """
    n = w.ring.nvars
    big = mirror_ring(w.ring)

    def mixed(k):
        # w with the first k variables replaced by their mirrors
        images = [big.var(n + i) if i < k else big.var(i) for i in range(n)]
        return substitute(w, big, images)

    quotients = []
    prev = mixed(0)
    for i in range(n):
        cur = mixed(i + 1)
        denom = big.var(n + i) - big.var(i)
        quotients.append(exact_divide(cur - prev, denom))
        prev = cur
    return quotients


def polynomial_matrix_determinant(rows: list[list[Polynomial]]) -> Polynomial:
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    ring = rows[0][0].ring

    def minor_det(row_ids, col_ids):
        if len(row_ids) == 1:
            return rows[row_ids[0]][col_ids[0]]
        i = row_ids[0]
        total = ring.zero()
        for pos, j in enumerate(col_ids):
            entry = rows[i][j]
            if entry.is_zero():
                continue
            sub = minor_det(row_ids[1:], col_ids[:pos] + col_ids[pos + 1 :])
            term = entry * sub
            total = total + term if pos % 2 == 0 else total - term
        return total

    return minor_det(tuple(range(n)), tuple(range(n)))


def hessian_determinant(w: Polynomial) -> Polynomial:
    """det(d^2 w / dx_i dx_j), expanded exactly; 1 in zero variables."""
    n = w.ring.nvars
    if n == 0:
        return w.ring.one()
    hess = [[partial_derivative(partial_derivative(w, i), j) for j in range(n)] for i in range(n)]
    return polynomial_matrix_determinant(hess)


def check_symmetry(w: Polynomial, scales) -> bool:
    return scale_substitute(w, scales) == w


def find_weights(w: Polynomial):
    """Positive rational weights giving every term of w weighted degree 1.

    Returns a tuple of Fractions, or None when w is not quasi-homogeneous.
    Underdetermined directions (variables not pinned by the monomials) are
    fixed at 1/2, the largest weight an isolated singularity allows.
    """
    n = w.ring.nvars
    if n == 0 or w.is_zero():
        return None
    rows = [[Fraction(e) for e in m] + [Fraction(1)] for m in sorted(w.terms, key=degrevlex_key)]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [c * inv for c in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [c - f * p for c, p in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][n]:
            return None  # inconsistent: not quasi-homogeneous
    weights = [Fraction(1, 2)] * n
    for i, col in enumerate(pivots):
        weights[col] = rows[i][n] - sum(
            rows[i][j] * weights[j] for j in range(n) if j != col and rows[i][j]
        )
    if any(q <= 0 for q in weights):
        return None
    return tuple(weights)


class WeightSystem:
    """Positive weights per variable under which w has total degree `degree`."""

    __slots__ = ("weights", "degree")

    def __init__(self, weights, degree=Fraction(1)):
        object.__setattr__(self, "weights", tuple(Fraction(q) for q in weights))
        object.__setattr__(self, "degree", Fraction(degree))

    def __setattr__(self, *args):
        raise AttributeError("WeightSystem is immutable")

    @staticmethod
    def of(w: Polynomial) -> "WeightSystem | None":
        weights = find_weights(w)
        return None if weights is None else WeightSystem(weights)

    def monomial_degree(self, m: Monomial) -> Fraction:
        return sum(q * e for q, e in zip(self.weights, m))

    def is_quasi_homogeneous(self, f: Polynomial) -> bool:
        return f.is_zero() or all(
            self.monomial_degree(m) == self.degree for m in f.terms
        )

    def __repr__(self):
        return f"WeightSystem({self.weights}, degree={self.degree})"
