"""Workspace documents: a line-oriented format for potentials, symmetries,
matrix factorizations, morphisms, graded modules, and verification cases.

Grammar summary.  Sections open with a bracketed header and hold `key = value`
lines; `#` starts a comment.  Matrix values are rows of `;`-separated
expressions inside `{ }` (one row per line, or a single row inline).
Expressions use integers, `a/b` rationals, `zeta(m)` and `zeta(m)^k`, variable
identifiers, and `+ - * / ^ ( )`.  Symmetries are written
`t = zeta(m)^[a_1,...,a_n]`, one exponent per variable of the potential.

    [potential]
    w = x^3 + y^3            # or: name = w / expr = ... ; optional vars = x, y

    [symmetry]
    potential = w
    t = zeta(3)^[1,0]

    [mf]
    name = A
    potential = w
    d0 = { x }
    d1 = { x^2 }

    [morphism]
    name = alpha
    source = A
    target = A
    twist = t
    twisted = target         # alpha : A -> t^* A   (source: t^* A -> A)
    parity = even
    mat = {
    1 ; 0
    0 ; zeta(3)
    }

    [module]
    name = M
    vars = x
    degrees = 0
    relations = { x }

    [case]
    name = caseA2
    command = hlf-verify
    args = A A t alpha beta

Every declared factorization is validated on load, every symmetry is checked
against its potential, and every morphism must be closed.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .groebner import GradedModulePresentation
from .mfcore import MatrixFactorization, MFMorphism, pullback
from .polyring import PolyRing, Polynomial, check_symmetry
from .scalars import RootOfUnity, Scalar


class DocumentError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


RESERVED_KEYS = {
    "name", "expr", "vars", "potential", "roots", "source", "target", "twist",
    "twisted", "parity", "d0", "d1", "grading_even", "grading_odd", "degrees",
    "relations", "command", "args", "mat",
}


# -- expression parsing --------------------------------------------------------


class _Tokens:
    def __init__(self, text, line=None):
        self.items = []
        self.pos = 0
        self.line = line
        i = 0
        while i < len(text):
            c = text[i]
            if c.isspace():
                i += 1
            elif c.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.items.append(("num", int(text[i:j])))
                i = j
            elif c.isalpha() or c == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.items.append(("ident", text[i:j]))
                i = j
            elif c in "+-*/^()[],;":
                self.items.append((c, c))
                i += 1
            else:
                raise DocumentError(f"unexpected character {c!r}", line)

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else (None, None)

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise DocumentError(f"expected {kind!r}, found {tok[1]!r}", self.line)
        return tok


def _parse_expression(tokens: _Tokens, ring: PolyRing) -> Polynomial:
    expr = _parse_sum(tokens, ring)
    if tokens.peek()[0] is not None:
        raise DocumentError(f"trailing input {tokens.peek()[1]!r}", tokens.line)
    return expr


def _parse_sum(tokens, ring):
    value = _parse_product(tokens, ring)
    while tokens.peek()[0] in ("+", "-"):
        op = tokens.next()[0]
        rhs = _parse_product(tokens, ring)
        value = value + rhs if op == "+" else value - rhs
    return value


def _parse_product(tokens, ring):
    value = _parse_power(tokens, ring)
    while tokens.peek()[0] in ("*", "/"):
        op = tokens.next()[0]
        rhs = _parse_power(tokens, ring)
        if op == "*":
            value = value * rhs
        else:
            if not rhs.is_constant() or rhs.is_zero():
                raise DocumentError("division needs a nonzero scalar divisor", tokens.line)
            value = value * rhs.constant_term().inverse()
    return value


def _parse_power(tokens, ring):
    base = _parse_atom(tokens, ring)
    if tokens.peek()[0] != "^":
        return base
    tokens.next()
    negative = False
    if tokens.peek()[0] == "-":
        tokens.next()
        negative = True
    exponent = tokens.expect("num")[1]
    if negative:
        if not base.is_constant():
            raise DocumentError("negative powers need a scalar base", tokens.line)
        return ring.const(base.constant_term().inverse() ** exponent)
    return base**exponent


def _parse_atom(tokens, ring):
    kind, value = tokens.next()
    if kind == "num":
        return ring.const(value)
    if kind == "-":
        return -_parse_power(tokens, ring)
    if kind == "+":
        return _parse_power(tokens, ring)
    if kind == "(":
        inner = _parse_sum(tokens, ring)
        tokens.expect(")")
        return inner
    if kind == "ident":
        if value == "zeta":
            tokens.expect("(")
            order = tokens.expect("num")[1]
            tokens.expect(")")
            if order < 1:
                raise DocumentError("zeta needs a positive order", tokens.line)
            return ring.const(Scalar.zeta(order))
        if value in ring.vars:
            return ring.var(value)
        raise DocumentError(f"unknown variable {value!r}", tokens.line)
    raise DocumentError(f"unexpected token {value!r}", tokens.line)


def parse_polynomial(text: str, ring: PolyRing, line=None) -> Polynomial:
    return _parse_expression(_Tokens(text, line), ring)


def parse_symmetry_literal(text: str, nvars: int, line=None):
    """`zeta(m)^[a_1,...,a_n]` -> tuple of RootOfUnity (also accepts 1, -1)."""
    tokens = _Tokens(text, line)
    kind, value = tokens.next()
    if kind == "ident" and value == "zeta":
        tokens.expect("(")
        order = tokens.expect("num")[1]
        tokens.expect(")")
        tokens.expect("^")
        tokens.expect("[")
        exponents = []
        while True:
            sign = 1
            if tokens.peek()[0] == "-":
                tokens.next()
                sign = -1
            exponents.append(sign * tokens.expect("num")[1])
            kind, _ = tokens.next()
            if kind == "]":
                break
            if kind != ",":
                raise DocumentError("expected ',' or ']' in exponent list", line)
        if tokens.peek()[0] is not None:
            raise DocumentError("trailing input after symmetry literal", line)
        if len(exponents) != nvars:
            raise DocumentError(
                f"symmetry lists {len(exponents)} exponents for {nvars} variables", line
            )
        return tuple(RootOfUnity(order, e) for e in exponents)
    raise DocumentError("symmetry literal must be zeta(m)^[...]", line)


def _variables_in_order(text: str, line=None):
    seen = []
    tokens = _Tokens(text, line)
    for kind, value in tokens.items:
        if kind == "ident":
            if value == "zeta":
                continue
            if value not in seen:
                seen.append(value)
    return tuple(seen)


# -- workspace entities --------------------------------------------------------


class WorkspaceDocument:
    def __init__(self):
        self.potentials: dict = {}   # name -> Polynomial
        self.symmetries: dict = {}   # name -> (potential_name, tuple[RootOfUnity])
        self.factorizations: dict = {}  # name -> (potential_name, MatrixFactorization)
        self.morphisms: dict = {}    # name -> dict with source/target/twist/twisted/mfmorphism
        self.modules: dict = {}      # name -> GradedModulePresentation
        self.cases: dict = {}        # name -> (command, list of raw args)

    def __eq__(self, other):
        if not isinstance(other, WorkspaceDocument):
            return NotImplemented
        if self.potentials.keys() != other.potentials.keys():
            return False
        for k, w in self.potentials.items():
            v = other.potentials[k]
            if w.ring != v.ring or not (w == v):
                return False
        if self.symmetries != other.symmetries:
            return False
        if self.factorizations.keys() != other.factorizations.keys():
            return False
        for k, (pname, mf) in self.factorizations.items():
            qname, other_mf = other.factorizations[k]
            if pname != qname or mf.d0 != other_mf.d0 or mf.d1 != other_mf.d1:
                return False
            if mf.gradings != other_mf.gradings:
                return False
        if self.morphisms.keys() != other.morphisms.keys():
            return False
        for k, entry in self.morphisms.items():
            o = other.morphisms[k]
            for field in ("source", "target", "twist", "twisted", "parity"):
                if entry[field] != o[field]:
                    return False
            if entry["morphism"].matrix != o["morphism"].matrix:
                return False
        if self.modules.keys() != other.modules.keys():
            return False
        for k, pres in self.modules.items():
            o = other.modules[k]
            if pres.ring != o.ring or pres.gen_degrees != o.gen_degrees:
                return False
            if pres.relations != o.relations:
                return False
        return self.cases == other.cases

    __hash__ = None


def _split_sections(text: str):
    sections = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("[") and stripped.endswith("]"):
            current = {"kind": stripped[1:-1].strip(), "line": lineno, "entries": []}
            sections.append(current)
            continue
        if current is None:
            raise DocumentError("content before the first section header", lineno)
        current["entries"].append((lineno, stripped))
    return sections


def _collect_entries(section):
    """Fold `key = value` lines, joining brace blocks into row lists."""
    entries = []
    rows = None
    key = None
    key_line = None
    for lineno, line in section["entries"]:
        if rows is not None:
            if line.strip() == "}":
                entries.append((key, rows, key_line))
                rows = None
                continue
            rows.append((lineno, line.strip()))
            continue
        if "=" not in line:
            raise DocumentError(f"expected `key = value`, found {line!r}", lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        key_line = lineno
        if value == "{":
            rows = []
        elif value.startswith("{") and value.endswith("}"):
            inner = value[1:-1].strip()
            entries.append((key, [(lineno, inner)] if inner else [], lineno))
        else:
            entries.append((key, value, lineno))
    if rows is not None:
        raise DocumentError("unterminated matrix block", key_line)
    return entries


def _parse_matrix(rows, ring, line):
    matrix = []
    width = None
    for lineno, row in rows:
        cells = [c.strip() for c in row.split(";")]
        parsed = [parse_polynomial(c, ring, lineno) for c in cells]
        if width is None:
            width = len(parsed)
        elif len(parsed) != width:
            raise DocumentError("ragged matrix rows", lineno)
        matrix.append(parsed)
    return matrix


def _parse_fraction_list(value, line):
    out = []
    for piece in value.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if "/" in piece:
            num, _, den = piece.partition("/")
            out.append(Fraction(int(num.strip()), int(den.strip())))
        else:
            out.append(Fraction(int(piece)))
    return out


def parse_document(text: str) -> WorkspaceDocument:
    doc = WorkspaceDocument()
    for section in _split_sections(text):
        kind = section["kind"]
        entries = _collect_entries(section)
        data = {}
        free = []
        for key, value, lineno in entries:
            if key in RESERVED_KEYS:
                if key in data:
                    raise DocumentError(f"duplicate key {key!r}", lineno)
                data[key] = (value, lineno)
            else:
                free.append((key, value, lineno))
        line0 = section["line"]
        if kind == "potential":
            _load_potential(doc, data, free, line0)
        elif kind == "symmetry":
            _load_symmetry(doc, data, free, line0)
        elif kind == "mf":
            _load_mf(doc, data, free, line0)
        elif kind == "morphism":
            _load_morphism(doc, data, free, line0)
        elif kind == "module":
            _load_module(doc, data, free, line0)
        elif kind == "case":
            _load_case(doc, data, free, line0)
        else:
            raise DocumentError(f"unknown section kind {kind!r}", line0)
    return doc


def _single_potential(doc, line):
    if len(doc.potentials) != 1:
        raise DocumentError("potential reference required (several declared)", line)
    return next(iter(doc.potentials))


def _get_name(doc, data, free, line, what):
    if "name" in data:
        return data["name"][0], None
    if len(free) == 1:
        return free[0][0], free[0]
    raise DocumentError(f"{what} needs a name", line)


def _load_potential(doc, data, free, line):
    name, free_entry = _get_name(doc, data, free, line, "potential")
    if free_entry is not None:
        expr_value, expr_line = free_entry[1], free_entry[2]
    elif "expr" in data:
        expr_value, expr_line = data["expr"]
    else:
        raise DocumentError("potential needs an expression", line)
    if isinstance(expr_value, list):
        raise DocumentError("potential expression cannot be a matrix", expr_line)
    if "vars" in data:
        var_names = tuple(v.strip() for v in data["vars"][0].split(",") if v.strip())
    else:
        var_names = _variables_in_order(expr_value, expr_line)
    if not var_names:
        raise DocumentError("potential has no variables", expr_line)
    ring = PolyRing(var_names)
    poly = parse_polynomial(expr_value, ring, expr_line)
    if name in doc.potentials:
        raise DocumentError(f"duplicate potential {name!r}", line)
    doc.potentials[name] = poly


def _load_symmetry(doc, data, free, line):
    name, free_entry = _get_name(doc, data, free, line, "symmetry")
    if free_entry is not None:
        literal, lit_line = free_entry[1], free_entry[2]
    elif "roots" in data:
        literal, lit_line = data["roots"]
    else:
        raise DocumentError("symmetry needs a zeta(m)^[...] literal", line)
    pname = data["potential"][0] if "potential" in data else _single_potential(doc, line)
    if pname not in doc.potentials:
        raise DocumentError(f"unknown potential {pname!r}", line)
    w = doc.potentials[pname]
    roots = parse_symmetry_literal(literal, w.ring.nvars, lit_line)
    if not check_symmetry(w, [r.to_scalar() for r in roots]):
        raise DocumentError(f"{name!r} is not a symmetry of {pname!r}", lit_line)
    if name in doc.symmetries:
        raise DocumentError(f"duplicate symmetry {name!r}", line)
    doc.symmetries[name] = (pname, roots)


def _load_mf(doc, data, free, line):
    name, _ = _get_name(doc, data, free, line, "matrix factorization")
    pname = data["potential"][0] if "potential" in data else _single_potential(doc, line)
    if pname not in doc.potentials:
        raise DocumentError(f"unknown potential {pname!r}", line)
    w = doc.potentials[pname]
    for key in ("d0", "d1"):
        if key not in data or not isinstance(data[key][0], list):
            raise DocumentError(f"matrix factorization needs a {key} matrix", line)
    d0 = _parse_matrix(data["d0"][0], w.ring, line)
    d1 = _parse_matrix(data["d1"][0], w.ring, line)
    gradings = None
    if "grading_even" in data or "grading_odd" in data:
        if not ("grading_even" in data and "grading_odd" in data):
            raise DocumentError("gradings need both grading_even and grading_odd", line)
        gradings = (
            _parse_fraction_list(data["grading_even"][0], line),
            _parse_fraction_list(data["grading_odd"][0], line),
        )
    try:
        mf = MatrixFactorization(w, d0, d1, gradings=gradings)
    except ValueError as exc:
        raise DocumentError(f"invalid factorization {name!r}: {exc}", line)
    if name in doc.factorizations:
        raise DocumentError(f"duplicate factorization {name!r}", line)
    doc.factorizations[name] = (pname, mf)


def _load_morphism(doc, data, free, line):
    name, _ = _get_name(doc, data, free, line, "morphism")
    for key in ("source", "target", "mat"):
        if key not in data:
            raise DocumentError(f"morphism needs {key}", line)
    source_name = data["source"][0]
    target_name = data["target"][0]
    for ref in (source_name, target_name):
        if ref not in doc.factorizations:
            raise DocumentError(f"unknown factorization {ref!r}", line)
    source = doc.factorizations[source_name][1]
    target = doc.factorizations[target_name][1]
    twist_name = data["twist"][0] if "twist" in data else None
    twisted = data["twisted"][0] if "twisted" in data else "target"
    if twisted not in ("source", "target"):
        raise DocumentError("twisted must be `source` or `target`", line)
    parity_text = data["parity"][0] if "parity" in data else "even"
    if parity_text not in ("even", "odd"):
        raise DocumentError("parity must be `even` or `odd`", line)
    parity = 0 if parity_text == "even" else 1
    if twist_name is not None:
        if twist_name not in doc.symmetries:
            raise DocumentError(f"unknown symmetry {twist_name!r}", line)
        roots = doc.symmetries[twist_name][1]
        if twisted == "target":
            target = pullback(roots, target)
        else:
            source = pullback(roots, source)
    mat = _parse_matrix(data["mat"][0], source.ring, line)
    try:
        morphism = MFMorphism(source, target, parity, mat)
    except ValueError as exc:
        raise DocumentError(f"invalid morphism {name!r}: {exc}", line)
    if not morphism.is_closed():
        raise DocumentError(f"morphism {name!r} is not closed", line)
    if name in doc.morphisms:
        raise DocumentError(f"duplicate morphism {name!r}", line)
    doc.morphisms[name] = {
        "source": source_name,
        "target": target_name,
        "twist": twist_name,
        "twisted": twisted,
        "parity": parity_text,
        "morphism": morphism,
    }


def _load_module(doc, data, free, line):
    name, _ = _get_name(doc, data, free, line, "module")
    if "vars" in data:
        var_names = tuple(v.strip() for v in data["vars"][0].split(",") if v.strip())
        ring = PolyRing(var_names)
    elif len(doc.potentials) == 1:
        ring = next(iter(doc.potentials.values())).ring
    else:
        raise DocumentError("module needs a vars list", line)
    if "degrees" not in data:
        raise DocumentError("module needs generator degrees", line)
    degrees = [int(p.strip()) for p in data["degrees"][0].split(",") if p.strip()]
    relations = []
    if "relations" in data and isinstance(data["relations"][0], list):
        relations = _parse_matrix(data["relations"][0], ring, line)
        if relations and len(relations) != len(degrees):
            raise DocumentError("relation matrix needs one row per generator", line)
    try:
        pres = GradedModulePresentation(ring, degrees, relations)
    except ValueError as exc:
        raise DocumentError(f"invalid module {name!r}: {exc}", line)
    if name in doc.modules:
        raise DocumentError(f"duplicate module {name!r}", line)
    doc.modules[name] = pres


def _load_case(doc, data, free, line):
    if "name" not in data or "command" not in data:
        raise DocumentError("case needs name and command", line)
    name = data["name"][0]
    command = data["command"][0]
    args = data["args"][0].split() if "args" in data else []
    if name in doc.cases:
        raise DocumentError(f"duplicate case {name!r}", line)
    doc.cases[name] = (command, args)


# -- serialization -------------------------------------------------------------


def _matrix_lines(key, matrix):
    lines = [f"{key} = {{"]
    for row in matrix:
        lines.append("; ".join(str(e) for e in row))
    lines.append("}")
    return lines


def serialize_document(doc: WorkspaceDocument) -> str:
    lines = []
    for name, w in doc.potentials.items():
        lines += ["[potential]", f"name = {name}",
                  f"vars = {', '.join(w.ring.vars)}", f"expr = {w}", ""]
    for name, (pname, roots) in doc.symmetries.items():
        order = 1
        for r in roots:
            order = math.lcm(order, r.order)
        exps = [r.exponent * (order // r.order) % order for r in roots]
        literal = f"zeta({order})^[{','.join(str(e) for e in exps)}]"
        lines += ["[symmetry]", f"name = {name}", f"potential = {pname}",
                  f"roots = {literal}", ""]
    for name, (pname, mf) in doc.factorizations.items():
        lines += ["[mf]", f"name = {name}", f"potential = {pname}"]
        lines += _matrix_lines("d0", mf.d0)
        lines += _matrix_lines("d1", mf.d1)
        if mf.gradings is not None:
            lines.append("grading_even = " + ", ".join(str(g) for g in mf.gradings[0]))
            lines.append("grading_odd = " + ", ".join(str(g) for g in mf.gradings[1]))
        lines.append("")
    for name, entry in doc.morphisms.items():
        lines += ["[morphism]", f"name = {name}", f"source = {entry['source']}",
                  f"target = {entry['target']}"]
        if entry["twist"] is not None:
            lines.append(f"twist = {entry['twist']}")
            lines.append(f"twisted = {entry['twisted']}")
        lines.append(f"parity = {entry['parity']}")
        lines += _matrix_lines("mat", entry["morphism"].matrix)
        lines.append("")
    for name, pres in doc.modules.items():
        lines += ["[module]", f"name = {name}",
                  f"vars = {', '.join(pres.ring.vars)}",
                  "degrees = " + ", ".join(str(d) for d in pres.gen_degrees)]
        if pres.relations and pres.relations[0]:
            lines += _matrix_lines("relations", pres.relations)
        lines.append("")
    for name, (command, args) in doc.cases.items():
        lines += ["[case]", f"name = {name}", f"command = {command}"]
        if args:
            lines.append("args = " + " ".join(str(a) for a in args))
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"
