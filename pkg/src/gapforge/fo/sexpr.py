"""S-expression text format for formulas and interpretations.

Formulas::

    (true) (false)
    (= t1 t2)                 equality of terms
    (R t1 ... tn)             relation atom; any head that is not a keyword
    (not f) (and f ...) (or f ...) (implies f g) (iff f g)
    (exists (v ...) f) (forall (v ...) f)

A term is a bare identifier (a variable) or ``@name`` (a constant symbol).
Identifiers are any run of characters other than whitespace, parentheses and
``;``. A ``;`` starts a comment running to the end of the line.

Interpretations::

    (interpretation
      (dim d)
      (domain (x1 ... xd) f)
      (equiv (x1 ... xd) (y1 ... yd) f)          ; optional, default tuple equality
      (relation R ((x1 ... xd) ... (z1 ... zd)) f)
      (constant c (x1 ... xd) f))
"""

from __future__ import annotations

from typing import Union

from gapforge.errors import VocabularyError
from gapforge.fo.formulas import (
    FALSE,
    TRUE,
    And,
    Atom,
    Bottom,
    Eq,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    Top,
    iff,
    implies,
)

SExp = Union[str, list]
KEYWORDS = {"true", "false", "=", "not", "and", "or", "implies", "iff", "exists", "forall"}


class ParseError(VocabularyError):
    pass


def tokenize(text: str) -> list[str]:
    out: list[str] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            out.append(c)
            i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "();":
                j += 1
            out.append(text[i:j])
            i = j
    return out


def read(text: str) -> SExp:
    tokens = tokenize(text)
    pos = 0

    def parse() -> SExp:
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of input")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            items = []
            while pos < len(tokens) and tokens[pos] != ")":
                items.append(parse())
            if pos >= len(tokens):
                raise ParseError("missing ')'")
            pos += 1
            return items
        if tok == ")":
            raise ParseError("unexpected ')'")
        return tok

    expr = parse()
    if pos != len(tokens):
        raise ParseError(f"trailing input after position {pos}")
    return expr


def _names(x: SExp, what: str) -> tuple[str, ...]:
    if not isinstance(x, list) or not all(isinstance(v, str) for v in x):
        raise ParseError(f"{what} must be a list of names, got {x!r}")
    return tuple(x)


def formula_from_sexp(x: SExp) -> Formula:
    if not isinstance(x, list) or not x or not isinstance(x[0], str):
        raise ParseError(f"expected (head ...), got {x!r}")
    head, args = x[0], x[1:]
    if head == "true" and not args:
        return TRUE
    if head == "false" and not args:
        return FALSE
    if head == "=":
        if len(args) != 2 or not all(isinstance(a, str) for a in args):
            raise ParseError("(= t1 t2) takes two terms")
        return Eq(args[0], args[1])
    if head == "not":
        if len(args) != 1:
            raise ParseError("(not f) takes one formula")
        return Not(formula_from_sexp(args[0]))
    if head in ("and", "or"):
        parts = tuple(formula_from_sexp(a) for a in args)
        if not parts:
            return TRUE if head == "and" else FALSE
        return And(parts) if head == "and" else Or(parts)
    if head in ("implies", "iff"):
        if len(args) != 2:
            raise ParseError(f"({head} f g) takes two formulas")
        a, b = (formula_from_sexp(v) for v in args)
        return implies(a, b) if head == "implies" else iff(a, b)
    if head in ("exists", "forall"):
        if len(args) != 2:
            raise ParseError(f"({head} (vars) f) takes a variable list and a body")
        vars = _names(args[0], "quantified variables")
        body = formula_from_sexp(args[1])
        return Exists(vars, body) if head == "exists" else Forall(vars, body)
    if head in KEYWORDS:
        raise ParseError(f"malformed {head} form")
    if not all(isinstance(a, str) for a in args):
        raise ParseError(f"relation atom {head} takes terms only")
    return Atom(head, tuple(args))


def parse_formula(text: str) -> Formula:
    return formula_from_sexp(read(text))


def formula_to_sexp(f: Formula) -> str:
    if isinstance(f, Top):
        return "(true)"
    if isinstance(f, Bottom):
        return "(false)"
    if isinstance(f, Eq):
        return f"(= {f.left} {f.right})"
    if isinstance(f, Atom):
        return "(" + " ".join((f.rel,) + f.terms) + ")"
    if isinstance(f, Not):
        return f"(not {formula_to_sexp(f.body)})"
    if isinstance(f, (And, Or)):
        head = "and" if isinstance(f, And) else "or"
        return "(" + " ".join([head] + [formula_to_sexp(p) for p in f.parts]) + ")"
    if isinstance(f, (Exists, Forall)):
        head = "exists" if isinstance(f, Exists) else "forall"
        return f"({head} ({' '.join(f.vars)}) {formula_to_sexp(f.body)})"
    raise TypeError(f"not a formula: {f!r}")


def parse_interpretation(text: str):
    from gapforge.fo.interpret import Interpretation

    x = read(text)
    if not isinstance(x, list) or not x or x[0] != "interpretation":
        raise ParseError("expected (interpretation ...)")
    dim = None
    domain = None
    equiv = None
    relations: dict = {}
    constants: dict = {}
    for item in x[1:]:
        if not isinstance(item, list) or not item:
            raise ParseError(f"bad interpretation clause {item!r}")
        key = item[0]
        if key == "dim":
            dim = int(item[1])
        elif key == "domain":
            domain = (_names(item[1], "domain variables"), formula_from_sexp(item[2]))
        elif key == "equiv":
            equiv = (_names(item[1], "equiv x"), _names(item[2], "equiv y"), formula_from_sexp(item[3]))
        elif key == "relation":
            name = item[1]
            blocks = tuple(_names(b, "relation variables") for b in item[2])
            relations[name] = (blocks, formula_from_sexp(item[3]))
        elif key == "constant":
            constants[item[1]] = (_names(item[2], "constant variables"), formula_from_sexp(item[3]))
        else:
            raise ParseError(f"unknown interpretation clause {key!r}")
    if dim is None or domain is None:
        raise ParseError("interpretation needs (dim d) and (domain ...)")
    return Interpretation(dim, domain[0], domain[1], equiv, relations, constants)


def interpretation_to_sexp(theta) -> str:
    lines = ["(interpretation", f"  (dim {theta.dim})"]
    lines.append(f"  (domain ({' '.join(theta.domain_vars)}) {formula_to_sexp(theta.domain)})")
    if theta.equiv is not None:
        xs, ys, f = theta.equiv
        lines.append(f"  (equiv ({' '.join(xs)}) ({' '.join(ys)}) {formula_to_sexp(f)})")
    for name, (blocks, f) in sorted(theta.relations.items()):
        bl = " ".join("(" + " ".join(b) + ")" for b in blocks)
        lines.append(f"  (relation {name} ({bl}) {formula_to_sexp(f)})")
    for name, (vars, f) in sorted(theta.constants.items()):
        lines.append(f"  (constant {name} ({' '.join(vars)}) {formula_to_sexp(f)})")
    return "\n".join(lines) + ")\n"


__all__ = [
    "ParseError",
    "formula_from_sexp",
    "formula_to_sexp",
    "interpretation_to_sexp",
    "parse_formula",
    "parse_interpretation",
    "read",
    "tokenize",
]
