"""Propositional formulas, matrix semantics, and model-set operators.

Formulas are plain ASTs over a declared finite signature.  Truth values come
from a matrix (truth-value set, designated subset, one table per connective);
the classical two-valued matrix is the built-in default.  Theories are
represented by their model sets throughout the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    BoundExceededError,
    FormulaParseError,
    MatrixError,
    UnknownAtomError,
)

# ---------------------------------------------------------------------------
# Formula AST


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class TrueConst:
    pass


@dataclass(frozen=True)
class FalseConst:
    pass


Formula = Atom | Not | And | Or | Implies | Iff | TrueConst | FalseConst

TRUE = TrueConst()
FALSE = FalseConst()


# ---------------------------------------------------------------------------
# Parser
#
# Grammar: atoms /[a-z][a-z0-9_]*/, literals "true"/"false",
# operators ! & | -> <-> with precedence ! > & > | > -> > <->,
# -> and <-> right-associative, parentheses allowed.

_TWO_CHAR = ("->", "<->")


def _tokenize(text):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if text.startswith("<->", i):
            tokens.append(("<->", i))
            i += 3
        elif text.startswith("->", i):
            tokens.append(("->", i))
            i += 2
        elif ch in "!&|()":
            tokens.append((ch, i))
            i += 1
        elif ch.isalpha() and ch.islower():
            j = i + 1
            while j < n and (text[j].islower() or text[j].isdigit() or text[j] == "_"):
                j += 1
            tokens.append(("name:" + text[i:j], i))
            i = j
        else:
            raise FormulaParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", n))
    return tokens


class _Parser:
    def __init__(self, tokens, signature):
        self.tokens = tokens
        self.pos = 0
        self.signature = frozenset(signature) if signature is not None else None

    def peek(self):
        return self.tokens[self.pos][0]

    def offset(self):
        return self.tokens[self.pos][1]

    def take(self, expected=None):
        tok, off = self.tokens[self.pos]
        if expected is not None and tok != expected:
            raise FormulaParseError(f"expected {expected!r}, found {tok!r}", off)
        self.pos += 1
        return tok

    def parse_iff(self):
        left = self.parse_implies()
        if self.peek() == "<->":
            self.take()
            return Iff(left, self.parse_iff())
        return left

    def parse_implies(self):
        left = self.parse_or()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self):
        node = self.parse_and()
        while self.peek() == "|":
            self.take()
            node = Or(node, self.parse_and())
        return node

    def parse_and(self):
        node = self.parse_unary()
        while self.peek() == "&":
            self.take()
            node = And(node, self.parse_unary())
        return node

    def parse_unary(self):
        if self.peek() == "!":
            self.take()
            return Not(self.parse_unary())
        return self.parse_primary()

    def parse_primary(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            node = self.parse_iff()
            self.take(")")
            return node
        if tok.startswith("name:"):
            name = tok[5:]
            off = self.offset()
            self.take()
            if name == "true":
                return TRUE
            if name == "false":
                return FALSE
            if self.signature is not None and name not in self.signature:
                raise UnknownAtomError(f"unknown atom {name!r} at offset {off}")
            return Atom(name)
        raise FormulaParseError(f"expected a formula, found {tok!r}", self.offset())


def parse_formula(text, signature=None):
    """Parse ``text`` into a Formula, validating atoms against ``signature``."""
    parser = _Parser(_tokenize(text), signature)
    node = parser.parse_iff()
    if parser.peek() != "end":
        raise FormulaParseError(f"trailing input {parser.peek()!r}", parser.offset())
    return node


def formula_to_text(phi):
    """Render a formula back to the concrete grammar (fully parenthesized
    only where needed)."""

    def prec(f):
        if isinstance(f, (Atom, TrueConst, FalseConst, Not)):
            return 5
        if isinstance(f, And):
            return 4
        if isinstance(f, Or):
            return 3
        if isinstance(f, Implies):
            return 2
        return 1

    def render(f, parent_prec):
        if isinstance(f, Atom):
            out = f.name
        elif isinstance(f, TrueConst):
            out = "true"
        elif isinstance(f, FalseConst):
            out = "false"
        elif isinstance(f, Not):
            out = "!" + render(f.arg, 5)
        elif isinstance(f, And):
            out = render(f.left, 4) + " & " + render(f.right, 4)
        elif isinstance(f, Or):
            out = render(f.left, 3) + " | " + render(f.right, 3)
        elif isinstance(f, Implies):
            out = render(f.left, 3) + " -> " + render(f.right, 2)
        else:
            out = render(f.left, 2) + " <-> " + render(f.right, 1)
        if prec(f) < parent_prec:
            out = "(" + out + ")"
        return out

    return render(phi, 0)


# ---------------------------------------------------------------------------
# Matrices and valuations


@dataclass(frozen=True)
class Matrix:
    """Truth-value semantics: value labels, designated subset, connective tables.

    Tables are keyed by connective name; each maps input tuples to a value.
    The constants ``true``/``false`` are zero-ary connectives keyed by ().
    """

    values: tuple
    designated: frozenset
    tables: dict

    def __post_init__(self):
        if not self.designated:
            raise MatrixError("designated set must be non-empty")
        if self.designated >= set(self.values):
            raise MatrixError("designated set must be a proper subset of the values")

    def __hash__(self):
        return hash((self.values, self.designated))

    def table(self, name):
        try:
            return self.tables[name]
        except KeyError:
            raise MatrixError(f"matrix has no table for connective {name!r}") from None


def _classical():
    b = ("0", "1")
    tables = {
        "not": {("0",): "1", ("1",): "0"},
        "and": {(x, y): "1" if x == "1" and y == "1" else "0" for x in b for y in b},
        "or": {(x, y): "1" if x == "1" or y == "1" else "0" for x in b for y in b},
        "implies": {(x, y): "0" if x == "1" and y == "0" else "1" for x in b for y in b},
        "iff": {(x, y): "1" if x == y else "0" for x in b for y in b},
        "true": {(): "1"},
        "false": {(): "0"},
    }
    return Matrix(values=b, designated=frozenset({"1"}), tables=tables)


CLASSICAL = _classical()


@dataclass(frozen=True)
class Valuation:
    """A total assignment of truth values to the atoms of one signature."""

    atoms: tuple
    values: tuple

    def __getitem__(self, atom):
        try:
            return self.values[self.atoms.index(atom)]
        except ValueError:
            raise UnknownAtomError(f"atom {atom!r} not in signature") from None

    def label(self):
        return "".join(str(x) for x in self.values)

    def __lt__(self, other):
        if not isinstance(other, Valuation):
            return NotImplemented
        return (self.atoms, self.values) < (other.atoms, other.values)

    def __repr__(self):
        return f"Valuation({self.label()})"


def make_valuation(signature, assignment):
    sig = tuple(signature)
    return Valuation(sig, tuple(assignment[a] for a in sig))


def eval_formula(v, phi, matrix=CLASSICAL):
    """Homomorphic evaluation of ``phi`` under valuation ``v``."""
    if isinstance(phi, Atom):
        return v[phi.name]
    if isinstance(phi, TrueConst):
        return matrix.table("true")[()]
    if isinstance(phi, FalseConst):
        return matrix.table("false")[()]
    if isinstance(phi, Not):
        return matrix.table("not")[(eval_formula(v, phi.arg, matrix),)]
    name = {And: "and", Or: "or", Implies: "implies", Iff: "iff"}[type(phi)]
    left = eval_formula(v, phi.left, matrix)
    right = eval_formula(v, phi.right, matrix)
    return matrix.table(name)[(left, right)]


def satisfies(v, phi, matrix=CLASSICAL):
    return eval_formula(v, phi, matrix) in matrix.designated


def enumerate_valuations(signature, matrix=CLASSICAL, bound=1_000_000):
    """All valuations over ``signature``, lexicographic by atom order then
    truth-value order."""
    sig = tuple(signature)
    total = len(matrix.values) ** len(sig)
    if total > bound:
        raise BoundExceededError(
            f"{total} valuations exceed the bound of {bound}"
        )
    out = []
    for combo in itertools.product(matrix.values, repeat=len(sig)):
        out.append(Valuation(sig, combo))
    return out


def models(gamma, signature, matrix=CLASSICAL):
    """The model set of a formula collection: valuations designating every
    member of ``gamma``."""
    result = []
    for v in enumerate_valuations(signature, matrix):
        if all(satisfies(v, phi, matrix) for phi in gamma):
            result.append(v)
    return frozenset(result)


def theory_entails(model_set, phi, matrix=CLASSICAL):
    """True iff every valuation in ``model_set`` satisfies ``phi``."""
    return all(satisfies(v, phi, matrix) for v in model_set)


def is_consistent(gamma, signature, matrix=CLASSICAL):
    return bool(models(gamma, signature, matrix))


def disj_product(gamma, delta):
    """All pairwise disjunctions; its models are models(gamma) | models(delta)."""
    return frozenset(Or(a, b) for a in gamma for b in delta)


def hamming_diff(v, w):
    """The set of atoms on which two valuations of one signature differ."""
    if v.atoms != w.atoms:
        raise UnknownAtomError("valuations must share a signature")
    return frozenset(a for a, x, y in zip(v.atoms, v.values, w.values) if x != y)


def sort_valuations(model_set):
    return sorted(model_set, key=lambda v: v.values)


def canonical_dnf(model_set, signature):
    """Canonical disjunctive normal form of a classical model set.

    Empty set maps to ``false``; each valuation contributes its minterm.
    """
    sig = tuple(signature)
    if not model_set:
        return FALSE
    disjuncts = []
    for v in sort_valuations(model_set):
        lits = [
            Atom(a) if v[a] == "1" else Not(Atom(a))
            for a in sig
        ]
        term = lits[0]
        for lit in lits[1:]:
            term = And(term, lit)
        disjuncts.append(term)
    out = disjuncts[0]
    for term in disjuncts[1:]:
        out = Or(out, term)
    return out


# ---------------------------------------------------------------------------
# Definable sets under a general matrix
#
# Formula extensions over a finite signature form the clone generated by the
# atom projections (plus constants) under the matrix connectives.  The sets
# definable by a single formula are the preimages of the designated values;
# the sets definable by a formula collection are their intersections.


def formula_extensions(signature, matrix, bound=200_000):
    """All functions valuation -> value realized by some formula."""
    vals = enumerate_valuations(signature, matrix)
    gens = set()
    for a in tuple(signature):
        gens.add(tuple(v[a] for v in vals))
    for const in ("true", "false"):
        if const in matrix.tables:
            gens.add(tuple(matrix.tables[const][()] for _ in vals))
    known = set(gens)
    frontier = list(gens)
    unary = [n for n in ("not",) if n in matrix.tables]
    binary = [n for n in ("and", "or", "implies", "iff") if n in matrix.tables]
    while frontier:
        if len(known) > bound:
            raise BoundExceededError("formula-extension closure exceeds bound")
        new = []
        for f in frontier:
            for name in unary:
                tbl = matrix.tables[name]
                g = tuple(tbl[(x,)] for x in f)
                if g not in known:
                    known.add(g)
                    new.append(g)
        for f in frontier:
            for name in binary:
                tbl = matrix.tables[name]
                for g in list(known):
                    for h1, h2 in ((f, g), (g, f)):
                        r = tuple(tbl[(x, y)] for x, y in zip(h1, h2))
                        if r not in known:
                            known.add(r)
                            new.append(r)
        frontier = new
    return vals, known


def definable_model_sets(signature, matrix=CLASSICAL, bound=200_000):
    """Model sets of formula collections: closure of single-formula model
    sets under intersection, plus the full set (empty collection)."""
    vals, extensions = formula_extensions(signature, matrix, bound)
    single = set()
    for ext in extensions:
        single.add(frozenset(v for v, x in zip(vals, ext) if x in matrix.designated))
    full = frozenset(vals)
    closed = set(single)
    closed.add(full)
    frontier = list(closed)
    while frontier:
        new = []
        for s in frontier:
            for t in single:
                r = s & t
                if r not in closed:
                    closed.add(r)
                    new.append(r)
        frontier = new
    return closed


def mod_th_closure(model_set, definable):
    """Mod(Th(S)): intersection of all single-collection definable sets
    containing S."""
    out = None
    for d in definable:
        if model_set <= d:
            out = d if out is None else out & d
    return out if out is not None else model_set
