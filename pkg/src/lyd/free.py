"""Free Lie-Yamaguti algebra on g generators, graded by number of leaves.

Words are planar trees whose internal nodes are binary (u . v) or ternary
(u * v * w).  The relation ideal is multihomogeneous, so it is computed one
weight at a time as a linear span: generator patterns instantiated on words,
plus root graftings of lower-weight relation vectors.  The quotient basis at
each weight is the set of non-pivot words of the relation span.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .algebra import LieYamagutiAlgebra, exact_array, zeros
from .linalg import Echelon, Subspace, demote


class TooLarge(ValueError):
    pass


class UnboundGenerator(KeyError):
    pass


class WeightOutOfRange(ValueError):
    pass


class TermSyntaxError(ValueError):
    def __init__(self, pos: int, message: str):
        super().__init__(f"at position {pos}: {message}")
        self.pos = pos


# ---------------------------------------------------------------------------
# tree words


@dataclass(frozen=True, order=False)
class Leaf:
    gen: int

    @property
    def weight(self) -> int:
        return 1


@dataclass(frozen=True)
class Binary:
    left: object
    right: object
    weight: int = field(default=0, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "weight", self.left.weight + self.right.weight)


@dataclass(frozen=True)
class Ternary:
    a: object
    b: object
    c: object
    weight: int = field(default=0, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "weight", self.a.weight + self.b.weight + self.c.weight)


TreeWord = Leaf | Binary | Ternary


def shape_code(w) -> str:
    if isinstance(w, Leaf):
        return "L"
    if isinstance(w, Binary):
        return "B" + shape_code(w.left) + shape_code(w.right)
    return "T" + shape_code(w.a) + shape_code(w.b) + shape_code(w.c)


def leaves(w) -> tuple:
    if isinstance(w, Leaf):
        return (w.gen,)
    if isinstance(w, Binary):
        return leaves(w.left) + leaves(w.right)
    return leaves(w.a) + leaves(w.b) + leaves(w.c)


def sort_key(w) -> tuple:
    return (shape_code(w), leaves(w))


@lru_cache(maxsize=None)
def shapes(weight: int) -> tuple:
    """Unlabeled trees with ``weight`` leaves (all leaves labeled 0), sorted."""
    if weight == 1:
        return (Leaf(0),)
    out = []
    for w1 in range(1, weight):
        for x, y in itertools.product(shapes(w1), shapes(weight - w1)):
            out.append(Binary(x, y))
    for w1 in range(1, weight - 1):
        for w2 in range(1, weight - w1):
            for x, y, z in itertools.product(shapes(w1), shapes(w2), shapes(weight - w1 - w2)):
                out.append(Ternary(x, y, z))
    return tuple(sorted(out, key=shape_code))


def _relabel(w, labels, pos=0):
    if isinstance(w, Leaf):
        return Leaf(labels[pos]), pos + 1
    if isinstance(w, Binary):
        l, pos = _relabel(w.left, labels, pos)
        r, pos = _relabel(w.right, labels, pos)
        return Binary(l, r), pos
    a, pos = _relabel(w.a, labels, pos)
    b, pos = _relabel(w.b, labels, pos)
    c, pos = _relabel(w.c, labels, pos)
    return Ternary(a, b, c), pos


@lru_cache(maxsize=None)
def enumerate_words(num_gens: int, weight: int) -> tuple:
    """All words of the given weight: shape-major, then labels lexicographic."""
    if num_gens < 1 or weight < 1:
        raise ValueError("need at least one generator and weight >= 1")
    return tuple(_relabel(s, labels)[0]
                 for s in shapes(weight)
                 for labels in itertools.product(range(num_gens), repeat=weight))


def word_count(num_gens: int, weight: int) -> int:
    return len(shapes(weight)) * num_gens ** weight


# ---------------------------------------------------------------------------
# linear combinations of words (dict word -> coefficient)


def _add(acc: dict, vec: dict, c=1):
    for w, x in vec.items():
        y = acc.get(w, 0) + c * x
        if y:
            acc[w] = y
        else:
            acc.pop(w, None)
    return acc


def bmul(x: dict, y: dict) -> dict:
    out: dict = {}
    for u, a in x.items():
        for v, b in y.items():
            _add(out, {Binary(u, v): a * b})
    return out


def tmul(x: dict, y: dict, z: dict) -> dict:
    out: dict = {}
    for u, a in x.items():
        for v, b in y.items():
            for w, c in z.items():
                _add(out, {Ternary(u, v, w): a * b * c})
    return out


def _w(word) -> dict:
    return {word: 1}


def _lin(*terms) -> dict:
    out: dict = {}
    for c, v in terms:
        _add(out, v, c)
    return out


def _cyc(f, x, y, z) -> dict:
    return _lin((1, f(x, y, z)), (1, f(y, z, x)), (1, f(z, x, y)))


def pattern_instances(num_gens: int, weight: int):
    """Yield the generator relations instantiated on words of total weight."""
    W = {k: [_w(u) for u in enumerate_words(num_gens, k)] for k in range(1, weight)}

    def tuples(parts):
        for comp in _compositions(weight, parts):
            for args in itertools.product(*(W[k] for k in comp)):
                yield args

    for u, v in tuples(2):
        yield _lin((1, bmul(u, v)), (1, bmul(v, u)))
    for u, v, x in tuples(3):
        yield _lin((1, tmul(u, v, x)), (1, tmul(v, u, x)))
    for x, y, z in tuples(3):
        yield _cyc(lambda a, b, c: _lin((1, bmul(bmul(a, b), c)), (1, tmul(a, b, c))), x, y, z)
    for x, y, z, u in tuples(4):
        yield _cyc(lambda a, b, c: tmul(bmul(a, b), c, u), x, y, z)
    for x, y, u, v in tuples(4):
        yield _lin((1, tmul(x, y, bmul(u, v))),
                   (-1, bmul(tmul(x, y, u), v)),
                   (-1, bmul(u, tmul(x, y, v))))
    for x, y, u, v, w in tuples(5):
        yield _lin((1, tmul(x, y, tmul(u, v, w))),
                   (-1, tmul(tmul(x, y, u), v, w)),
                   (-1, tmul(u, tmul(x, y, v), w)),
                   (-1, tmul(u, v, tmul(x, y, w))))


def _compositions(total: int, parts: int):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# graded pieces


@dataclass
class GradedPiece:
    weight: int
    words: tuple
    index: dict
    echelon: Echelon
    quotient_basis: list  # word indices not hit by a pivot

    @property
    def quotient_dim(self) -> int:
        return len(self.quotient_basis)

    @property
    def relation_dim(self) -> int:
        return self.echelon.rank

    def relation_basis(self) -> list:
        """Relation-span basis as word -> coefficient dicts."""
        return [{self.words[c]: x for c, x in row.items()} for row in self.echelon.rows()]

    @property
    def relation_span(self) -> Subspace:
        return Subspace.span_sparse(self.echelon.rows(), len(self.words))

    def coordinates(self, vec: dict) -> dict:
        return {self.index[w]: x for w, x in vec.items()}

    def reduce(self, vec: dict) -> tuple:
        """Quotient-basis coordinates of a word combination."""
        rem = self.echelon.reduce(self.coordinates(vec))
        return tuple(demote(rem.get(c, 0)) for c in self.quotient_basis)

    def contains(self, vec: dict) -> bool:
        return not self.echelon.reduce(self.coordinates(vec))

    def lift(self, coords) -> dict:
        """Word combination representing quotient coordinates."""
        if len(coords) != len(self.quotient_basis):
            raise ValueError("wrong number of quotient coordinates")
        return {self.words[c]: x for c, x in zip(self.quotient_basis, coords) if x}


WEIGHT_LIMITS = {1: 8, 2: 6, 3: 4}


def weight_limit(num_gens: int) -> int:
    return WEIGHT_LIMITS.get(num_gens, 3)


class FreeLYA:
    """Graded pieces of the free algebra, computed lazily weight by weight."""

    def __init__(self, num_gens: int, names=None, permutation_seed: int | None = None,
                 limit: int | None = None):
        if num_gens < 1:
            raise ValueError("need at least one generator")
        self.g = num_gens
        self.names = tuple(names) if names else default_names(num_gens)
        self.limit = weight_limit(num_gens) if limit is None else limit
        self.seed = permutation_seed
        self._pieces: dict = {}

    def piece(self, w: int) -> GradedPiece:
        if w < 1:
            raise WeightOutOfRange(f"weight {w} is below 1")
        if w > self.limit:
            raise TooLarge(f"weight {w} exceeds the limit {self.limit} for {self.g} generators")
        if w not in self._pieces:
            for k in range(1, w):
                self.piece(k)
            self._pieces[w] = self._build(w)
        return self._pieces[w]

    def _order(self, words):
        if self.seed is None:
            return list(words)
        import random
        out = list(words)
        random.Random(self.seed * 1000 + len(out)).shuffle(out)
        return out

    def _build(self, w: int) -> GradedPiece:
        words = tuple(self._order(enumerate_words(self.g, w)))
        index = {u: i for i, u in enumerate(words)}
        ech = Echelon(len(words))

        def add(vec):
            if vec:
                ech.add({index[u]: x for u, x in vec.items()})

        for rel in pattern_instances(self.g, w):
            add(rel)
        for k in range(2, w):
            rels = self._pieces[k].relation_basis()
            for r in rels:
                for vec in _graftings(r, self.g, w - k):
                    add(vec)
        quotient = [c for c in range(len(words)) if c not in ech.pivots]
        return GradedPiece(w, words, index, ech, quotient)

    def graded_dimensions(self, max_weight: int) -> list:
        return [self.piece(w).quotient_dim for w in range(1, max_weight + 1)]

    # products in the quotient

    def multiply(self, p1, w1: int, p2, w2: int, p3=None, w3: int | None = None) -> tuple:
        """Class of a product of quotient classes.

        With two arguments the product is binary; with three it is ternary.
        """
        x = self.piece(w1).lift(p1)
        y = self.piece(w2).lift(p2)
        if p3 is None:
            total = w1 + w2
            prod = bmul(x, y)
        else:
            if w3 is None:
                raise ValueError("ternary product needs the weight of its third argument")
            total = w1 + w2 + w3
            prod = tmul(x, y, self.piece(w3).lift(p3))
        if total > self.limit:
            raise WeightOutOfRange(f"product weight {total} exceeds the limit {self.limit}")
        return self.piece(total).reduce(prod)

    def generator_class(self, i: int) -> tuple:
        piece = self.piece(1)
        return piece.reduce({Leaf(i): 1})

    def quotient_words(self, w: int) -> list:
        piece = self.piece(w)
        return [piece.words[c] for c in piece.quotient_basis]


def _graftings(r: dict, g: int, rest: int):
    """Root graftings of a relation vector with words of total weight ``rest``."""
    for u in enumerate_words(g, rest):
        uw = _w(u)
        yield bmul(r, uw)
        yield bmul(uw, r)
    for k in range(1, rest):
        for u in enumerate_words(g, k):
            for v in enumerate_words(g, rest - k):
                uw, vw = _w(u), _w(v)
                yield tmul(r, uw, vw)
                yield tmul(uw, r, vw)
                yield tmul(uw, vw, r)


def graded_dimensions(num_gens: int, max_weight: int, permutation_seed: int | None = None) -> list:
    return FreeLYA(num_gens, permutation_seed=permutation_seed).graded_dimensions(max_weight)


def relation_span(num_gens: int, weight: int) -> Subspace:
    return FreeLYA(num_gens).piece(weight).relation_span


def quotient_multiply(F: FreeLYA, p1, w1, p2, w2, p3=None, w3=None) -> tuple:
    return F.multiply(p1, w1, p2, w2, p3, w3)


# ---------------------------------------------------------------------------
# evaluation in a concrete algebra


def evaluate(word, L: LieYamagutiAlgebra, assignment) -> np.ndarray:
    """Image of a word under the morphism sending generator i to assignment[i]."""
    if isinstance(word, dict):
        out = zeros(L.dim)
        for u, c in word.items():
            out = out + c * evaluate(u, L, assignment)
        return out
    if isinstance(word, Leaf):
        try:
            v = assignment[word.gen]
        except (KeyError, IndexError):
            raise UnboundGenerator(word.gen) from None
        return exact_array(v, (L.dim,))
    if isinstance(word, Binary):
        return L.bracket(evaluate(word.left, L, assignment), evaluate(word.right, L, assignment))
    return L.triple(evaluate(word.a, L, assignment), evaluate(word.b, L, assignment),
                    evaluate(word.c, L, assignment))


# ---------------------------------------------------------------------------
# term syntax:  a   (u . v)   (u * v * w)


def default_names(g: int) -> tuple:
    letters = "abcdefghijklmnopqrstuvwxyz"
    if g <= len(letters):
        return tuple(letters[:g])
    return tuple(f"x{i + 1}" for i in range(g))


def format_word(word, names=None) -> str:
    if isinstance(word, Leaf):
        return names[word.gen] if names else default_names(word.gen + 1)[word.gen]
    if isinstance(word, Binary):
        return f"({format_word(word.left, names)} . {format_word(word.right, names)})"
    return (f"({format_word(word.a, names)} * {format_word(word.b, names)} * "
            f"{format_word(word.c, names)})")


class _Parser:
    def __init__(self, text: str, names):
        self.text = text
        self.pos = 0
        self.lookup = {name: i for i, name in enumerate(names)}

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            got = self.peek() or "end of input"
            raise TermSyntaxError(self.pos, f"expected {ch!r}, found {got!r}")
        self.pos += 1

    def term(self):
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            first = self.term()
            op = self.peek()
            if op == ".":
                self.pos += 1
                second = self.term()
                self.expect(")")
                return Binary(first, second)
            if op == "*":
                self.pos += 1
                second = self.term()
                self.expect("*")
                third = self.term()
                self.expect(")")
                return Ternary(first, second, third)
            raise TermSyntaxError(self.pos, "expected '.' or '*' after a term")
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        name = self.text[start:self.pos]
        if not name:
            raise TermSyntaxError(start, f"unexpected {ch or 'end of input'!r}")
        if name not in self.lookup:
            raise TermSyntaxError(start, f"unknown generator {name!r}")
        return Leaf(self.lookup[name])


def parse_word(text: str, names) -> TreeWord:
    p = _Parser(text, names)
    w = p.term()
    p.skip()
    if p.pos != len(text):
        raise TermSyntaxError(p.pos, "trailing input")
    return w
