"""Cochains with pair-alternation and the coboundary operators.

A k-cochain is stored as a dense object tensor of shape ``(n,)*k + (m,)``
whose entry ``T[i1..ik, r]`` is the r-th coordinate of f(e_i1, ..., e_ik).
The first ``pairs`` slot pairs (1,2), (3,4), ... are alternating.  Canonical
coordinates keep one entry per constrained pair with i < j, every value of
the free slots, and every target coordinate, in lexicographic order.

All operators accept an optional leading batch axis (einsum ellipsis), which
is how the cohomology module assembles whole matrices at once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .algebra import ShapeMismatch, exact_array, is_zero, normalize, zeros
from .representation import Representation

SLOT_LETTERS = "abcdefghijlmnopq"  # no k, r, s: those are reserved below


class LevelError(ValueError):
    pass


# ---------------------------------------------------------------------------
# coordinate systems


@dataclass(frozen=True)
class CoordSystem:
    n: int
    m: int
    arity: int
    pairs: int
    index: tuple  # arity + 1 integer arrays, canonical entry positions
    flips: tuple  # (sign, index arrays) for each of the 2**pairs orderings

    @property
    def dim(self) -> int:
        return len(self.index[0]) if self.index else 0

    def labels(self) -> list:
        """Canonical coordinates as (argument tuple, target) pairs."""
        cols = [a.tolist() for a in self.index]
        return [(tuple(cols[s][i] for s in range(self.arity)), cols[-1][i]) for i in range(self.dim)]


@lru_cache(maxsize=None)
def coords(n: int, m: int, arity: int, pairs: int) -> CoordSystem:
    if 2 * pairs > arity:
        raise ValueError("more constrained pairs than slots")
    plist = list(itertools.combinations(range(n), 2))
    rows = [
        tuple(x for pr in prs for x in pr) + free + (r,)
        for prs in itertools.product(plist, repeat=pairs)
        for free in itertools.product(range(n), repeat=arity - 2 * pairs)
        for r in range(m)
    ]
    arr = np.array(rows, dtype=np.intp).reshape(len(rows), arity + 1)
    index = tuple(arr[:, s].copy() for s in range(arity + 1))
    flips = []
    for pattern in itertools.product((0, 1), repeat=pairs):
        idx = list(index)
        for q, swap in enumerate(pattern):
            if swap:
                idx[2 * q], idx[2 * q + 1] = index[2 * q + 1], index[2 * q]
        flips.append((-1 if sum(pattern) % 2 else 1, tuple(idx)))
    return CoordSystem(n, m, arity, pairs, index, tuple(flips))


def cochain_space_dim(n: int, m: int, arity: int | None = None, level: int | None = None,
                      pairs: int | None = None) -> int:
    """Dimension of C^arity, or of C^(2p,2p+1) when ``level`` is given."""
    if level is not None:
        return cochain_space_dim(n, m, 2 * level) + cochain_space_dim(n, m, 2 * level + 1)
    if arity is None:
        raise ValueError("give arity or level")
    if arity == 1:
        return n * m
    if pairs is None:
        pairs = arity // 2
    return m * comb(n, 2) ** pairs * n ** (arity - 2 * pairs)


# ---------------------------------------------------------------------------
# cochain types


@dataclass(frozen=True, eq=False)
class Cochain:
    tensor: np.ndarray
    pairs: int

    def __post_init__(self):
        if self.tensor.ndim < 2:
            raise ShapeMismatch("a cochain tensor needs at least one argument slot")
        n = self.tensor.shape[0]
        if any(s != n for s in self.tensor.shape[:-1]):
            raise ShapeMismatch("all argument slots must have the same extent")
        if 2 * self.pairs > self.arity:
            raise ShapeMismatch("more constrained pairs than slots")

    @property
    def arity(self) -> int:
        return self.tensor.ndim - 1

    @property
    def n(self) -> int:
        return self.tensor.shape[0]

    @property
    def m(self) -> int:
        return self.tensor.shape[-1]

    @classmethod
    def zero(cls, n: int, m: int, arity: int, pairs: int | None = None) -> Cochain:
        return cls(zeros(*((n,) * arity + (m,))), arity // 2 if pairs is None else pairs)

    @classmethod
    def from_dense(cls, tensor, pairs: int | None = None, check: bool = True) -> Cochain:
        t = normalize(exact_array(tensor))
        c = cls(t, (t.ndim - 1) // 2 if pairs is None else pairs)
        if check and not c.is_alternating():
            raise ShapeMismatch("tensor is not alternating in its constrained pairs")
        return c

    @property
    def system(self) -> CoordSystem:
        return coords(self.n, self.m, self.arity, self.pairs)

    def coordinates(self) -> tuple:
        return tuple(self.tensor[self.system.index].tolist())

    @classmethod
    def from_coordinates(cls, vec, n: int, m: int, arity: int, pairs: int | None = None) -> Cochain:
        pairs = arity // 2 if pairs is None else pairs
        cs = coords(n, m, arity, pairs)
        if len(vec) != cs.dim:
            raise ShapeMismatch(f"expected {cs.dim} coordinates, got {len(vec)}")
        return cls(expand(np.array(list(vec), dtype=object), cs), pairs)

    def residual_alternation(self) -> np.ndarray:
        """Sum of the tensor and its swap in each constrained pair, stacked."""
        t = self.tensor
        out = []
        for q in range(self.pairs):
            axes = list(range(t.ndim))
            axes[2 * q], axes[2 * q + 1] = axes[2 * q + 1], axes[2 * q]
            out.append(t + t.transpose(axes))
        return np.stack(out) if out else zeros(0)

    def is_alternating(self) -> bool:
        # f(..x,y..) = -f(..y,x..) forces the diagonal to vanish over char 0
        return is_zero(self.residual_alternation())

    def is_zero(self) -> bool:
        return is_zero(self.tensor)

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.tensor.shape == other.tensor.shape and np.array_equal(self.tensor, other.tensor)

    def __add__(self, other: Cochain) -> Cochain:
        return Cochain(normalize(self.tensor + other.tensor), min(self.pairs, other.pairs))

    def __sub__(self, other: Cochain) -> Cochain:
        return Cochain(normalize(self.tensor - other.tensor), min(self.pairs, other.pairs))

    def __neg__(self) -> Cochain:
        return Cochain(-self.tensor, self.pairs)

    def scale(self, c) -> Cochain:
        return Cochain(normalize(self.tensor * c), self.pairs)

    def __call__(self, *args):
        """Evaluate on vectors (multilinear extension)."""
        if len(args) != self.arity:
            raise ShapeMismatch("wrong number of arguments")
        out = self.tensor
        for v in args:
            out = np.tensordot(exact_array(v), out, axes=([0], [0]))
        return normalize(np.asarray(out, dtype=object))


def expand(vec: np.ndarray, cs: CoordSystem) -> np.ndarray:
    """Dense tensor(s) from canonical coordinates; a leading batch axis is kept."""
    batch = vec.shape[:-1]
    out = zeros(*(batch + (cs.n,) * cs.arity + (cs.m,)))
    lead = (slice(None),) * len(batch)
    for sign, idx in cs.flips:
        out[lead + idx] = vec if sign == 1 else -vec
    return out


def restrict(tensor: np.ndarray, cs: CoordSystem) -> np.ndarray:
    lead = (slice(None),) * (tensor.ndim - cs.arity - 1)
    return tensor[lead + cs.index]


@dataclass(frozen=True, eq=False)
class CochainPair:
    f: Cochain
    g: Cochain

    def __post_init__(self):
        if self.f.arity % 2 or self.g.arity != self.f.arity + 1:
            raise ShapeMismatch("a cochain pair has arities (2p, 2p+1)")

    @property
    def level(self) -> int:
        return self.f.arity // 2

    @property
    def n(self) -> int:
        return self.f.n

    @property
    def m(self) -> int:
        return self.f.m

    @classmethod
    def zero(cls, n: int, m: int, level: int) -> CochainPair:
        return cls(Cochain.zero(n, m, 2 * level), Cochain.zero(n, m, 2 * level + 1))

    def coordinates(self) -> tuple:
        return self.f.coordinates() + self.g.coordinates()

    @classmethod
    def from_coordinates(cls, vec, n: int, m: int, level: int) -> CochainPair:
        k = coords(n, m, 2 * level, level).dim
        vec = list(vec)
        return cls(Cochain.from_coordinates(vec[:k], n, m, 2 * level),
                   Cochain.from_coordinates(vec[k:], n, m, 2 * level + 1))

    def is_zero(self) -> bool:
        return self.f.is_zero() and self.g.is_zero()

    def is_alternating(self) -> bool:
        return self.f.is_alternating() and self.g.is_alternating()

    def __eq__(self, other):
        if not isinstance(other, CochainPair):
            return NotImplemented
        return self.f == other.f and self.g == other.g

    def __add__(self, other):
        return CochainPair(self.f + other.f, self.g + other.g)

    def __sub__(self, other):
        return CochainPair(self.f - other.f, self.g - other.g)

    def __neg__(self):
        return CochainPair(-self.f, -self.g)

    def scale(self, c):
        return CochainPair(self.f.scale(c), self.g.scale(c))


@dataclass(frozen=True, eq=False)
class OneCochain:
    """Linear map L -> V with ``map[i, r]`` the r-th coordinate of f(e_i)."""

    map: np.ndarray

    @property
    def n(self) -> int:
        return self.map.shape[0]

    @property
    def m(self) -> int:
        return self.map.shape[1]

    @classmethod
    def from_rows(cls, rows) -> OneCochain:
        arr = normalize(exact_array(rows))
        if arr.ndim != 2:
            raise ShapeMismatch("a one-cochain is an n x m matrix")
        return cls(arr)

    @classmethod
    def zero(cls, n: int, m: int) -> OneCochain:
        return cls(zeros(n, m))

    @classmethod
    def identity(cls, n: int) -> OneCochain:
        a = zeros(n, n)
        for i in range(n):
            a[i, i] = 1
        return cls(a)

    def coordinates(self) -> tuple:
        return tuple(self.map.reshape(-1).tolist())

    @classmethod
    def from_coordinates(cls, vec, n: int, m: int) -> OneCochain:
        return cls(normalize(np.array(list(vec), dtype=object).reshape(n, m)))

    def is_zero(self) -> bool:
        return is_zero(self.map)

    def __eq__(self, other):
        if not isinstance(other, OneCochain):
            return NotImplemented
        return self.map.shape == other.map.shape and np.array_equal(self.map, other.map)

    def __add__(self, other):
        return OneCochain(normalize(self.map + other.map))

    def __sub__(self, other):
        return OneCochain(normalize(self.map - other.map))

    def __neg__(self):
        return OneCochain(-self.map)

    def scale(self, c):
        return OneCochain(normalize(self.map * c))


def basis_enumerate(n: int, m: int, arity: int, pairs: int | None = None) -> list:
    """Elementary cochains, one per canonical coordinate, in coordinate order."""
    pairs = arity // 2 if pairs is None else pairs
    cs = coords(n, m, arity, pairs)
    out = []
    for i in range(cs.dim):
        v = [0] * cs.dim
        v[i] = 1
        out.append(Cochain.from_coordinates(v, n, m, arity, pairs))
    return out


def pair_basis(n: int, m: int, level: int) -> list:
    """Elementary CochainPairs of C^(2p,2p+1): f-basis first, then g-basis."""
    zf = Cochain.zero(n, m, 2 * level)
    zg = Cochain.zero(n, m, 2 * level + 1)
    return ([CochainPair(f, zg) for f in basis_enumerate(n, m, 2 * level)]
            + [CochainPair(zf, g) for g in basis_enumerate(n, m, 2 * level + 1)])


# ---------------------------------------------------------------------------
# coboundaries on raw (possibly batched) tensors


def delta_tensors(r: Representation, F, G, p: int):
    """(delta_I, delta_II) at level p on tensors F (arity 2p) and G (arity 2p+1).

    Either input may be None, meaning zero; the matching terms are skipped,
    and a component with no contributing terms comes back as None.
    """
    if p < 1:
        raise LevelError("level must be at least 1")
    e = np.einsum
    b, t = r.algebra.binary, r.algebra.ternary
    rho, Dm, th = r.rho, r.D, r.theta
    sgn = -1 if p % 2 else 1
    dI = dII = None

    x = SLOT_LETTERS[:2 * p + 2]
    out = f"->...{x}r"
    if G is not None:
        dI = sgn * (e(f"...{x[:2 * p]}{x[2 * p + 1]}s,{x[2 * p]}rs" + out, G, rho)
                    - e(f"...{x[:2 * p + 1]}s,{x[2 * p + 1]}rs" + out, G, rho)
                    - e(f"...{x[:2 * p]}kr,{x[2 * p]}{x[2 * p + 1]}k" + out, G, b))
    if F is not None:
        fI = _pair_terms(F, x, p, Dm, t, out)
        dI = fI if dI is None else dI + fI

    if G is not None:
        x = SLOT_LETTERS[:2 * p + 3]
        out = f"->...{x}r"
        dII = sgn * (e(f"...{x[:2 * p + 1]}s,{x[2 * p + 1]}{x[2 * p + 2]}rs" + out, G, th)
                     - e(f"...{x[:2 * p]}{x[2 * p + 1]}s,{x[2 * p]}{x[2 * p + 2]}rs" + out, G, th))
        dII = dII + _pair_terms(G, x, p + 1, Dm, t, out)
    return dI, dII


def _pair_terms(T: np.ndarray, x: str, npairs: int, Dm, t, out: str):
    # D-action of each leading pair plus the ternary substitutions into later slots
    e = np.einsum
    acc = 0
    for k in range(1, npairs + 1):
        u, v = x[2 * k - 2], x[2 * k - 1]
        rest = x[:2 * k - 2] + x[2 * k:]
        sk = 1 if k % 2 else -1  # (-1)^(k+1)
        acc = acc + sk * e(f"...{rest}s,{u}{v}rs" + out, T, Dm)
        for j in range(2 * k + 1, len(x) + 1):
            xj = x[j - 1]
            fin = rest.replace(xj, "k")
            acc = acc - sk * e(f"...{fin}r,{u}{v}{xj}k" + out, T, t)
    return acc


def delta_one_tensors(r: Representation, f: np.ndarray):
    """(delta_I f, delta_II f) for a one-cochain tensor ``f[..., i, r]``."""
    e = np.einsum
    b, t = r.algebra.binary, r.algebra.ternary
    dI = (e("...bs,ars->...abr", f, r.rho)
          - e("...as,brs->...abr", f, r.rho)
          - e("...kr,abk->...abr", f, b))
    dII = (e("...as,bcrs->...abcr", f, r.theta)
           - e("...bs,acrs->...abcr", f, r.theta)
           + e("...cs,abrs->...abcr", f, r.D)
           - e("...kr,abck->...abcr", f, t))
    return dI, dII


def _cyclic_abc(term):
    # term(labels) -> einsum result with output labels permuted cyclically
    return term("abc") + term("bca") + term("cab")


def delta_star_tensors(r: Representation, F, G):
    """(delta*_I, delta*_II) on a level-one pair of tensors (None means zero)."""
    e = np.einsum
    b = r.algebra.binary

    def part_I(o):
        out = f"->...{o}r"
        acc = 0
        if F is not None:
            acc = -e("...bcs,ars" + out, F, r.rho) + e("...kcr,abk" + out, F, b)
        if G is not None:
            acc = acc + e("...abcr" + out, G)
        return acc

    def part_II(o):
        out = f"->...{o}dr"
        acc = 0
        if F is not None:
            acc = e("...bcs,adrs" + out, F, r.theta)
        if G is not None:
            acc = acc + e("...kcdr,abk" + out, G, b)
        return acc

    return _cyclic_abc(part_I), _cyclic_abc(part_II)


# ---------------------------------------------------------------------------
# public coboundary operators


def delta_pair(r: Representation, c: CochainPair) -> CochainPair:
    p = c.level
    if c.n != r.n or c.m != r.m:
        raise ShapeMismatch("cochain does not match the representation")
    dI, dII = delta_tensors(r, c.f.tensor, c.g.tensor, p)
    return CochainPair(Cochain(normalize(dI), p + 1), Cochain(normalize(dII), p + 1))


def delta_one(r: Representation, f: OneCochain) -> CochainPair:
    if f.map.shape != (r.n, r.m):
        raise ShapeMismatch("one-cochain does not match the representation")
    dI, dII = delta_one_tensors(r, f.map)
    return CochainPair(Cochain(normalize(dI), 1), Cochain(normalize(dII), 1))


def delta_star(r: Representation, c: CochainPair) -> tuple:
    """Returns (arity-3 cochain, arity-4 cochain); the latter is alternating
    only in its first pair."""
    if c.level != 1:
        raise LevelError("delta* is only defined on level-one pairs")
    if c.n != r.n or c.m != r.m:
        raise ShapeMismatch("cochain does not match the representation")
    sI, sII = delta_star_tensors(r, c.f.tensor, c.g.tensor)
    return Cochain(normalize(sI), 1), Cochain(normalize(sII), 1)
