"""Exact linear algebra over the rationals.

Everything here is deterministic: reduced row-echelon forms are unique, and
subspaces are stored by the reduced echelon form of a spanning set, so two
equal subspaces always compare equal.

Scalars are exact rationals.  Integer-valued results are returned as ``int``
(a ``Fraction`` with denominator 1 is demoted) because Python integers are an
order of magnitude faster in the object-array tensor code that sits on top of
this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

Scalar = Rational  # int or Fraction
SparseVec = dict  # column index -> nonzero Scalar


class NoSolution(ValueError):
    """The linear system is inconsistent."""


class SubspaceNotContained(ValueError):
    """A subspace expected to be contained in another is not."""


def scalar(x) -> Scalar:
    """Coerce ``x`` (int, Fraction, or "p/q" string) to an exact scalar."""
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, Rational):
        return scalar(Fraction(x.numerator, x.denominator))
    raise TypeError(f"not an exact rational: {x!r}")


def demote(x: Scalar) -> Scalar:
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def parse_scalar(text: str) -> Scalar:
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    num, sep, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if sep and (not den.strip().lstrip("+").isdigit()):
        raise ValueError(f"malformed rational {text!r}")
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return demote(Fraction(p, q))


def format_scalar(x: Scalar) -> str:
    x = scalar(x)
    if isinstance(x, int):
        return str(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Matrix:
    """Dense row-major matrix of exact scalars."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows * cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> Matrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(scalar(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Matrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> Matrix:
        cols = len(columns)
        data = [0] * (rows * cols)
        for j, col in enumerate(columns):
            for i, x in enumerate(col):
                data[i * cols + j] = scalar(x)
        return cls(rows, cols, tuple(data))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> Matrix:
        return Matrix(self.cols, self.rows,
                      tuple(self.entries[i * self.cols + j]
                            for j in range(self.cols) for i in range(self.rows)))

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(demote(sum((a * b for a, b in zip(self.row(i), v) if a and b), 0))
                     for i in range(self.rows))

    def sparse_rows(self) -> list[SparseVec]:
        return [{j: x for j, x in enumerate(self.row(i)) if x} for i in range(self.rows)]


# ---------------------------------------------------------------------------
# sparse elimination core


class Echelon:
    """Incrementally maintained reduced row-echelon basis of a row space.

    Pivot rows are kept fully reduced at all times, so reducing a vector
    needs a single pass over the pivot columns it touches.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, SparseVec] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: SparseVec) -> SparseVec:
        """Normal form of ``vec`` modulo the current row space."""
        row = dict(vec)
        for p in [c for c in row if c in self.pivots]:
            coef = row.get(p)
            if not coef:
                continue
            for c, x in self.pivots[p].items():
                y = row.get(c, 0) - coef * x
                if y:
                    row[c] = y
                else:
                    row.pop(c, None)
        return row

    def add(self, vec: SparseVec) -> int | None:
        """Insert ``vec``; return its new pivot column or None if dependent."""
        row = self.reduce(vec)
        if not row:
            return None
        lead = min(row)
        inv = row[lead]
        row = {c: demote(Fraction(x) / inv) if inv != 1 else x for c, x in row.items()}
        for prow in self.pivots.values():
            coef = prow.get(lead)
            if coef:
                for c, x in row.items():
                    y = prow.get(c, 0) - coef * x
                    if y:
                        prow[c] = demote(y)
                    else:
                        prow.pop(c, None)
        self.pivots[lead] = row
        return lead

    def rows(self) -> list[SparseVec]:
        return [self.pivots[p] for p in sorted(self.pivots)]

    def pivot_columns(self) -> list[int]:
        return sorted(self.pivots)


def _dense(vec: SparseVec, n: int) -> tuple:
    out = [0] * n
    for c, x in vec.items():
        out[c] = demote(x)
    return tuple(out)


def _sparse(vec: Sequence) -> SparseVec:
    return {i: scalar(x) for i, x in enumerate(vec) if x}


def sparse_kernel(rows: Iterable[SparseVec], ncols: int) -> list[SparseVec]:
    """Kernel basis (one vector per free column) of the matrix with these rows."""
    ech = Echelon(ncols)
    for r in rows:
        if r:
            ech.add(r)
    basis = []
    for f in range(ncols):
        if f in ech.pivots:
            continue
        v = {f: 1}
        for p, prow in ech.pivots.items():
            x = prow.get(f)
            if x:
                v[p] = demote(-x)
        basis.append(v)
    return basis


def transpose_sparse(columns: Sequence[SparseVec]) -> dict[int, SparseVec]:
    rows: dict[int, SparseVec] = {}
    for j, col in enumerate(columns):
        for i, x in col.items():
            rows.setdefault(i, {})[j] = x
    return rows


# ---------------------------------------------------------------------------
# public operations


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form and pivot columns."""
    ech = Echelon(m.cols)
    for r in m.sparse_rows():
        if r:
            ech.add(r)
    out = [_dense(r, m.cols) for r in ech.rows()]
    out += [(0,) * m.cols] * (m.rows - len(out))
    return Matrix(m.rows, m.cols, tuple(x for r in out for x in r)), ech.pivot_columns()


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^ambient_dim, stored as a reduced echelon basis."""

    ambient_dim: int
    basis: tuple  # tuple of dense tuples in reduced row-echelon form

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
        return cls.span_sparse((_sparse(v) for v in vectors), ambient_dim)

    @classmethod
    def span_sparse(cls, vectors: Iterable[SparseVec], ambient_dim: int) -> Subspace:
        ech = Echelon(ambient_dim)
        for v in vectors:
            if v:
                ech.add(v)
        return cls._from_echelon(ech)

    @classmethod
    def _from_echelon(cls, ech: Echelon) -> Subspace:
        return cls(ech.ncols, tuple(_dense(r, ech.ncols) for r in ech.rows()))

    @classmethod
    def zero(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, tuple(tuple(1 if i == j else 0 for j in range(ambient_dim))
                                      for i in range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def pivot_columns(self) -> list[int]:
        return [next(i for i, x in enumerate(b) if x) for b in self.basis]

    def echelon(self) -> Echelon:
        ech = Echelon(self.ambient_dim)
        for b, p in zip(self.basis, self.pivot_columns()):
            ech.pivots[p] = _sparse(b)
        return ech

    def reduce(self, v: Sequence) -> tuple:
        """Normal form of ``v`` modulo this subspace (zero at pivot columns)."""
        self._check(v)
        return _dense(self.echelon().reduce(_sparse(v)), self.ambient_dim)

    def _check(self, v: Sequence):
        if len(v) != self.ambient_dim:
            raise ValueError(f"vector has {len(v)} coordinates, expected {self.ambient_dim}")

    def __contains__(self, v) -> bool:
        return contains(self, v)

    def is_subspace_of(self, other: Subspace) -> bool:
        ech = other.echelon()
        return all(not ech.reduce(_sparse(b)) for b in self.basis)

    def __add__(self, other: Subspace) -> Subspace:
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def complement_in(self, big: Subspace) -> list[tuple]:
        """Basis vectors of ``big`` (in its echelon order) independent modulo self.

        The chosen vectors together with ``self`` span ``big``; this is the
        canonical complement used for cohomology representatives.
        """
        ech = self.echelon()
        picked = []
        for b in big.basis:
            if ech.add(_sparse(b)) is not None:
                picked.append(b)
        return picked


def kernel_basis(m: Matrix) -> Subspace:
    vecs = sparse_kernel(m.sparse_rows(), m.cols)
    return Subspace.span_sparse(vecs, m.cols)


def image_basis(m: Matrix) -> Subspace:
    return Subspace.span(m.transpose().to_rows(), m.rows)


def solve(m: Matrix, rhs: Sequence) -> tuple:
    """A particular solution of ``m x = rhs`` with every free variable zero.

    Raises NoSolution when the system is inconsistent.
    """
    if len(rhs) != m.rows:
        raise ValueError("rhs length must equal number of rows")
    return solve_sparse(m.sparse_rows(), [scalar(x) for x in rhs], m.cols)


def solve_sparse(rows: Sequence[SparseVec], rhs: Sequence, ncols: int) -> tuple:
    aug = ncols  # augmented column index
    ech = Echelon(ncols + 1)
    for r, b in zip(rows, rhs):
        row = dict(r)
        if b:
            row[aug] = b
        if row:
            ech.add(row)
    if aug in ech.pivots:
        raise NoSolution("inconsistent linear system")
    x = [0] * ncols
    for p, prow in ech.pivots.items():
        x[p] = demote(prow.get(aug, 0))
    return tuple(x)


def contains(s: Subspace, v: Sequence) -> bool:
    s._check(v)
    return not s.echelon().reduce(_sparse(v))


def quotient_dim(big: Subspace, small: Subspace) -> int:
    if big.ambient_dim != small.ambient_dim:
        raise ValueError("ambient dimensions differ")
    if not small.is_subspace_of(big):
        raise SubspaceNotContained("small subspace is not contained in big")
    return big.dim - small.dim
