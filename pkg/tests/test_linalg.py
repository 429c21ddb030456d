from fractions import Fraction

import pytest

from lyd.linalg import (
    Echelon,
    Matrix,
    NoSolution,
    Subspace,
    SubspaceNotContained,
    contains,
    format_scalar,
    image_basis,
    kernel_basis,
    parse_scalar,
    quotient_dim,
    rank,
    rref,
    solve,
    sparse_kernel,
)


def test_scalar_round_trip():
    for text in ("0", "3", "-7", "1/2", "-22/7"):
        assert format_scalar(parse_scalar(text)) == text
    assert format_scalar(parse_scalar("4/2")) == "2"
    assert parse_scalar("6/4") == Fraction(3, 2)


@pytest.mark.parametrize("bad", ["", "1/0", "x", "1.5", "1/2/3"])
def test_scalar_rejects(bad):
    with pytest.raises(ValueError):
        parse_scalar(bad)


def test_rref_small():
    m = Matrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    r, piv = rref(m)
    assert piv == [0, 1]
    assert r.to_rows()[:2] == [[1, 0, 1], [0, 1, 1]]
    assert rank(m) == 2


def test_kernel_and_image():
    m = Matrix.from_rows([[1, 1, 0], [0, 0, 1]])
    k = kernel_basis(m)
    assert k.dim == 1
    (v,) = k.basis
    assert m.apply(v) == (0, 0)
    assert image_basis(m).dim == 2


def test_identity_kernel_is_zero():
    assert kernel_basis(Matrix.identity(4)).dim == 0
    assert image_basis(Matrix.identity(4)).dim == 4


def test_solve_free_variables_zero():
    m = Matrix.from_rows([[1, 1, 0], [0, 0, 1]])
    x = solve(m, [3, 5])
    assert x == (3, 0, 5)


def test_solve_inconsistent():
    m = Matrix.from_rows([[1, 1], [2, 2]])
    with pytest.raises(NoSolution):
        solve(m, [1, 3])


def test_subspace_membership_and_sum():
    a = Subspace.span([[1, 0, 0]], 3)
    b = Subspace.span([[0, 1, 1]], 3)
    s = a + b
    assert s.dim == 2
    assert (1, 1, 1) in s
    assert (0, 0, 1) not in s
    assert contains(s, [2, -3, -3])
    assert a.is_subspace_of(s) and not s.is_subspace_of(a)


def test_quotient_dim():
    big = Subspace.full(3)
    small = Subspace.span([[1, 1, 0]], 3)
    assert quotient_dim(big, small) == 2
    with pytest.raises(SubspaceNotContained):
        quotient_dim(small, big)


def test_complement_extends_basis():
    big = Subspace.full(3)
    small = Subspace.span([[1, 1, 0]], 3)
    comp = small.complement_in(big)
    assert len(comp) == 2
    assert (small + Subspace.span(comp, 3)).dim == 3


def test_echelon_incremental():
    e = Echelon(3)
    assert e.add({0: 1, 1: 1}) is not None
    assert e.add({0: 2, 1: 2}) is None
    assert e.rank == 1
    assert e.reduce({0: 1, 1: 1}) == {}


def test_sparse_kernel_matches_dense():
    rows = [{0: 1, 2: -1}, {1: 1, 2: -1}]
    ker = sparse_kernel(rows, 3)
    assert len(ker) == 1
    v = ker[0]
    for r in rows:
        assert sum(c * v.get(j, 0) for j, c in r.items()) == 0


def test_rationals_stay_exact():
    m = Matrix.from_rows([[Fraction(1, 3), Fraction(2, 3)], [1, 1]])
    x = solve(m, [1, 1])
    assert x == (-1, 2)
    assert all(isinstance(c, (int, Fraction)) for c in x)
