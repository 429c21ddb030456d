import random

from hypothesis import given, settings, strategies as st

from lyd.algebra import (
    LieYamagutiAlgebra,
    change_basis,
    check_axioms,
    from_leibniz,
    from_lie_algebra,
    random_leibniz_product,
    random_lie_bracket,
    random_unimodular,
    zeros,
)
from lyd.cochains import CochainPair, delta_pair, pair_basis
from lyd.cohomology import h23
from lyd.free import FreeLYA, graded_dimensions
from lyd.io import parse_algebra, serialize_algebra
from lyd.linalg import Matrix, kernel_basis, rank, solve
from lyd.representation import adjoint

small_ints = st.integers(min_value=-3, max_value=3)


@st.composite
def matrices(draw):
    r = draw(st.integers(1, 5))
    c = draw(st.integers(1, 5))
    return [[draw(small_ints) for _ in range(c)] for _ in range(r)]


@given(matrices())
def test_rank_nullity(rows):
    m = Matrix.from_rows(rows)
    k = kernel_basis(m)
    assert rank(m) + k.dim == m.cols
    for v in k.basis:
        assert all(x == 0 for x in m.apply(v))


@given(matrices(), st.lists(st.fractions(max_denominator=5), min_size=5, max_size=5))
def test_solve_recovers_consistent_rhs(rows, x0):
    m = Matrix.from_rows(rows)
    rhs = m.apply(x0[:m.cols])
    x = solve(m, rhs)
    assert m.apply(x) == rhs


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]))
def test_random_lie_algebras_satisfy_axioms(seed, n):
    L = from_lie_algebra(random_lie_bracket(n, random.Random(seed)))
    assert check_axioms(L).all_pass


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]))
def test_random_leibniz_algebras_satisfy_axioms(seed, n):
    L = from_leibniz(random_leibniz_product(n, random.Random(seed)))
    assert check_axioms(L).all_pass


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_delta_squared_zero_on_random_lie(seed):
    rng = random.Random(seed)
    L = from_lie_algebra(random_lie_bracket(3, rng))
    r = adjoint(L)
    vec = [rng.randint(-2, 2) for _ in range(len(pair_basis(3, 3, 1)))]
    c = CochainPair.from_coordinates(vec, 3, 3, 1)
    assert delta_pair(r, delta_pair(r, c)).is_zero()


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["example-3dim", "leibniz-2", "meson-2", "heisenberg"]))
def test_cohomology_invariant_under_change_of_basis(algebras, seed, name):
    L = algebras[name]
    M = change_basis(L, random_unimodular(L.dim, random.Random(seed)))
    a, b = h23(L), h23(M)
    assert (a.z_dim, a.b_dim, a.h_dim) == (b.z_dim, b.b_dim, b.h_dim)


@st.composite
def raw_algebras(draw):
    n = draw(st.integers(1, 3))
    b = zeros(n, n, n)
    t = zeros(n, n, n, n)
    for _ in range(draw(st.integers(0, 4))):
        idx = tuple(draw(st.integers(0, n - 1)) for _ in range(3))
        b[idx] = draw(st.fractions(max_denominator=4))
    for _ in range(draw(st.integers(0, 4))):
        idx = tuple(draw(st.integers(0, n - 1)) for _ in range(4))
        t[idx] = draw(st.fractions(max_denominator=4))
    return LieYamagutiAlgebra.build(b, t)


@given(raw_algebras())
def test_algebra_documents_round_trip(L):
    text = serialize_algebra(L)
    back = parse_algebra(text)
    assert back == L
    assert serialize_algebra(back) == text


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_free_dimensions_independent_of_word_order(seed):
    assert graded_dimensions(2, 3, permutation_seed=seed) == [2, 1, 4]


@settings(max_examples=15, deadline=None)
@given(st.lists(small_ints, min_size=4, max_size=4), st.lists(small_ints, min_size=4, max_size=4))
def test_quotient_product_antisymmetric(u, v):
    F = FreeLYA(2)
    d2 = F.piece(2).quotient_dim
    d3 = F.piece(3).quotient_dim
    x = tuple(u[:d2])
    y = tuple(v[:d3])
    assert F.multiply(x, 2, y, 3) == tuple(-c for c in F.multiply(y, 3, x, 2))
