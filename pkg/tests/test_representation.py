import pytest

import oracles
from lyd.algebra import ShapeMismatch, example_3dim, zeros
from lyd.representation import (
    Representation,
    adjoint,
    check_derived_D_identity,
    check_representation,
    zero_representation,
)


def oracle_failures(r):
    L = r.algebra
    return oracles.representation_failures(L.binary, L.ternary, r.rho, r.D, r.theta)


def test_adjoint_passes_on_catalog(algebras):
    for name, L in algebras.items():
        r = adjoint(L)
        assert check_representation(r).all_pass, name
        assert check_derived_D_identity(r), name


def test_adjoint_agrees_with_oracle(small_algebras):
    for name, L in small_algebras.items():
        assert oracle_failures(adjoint(L)) == set(), name


def test_rho_of_e1_in_example():
    r = adjoint(example_3dim())
    rho1 = r.rho[0]
    nonzero = [(i, j) for i in range(3) for j in range(3) if rho1[i, j]]
    assert nonzero == [(2, 1)]  # column e2 goes to e3


def test_swapped_actions_fail_and_match_oracle():
    L = example_3dim()
    r = adjoint(L)
    bad = Representation(L, 3, r.rho, r.theta, r.D)
    report = check_representation(bad)
    assert not report.all_pass
    assert set(report.failing()) == oracle_failures(bad)
    assert "R1" in report.failing()


def test_zero_representation_passes():
    z = zero_representation(example_3dim(), 2)
    assert check_representation(z).all_pass


def test_random_perturbations_match_oracle():
    import random
    rng = random.Random(5)
    L = example_3dim()
    r = adjoint(L)
    for _ in range(6):
        rho, D, th = r.rho.copy(), r.D.copy(), r.theta.copy()
        target = rng.choice((rho, D, th))
        idx = tuple(rng.randrange(s) for s in target.shape)
        target[idx] += rng.choice((-1, 1))
        p = Representation(L, 3, rho, D, th)
        assert set(check_representation(p).failing()) == oracle_failures(p)


def test_shape_checks():
    L = example_3dim()
    with pytest.raises(ShapeMismatch):
        Representation(L, 2, zeros(3, 2, 2), zeros(3, 3, 2, 2), zeros(3, 3, 3, 3))
