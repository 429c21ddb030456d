"""Acceptance criteria 1-11.

Each test prints one line ``criterion N: PASS|FAIL <detail>`` to the
terminal (also when pytest captures output).  Run alone with

    pytest tests/test_acceptance.py -v
"""

import os
import random
import subprocess
import sys
import time

import numpy as np
import pytest

import oracles
from lyd.algebra import (
    LieYamagutiAlgebra,
    abelian,
    catalog,
    check_axioms,
    example_3dim,
    heisenberg_lya,
    meson_field,
    reductive_so3,
    zeros,
)
from lyd.cochains import CochainPair, OneCochain, delta_one, delta_pair, delta_star, pair_basis
from lyd.cohomology import b23, h23, image_star, is_rigid_sufficient, z23
from lyd.deformation import (
    AllZero,
    Obstructed,
    TruncatedDeformation,
    are_equivalent,
    check_deformation,
    circle_form,
    extend_one_order,
    integrate,
    n_infinitesimal,
    normalize_deformation,
    obstruction,
    random_cocycle,
    random_deformation,
    random_isomorphism,
    reparametrize,
    transport,
)
from lyd.free import FreeLYA, evaluate, graded_dimensions
from lyd.representation import adjoint, check_derived_D_identity, check_representation

import lyd

DATA = os.path.join(os.path.dirname(lyd.__file__), "data")


@pytest.fixture
def verdict(request):
    """Print one pass/fail line for the criterion, bypassing output capture."""
    capman = request.config.pluginmanager.getplugin("capturemanager")
    lines = []

    def record(number, ok, detail=""):
        lines.append(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
        return ok

    yield record
    with capman.global_and_fixture_disabled() if capman else _null():
        for line in lines:
            print("\n" + line, end="")
        print()


class _null:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def symmetric_bracket():
    b = zeros(2, 2, 2)
    b[0, 1, 0] = b[1, 0, 0] = 1
    return LieYamagutiAlgebra.build(b, zeros(2, 2, 2, 2))


# ---------------------------------------------------------------------------


def test_criterion_1_axiom_suite(verdict):
    algebras = ([abelian(n) for n in range(1, 5)] + [example_3dim()]
                + [meson_field(n) for n in range(1, 5)] + [heisenberg_lya(), reductive_so3()])
    start = time.perf_counter()
    ok = all(check_axioms(L).all_pass for L in algebras)
    sym = check_axioms(symmetric_bracket())
    elapsed = time.perf_counter() - start
    ok = ok and not sym.flags["LY1"]
    verdict(1, ok and elapsed < 1.0, f"{len(algebras)} algebras, symmetric fails LY1, {elapsed:.2f}s")
    assert ok
    assert elapsed < 1.0


def test_criterion_2_representation_suite(verdict):
    start = time.perf_counter()
    cat = catalog()
    ok = all(check_representation(adjoint(L)).all_pass and check_derived_D_identity(adjoint(L))
             for L in cat.values())
    elapsed = time.perf_counter() - start
    verdict(2, ok and elapsed < 1.0, f"{len(cat)} adjoint representations, {elapsed:.2f}s")
    assert ok
    assert elapsed < 1.0


def test_criterion_3_complex_property(verdict):
    start = time.perf_counter()
    checked = 0
    bad = []
    for name, L in catalog().items():
        if L.dim > 3:
            continue
        r = adjoint(L)
        n = L.dim
        for c in pair_basis(n, n, 1):
            checked += 1
            if not delta_pair(r, delta_pair(r, c)).is_zero():
                bad.append((name, "dd"))
        for i in range(n):
            for j in range(n):
                m = np.zeros((n, n), dtype=object)
                m[i, j] = 1
                dc = delta_one(r, OneCochain(m))
                sI, sII = delta_star(r, dc)
                checked += 1
                if not (dc.is_alternating() and sI.is_zero() and sII.is_zero()
                        and delta_pair(r, dc).is_zero()):
                    bad.append((name, "one"))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 30
    verdict(3, ok, f"{checked} basis cochains, {elapsed:.1f}s")
    assert not bad, bad[:5]
    assert elapsed < 30


# ---------------------------------------------------------------------------
# corpus of seeded random deformations for criteria 4-6


CORPUS_ALGEBRAS = ["abelian-2", "example-3dim", "meson-2", "meson-3", "heisenberg",
                   "reductive-so3", "so3-lie", "leibniz-2", "abelian-3"]


def build_corpus(size=110, seed=2024):
    rng = random.Random(seed)
    cat = catalog()
    out = []
    while len(out) < size:
        L = cat[rng.choice(CORPUS_ALGEBRAS)]
        order = rng.randint(1, 3)
        d, _ = random_deformation(L, rng, order)
        kind = rng.random()
        if kind < 0.2 and d.order >= 1:
            d = reparametrize(d, 2, order=min(3, 2 * d.order + 1))
        elif kind < 0.4:
            d = transport(d, random_isomorphism(L.dim, d.order, rng))
        if d.order >= 1:
            out.append(d)
    return out


@pytest.fixture(scope="module")
def corpus():
    ds = build_corpus()
    valid = [d for d in ds if check_deformation(d).passes]
    assert len(valid) == len(ds)
    return valid


def test_criterion_4_infinitesimal_is_cocycle(corpus, verdict):
    tested = 0
    all_zero = 0
    bad = 0
    for d in corpus:
        try:
            _, c = n_infinitesimal(d)
        except AllZero:
            all_zero += 1
            continue
        tested += 1
        if c.coordinates() not in z23(d.algebra):
            bad += 1
    ok = bad == 0 and len(corpus) >= 100
    verdict(4, ok, f"{tested} infinitesimals in Z23 over {len(corpus)} deformations ({all_zero} all-zero)")
    assert ok


def test_criterion_5_obstruction_lemma(corpus, verdict):
    bad = 0
    for d in corpus:
        obs = obstruction(d, verify=False)
        r = adjoint(d.algebra)
        circ = circle_form(d)
        same = np.array_equal(circ.f.tensor, obs.R.tensor) and np.array_equal(circ.g.tensor, obs.S.tensor)
        closed = delta_pair(r, obs.rs).is_zero()
        if not (same and closed):
            bad += 1
    ok = bad == 0
    verdict(5, ok, f"delta(R,S) = 0 and circle form = direct sums on {len(corpus)} deformations")
    assert ok


def test_criterion_6_extension_iff_unobstructed(corpus, verdict):
    extended = obstructed = mismatched = 0
    for d in corpus:
        member = obstruction(d, verify=False).vector() in image_star(d.algebra)
        try:
            out = extend_one_order(d)
            succeeded = True
            if not check_deformation(out).passes:
                mismatched += 1
        except Obstructed:
            succeeded = False
        extended += succeeded
        obstructed += not succeeded
        if succeeded != member:
            mismatched += 1
    ok = mismatched == 0 and extended > 0 and obstructed > 0
    verdict(6, ok, f"{extended} extended, {obstructed} obstructed, {mismatched} disagreements")
    assert mismatched == 0
    assert extended > 0 and obstructed > 0


def test_criterion_7_equivalence(verdict):
    rng = random.Random(77)
    cat = catalog()
    names = ["meson-2", "meson-3", "so3-lie", "reductive-so3", "example-3dim", "leibniz-2", "heisenberg"]
    pairs = 0
    failures = []
    while pairs < 50:
        L = cat[rng.choice(names)]
        d, stopped = random_deformation(L, rng, 3)
        if d.order < 3:
            # pad an obstructed deformation with its t -> t^k reparametrization
            d = reparametrize(d.truncate(1), 3, order=3) if d.order >= 1 else TruncatedDeformation.identity(L, 3)
            if not check_deformation(d).passes:
                continue
        phi = random_isomorphism(L.dim, 3, rng)
        d2 = transport(d, phi)
        pairs += 1
        diff = (d2.term(1) - d.term(1)).coordinates()
        if diff not in b23(L):
            failures.append((L.name, "b23"))
            continue
        try:
            found = are_equivalent(d, d2, 3)
        except Exception as err:  # noqa: BLE001 - any failure is a criterion failure
            failures.append((L.name, repr(err)))
            continue
        if transport(d, found) != d2:
            failures.append((L.name, "iso"))
    ok = not failures
    verdict(7, ok, f"{pairs} (deformation, isomorphism) pairs through order 3, {len(failures)} failures")
    assert not failures, failures[:5]


def test_criterion_8_rigidity(verdict):
    cat = catalog()
    agree = all(is_rigid_sufficient(L) == (h23(L).h_dim == 0) for L in cat.values())
    L = cat["meson-2"]
    assert h23(L).h_dim == 0
    zero = integrate(L, CochainPair.zero(2, 2, 1), 4)
    ok_zero = zero == TruncatedDeformation.identity(L, 4)
    rng = random.Random(8)
    trivial = 0
    total = 0
    for _ in range(10):
        d = integrate(L, random_cocycle(L, rng), 4)
        d = transport(d, random_isomorphism(2, 4, rng))
        assert check_deformation(d).passes
        res = normalize_deformation(d)
        total += 1
        trivial += res.trivial and res.deformation == TruncatedDeformation.identity(L, 4)
    ok = agree and ok_zero and trivial == total
    verdict(8, ok, f"rigidity flag agrees on {len(cat)} algebras; {trivial}/{total} meson-2 deformations trivial mod t^5")
    assert ok


def test_criterion_9_free_dimensions(verdict):
    start = time.perf_counter()
    a = graded_dimensions(1, 4)
    b = graded_dimensions(2, 2)
    c = graded_dimensions(2, 3)[2]
    ref = oracles.free_dimension(2, 3)
    elapsed = time.perf_counter() - start
    ok = a == [1, 0, 0, 0] and b == [2, 1] and c == ref and elapsed < 10
    verdict(9, ok, f"(1,0,0,0), (2,1), weight-3 dim {c} = oracle {ref}, {elapsed:.2f}s")
    assert ok


def test_criterion_10_universal_property(verdict):
    cat = catalog()
    vectors = []
    for g in (1, 2):
        F = FreeLYA(g)
        for w in range(1, 5):
            vectors += [(g, r) for r in F.piece(w).relation_basis()]
    bad = 0
    checks = 0
    for seed in range(20):
        rng = random.Random(seed)
        for name, L in cat.items():
            assign = [[rng.randint(-3, 3) for _ in range(L.dim)] for _ in range(2)]
            cache = {}
            for g, r in vectors:
                acc = zeros(L.dim)
                for word, coef in r.items():
                    if word not in cache:
                        cache[word] = evaluate(word, L, assign)
                    acc = acc + coef * cache[word]
                checks += 1
                if np.any(acc):
                    bad += 1
    ok = bad == 0
    verdict(10, ok, f"{len(vectors)} relation vectors x {len(cat)} algebras x 20 seeds, {bad} nonzero")
    assert ok


CLI_COMMANDS = [
    ["check", "{d}/3dim.lya"],
    ["check", "catalog:heisenberg"],
    ["rep-check", "{d}/example-3dim-swapped.rep"],
    ["rep-check", "catalog:so3-lie"],
    ["cohomology", "{d}/3dim.lya", "--which", "23", "--representatives"],
    ["cohomology", "catalog:meson-2", "--which", "3445", "--representatives"],
    ["cohomology", "catalog:leibniz-2", "--which", "p=2"],
    ["deform", "check", "{d}/meson-2-order3.def"],
    ["deform", "infinitesimal", "{d}/meson-2-order3.def"],
    ["deform", "obstruct", "{d}/heisenberg-obstructed.def"],
    ["deform", "extend", "{d}/meson-2-order2.def"],
    ["deform", "extend", "{d}/heisenberg-obstructed.def"],
    ["deform", "integrate", "catalog:so3-lie", "--seed", "3", "--order", "3"],
    ["deform", "integrate", "catalog:example-3dim", "--seed", "5", "--order", "2"],
    ["deform", "equivalent", "{d}/meson-2-order3.def", "{d}/meson-2-order3.def"],
    ["deform", "normalize", "{d}/so3-lie-trivial.def"],
    ["deform", "extend-alg", "{d}/meson-2-order3.def"],
    ["free", "dims", "--gens", "2", "--max-weight", "4", "--basis"],
    ["free", "basis", "--gens", "2", "--weight", "3"],
    ["catalog"],
]


def _run_cli(args, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    cmd = [sys.executable, "-m", "lyd"] + [a.format(d=DATA) for a in args] + ["--json"]
    res = subprocess.run(cmd, capture_output=True, env=env)
    return res.returncode, res.stdout


def test_criterion_11_determinism(verdict):
    differing = []
    for args in CLI_COMMANDS:
        code1, out1 = _run_cli(args, 1)
        code2, out2 = _run_cli(args, 12345)
        if code1 not in (0, 1) or code1 != code2 or out1 != out2 or not out1:
            differing.append(" ".join(args))
    ok = not differing
    verdict(11, ok, f"{len(CLI_COMMANDS)} commands byte-identical across runs")
    assert not differing, differing
