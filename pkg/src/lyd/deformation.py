"""Truncated formal one-parameter deformations.

A deformation of order N is a list of coefficient pairs (F_i, G_i), i <= N,
with (F_0, G_0) the brackets of the base algebra.  Everything here uses the
adjoint representation as coefficients.

Linear maps (formal isomorphism coefficients) use the OneCochain convention
``map[i, r]`` = r-th coordinate of psi(e_i); composing A after B is the
matrix product ``B @ A`` in this convention.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    LieYamagutiAlgebra,
    ShapeMismatch,
    check_axioms,
    collect_violations,
    cyclic3,
    normalize,
    zeros,
)
from .cochains import Cochain, CochainPair, OneCochain, delta_pair
from .cohomology import (
    TooLarge,
    h_deformation_3445,
    image_star,
    is_rigid_sufficient,
    one_columns,
    pack,
    pair_from_vector,
    solve_columns,
    star_columns,
    star_systems,
    derivations,
    z23,
)
from .linalg import NoSolution, demote
from .representation import adjoint

__all__ = [
    "TruncatedDeformation", "FormalIsomorphism", "ObstructionPair", "DeformationReport",
    "Obstructed", "NotEquivalent", "AllZero", "NotACocycle", "InvalidDeformation",
    "DifferentBaseAlgebra", "UnsupportedLevels", "Normalized", "ExtensionResult",
    "check_deformation", "infinitesimal", "n_infinitesimal", "circle", "circle1", "circle2",
    "obstruction", "extend_one_order", "integrate", "transport", "compose", "inverse",
    "are_equivalent", "normalize_deformation", "is_rigid_sufficient", "extension_by_cocycle",
    "random_cocycle", "random_deformation", "random_isomorphism",
]


class Obstructed(Exception):
    """An order-n deformation does not extend to order n + 1."""

    def __init__(self, order: int, residual: tuple, class_coordinates: tuple | None):
        self.order = order
        self.residual = residual
        self.class_coordinates = class_coordinates
        super().__init__(f"obstructed at order {order}")


class NotEquivalent(Exception):
    def __init__(self, order: int):
        self.order = order
        super().__init__(f"no intertwining isomorphism found at order {order}")


class AllZero(Exception):
    pass


class NotACocycle(ValueError):
    pass


class InvalidDeformation(ValueError):
    pass


class DifferentBaseAlgebra(ValueError):
    pass


class UnsupportedLevels(ValueError):
    pass


# ---------------------------------------------------------------------------
# data


@dataclass(frozen=True, eq=False)
class TruncatedDeformation:
    algebra: LieYamagutiAlgebra
    terms: tuple  # ((F_0, G_0), ..., (F_N, G_N)) as Cochains of arity 2 and 3

    def __post_init__(self):
        n = self.algebra.dim
        if not self.terms:
            raise ShapeMismatch("a deformation needs at least the base term")
        for F, G in self.terms:
            if F.tensor.shape != (n,) * 3 or G.tensor.shape != (n,) * 4:
                raise ShapeMismatch("deformation terms must be L-valued 2- and 3-cochains")
        F0, G0 = self.terms[0]
        if not (np.array_equal(F0.tensor, self.algebra.binary)
                and np.array_equal(G0.tensor, self.algebra.ternary)):
            raise ShapeMismatch("term 0 must equal the algebra's brackets")

    @property
    def order(self) -> int:
        return len(self.terms) - 1

    @property
    def n(self) -> int:
        return self.algebra.dim

    @classmethod
    def from_terms(cls, L: LieYamagutiAlgebra, higher) -> TruncatedDeformation:
        """Build from (F_1, G_1), ..., given as CochainPairs or (F, G) tuples."""
        base = (Cochain(L.binary.copy(), 1), Cochain(L.ternary.copy(), 1))
        terms = [base]
        for t in higher:
            F, G = (t.f, t.g) if isinstance(t, CochainPair) else t
            terms.append((F, G))
        return cls(L, tuple(terms))

    @classmethod
    def identity(cls, L: LieYamagutiAlgebra, order: int) -> TruncatedDeformation:
        n = L.dim
        return cls.from_terms(L, [(Cochain.zero(n, n, 2), Cochain.zero(n, n, 3))] * order)

    def term(self, i: int) -> CochainPair:
        F, G = self.terms[i]
        return CochainPair(F, G)

    def truncate(self, order: int) -> TruncatedDeformation:
        return TruncatedDeformation(self.algebra, self.terms[:order + 1])

    def with_term(self, pair: CochainPair) -> TruncatedDeformation:
        return TruncatedDeformation(self.algebra, self.terms + ((pair.f, pair.g),))

    def __eq__(self, other):
        if not isinstance(other, TruncatedDeformation):
            return NotImplemented
        return (self.algebra == other.algebra and self.order == other.order
                and all(a[0] == b[0] and a[1] == b[1] for a, b in zip(self.terms, other.terms)))


@dataclass(frozen=True, eq=False)
class FormalIsomorphism:
    """Phi_t = id + sum psi_i t^i, truncated at ``order``."""

    psi: tuple  # OneCochains psi_1 ... psi_N

    @property
    def order(self) -> int:
        return len(self.psi)

    @classmethod
    def identity(cls, n: int, order: int) -> FormalIsomorphism:
        return cls(tuple(OneCochain.zero(n, n) for _ in range(order)))

    def series(self) -> list:
        """[psi_0 = identity, psi_1, ..., psi_N] as map matrices."""
        n = self.psi[0].n if self.psi else 0
        return [OneCochain.identity(n).map] + [p.map for p in self.psi]

    def __eq__(self, other):
        if not isinstance(other, FormalIsomorphism):
            return NotImplemented
        return self.order == other.order and all(a == b for a, b in zip(self.psi, other.psi))


# ---------------------------------------------------------------------------
# quadratic convolution pieces


def convolution(Fi, Gi, Fj, Gj):
    """The four bilinear expressions built from (F_i, G_i) outside and
    (F_j, G_j) inside, as dense tensors (P, Q, R, S shapes)."""
    e = np.einsum
    P = cyclic3(e("abk,kcl->abcl", Fj, Fi))
    Q = cyclic3(e("abk,kcdl->abcdl", Fj, Gi))
    R = (e("cdk,abkl->abcdl", Fj, Gi)
         - e("abck,kdl->abcdl", Gj, Fi)
         - e("abdk,ckl->abcdl", Gj, Fi))
    S = (e("cdek,abkl->abcdel", Gj, Gi)
         - e("abck,kdel->abcdel", Gj, Gi)
         - e("abdk,ckel->abcdel", Gj, Gi)
         - e("abek,cdkl->abcdel", Gj, Gi))
    return P, Q, R, S


def _tensors(d: TruncatedDeformation, i: int):
    F, G = d.terms[i]
    return F.tensor, G.tensor


def convolution_sum(d: TruncatedDeformation, total: int, inner_only: bool) -> list:
    """Sum of convolution(i, j) over i + j = total (i, j >= 1 if inner_only)."""
    n = d.n
    acc = [zeros(n, n, n, n), zeros(n, n, n, n, n), zeros(n, n, n, n, n), zeros(n, n, n, n, n, n)]
    lo = 1 if inner_only else 0
    for i in range(lo, total - lo + 1):
        j = total - i
        if i > d.order or j > d.order:
            continue
        parts = convolution(*_tensors(d, i), *_tensors(d, j))
        acc = [a + p for a, p in zip(acc, parts)]
    return [normalize(a) for a in acc]


def equation_residuals(d: TruncatedDeformation, nu: int) -> dict:
    """Residual tensors of the six deformation equations at t^nu."""
    F, G = _tensors(d, nu)
    P, Q, R, S = convolution_sum(d, nu, inner_only=False)
    return {
        "de1": F + F.transpose(1, 0, 2),
        "de2": G + G.transpose(1, 0, 2, 3),
        "de3": normalize(P + cyclic3(G)),
        "de4": Q,
        "de5": R,
        "de6": S,
    }


@dataclass
class DeformationReport:
    order: int
    failures: list  # (nu, equation id, argument tuple, residual vector)

    @property
    def passes(self) -> bool:
        return not self.failures

    def valid_through(self) -> int:
        """Largest nu such that all orders up to nu pass (-1 if order 0 fails)."""
        bad = {f[0] for f in self.failures}
        nu = -1
        while nu + 1 <= self.order and nu + 1 not in bad:
            nu += 1
        return nu


def check_deformation(d: TruncatedDeformation, orders=None) -> DeformationReport:
    failures = []
    for nu in (range(d.order + 1) if orders is None else orders):
        for eq, res in equation_residuals(d, nu).items():
            for idx, vec in collect_violations(res):
                failures.append((nu, eq, idx, vec))
    return DeformationReport(d.order, failures)


def infinitesimal(d: TruncatedDeformation) -> CochainPair:
    if d.order < 1:
        raise InvalidDeformation("order-0 deformation has no infinitesimal")
    return d.term(1)


def n_infinitesimal(d: TruncatedDeformation) -> tuple:
    """(n, (F_n, G_n)) for the least n >= 1 with a nonzero term."""
    for i in range(1, d.order + 1):
        c = d.term(i)
        if not c.is_zero():
            return i, c
    raise AllZero("every higher term vanishes")


# ---------------------------------------------------------------------------
# circle products, written as tables of insertion terms
#
# A term (sign, outer, outer_args, inner, inner_args) is
#   sign * outer(..., inner(a[inner_args]), ...)
# where None in outer_args marks the insertion slot.

_CIRCLE = {
    (1, 1): (
        [(1, "g1", (0, 1, None), "f2", (2, 3)),
         (-1, "f1", (None, 3), "g2", (0, 1, 2)),
         (-1, "f1", (2, None), "g2", (0, 1, 3))],
        [(1, "g1", (0, 1, None), "g2", (2, 3, 4)),
         (-1, "g1", (None, 3, 4), "g2", (0, 1, 2)),
         (-1, "g1", (2, None, 4), "g2", (0, 1, 3)),
         (-1, "g1", (2, 3, None), "g2", (0, 1, 4))],
    ),
    (1, 2): (
        [(-1, "f1", (None, 5), "g2", (0, 1, 2, 3, 4)),
         (-1, "f1", (4, None), "g2", (0, 1, 2, 3, 5)),
         (1, "g1", (2, 3, None), "f2", (0, 1, 4, 5)),
         (-1, "g1", (0, 1, None), "f2", (2, 3, 4, 5))],
        [(-1, "g1", (None, 5, 6), "g2", (0, 1, 2, 3, 4)),
         (-1, "g1", (4, None, 6), "g2", (0, 1, 2, 3, 5)),
         (-1, "g1", (4, 5, None), "g2", (0, 1, 2, 3, 6)),
         (1, "g1", (2, 3, None), "g2", (0, 1, 4, 5, 6)),
         (-1, "g1", (0, 1, None), "g2", (2, 3, 4, 5, 6))],
    ),
    (2, 1): (
        [(1, "f1", (None, 3, 4, 5), "g2", (0, 1, 2)),
         (1, "f1", (2, None, 4, 5), "g2", (0, 1, 3)),
         (1, "f1", (2, 3, None, 5), "g2", (0, 1, 4)),
         (1, "f1", (2, 3, 4, None), "g2", (0, 1, 5)),
         (-1, "f1", (0, 1, None, 5), "g2", (2, 3, 4)),
         (-1, "f1", (0, 1, 4, None), "g2", (2, 3, 5)),
         (1, "g1", (0, 1, 2, 3, None), "f2", (4, 5))],
        [(1, "g1", (None, 3, 4, 5, 6), "g2", (0, 1, 2)),
         (1, "g1", (2, None, 4, 5, 6), "g2", (0, 1, 3)),
         (1, "g1", (2, 3, None, 5, 6), "g2", (0, 1, 4)),
         (1, "g1", (2, 3, 4, None, 6), "g2", (0, 1, 5)),
         (1, "g1", (2, 3, 4, 5, None), "g2", (0, 1, 6)),
         (-1, "g1", (0, 1, None, 5, 6), "g2", (2, 3, 4)),
         (-1, "g1", (0, 1, 4, None, 6), "g2", (2, 3, 5)),
         (-1, "g1", (0, 1, 4, 5, None), "g2", (2, 3, 6)),
         (1, "g1", (0, 1, 2, 3, None), "g2", (4, 5, 6))],
    ),
}

_LETTERS = "abcdefg"


def _eval_table(table, args: dict, arity: int) -> np.ndarray:
    out_idx = _LETTERS[:arity]
    acc = 0
    for sign, outer, oargs, inner, iargs in table:
        o = "".join("k" if a is None else _LETTERS[a] for a in oargs)
        i = "".join(_LETTERS[a] for a in iargs)
        acc = acc + sign * np.einsum(f"{i}k,{o}l->{out_idx}l", args[inner], args[outer])
    return normalize(acc)


def circle(c1: CochainPair, c2: CochainPair) -> CochainPair:
    key = (c1.level, c2.level)
    if key not in _CIRCLE:
        raise UnsupportedLevels(f"circle product not defined for levels {key}")
    args = {"f1": c1.f.tensor, "g1": c1.g.tensor, "f2": c2.f.tensor, "g2": c2.g.tensor}
    k = c1.level + c2.level
    t1, t2 = _CIRCLE[key]
    return CochainPair(Cochain(_eval_table(t1, args, 2 * k), k),
                       Cochain(_eval_table(t2, args, 2 * k + 1), k))


def circle1(c1: CochainPair, c2: CochainPair) -> Cochain:
    return circle(c1, c2).f


def circle2(c1: CochainPair, c2: CochainPair) -> Cochain:
    return circle(c1, c2).g


# ---------------------------------------------------------------------------
# obstructions and extension


@dataclass(frozen=True, eq=False)
class ObstructionPair:
    P: Cochain
    Q: Cochain
    R: Cochain
    S: Cochain

    @property
    def pq(self) -> tuple:
        return (self.P, self.Q)

    @property
    def rs(self) -> CochainPair:
        return CochainPair(self.R, self.S)

    def vector(self) -> tuple:
        n = self.P.n
        return pack([self.P.tensor, self.Q.tensor, self.R.tensor, self.S.tensor], star_systems(n, n))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in (self.P, self.Q, self.R, self.S))


def obstruction(d: TruncatedDeformation, verify: bool = True) -> ObstructionPair:
    """Quadratic terms that must be cancelled by the next coefficient.

    With ``verify`` the circle-product form of (R, S) is compared with the
    direct sums and (R, S) is checked to be a cocycle; a mismatch raises
    AssertionError.
    """
    total = d.order + 1
    P, Q, R, S = convolution_sum(d, total, inner_only=True)
    obs = ObstructionPair(Cochain(P, 1), Cochain(Q, 1), Cochain(R, 2), Cochain(S, 2))
    if verify:
        circ = circle_form(d)
        if not (np.array_equal(circ.f.tensor, R) and np.array_equal(circ.g.tensor, S)):
            raise AssertionError("circle-product form of the obstruction disagrees")
        if not delta_pair(adjoint(d.algebra, check=False), obs.rs).is_zero():
            raise AssertionError("obstruction (R, S) is not a cocycle")
    return obs


def circle_form(d: TruncatedDeformation) -> CochainPair:
    """sum over i + j = order + 1, i, j >= 1, of (F_i, G_i) o (F_j, G_j)."""
    n = d.n
    acc = CochainPair.zero(n, n, 2)
    total = d.order + 1
    for i in range(1, total):
        acc = acc + circle(d.term(i), d.term(total - i))
    return acc


def rewritten_residual(d: TruncatedDeformation, nu: int) -> tuple:
    """(delta*, delta)(F_nu, G_nu) plus the inner convolution sums at t^nu,
    in the star layout.  Equals the packed deformation-equation residual."""
    n = d.n
    P, Q, R, S = convolution_sum(d, nu, inner_only=True)
    inner = pack([P, Q, R, S], star_systems(n, n))
    lin = star_apply_pair(d.algebra, d.term(nu))
    return tuple(demote(a + b) for a, b in zip(inner, lin))


def star_apply_pair(L, c: CochainPair) -> tuple:
    from .cohomology import star_apply
    return star_apply(L, c.coordinates())


def equation_vector(d: TruncatedDeformation, nu: int) -> tuple:
    """Packed residual of the de3-de6 equations at t^nu."""
    res = equation_residuals(d, nu)
    n = d.n
    return pack([res["de3"], res["de4"], res["de5"], res["de6"]], star_systems(n, n))


def _class_of(L, residual) -> tuple | None:
    try:
        h = h_deformation_3445(L)
    except TooLarge:
        return None
    if residual not in h.z_basis:
        return None
    return h.class_coordinates(residual)


def _require_valid(d: TruncatedDeformation):
    rep = check_deformation(d)
    if not rep.passes:
        nu, eq, idx, _ = rep.failures[0]
        raise InvalidDeformation(f"deformation equation {eq} fails at order {nu} on {idx}")


def extend_one_order(d: TruncatedDeformation, witness: CochainPair | None = None,
                     validate: bool = True) -> TruncatedDeformation:
    """Add (F_{n+1}, G_{n+1}) solving (delta*, delta)(F, G) = -(obstruction).

    The default solution sets every free coordinate to zero.  Raises
    Obstructed if the obstruction is not in the image of (delta*, delta).
    """
    if validate:
        _require_valid(d)
    L = d.algebra
    r = adjoint(L, check=False)
    n = L.dim
    obs = obstruction(d)
    rhs = tuple(-x for x in obs.vector())
    cols = star_columns(r)
    if witness is not None:
        got = star_apply_pair(L, witness)
        if got != tuple(demote(x) for x in rhs):
            raise ValueError("witness does not solve the extension equations")
        nxt = witness
    else:
        try:
            sol = solve_columns(cols, rhs, len(cols))
        except NoSolution:
            img = image_star(r)
            residual = obs.vector()
            raise Obstructed(d.order, img.reduce(residual), _class_of(L, residual)) from None
        nxt = pair_from_vector(sol, n, n, 1)
    out = d.with_term(nxt)
    if validate and not check_deformation(out, [out.order]).passes:
        raise AssertionError("extension does not satisfy the deformation equations")
    return out


def integrate(L: LieYamagutiAlgebra, c: CochainPair, max_order: int) -> TruncatedDeformation:
    """Extend the infinitesimal ``c`` order by order up to ``max_order``."""
    vec = c.coordinates()
    if vec not in z23(L):
        raise NotACocycle("infinitesimal is not a (2,3)-cocycle")
    d = TruncatedDeformation.from_terms(L, [c])
    while d.order < max_order:
        d = extend_one_order(d, validate=False)
    return d.truncate(max_order) if max_order >= 1 else d.truncate(0)


# ---------------------------------------------------------------------------
# formal isomorphisms


def inverse_series(phi: FormalIsomorphism) -> list:
    psi = phi.series()
    chi = [psi[0]]
    for nu in range(1, len(psi)):
        acc = zeros(*psi[0].shape)
        for k in range(1, nu + 1):
            acc = acc - psi[k].dot(chi[nu - k])
        chi.append(normalize(acc))
    return chi


def inverse(phi: FormalIsomorphism) -> FormalIsomorphism:
    return FormalIsomorphism(tuple(OneCochain(c) for c in inverse_series(phi)[1:]))


def compose(phi1: FormalIsomorphism, phi2: FormalIsomorphism) -> FormalIsomorphism:
    """phi1 after phi2, so that transport(transport(d, phi1), phi2)
    equals transport(d, compose(phi1, phi2))."""
    N = min(phi1.order, phi2.order)
    a, b = phi1.series(), phi2.series()
    out = []
    for nu in range(1, N + 1):
        acc = zeros(*a[0].shape)
        for i in range(nu + 1):
            acc = acc + b[nu - i].dot(a[i])
        out.append(OneCochain(normalize(acc)))
    return FormalIsomorphism(tuple(out))


def transport(d: TruncatedDeformation, phi: FormalIsomorphism) -> TruncatedDeformation:
    """Coefficients of Phi^-1 F_t(Phi a, Phi b) and Phi^-1 G_t(Phi a, Phi b, Phi c)."""
    N = d.order
    if phi.order < N:
        raise ShapeMismatch("isomorphism order is lower than the deformation order")
    n = d.n
    if phi.psi and phi.psi[0].map.shape != (n, n):
        raise ShapeMismatch("isomorphism does not act on the algebra")
    psi = phi.series()[:N + 1]
    chi = inverse_series(phi)[:N + 1]
    e = np.einsum
    # inner[s] = F_t(Phi a, Phi b) coefficient of t^s
    innerF = [zeros(n, n, n) for _ in range(N + 1)]
    innerG = [zeros(n, n, n, n) for _ in range(N + 1)]
    for j in range(N + 1):
        Fj, Gj = _tensors(d, j)
        for k in range(N + 1 - j):
            for l in range(N + 1 - j - k):
                FkL = e("ax,by,xyr->abr", psi[k], psi[l], Fj)
                innerF[j + k + l] = innerF[j + k + l] + FkL
                for q in range(N + 1 - j - k - l):
                    innerG[j + k + l + q] = innerG[j + k + l + q] + e(
                        "ax,by,cz,xyzr->abcr", psi[k], psi[l], psi[q], Gj)
    terms = []
    for nu in range(N + 1):
        F = zeros(n, n, n)
        G = zeros(n, n, n, n)
        for i in range(nu + 1):
            F = F + e("abr,rs->abs", innerF[nu - i], chi[i])
            G = G + e("abcr,rs->abcs", innerG[nu - i], chi[i])
        terms.append((Cochain(normalize(F), 1), Cochain(normalize(G), 1)))
    return TruncatedDeformation(d.algebra, tuple(terms))


def _pair_vector(d: TruncatedDeformation, nu: int) -> tuple:
    return d.term(nu).coordinates()


def _order_residual(d1, d2, psi: list, nu: int) -> tuple:
    # target minus transport with psi_nu = 0, at order nu
    n = d1.n
    trial = list(psi[:nu - 1]) + [OneCochain.zero(n, n)]
    t = transport(d1.truncate(nu), FormalIsomorphism(tuple(trial)))
    a, b = _pair_vector(d2, nu), _pair_vector(t, nu)
    return tuple(demote(x - y) for x, y in zip(a, b))


def are_equivalent(d1: TruncatedDeformation, d2: TruncatedDeformation,
                   order: int | None = None) -> FormalIsomorphism:
    """Find Phi with transport(d1, Phi) = d2 through ``order``.

    Each order solves delta(psi_nu) = residual.  When that fails, psi_{nu-1}
    may be shifted by a derivation (which leaves the lower orders intact)
    before retrying; the shift enters linearly modulo coboundaries.
    """
    if d1.algebra != d2.algebra:
        raise DifferentBaseAlgebra("deformations live over different algebras")
    N = min(d1.order, d2.order) if order is None else order
    if N > min(d1.order, d2.order):
        raise ShapeMismatch("requested order exceeds a deformation's order")
    L = d1.algebra
    n = L.dim
    r = adjoint(L, check=False)
    cols = one_columns(r)
    ders = [OneCochain.from_coordinates(v, n, n) for v in derivations(r).basis]
    psi: list = []
    for nu in range(1, N + 1):
        E = _order_residual(d1, d2, psi, nu)
        try:
            x = solve_columns(cols, E, n * n)
        except NoSolution:
            if nu == 1 or not ders:
                raise NotEquivalent(nu) from None
            shifted = _lookback(d1, d2, psi, nu, E, cols, ders)
            if shifted is None:
                raise NotEquivalent(nu) from None
            psi = shifted
            E = _order_residual(d1, d2, psi, nu)
            try:
                x = solve_columns(cols, E, n * n)
            except NoSolution:
                raise NotEquivalent(nu) from None
        psi.append(OneCochain.from_coordinates(x, n, n))
    return FormalIsomorphism(tuple(psi))


def _lookback(d1, d2, psi, nu, E, cols, ders):
    n = d1.n
    extra = []
    for z in ders:
        trial = psi[:-1] + [psi[-1] + z]
        Ez = _order_residual(d1, d2, trial, nu)
        extra.append({i: demote(b - a) for i, (a, b) in enumerate(zip(E, Ez)) if a != b})
    # delta(x) - sum c_r * Delta_r = E
    system = list(cols) + [{i: -v for i, v in c.items()} for c in extra]
    try:
        sol = solve_columns(system, E, len(system))
    except NoSolution:
        return None
    coef = sol[len(cols):]
    shift = OneCochain.zero(n, n)
    for c, z in zip(coef, ders):
        if c:
            shift = shift + z.scale(c)
    return psi[:-1] + [psi[-1] + shift]


@dataclass
class Normalized:
    deformation: TruncatedDeformation
    isomorphism: FormalIsomorphism
    trivial: bool
    order: int | None  # order of the first non-coboundary term, None if trivial


def normalize_deformation(d: TruncatedDeformation) -> Normalized:
    """Transport away coboundary n-infinitesimals until one is not a coboundary."""
    L = d.algebra
    n = L.dim
    cols = one_columns(adjoint(L, check=False))
    N = d.order
    total = FormalIsomorphism.identity(n, N)
    cur = d
    while True:
        try:
            k, c = n_infinitesimal(cur)
        except AllZero:
            return Normalized(cur, total, True, None)
        rhs = tuple(-x for x in c.coordinates())
        try:
            lam = solve_columns(cols, rhs, n * n)
        except NoSolution:
            return Normalized(cur, total, False, k)
        step = [OneCochain.zero(n, n) for _ in range(N)]
        step[k - 1] = OneCochain.from_coordinates(lam, n, n)
        phi = FormalIsomorphism(tuple(step))
        cur = transport(cur, phi)
        total = compose(total, phi)


# ---------------------------------------------------------------------------
# split extension


@dataclass
class ExtensionResult:
    algebra: LieYamagutiAlgebra
    axioms_pass: bool
    failing: list = field(default_factory=list)


def extension_by_cocycle(L: LieYamagutiAlgebra, c: CochainPair) -> ExtensionResult:
    """Brackets on L + L twisted by the cocycle (f, g).

    Basis: the first n vectors are (e_i, 0), the last n are (0, e_i).
    """
    if c.coordinates() not in z23(L):
        raise NotACocycle("(f, g) is not a (2,3)-cocycle")
    n = L.dim
    b, t = L.binary, L.ternary
    f, g = c.f.tensor, c.g.tensor
    N = 2 * n
    B = zeros(N, N, N)
    T = zeros(N, N, N, N)
    u, w = slice(0, n), slice(n, N)
    B[u, w, u] = b
    B[w, u, u] = b
    B[w, w, u] = -f
    B[w, w, w] = b
    T[u, w, w, u] = t
    T[w, u, w, u] = t
    T[w, w, u, u] = t
    T[w, w, w, u] = -g
    T[w, w, w, w] = t
    names = tuple(f"u{i + 1}" for i in range(n)) + tuple(f"w{i + 1}" for i in range(n))
    E = LieYamagutiAlgebra(N, names, normalize(B), normalize(T), f"extension({L.name})")
    rep = check_axioms(E)
    return ExtensionResult(E, rep.all_pass, rep.failing())


# ---------------------------------------------------------------------------
# seeded random inputs


def random_cocycle(L: LieYamagutiAlgebra, rng: random.Random, terms: int = 3) -> CochainPair:
    """Small-integer combination of a few basis vectors of Z^(2,3)."""
    n = L.dim
    z = z23(L)
    vec = [0] * z.ambient_dim
    if z.dim:
        for idx in rng.sample(range(z.dim), min(terms, z.dim)):
            c = rng.choice((-2, -1, 1, 2))
            vec = [a + c * x for a, x in zip(vec, z.basis[idx])]
    return pair_from_vector(vec, n, n, 1)


def random_deformation(L: LieYamagutiAlgebra, rng: random.Random, order: int):
    """Integrate a random cocycle as far as possible up to ``order``.

    Returns the deformation (its order may be lower if an obstruction was
    met) and the order at which integration stopped, or None.
    """
    c = random_cocycle(L, rng)
    d = TruncatedDeformation.from_terms(L, [c])
    stopped = None
    while d.order < order:
        try:
            d = extend_one_order(d, validate=False)
        except Obstructed as ob:
            stopped = ob.order
            break
    return d, stopped


def random_isomorphism(n: int, order: int, rng: random.Random, density: float = 0.3) -> FormalIsomorphism:
    psi = []
    for _ in range(order):
        m = zeros(n, n)
        for i in range(n):
            for j in range(n):
                if rng.random() < density:
                    m[i, j] = rng.choice((-1, 1, 2))
        psi.append(OneCochain(m))
    return FormalIsomorphism(tuple(psi))


def reparametrize(d: TruncatedDeformation, k: int, order: int | None = None) -> TruncatedDeformation:
    """Substitute t -> t^k.

    The result keeps ``d.order`` unless ``order`` is given; it is exact up
    to order k * (d.order + 1) - 1.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    N = d.order if order is None else order
    if N > k * (d.order + 1) - 1:
        raise ShapeMismatch(f"t -> t^{k} of an order-{d.order} deformation is known only through order "
                            f"{k * (d.order + 1) - 1}")
    n = d.n
    zero = (Cochain.zero(n, n, 2), Cochain.zero(n, n, 3))
    terms = [d.terms[0]]
    for nu in range(1, N + 1):
        terms.append(d.terms[nu // k] if nu % k == 0 else zero)
    return TruncatedDeformation(d.algebra, tuple(terms))
