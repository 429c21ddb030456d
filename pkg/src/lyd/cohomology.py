"""Coboundary matrices in canonical coordinates and the cohomology groups.

Target layout of the combined map (delta*, delta) on C^(2,3), used throughout
deformation theory, is four consecutive blocks::

    C^3 (first pair alternating) | C^4* (first pair only) | C^4 | C^5

C^4* holds the second delta* component, which is alternating in its first
two arguments but not in the last two.  Matrices are kept as lists of
sparse columns (dict row -> value).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import LieYamagutiAlgebra
from .cochains import (
    Cochain,
    CochainPair,
    CoordSystem,
    coords,
    delta_one_tensors,
    delta_star_tensors,
    delta_tensors,
    expand,
    restrict,
)
from .linalg import (
    NoSolution,
    Subspace,
    demote,
    solve_sparse,
    sparse_kernel,
    transpose_sparse,
)
from .representation import Representation, adjoint

BUDGET = 2 * 10 ** 7  # dense output entries we are willing to materialize
CHUNK = 4 * 10 ** 5


class TooLarge(ValueError):
    def __init__(self, estimate: int, budget: int = BUDGET):
        super().__init__(f"estimated {estimate} dense entries exceeds budget {budget}")
        self.estimate = estimate
        self.budget = budget


# ---------------------------------------------------------------------------
# layouts


def pair_systems(n: int, m: int, level: int) -> list:
    return [coords(n, m, 2 * level, level), coords(n, m, 2 * level + 1, level)]


def star_systems(n: int, m: int) -> list:
    """Blocks of the (delta*, delta) target space."""
    return [coords(n, m, 3, 1), coords(n, m, 4, 1), coords(n, m, 4, 2), coords(n, m, 5, 2)]


def layout_dim(systems) -> int:
    return sum(cs.dim for cs in systems)


def pack(tensors, systems) -> tuple:
    """Concatenate canonical coordinates of (unbatched) tensors."""
    out = []
    for t, cs in zip(tensors, systems):
        out.extend(demote(x) for x in restrict(t, cs).tolist())
    return tuple(out)


def unpack(vec, systems) -> list:
    """Dense tensors from a concatenated coordinate vector."""
    out, pos = [], 0
    for cs in systems:
        part = np.array(list(vec[pos:pos + cs.dim]), dtype=object)
        out.append(expand(part, cs))
        pos += cs.dim
    return out


def pair_from_vector(vec, n: int, m: int, level: int = 1) -> CochainPair:
    f, g = unpack(vec, pair_systems(n, m, level))
    return CochainPair(Cochain(f, level), Cochain(g, level))


# ---------------------------------------------------------------------------
# column assembly


def _columns(apply, in_cs: CoordSystem, out_systems) -> list:
    """Sparse columns of a linear map on one input block.

    ``apply`` maps a batch of dense input tensors to a list of batched output
    tensors (None for a zero block), one per output coordinate system.
    """
    offsets = np.cumsum([0] + [cs.dim for cs in out_systems]).tolist()
    per_col = sum(cs.n ** cs.arity * cs.m for cs in out_systems) or 1
    step = max(1, CHUNK // per_col)
    cols = []
    for start in range(0, in_cs.dim, step):
        stop = min(in_cs.dim, start + step)
        unit = np.zeros((stop - start, in_cs.dim), dtype=object)
        unit[np.arange(stop - start), np.arange(start, stop)] = 1
        outs = apply(expand(unit, in_cs))
        block = [dict() for _ in range(stop - start)]
        for t, cs, off in zip(outs, out_systems, offsets):
            if t is None or np.ndim(t) == 0:
                continue
            vals = restrict(t, cs)
            for b, i in zip(*np.nonzero(vals != 0)):
                block[b][off + int(i)] = demote(vals[b, i])
        cols.extend(block)
    return cols


def _estimate(in_dim: int, out_systems) -> int:
    return in_dim * sum(cs.n ** cs.arity * cs.m for cs in out_systems)


def _guard(estimate: int, budget: int | None):
    budget = BUDGET if budget is None else budget
    if estimate > budget:
        raise TooLarge(estimate, budget)


def _rep_key(r: Representation):
    return (r.n, r.m, tuple(r.algebra.binary.flat), tuple(r.algebra.ternary.flat),
            tuple(r.rho.flat), tuple(r.D.flat), tuple(r.theta.flat))


_CACHE: dict = {}


def _cached(kind, r, build):
    key = (kind, _rep_key(r))
    if key not in _CACHE:
        if len(_CACHE) > 256:
            _CACHE.clear()
        _CACHE[key] = build()
    return _CACHE[key]


def one_columns(r: Representation) -> list:
    """delta: C^1 -> C^(2,3); column index i*m + r is the map e_i -> v_r."""
    def build():
        src = coords(r.n, r.m, 1, 0)
        return _columns(lambda F: list(delta_one_tensors(r, F)), src, pair_systems(r.n, r.m, 1))
    return _cached("one", r, build)


def pair_columns(r: Representation, level: int, budget: int | None = None) -> list:
    """delta: C^(2p,2p+1) -> C^(2p+2,2p+3) at level p."""
    def build():
        src = pair_systems(r.n, r.m, level)
        dst = pair_systems(r.n, r.m, level + 1)
        _guard(_estimate(src[0].dim + src[1].dim, dst), budget)
        cols = _columns(lambda F: list(delta_tensors(r, F, None, level)), src[0], dst)
        cols += _columns(lambda G: list(delta_tensors(r, None, G, level)), src[1], dst)
        return cols
    return _cached(("pair", level), r, build)


def star_columns(r: Representation) -> list:
    """(delta*, delta): C^(2,3) -> C^3 x C^4* x C^4 x C^5."""
    def build():
        src = pair_systems(r.n, r.m, 1)
        dst = star_systems(r.n, r.m)

        def on_f(F):
            sI, sII = delta_star_tensors(r, F, None)
            dI, dII = delta_tensors(r, F, None, 1)
            return [sI, sII, dI, dII]

        def on_g(G):
            sI, sII = delta_star_tensors(r, None, G)
            dI, dII = delta_tensors(r, None, G, 1)
            return [sI, sII, dI, dII]

        return _columns(on_f, src[0], dst) + _columns(on_g, src[1], dst)
    return _cached("star", r, build)


def kernel_of(columns: list, ncols: int, nrows: int) -> Subspace:
    rows = transpose_sparse(columns)
    return Subspace.span_sparse(sparse_kernel(rows.values(), ncols), ncols)


def image_of(columns: list, nrows: int) -> Subspace:
    return Subspace.span_sparse(columns, nrows)


def apply_columns(columns: list, vec, nrows: int) -> tuple:
    out = [0] * nrows
    for c, x in zip(columns, vec):
        if x:
            for i, y in c.items():
                out[i] += x * y
    return tuple(demote(v) for v in out)


def solve_columns(columns: list, rhs, ncols: int) -> tuple:
    """Solution of A x = rhs with free variables zero; raises NoSolution."""
    rows = transpose_sparse(columns)
    order = sorted(set(rows) | {i for i, x in enumerate(rhs) if x})
    return solve_sparse([rows.get(i, {}) for i in order], [rhs[i] for i in order], ncols)


# ---------------------------------------------------------------------------
# results


@dataclass
class CohomologyResult:
    z_dim: int
    b_dim: int
    h_dim: int
    z_basis: Subspace
    b_basis: Subspace
    representatives: list  # coordinate vectors in the ambient layout
    systems: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def class_coordinates(self, vec) -> tuple:
        """Coordinates of the class of ``vec`` on the representatives.

        Raises ValueError if ``vec`` is not in the cocycle space.
        """
        if not self.z_basis.__contains__(vec):
            raise ValueError("vector is not a cocycle")
        columns = [dict((i, x) for i, x in enumerate(v) if x) for v in self.representatives]
        columns += [dict((i, x) for i, x in enumerate(v) if x) for v in self.b_basis.basis]
        try:
            sol = solve_columns(columns, tuple(vec), len(columns))
        except NoSolution:  # pragma: no cover - representatives span Z/B
            raise AssertionError("representatives do not span the quotient") from None
        return sol[:self.h_dim]

    def is_trivial_class(self, vec) -> bool:
        return vec in self.b_basis


def _result(z: Subspace, b: Subspace, systems, extra=None) -> CohomologyResult:
    if not b.is_subspace_of(z):
        raise AssertionError("coboundaries are not contained in cocycles")
    reps = b.complement_in(z)
    return CohomologyResult(z.dim, b.dim, z.dim - b.dim, z, b, reps, list(systems), extra or {})


def _rep(L) -> Representation:
    return L if isinstance(L, Representation) else adjoint(L)


def z23(L) -> Subspace:
    r = _rep(L)
    src = pair_systems(r.n, r.m, 1)
    return kernel_of(star_columns(r), layout_dim(src), layout_dim(star_systems(r.n, r.m)))


def b23(L) -> Subspace:
    r = _rep(L)
    return image_of(one_columns(r), layout_dim(pair_systems(r.n, r.m, 1)))


def product_z23_dim(L) -> int:
    """dim Z^2 + dim Z^3 with each component tested on its own."""
    r = _rep(L)
    src = pair_systems(r.n, r.m, 1)
    dst = star_systems(r.n, r.m)
    nf = src[0].dim
    cols = star_columns(r)
    b0 = dst[0].dim
    b1 = b0 + dst[1].dim
    b2 = b1 + dst[2].dim
    # f sees the delta*_I and delta_I rows; g sees delta*_II and delta_II
    f_cols = [{i: x for i, x in c.items() if i < b0 or b1 <= i < b2} for c in cols[:nf]]
    g_cols = [{i: x for i, x in c.items() if b0 <= i < b1 or i >= b2} for c in cols[nf:]]
    total = layout_dim(dst)
    return (kernel_of(f_cols, nf, total).dim
            + kernel_of(g_cols, src[1].dim, total).dim)


def h23(L) -> CohomologyResult:
    r = _rep(L)
    z, b = z23(r), b23(r)
    return _result(z, b, pair_systems(r.n, r.m, 1),
                   {"product_z_dim": product_z23_dim(r)})


def z45(r: Representation, budget: int | None = None) -> Subspace:
    cols = pair_columns(r, 2, budget)
    return kernel_of(cols, layout_dim(pair_systems(r.n, r.m, 2)), layout_dim(pair_systems(r.n, r.m, 3)))


def image_star(L) -> Subspace:
    """Img(delta*, delta) inside the C^3 x C^4* x C^4 x C^5 layout."""
    r = _rep(L)
    return image_of(star_columns(r), layout_dim(star_systems(r.n, r.m)))


def h_deformation_3445(L, budget: int | None = None) -> CohomologyResult:
    r = _rep(L)
    systems = star_systems(r.n, r.m)
    head = systems[0].dim + systems[1].dim
    z = z45(r, budget)
    total = layout_dim(systems)
    ker = [{i: 1} for i in range(head)]
    ker += [{head + i: x for i, x in enumerate(v) if x} for v in z.basis]
    kernel = Subspace.span_sparse(ker, total)
    return _result(kernel, image_star(r), systems, {"z45_dim": z.dim})


def h_general(L, p: int, budget: int | None = None) -> CohomologyResult:
    """Z = ker delta at level p, B = delta(level p-1), for p >= 2."""
    if p < 2:
        raise ValueError("h_general needs p >= 2; use h23 for p = 1")
    r = _rep(L)
    src = pair_systems(r.n, r.m, p)
    dst = pair_systems(r.n, r.m, p + 1)
    _guard(_estimate(layout_dim(src), dst), budget)
    z = kernel_of(pair_columns(r, p, budget), layout_dim(src), layout_dim(dst))
    b = image_of(pair_columns(r, p - 1, budget), layout_dim(src))
    return _result(z, b, src)


def star_apply(L, vec) -> tuple:
    """(delta*, delta) applied to a C^(2,3) coordinate vector."""
    r = _rep(L)
    return apply_columns(star_columns(r), vec, layout_dim(star_systems(r.n, r.m)))


def one_apply(L, vec) -> tuple:
    r = _rep(L)
    return apply_columns(one_columns(r), vec, layout_dim(pair_systems(r.n, r.m, 1)))


def derivations(L) -> Subspace:
    """ker of delta on C^1: linear maps with delta(f, f) = 0."""
    r = _rep(L)
    return kernel_of(one_columns(r), r.n * r.m, layout_dim(pair_systems(r.n, r.m, 1)))


def is_rigid_sufficient(L: LieYamagutiAlgebra) -> bool:
    """True when H^(2,3)(L;L) vanishes, which is sufficient (not necessary)
    for rigidity."""
    return h23(L).h_dim == 0

