"""Lie-Yamaguti algebras given by structure constants.

An algebra of dimension n carries a binary tensor ``b`` with
``[e_i, e_j] = sum_k b[i,j,k] e_k`` and a ternary tensor ``t`` with
``{e_i, e_j, e_k} = sum_l t[i,j,k,l] e_l``.  Tensors are numpy object arrays
holding exact ints and Fractions.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .linalg import Matrix, NoSolution, Subspace, demote, scalar, solve


class ShapeMismatch(ValueError):
    pass


class NotALieAlgebra(ValueError):
    pass


class NotALeibnizAlgebra(ValueError):
    pass


class NotReductive(ValueError):
    pass


class InvalidAlgebra(ValueError):
    pass


AXIOMS = ("LY1", "LY2", "LY3", "LY4", "LY5", "LY6")


def zeros(*shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(0)
    return out


def exact_array(data, shape=None) -> np.ndarray:
    """Object array of exact scalars from nested lists or another array."""
    arr = np.array(data, dtype=object)
    if shape is not None and arr.shape != tuple(shape):
        if arr.size == 0 and int(np.prod(shape)) == 0:
            return zeros(*shape)
        raise ShapeMismatch(f"expected shape {tuple(shape)}, got {arr.shape}")
    flat = arr.reshape(-1)
    for i, x in enumerate(flat):
        flat[i] = scalar(x)
    return flat.reshape(arr.shape)


def normalize(arr: np.ndarray) -> np.ndarray:
    """Demote integral Fractions so that equality and hashing are canonical."""
    flat = arr.reshape(-1)
    for i, x in enumerate(flat):
        if type(x) is Fraction and x.denominator == 1:
            flat[i] = x.numerator
    return arr


def is_zero(arr: np.ndarray) -> bool:
    return not any(x != 0 for x in arr.flat)


def cyclic3(arr: np.ndarray) -> np.ndarray:
    """Sum over cyclic permutations of the first three axes."""
    rest = tuple(range(3, arr.ndim))
    return arr + arr.transpose((1, 2, 0) + rest) + arr.transpose((2, 0, 1) + rest)


def nonzero_entries(arr: np.ndarray):
    """Yield (index tuple, value) over nonzero entries in lexicographic order."""
    for idx in zip(*np.nonzero(arr != 0)):
        idx = tuple(int(i) for i in idx)
        yield idx, arr[idx]


@dataclass(frozen=True, eq=False)
class LieYamagutiAlgebra:
    dim: int
    basis_names: tuple
    binary: np.ndarray
    ternary: np.ndarray
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = self.dim
        if len(self.basis_names) != n:
            raise ShapeMismatch("basis_names length differs from dim")
        if self.binary.shape != (n, n, n):
            raise ShapeMismatch(f"binary tensor has shape {self.binary.shape}, expected {(n, n, n)}")
        if self.ternary.shape != (n, n, n, n):
            raise ShapeMismatch(f"ternary tensor has shape {self.ternary.shape}")
        normalize(self.binary)
        normalize(self.ternary)

    @classmethod
    def build(cls, binary, ternary, names=None, name="") -> LieYamagutiAlgebra:
        b = exact_array(binary)
        n = b.shape[0] if b.ndim else 0
        t = exact_array(ternary) if np.size(ternary) else zeros(n, n, n, n)
        if b.ndim != 3:
            b = zeros(n, n, n)
        if names is None:
            names = default_names(n)
        return cls(n, tuple(names), b, t, name)

    def __eq__(self, other):
        if not isinstance(other, LieYamagutiAlgebra):
            return NotImplemented
        return (self.dim == other.dim and self.basis_names == other.basis_names
                and np.array_equal(self.binary, other.binary)
                and np.array_equal(self.ternary, other.ternary))

    def __hash__(self):
        return hash((self.dim, tuple(self.binary.flat), tuple(self.ternary.flat)))

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", _vec(x), _vec(y), self.binary)

    def triple(self, x, y, z) -> np.ndarray:
        return np.einsum("i,j,k,ijkl->l", _vec(x), _vec(y), _vec(z), self.ternary)

    def basis_vector(self, i: int) -> np.ndarray:
        v = zeros(self.dim)
        v[i] = 1
        return v


def _vec(x) -> np.ndarray:
    return x if isinstance(x, np.ndarray) else exact_array(x)


def default_names(n: int) -> tuple:
    return tuple(f"e{i + 1}" for i in range(n))


# ---------------------------------------------------------------------------
# axioms


@dataclass
class AxiomReport:
    violations: dict  # axiom id -> list of (index tuple, residual vector)

    @property
    def flags(self) -> dict:
        return {ax: not self.violations.get(ax) for ax in AXIOMS}

    @property
    def all_pass(self) -> bool:
        return all(self.flags.values())

    def failing(self) -> list:
        return [ax for ax, ok in self.flags.items() if not ok]


def collect_violations(residual: np.ndarray) -> list:
    """Group nonzero entries of a residual tensor by their argument tuple."""
    out = {}
    for idx, _ in nonzero_entries(residual):
        key = idx[:-1]
        if key not in out:
            out[key] = tuple(demote(x) for x in residual[key])
    return sorted(out.items())


def axiom_residuals(b: np.ndarray, t: np.ndarray) -> dict:
    """Residual tensors of the six identities, indexed by basis arguments."""
    ein = np.einsum
    ly3 = cyclic3(ein("xyk,kzl->xyzl", b, b) + t)
    ly4 = cyclic3(ein("xyk,kzul->xyzul", b, t))
    ly5 = (ein("uvk,xykl->xyuvl", b, t)
           - ein("xyuk,kvl->xyuvl", t, b)
           - ein("xyvk,ukl->xyuvl", t, b))
    ly6 = (ein("uvwk,xykl->xyuvwl", t, t)
           - ein("xyuk,kvwl->xyuvwl", t, t)
           - ein("xyvk,ukwl->xyuvwl", t, t)
           - ein("xywk,uvkl->xyuvwl", t, t))
    return {
        "LY1": b + b.transpose(1, 0, 2),
        "LY2": t + t.transpose(1, 0, 2, 3),
        "LY3": ly3,
        "LY4": ly4,
        "LY5": ly5,
        "LY6": ly6,
    }


def check_axioms(L: LieYamagutiAlgebra) -> AxiomReport:
    n = L.dim
    if L.binary.shape != (n, n, n) or L.ternary.shape != (n, n, n, n):
        raise ShapeMismatch("structure tensors do not match the dimension")
    res = axiom_residuals(L.binary, L.ternary)
    return AxiomReport({ax: collect_violations(r) for ax, r in res.items()})


# ---------------------------------------------------------------------------
# constructions


def abelian(n: int) -> LieYamagutiAlgebra:
    return LieYamagutiAlgebra(n, default_names(n), zeros(n, n, n), zeros(n, n, n, n), f"abelian-{n}")


def example_3dim() -> LieYamagutiAlgebra:
    """[e1,e2] = e3 and {e1,e2,e1} = e3, other products zero up to antisymmetry."""
    b = zeros(3, 3, 3)
    t = zeros(3, 3, 3, 3)
    b[0, 1, 2], b[1, 0, 2] = 1, -1
    t[0, 1, 0, 2], t[1, 0, 0, 2] = 1, -1
    return LieYamagutiAlgebra(3, default_names(3), b, t, "example-3dim")


def meson_field(n: int) -> LieYamagutiAlgebra:
    """Lie triple system with {G_i,G_j,G_k} = delta_ki G_j - delta_kj G_i."""
    if n < 1:
        raise ValueError("meson_field needs n >= 1")
    t = zeros(n, n, n, n)
    for i, j in itertools.product(range(n), repeat=2):
        t[i, j, i, j] += 1
        t[i, j, j, i] -= 1
    names = tuple(f"G{i + 1}" for i in range(n))
    return LieYamagutiAlgebra(n, names, zeros(n, n, n), t, f"meson-{n}")


def lie_jacobi_residual(br: np.ndarray) -> np.ndarray:
    return cyclic3(np.einsum("xyk,kzl->xyzl", br, br))


def from_lie_algebra(bracket, names=None, name="") -> LieYamagutiAlgebra:
    """Binary bracket kept; ternary bracket {a,b,c} = [[a,b],c]."""
    br = exact_array(bracket)
    n = br.shape[0]
    if br.shape != (n, n, n):
        raise ShapeMismatch("bracket must be n x n x n")
    anti = collect_violations(br + br.transpose(1, 0, 2))
    if anti:
        raise NotALieAlgebra(f"antisymmetry fails at {anti[0][0]}")
    jac = collect_violations(lie_jacobi_residual(br))
    if jac:
        raise NotALieAlgebra(f"Jacobi identity fails at {jac[0][0]}")
    t = np.einsum("abk,kcl->abcl", br, br)
    return LieYamagutiAlgebra(n, tuple(names or default_names(n)), br, t, name)


def leibniz_residual(p: np.ndarray) -> np.ndarray:
    # x(yz) - (xy)z - y(xz)
    e = np.einsum
    return e("yzk,xkl->xyzl", p, p) - e("xyk,kzl->xyzl", p, p) - e("xzk,ykl->xyzl", p, p)


def from_leibniz(product, names=None, name="") -> LieYamagutiAlgebra:
    """[a,b] = ab - ba and {a,b,c} = -(ab)c for a left Leibniz product."""
    p = exact_array(product)
    n = p.shape[0]
    if p.shape != (n, n, n):
        raise ShapeMismatch("product must be n x n x n")
    bad = collect_violations(leibniz_residual(p))
    if bad:
        raise NotALeibnizAlgebra(f"Leibniz identity fails at {bad[0][0]}")
    b = p - p.transpose(1, 0, 2)
    t = -np.einsum("abk,kcl->abcl", p, p)
    return LieYamagutiAlgebra(n, tuple(names or default_names(n)), b, t, name)


def from_reductive_pair(g, h_basis, m_basis, names=None, name="") -> LieYamagutiAlgebra:
    """Products on m induced by a reductive decomposition g = h + m.

    ``[a,b]`` is the m-component of the Lie bracket and ``{a,b,c}`` is the
    bracket of the h-component of ``<a,b>`` with ``c``.
    """
    br = exact_array(g)
    N = br.shape[0]
    jac = collect_violations(lie_jacobi_residual(br))
    anti = collect_violations(br + br.transpose(1, 0, 2))
    if anti or jac:
        raise NotALieAlgebra("input bracket is not a Lie algebra")
    H = [tuple(scalar(x) for x in v) for v in h_basis]
    M = [tuple(scalar(x) for x in v) for v in m_basis]
    if Subspace.span(H + M, N).dim != N or len(H) + len(M) != N:
        raise NotReductive("h and m do not form a direct sum decomposition of g")
    change = Matrix.from_columns(H + M, N)

    def split(v):
        c = solve(change, tuple(v))
        return c[:len(H)], c[len(H):]

    def lie(x, y):
        return np.einsum("i,j,ijk->k", exact_array(x), exact_array(y), br)

    for (i, x), (j, y) in itertools.product(enumerate(H), enumerate(H)):
        if any(split(lie(x, y))[1]):
            raise NotReductive(f"<h{i + 1},h{j + 1}> leaves h")
    for (i, x), (j, y) in itertools.product(enumerate(H), enumerate(M)):
        if any(split(lie(x, y))[0]):
            raise NotReductive(f"<h{i + 1},m{j + 1}> leaves m")
    n = len(M)
    b = zeros(n, n, n)
    t = zeros(n, n, n, n)
    for i, j in itertools.product(range(n), repeat=2):
        hc, mc = split(lie(M[i], M[j]))
        b[i, j, :] = list(mc)
        hpart = sum((c * exact_array(v) for c, v in zip(hc, H)), zeros(N))
        for k in range(n):
            t[i, j, k, :] = list(split(lie(hpart, M[k]))[1])
    return LieYamagutiAlgebra(n, tuple(names or default_names(n)), b, t, name)


def direct_sum(A: LieYamagutiAlgebra, B: LieYamagutiAlgebra) -> LieYamagutiAlgebra:
    n, m = A.dim, B.dim
    N = n + m
    b = zeros(N, N, N)
    t = zeros(N, N, N, N)
    b[:n, :n, :n] = A.binary
    b[n:, n:, n:] = B.binary
    t[:n, :n, :n, :n] = A.ternary
    t[n:, n:, n:, n:] = B.ternary
    names = A.basis_names + B.basis_names
    if len(set(names)) != N:
        names = default_names(N)
    return LieYamagutiAlgebra(N, names, b, t, f"{A.name}+{B.name}".strip("+"))


def change_basis(L: LieYamagutiAlgebra, P) -> LieYamagutiAlgebra:
    """Structure constants in the basis f_i = sum_k P[k][i] e_k."""
    P = exact_array(P, (L.dim, L.dim))
    inv = exact_array(invert(P))
    e = np.einsum
    b = e("ai,bj,abk,lk->ijl", P, P, L.binary, inv)
    t = e("ai,bj,ck,abcx,lx->ijkl", P, P, P, L.ternary, inv)
    return LieYamagutiAlgebra(L.dim, L.basis_names, normalize(b), normalize(t), L.name)


def invert(P: np.ndarray) -> list:
    n = P.shape[0]
    m = Matrix.from_rows(P.tolist())
    cols = []
    for j in range(n):
        e = [1 if i == j else 0 for i in range(n)]
        try:
            cols.append(solve(m, e))
        except NoSolution:
            raise ValueError("matrix is singular") from None
    return [[cols[j][i] for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# named Lie algebras and the catalog


def so3_bracket() -> np.ndarray:
    br = zeros(3, 3, 3)
    for i, j, k in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
        br[i, j, k] = 1
        br[j, i, k] = -1
    return br


def heisenberg_bracket() -> np.ndarray:
    br = zeros(3, 3, 3)
    br[0, 1, 2], br[1, 0, 2] = 1, -1
    return br


def heisenberg_lya() -> LieYamagutiAlgebra:
    return from_lie_algebra(heisenberg_bracket(), name="heisenberg")


def reductive_so3() -> LieYamagutiAlgebra:
    """so(3) with h spanned by J_z and m spanned by J_x, J_y."""
    return from_reductive_pair(so3_bracket(), [(0, 0, 1)], [(1, 0, 0), (0, 1, 0)],
                               names=("Jx", "Jy"), name="reductive-so3")


def so3_lie() -> LieYamagutiAlgebra:
    return from_lie_algebra(so3_bracket(), names=("Jx", "Jy", "Jz"), name="so3-lie")


def leibniz_example() -> LieYamagutiAlgebra:
    """From the 2-dim Leibniz product x.x = 0, x.y = 0, y.x = x, y.y = x."""
    p = zeros(2, 2, 2)
    p[1, 0, 0] = 1
    p[1, 1, 0] = 1
    return from_leibniz(p, names=("x", "y"), name="leibniz-2")


def catalog() -> dict:
    """Named algebras used as fixtures and test inputs."""
    out = {}
    for n in range(1, 5):
        out[f"abelian-{n}"] = abelian(n)
    out["example-3dim"] = example_3dim()
    for n in range(1, 5):
        out[f"meson-{n}"] = meson_field(n)
    out["heisenberg"] = heisenberg_lya()
    out["reductive-so3"] = reductive_so3()
    out["so3-lie"] = so3_lie()
    out["leibniz-2"] = leibniz_example()
    for k, v in out.items():
        object.__setattr__(v, "name", k)
    return out


# ---------------------------------------------------------------------------
# random structures (seeded)


def random_lie_bracket(n: int, rng: random.Random, density: float = 0.4, tries: int = 2000) -> np.ndarray:
    """Random small-integer antisymmetric bracket that satisfies Jacobi.

    Sparse random tensors are filtered by the Jacobi identity; if none is
    found quickly a random change of basis of a known Lie algebra is used.
    """
    for _ in range(tries):
        br = zeros(n, n, n)
        for i, j in itertools.combinations(range(n), 2):
            for k in range(n):
                if rng.random() < density:
                    c = rng.choice((-2, -1, 1, 2))
                    br[i, j, k], br[j, i, k] = c, -c
        if is_zero(lie_jacobi_residual(br)):
            return br
    base = so3_bracket() if n == 3 else zeros(n, n, n)
    return change_basis(from_lie_algebra(base), random_unimodular(n, rng)).binary


def random_leibniz_product(n: int, rng: random.Random, density: float = 0.3, tries: int = 2000) -> np.ndarray:
    for _ in range(tries):
        p = zeros(n, n, n)
        for i, j, k in itertools.product(range(n), repeat=3):
            if rng.random() < density:
                p[i, j, k] = rng.choice((-1, 1, 2))
        if is_zero(leibniz_residual(p)):
            return p
    return zeros(n, n, n)


def random_unimodular(n: int, rng: random.Random) -> np.ndarray:
    """Random integer matrix of determinant +-1 (product of elementary moves)."""
    P = zeros(n, n)
    for i in range(n):
        P[i, i] = 1
    perm = list(range(n))
    rng.shuffle(perm)
    P = P[perm]
    for _ in range(2 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i != j:
            P[i] = P[i] + rng.choice((-1, 1)) * P[j]
    return P
