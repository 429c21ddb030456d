"""Representations (V; rho, D, theta) of a Lie-Yamaguti algebra.

Matrices act on column vectors: ``rho[i, r, s]`` is the (r, s) entry of
rho(e_i), and likewise ``D[i, j, r, s]`` and ``theta[i, j, r, s]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    InvalidAlgebra,
    LieYamagutiAlgebra,
    ShapeMismatch,
    check_axioms,
    collect_violations,
    cyclic3,
    exact_array,
    normalize,
    zeros,
)

REP_AXIOMS = ("R1", "R2", "R3", "R4", "R5", "R6")


@dataclass(frozen=True, eq=False)
class Representation:
    algebra: LieYamagutiAlgebra
    coeff_dim: int
    rho: np.ndarray
    D: np.ndarray
    theta: np.ndarray
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n, m = self.algebra.dim, self.coeff_dim
        for label, arr, shape in (("rho", self.rho, (n, m, m)),
                                  ("D", self.D, (n, n, m, m)),
                                  ("theta", self.theta, (n, n, m, m))):
            if arr.shape != shape:
                raise ShapeMismatch(f"{label} has shape {arr.shape}, expected {shape}")
            normalize(arr)

    def __eq__(self, other):
        if not isinstance(other, Representation):
            return NotImplemented
        return (self.algebra == other.algebra and self.coeff_dim == other.coeff_dim
                and all(np.array_equal(a, b) for a, b in
                        ((self.rho, other.rho), (self.D, other.D), (self.theta, other.theta))))

    @property
    def n(self) -> int:
        return self.algebra.dim

    @property
    def m(self) -> int:
        return self.coeff_dim

    @classmethod
    def build(cls, algebra, rho, D, theta, name="") -> Representation:
        n = algebra.dim
        m = np.shape(rho)[1] if np.size(rho) else (np.shape(D)[2] if np.size(D) else 0)
        return cls(algebra, m,
                   exact_array(rho) if np.size(rho) else zeros(n, m, m),
                   exact_array(D) if np.size(D) else zeros(n, n, m, m),
                   exact_array(theta) if np.size(theta) else zeros(n, n, m, m),
                   name)


def adjoint(L: LieYamagutiAlgebra, check: bool = True) -> Representation:
    """rho(a)b = [a,b], D(a,b)c = {a,b,c}, theta(a,b)c = {c,a,b}."""
    if check and not check_axioms(L).all_pass:
        raise InvalidAlgebra("adjoint representation needs a valid Lie-Yamaguti algebra")
    b, t = L.binary, L.ternary
    rho = np.ascontiguousarray(b.transpose(0, 2, 1))
    D = np.ascontiguousarray(t.transpose(0, 1, 3, 2))
    theta = np.ascontiguousarray(np.einsum("sijr->ijrs", t))
    return Representation(L, L.dim, rho, D, theta, f"adjoint({L.name})")


def zero_representation(L: LieYamagutiAlgebra, m: int) -> Representation:
    n = L.dim
    return Representation(L, m, zeros(n, m, m), zeros(n, n, m, m), zeros(n, n, m, m), "zero")


@dataclass
class RepresentationReport:
    violations: dict

    @property
    def flags(self) -> dict:
        return {ax: not self.violations.get(ax) for ax in REP_AXIOMS}

    @property
    def all_pass(self) -> bool:
        return all(self.flags.values())

    def failing(self) -> list:
        return [ax for ax, ok in self.flags.items() if not ok]


def _flat(arr: np.ndarray, nargs: int) -> np.ndarray:
    # merge the trailing matrix axes so each violation is keyed by its arguments
    return arr.reshape(arr.shape[:nargs] + (-1,))


def representation_residuals(r: Representation) -> dict:
    e = np.einsum
    b, t = r.algebra.binary, r.algebra.ternary
    rho, D, th = r.rho, r.D, r.theta
    rr = e("ars,bst->abrt", rho, rho)
    R1 = D + th - th.transpose(1, 0, 2, 3) - (rr - rr.transpose(1, 0, 2, 3)) + e("abk,krs->abrs", b, rho)
    R2 = (e("bck,akrs->abcrs", b, th)
          - e("brx,acxs->abcrs", rho, th)
          + e("crx,abxs->abcrs", rho, th))
    R3 = (e("abk,kcrs->abcrs", b, th)
          - e("acrx,bxs->abcrs", th, rho)
          + e("bcrx,axs->abcrs", th, rho))
    R4 = (e("cdrx,abxs->abcdrs", th, th)
          - e("bdrx,acxs->abcdrs", th, th)
          - e("bcdk,akrs->abcdrs", t, th)
          + e("bcrx,adxs->abcdrs", D, th))
    R5 = (e("abrx,cxs->abcrs", D, rho)
          - e("crx,abxs->abcrs", rho, D)
          - e("abck,krs->abcrs", t, rho))
    R6 = (e("abrx,cdxs->abcdrs", D, th)
          - e("cdrx,abxs->abcdrs", th, D)
          - e("abck,kdrs->abcdrs", t, th)
          - e("abdk,ckrs->abcdrs", t, th))
    return {"R1": _flat(R1, 2), "R2": _flat(R2, 3), "R3": _flat(R3, 3),
            "R4": _flat(R4, 4), "R5": _flat(R5, 3), "R6": _flat(R6, 4)}


def check_representation(r: Representation) -> RepresentationReport:
    res = representation_residuals(r)
    return RepresentationReport({ax: collect_violations(v) for ax, v in res.items()})


def derived_D_residual(r: Representation) -> np.ndarray:
    return cyclic3(np.einsum("abk,kcrs->abcrs", r.algebra.binary, r.D))


def check_derived_D_identity(r: Representation) -> bool:
    """D([a,b],c) + D([b,c],a) + D([c,a],b) = 0 on all basis triples."""
    return not collect_violations(_flat(derived_D_residual(r), 3))
