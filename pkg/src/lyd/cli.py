"""Command-line interface: ``lyd <command> ...``.

Exit codes: 0 success or passing verdict, 1 failing verdict, 2 usage or
input error.  ``--json`` prints a machine-readable report whose content
depends only on the inputs and the seed (wall time is added only with
``--timing``).
"""

from __future__ import annotations

import argparse
import os
import random
import shutil
import sys
import time

from . import __version__
from .algebra import InvalidAlgebra, check_axioms, catalog
from .cohomology import TooLarge, h23, h_deformation_3445, h_general, image_star, pair_systems, star_systems, unpack
from .deformation import (
    AllZero,
    InvalidDeformation,
    NotACocycle,
    NotEquivalent,
    Obstructed,
    are_equivalent,
    check_deformation,
    extend_one_order,
    extension_by_cocycle,
    integrate,
    n_infinitesimal,
    normalize_deformation,
    obstruction,
    random_cocycle,
)
from .free import FreeLYA, TooLarge as FreeTooLarge, format_word
from .io import (
    ParseError,
    _entries,
    algebra_document,
    deformation_document,
    dumps,
    pair_document,
    parse_algebra,
    parse_deformation,
    parse_representation,
    serialize_algebra,
    sha256_text,
)
from .linalg import format_scalar
from .representation import adjoint, check_derived_D_identity, check_representation

MAX_LISTED = 20


class UsageError(Exception):
    pass


class Session:
    """Collects inputs and builds the report for one invocation."""

    def __init__(self, argv, args):
        self.argv = list(argv)
        self.args = args
        self.inputs = {}

    def read(self, path: str) -> str:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as err:
            raise UsageError(f"cannot read {path}: {err.strerror}") from None
        self.inputs[path] = sha256_text(text)
        return text

    def algebra(self, path: str):
        return parse_algebra(self.read(path))

    def deformation(self, path: str):
        return parse_deformation(self.read(path), os.path.dirname(path) or ".")

    def report(self, verdict: str, body: dict) -> dict:
        out = {"command": self.argv, "inputs": dict(sorted(self.inputs.items()))}
        if getattr(self.args, "seed", None) is not None:
            out["seed"] = self.args.seed
        out["verdict"] = verdict
        out.update(body)
        return out


def _catalog_algebra(ref: str):
    key = ref.split(":", 1)[1]
    cat = catalog()
    if key not in cat:
        raise UsageError(f"unknown catalog algebra {key!r}; try 'lyd catalog'")
    return cat[key]


def _load_algebra(s: Session, path: str):
    if path.startswith("catalog:"):
        L = _catalog_algebra(path)
        s.inputs[path] = sha256_text(serialize_algebra(L))
        return L
    return s.algebra(path)


def _vec(v) -> list:
    return [format_scalar(x) for x in v]


def _sparse_vec(v) -> list:
    return [[i, format_scalar(x)] for i, x in enumerate(v) if x]


# ---------------------------------------------------------------------------
# commands


def cmd_check(s: Session):
    L = _load_algebra(s, s.args.file)
    rep = check_axioms(L)
    viol = [{"axiom": ax, "args": list(idx), "residual": _vec(res)}
            for ax in rep.violations for idx, res in rep.violations[ax]]
    body = {"dim": L.dim, "axioms": rep.flags, "violation_count": len(viol),
            "violations": viol[:MAX_LISTED]}
    lines = [f"{ax}: {'ok' if ok else 'FAIL'}" for ax, ok in rep.flags.items()]
    return ("pass" if rep.all_pass else "fail"), body, lines


def cmd_rep_check(s: Session):
    path = s.args.file
    if path.endswith(".lya") or path.startswith("catalog:"):
        L = _load_algebra(s, path)
        try:
            r = adjoint(L)
        except InvalidAlgebra as err:
            raise UsageError(str(err)) from None
    else:
        r = parse_representation(s.read(path), os.path.dirname(path) or ".")
    rep = check_representation(r)
    derived = check_derived_D_identity(r)
    viol = [{"axiom": ax, "args": list(idx)}
            for ax in rep.violations for idx, _ in rep.violations[ax]]
    body = {"coeff_dim": r.m, "axioms": rep.flags, "derived_D_identity": derived,
            "violation_count": len(viol), "violations": viol[:MAX_LISTED]}
    lines = [f"{ax}: {'ok' if ok else 'FAIL'}" for ax, ok in rep.flags.items()]
    lines.append(f"derived D identity: {'ok' if derived else 'FAIL'}")
    return ("pass" if rep.all_pass and derived else "fail"), body, lines


def _pair_doc_from_vector(vec, n: int, level: int) -> dict:
    f, g = unpack(vec, pair_systems(n, n, level))
    return {"F": _entries(f), "G": _entries(g)}


def cmd_cohomology(s: Session):
    L = _load_algebra(s, s.args.file)
    if not check_axioms(L).all_pass:
        raise UsageError("input is not a Lie-Yamaguti algebra")
    which = s.args.which
    n = L.dim
    if which == "23":
        res = h23(L)
        reps = [_pair_doc_from_vector(v, n, 1) for v in res.representatives]
        extra = {"product_z_dim": res.extra["product_z_dim"], "rigid_sufficient": res.h_dim == 0}
    elif which == "3445":
        res = h_deformation_3445(L)
        names = ("P", "Q", "R", "S")
        reps = [dict(zip(names, (_entries(t) for t in unpack(v, star_systems(n, n)))))
                for v in res.representatives]
        extra = {"z45_dim": res.extra["z45_dim"]}
    elif which.startswith("p="):
        try:
            p = int(which[2:])
        except ValueError:
            raise UsageError(f"bad level in --which {which}") from None
        if p == 1:
            return _with_which(s, "23")
        res = h_general(L, p)
        reps = [_pair_doc_from_vector(v, n, p) for v in res.representatives]
        extra = {"level": p}
    else:
        raise UsageError("--which must be 23, 3445 or p=<k>")
    body = {"which": which, "z_dim": res.z_dim, "b_dim": res.b_dim, "h_dim": res.h_dim}
    body.update(extra)
    body["representatives"] = reps if s.args.representatives else len(reps)
    lines = [f"z_dim {res.z_dim}", f"b_dim {res.b_dim}", f"h_dim {res.h_dim}"]
    return "pass", body, lines


def _with_which(s: Session, which: str):
    s.args.which = which
    return cmd_cohomology(s)


def cmd_deform_check(s: Session):
    d = s.deformation(s.args.file)
    rep = check_deformation(d)
    fails = [{"order": nu, "equation": eq, "args": list(idx), "residual": _vec(res)}
             for nu, eq, idx, res in rep.failures]
    body = {"order": d.order, "valid_through": rep.valid_through(),
            "failure_count": len(fails), "failures": fails[:MAX_LISTED]}
    lines = [f"order {d.order}", f"valid through order {rep.valid_through()}"]
    return ("pass" if rep.passes else "fail"), body, lines


def cmd_deform_infinitesimal(s: Session):
    d = s.deformation(s.args.file)
    try:
        k, c = n_infinitesimal(d)
    except AllZero:
        return "pass", {"n": None, "all_zero": True}, ["all higher terms vanish"]
    from .cohomology import z23
    cocycle = c.coordinates() in z23(d.algebra)
    body = {"n": k, "all_zero": False, "term": pair_document(c), "is_cocycle": cocycle}
    return ("pass" if cocycle else "fail"), body, [f"n = {k}", f"cocycle: {cocycle}"]


def _require(d):
    rep = check_deformation(d)
    if not rep.passes:
        raise UsageError("input deformation does not satisfy the deformation equations "
                         f"(first failure at order {rep.failures[0][0]})")


def cmd_deform_obstruct(s: Session):
    d = s.deformation(s.args.file)
    _require(d)
    obs = obstruction(d)
    extends = obs.vector() in image_star(d.algebra)
    body = {"order": d.order, "P": _entries(obs.P.tensor), "Q": _entries(obs.Q.tensor),
            "R": _entries(obs.R.tensor), "S": _entries(obs.S.tensor),
            "zero": obs.is_zero(), "rs_cocycle": True, "in_image": extends}
    lines = [f"obstruction zero: {obs.is_zero()}", f"extends: {extends}"]
    return ("pass" if extends else "fail"), body, lines


def _obstructed_body(ob: Obstructed) -> dict:
    return {"obstructed_at": ob.order, "residual": _sparse_vec(ob.residual),
            "class_coordinates": None if ob.class_coordinates is None else _sparse_vec(ob.class_coordinates)}


def cmd_deform_extend(s: Session):
    d = s.deformation(s.args.file)
    witness = None
    if s.args.witness:
        w = s.deformation(s.args.witness)
        if w.order != d.order + 1:
            raise UsageError("witness file must hold a deformation of order n+1")
        witness = w.term(d.order + 1)
    try:
        out = extend_one_order(d, witness=witness)
    except InvalidDeformation as err:
        raise UsageError(str(err)) from None
    except ValueError as err:
        raise UsageError(str(err)) from None
    except Obstructed as ob:
        return "fail", _obstructed_body(ob), [f"obstructed at order {ob.order}"]
    return "pass", {"order": out.order, "deformation": deformation_document(out)}, [f"extended to order {out.order}"]


def cmd_deform_integrate(s: Session):
    path = s.args.file
    if path.endswith(".def"):
        d = s.deformation(path)
        if d.order < 1:
            raise UsageError("deformation file needs a first-order term")
        L, c = d.algebra, d.term(1)
    else:
        L = _load_algebra(s, path)
        rng = random.Random(s.args.seed if s.args.seed is not None else 0)
        if s.args.seed is None:
            s.args.seed = 0
        c = random_cocycle(L, rng)
    try:
        out = integrate(L, c, s.args.order)
    except NotACocycle as err:
        return "fail", {"error": str(err)}, [str(err)]
    except Obstructed as ob:
        body = {"infinitesimal": pair_document(c)}
        body.update(_obstructed_body(ob))
        return "fail", body, [f"obstructed at order {ob.order}"]
    return "pass", {"order": out.order, "deformation": deformation_document(out)}, [f"integrated to order {out.order}"]


def cmd_deform_equivalent(s: Session):
    d1 = s.deformation(s.args.first)
    d2 = s.deformation(s.args.second)
    order = s.args.order if s.args.order is not None else min(d1.order, d2.order)
    try:
        phi = are_equivalent(d1, d2, order)
    except NotEquivalent as ne:
        return "fail", {"failed_at": ne.order}, [f"not equivalent at order {ne.order}"]
    except ValueError as err:
        raise UsageError(str(err)) from None
    body = {"order": order, "psi": [[_vec(row) for row in p.map.tolist()] for p in phi.psi]}
    return "pass", body, [f"equivalent through order {order}"]


def cmd_deform_normalize(s: Session):
    d = s.deformation(s.args.file)
    _require(d)
    res = normalize_deformation(d)
    body = {"trivial": res.trivial, "order": res.order,
            "deformation": deformation_document(res.deformation),
            "psi": [[_vec(row) for row in p.map.tolist()] for p in res.isomorphism.psi]}
    line = "trivial modulo t^%d" % (d.order + 1) if res.trivial else f"non-coboundary term at order {res.order}"
    return "pass", body, [line]


def cmd_deform_extend_alg(s: Session):
    d = s.deformation(s.args.file)
    if d.order < 1:
        raise UsageError("deformation file needs a first-order term")
    try:
        res = extension_by_cocycle(d.algebra, d.term(1))
    except NotACocycle as err:
        return "fail", {"error": str(err)}, [str(err)]
    body = {"axioms_pass": res.axioms_pass, "failing": res.failing,
            "algebra": algebra_document(res.algebra)}
    return ("pass" if res.axioms_pass else "fail"), body, [f"extension passes axioms: {res.axioms_pass}"]


def cmd_free_dims(s: Session):
    F = FreeLYA(s.args.gens)
    dims = F.graded_dimensions(s.args.max_weight)
    body = {"gens": s.args.gens, "max_weight": s.args.max_weight, "dims": dims}
    lines = [" ".join(str(x) for x in dims)]
    if s.args.basis:
        words = {str(w): [format_word(u, F.names) for u in F.quotient_words(w)]
                 for w in range(1, s.args.max_weight + 1)}
        body["basis"] = words
        for w, ws in words.items():
            lines.append(f"weight {w}: " + ", ".join(ws))
    return "pass", body, lines


def cmd_free_basis(s: Session):
    F = FreeLYA(s.args.gens)
    words = [format_word(u, F.names) for u in F.quotient_words(s.args.weight)]
    return "pass", {"gens": s.args.gens, "weight": s.args.weight, "basis": words}, words


def cmd_catalog(s: Session):
    cat = catalog()
    if s.args.out:
        os.makedirs(s.args.out, exist_ok=True)
        for name, L in cat.items():
            with open(os.path.join(s.args.out, f"{name}.lya"), "w", encoding="utf-8") as fh:
                fh.write(serialize_algebra(L))
        # sample representation and deformation files ride along
        data = os.path.join(os.path.dirname(__file__), "data")
        for fname in sorted(os.listdir(data)):
            if fname.endswith((".def", ".rep")) or fname == "3dim.lya":
                shutil.copyfile(os.path.join(data, fname), os.path.join(s.args.out, fname))
    if s.args.name:
        if s.args.name not in cat:
            raise UsageError(f"unknown catalog algebra {s.args.name!r}")
        L = cat[s.args.name]
        return "pass", {"algebra": algebra_document(L)}, serialize_algebra(L).splitlines()
    names = list(cat)
    return "pass", {"names": names}, names


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--timing", action="store_true", help="include wall time in the report")

    p = argparse.ArgumentParser(prog="lyd", description="Exact computations with Lie-Yamaguti algebras.")
    p.add_argument("--version", action="version", version=f"lyd {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="verify the algebra axioms")
    c.add_argument("file", help=".lya file or catalog:<name>")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("rep-check", parents=[common], help="verify representation axioms")
    c.add_argument("file", help=".rep file, or .lya / catalog:<name> for the adjoint representation")
    c.set_defaults(func=cmd_rep_check)

    c = sub.add_parser("cohomology", parents=[common], help="cohomology dimensions and representatives")
    c.add_argument("file")
    c.add_argument("--which", default="23", help="23, 3445 or p=<k>")
    c.add_argument("--representatives", action="store_true", help="list class representatives")
    c.set_defaults(func=cmd_cohomology)

    d = sub.add_parser("deform", help="deformation commands")
    dsub = d.add_subparsers(dest="action", required=True)
    for name, func, helptext in (
        ("check", cmd_deform_check, "check the deformation equations"),
        ("infinitesimal", cmd_deform_infinitesimal, "first nonzero higher term"),
        ("obstruct", cmd_deform_obstruct, "obstruction cochains"),
        ("normalize", cmd_deform_normalize, "transport away coboundary infinitesimals"),
        ("extend-alg", cmd_deform_extend_alg, "split extension by the first-order term"),
    ):
        c = dsub.add_parser(name, parents=[common], help=helptext)
        c.add_argument("file", help=".def file")
        c.set_defaults(func=func)
    c = dsub.add_parser("extend", parents=[common], help="extend by one order")
    c.add_argument("file")
    c.add_argument("--witness", help=".def file of order n+1 whose last term is used")
    c.set_defaults(func=cmd_deform_extend)
    c = dsub.add_parser("integrate", parents=[common], help="integrate an infinitesimal")
    c.add_argument("file", help=".def (uses its first-order term) or .lya with a random cocycle")
    c.add_argument("--order", type=int, default=4)
    c.add_argument("--seed", type=int, default=None)
    c.set_defaults(func=cmd_deform_integrate)
    c = dsub.add_parser("equivalent", parents=[common], help="search for an intertwining isomorphism")
    c.add_argument("first")
    c.add_argument("second")
    c.add_argument("--order", type=int, default=None)
    c.set_defaults(func=cmd_deform_equivalent)

    f = sub.add_parser("free", help="free Lie-Yamaguti algebra")
    fsub = f.add_subparsers(dest="action", required=True)
    c = fsub.add_parser("dims", parents=[common], help="graded dimensions")
    c.add_argument("--gens", type=int, required=True)
    c.add_argument("--max-weight", type=int, required=True)
    c.add_argument("--basis", action="store_true")
    c.set_defaults(func=cmd_free_dims)
    c = fsub.add_parser("basis", parents=[common], help="quotient basis words of one weight")
    c.add_argument("--gens", type=int, required=True)
    c.add_argument("--weight", type=int, required=True)
    c.set_defaults(func=cmd_free_basis)

    c = sub.add_parser("catalog", parents=[common], help="list or export the bundled algebras")
    c.add_argument("name", nargs="?")
    c.add_argument("--out", help="directory to write every catalog algebra as .lya, plus sample .rep and .def files")
    c.set_defaults(func=cmd_catalog)
    return p


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    s = Session([a for a in argv if a != "--timing"], args)
    start = time.perf_counter()
    try:
        verdict, body, lines = args.func(s)
    except (UsageError, ParseError, TooLarge, FreeTooLarge) as err:
        print(f"lyd: error: {err}", file=sys.stderr)
        return 2
    report = s.report(verdict, body)
    if args.timing:
        report["wall_time_s"] = round(time.perf_counter() - start, 6)
    if args.json:
        sys.stdout.write(dumps(report))
    else:
        for line in lines:
            print(line)
        if args.timing:
            print(f"wall time {report['wall_time_s']} s")
    return 0 if verdict == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
