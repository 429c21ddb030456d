"""JSON documents for algebras, representations, cochains and deformations.

Rationals are strings "p/q" (or "p").  Tensors are sparse entry lists
``[i, j, ..., value]``; unlisted entries are zero.  Semantic errors report
the line and column of the offending entry.
"""

from __future__ import annotations

import hashlib
import json
import os
from json.decoder import scanstring

import numpy as np

from .algebra import LieYamagutiAlgebra, catalog, nonzero_entries, zeros
from .cochains import Cochain, CochainPair
from .deformation import TruncatedDeformation
from .linalg import format_scalar, parse_scalar
from .representation import Representation


class ParseError(ValueError):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col
        self.message = message


# ---------------------------------------------------------------------------
# position lookup


def _ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] in " \t\r\n":
        pos += 1
    return pos


def locate(text: str, path) -> int:
    """Character offset of the JSON value at ``path`` (keys and indices)."""
    dec = json.JSONDecoder()
    pos = _ws(text, 0)
    for key in path:
        if pos >= len(text):
            return len(text)
        if text[pos] == "{":
            pos = _ws(text, pos + 1)
            while pos < len(text) and text[pos] != "}":
                k, pos = scanstring(text, pos + 1)
                pos = _ws(text, _ws(text, pos) + 1)
                if k == key:
                    break
                _, pos = dec.raw_decode(text, pos)
                pos = _ws(text, pos)
                if pos < len(text) and text[pos] == ",":
                    pos = _ws(text, pos + 1)
        elif text[pos] == "[":
            pos = _ws(text, pos + 1)
            for _ in range(int(key)):
                _, pos = dec.raw_decode(text, pos)
                pos = _ws(text, pos)
                if pos < len(text) and text[pos] == ",":
                    pos = _ws(text, pos + 1)
        else:
            return pos
    return pos


def line_col(text: str, pos: int) -> tuple:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Doc:
    """Parsed JSON plus the source text, for positioned errors."""

    def __init__(self, text: str):
        self.text = text
        try:
            self.data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(e.lineno, e.colno, e.msg) from None

    def error(self, path, message: str) -> ParseError:
        line, col = line_col(self.text, locate(self.text, path))
        return ParseError(line, col, message)

    def get(self, obj, key, path, kind=None, default=...):
        if not isinstance(obj, dict):
            return self._fail(path, "expected an object")
        if key not in obj:
            if default is not ...:
                return default
            raise self.error(path, f"missing field {key!r}")
        val = obj[key]
        if kind is not None and not isinstance(val, kind) or isinstance(val, bool) and kind is int:
            raise self.error(path + [key], f"field {key!r} has the wrong type")
        return val

    def _fail(self, path, message):
        raise self.error(path, message)


def _tensor(doc: _Doc, entries, shape: tuple, path: list) -> np.ndarray:
    out = zeros(*shape)
    seen = set()
    if not isinstance(entries, list):
        raise doc.error(path, "expected a list of entries")
    k = len(shape)
    for e, entry in enumerate(entries):
        here = path + [e]
        if not isinstance(entry, list) or len(entry) != k + 1:
            raise doc.error(here, f"entry must have {k} indices and a value")
        idx = entry[:k]
        if not all(isinstance(i, int) and not isinstance(i, bool) for i in idx):
            raise doc.error(here, "indices must be integers")
        for i, lim in zip(idx, shape):
            if not 0 <= i < lim:
                raise doc.error(here, f"index {i} out of range 0..{lim - 1}")
        key = tuple(idx)
        if key in seen:
            raise doc.error(here, f"duplicate entry {list(key)}")
        seen.add(key)
        raw = entry[k]
        if not isinstance(raw, (str, int)) or isinstance(raw, bool):
            raise doc.error(here + [k], "value must be a rational string")
        try:
            out[key] = parse_scalar(str(raw))
        except ValueError as err:
            raise doc.error(here + [k], str(err)) from None
    return out


def _entries(arr: np.ndarray) -> list:
    return [list(idx) + [format_scalar(v)] for idx, v in nonzero_entries(arr)]


# ---------------------------------------------------------------------------
# algebras


def _algebra_from(doc: _Doc, obj, path) -> LieYamagutiAlgebra:
    n = doc.get(obj, "dim", path, int)
    if n < 0:
        raise doc.error(path + ["dim"], "dim must be non-negative")
    names = doc.get(obj, "basis", path, list, default=None)
    if names is None:
        names = [f"e{i + 1}" for i in range(n)]
    if len(names) != n or not all(isinstance(x, str) for x in names):
        raise doc.error(path + ["basis"], f"basis must list {n} names")
    if len(set(names)) != n:
        raise doc.error(path + ["basis"], "basis names must be distinct")
    b = _tensor(doc, doc.get(obj, "binary", path, list, default=[]), (n,) * 3, path + ["binary"])
    t = _tensor(doc, doc.get(obj, "ternary", path, list, default=[]), (n,) * 4, path + ["ternary"])
    name = doc.get(obj, "name", path, str, default="")
    return LieYamagutiAlgebra(n, tuple(names), b, t, name)


def parse_algebra(text: str) -> LieYamagutiAlgebra:
    doc = _Doc(text)
    return _algebra_from(doc, doc.data, [])


def algebra_document(L: LieYamagutiAlgebra) -> dict:
    out = {}
    if L.name:
        out["name"] = L.name
    out["dim"] = L.dim
    out["basis"] = list(L.basis_names)
    out["binary"] = _entries(L.binary)
    out["ternary"] = _entries(L.ternary)
    return out


def serialize_algebra(L: LieYamagutiAlgebra) -> str:
    return dumps(algebra_document(L))


def _resolve_algebra(doc: _Doc, obj, path, base_dir) -> LieYamagutiAlgebra:
    ref = doc.get(obj, "algebra", path)
    if isinstance(ref, dict):
        return _algebra_from(doc, ref, path + ["algebra"])
    if isinstance(ref, str):
        if ref.startswith("catalog:"):
            cat = catalog()
            key = ref.split(":", 1)[1]
            if key not in cat:
                raise doc.error(path + ["algebra"], f"unknown catalog algebra {key!r}")
            return cat[key]
        target = os.path.join(base_dir or ".", ref)
        try:
            with open(target, encoding="utf-8") as fh:
                return parse_algebra(fh.read())
        except OSError as err:
            raise doc.error(path + ["algebra"], f"cannot read {ref!r}: {err.strerror}") from None
        except ParseError as err:
            raise doc.error(path + ["algebra"], f"in {ref!r}: {err}") from None
    raise doc.error(path + ["algebra"], "algebra must be an inline document or a path")


# ---------------------------------------------------------------------------
# representations


def parse_representation(text: str, base_dir: str | None = None) -> Representation:
    doc = _Doc(text)
    obj = doc.data
    L = _resolve_algebra(doc, obj, [], base_dir)
    n = L.dim
    m = doc.get(obj, "coeff_dim", [], int)
    rho = _tensor(doc, doc.get(obj, "rho", [], list, default=[]), (n, m, m), ["rho"])
    D = _tensor(doc, doc.get(obj, "D", [], list, default=[]), (n, n, m, m), ["D"])
    th = _tensor(doc, doc.get(obj, "theta", [], list, default=[]), (n, n, m, m), ["theta"])
    return Representation(L, m, rho, D, th)


def representation_document(r: Representation) -> dict:
    return {
        "algebra": algebra_document(r.algebra),
        "coeff_dim": r.m,
        "rho": _entries(r.rho),
        "D": _entries(r.D),
        "theta": _entries(r.theta),
    }


def serialize_representation(r: Representation) -> str:
    return dumps(representation_document(r))


# ---------------------------------------------------------------------------
# cochains


def _cochain_from(doc: _Doc, obj, path, n=None, m=None, arity=None, key="entries") -> Cochain:
    k = doc.get(obj, "arity", path, int, default=arity)
    mm = doc.get(obj, "coeff_dim", path, int, default=m)
    nn = doc.get(obj, "dim", path, int, default=n)
    if k is None or mm is None or nn is None:
        raise doc.error(path, "cochain needs arity, coeff_dim and dim")
    if k < 1:
        raise doc.error(path + ["arity"], "arity must be at least 1")
    pairs = doc.get(obj, "pairs", path, int, default=k // 2)
    if not 0 <= 2 * pairs <= k:
        raise doc.error(path + ["pairs"], "pairs out of range")
    t = _tensor(doc, doc.get(obj, key, path, list), (nn,) * k + (mm,), path + [key])
    c = Cochain(t, pairs)
    if not c.is_alternating():
        raise doc.error(path + [key], "entries are not alternating in the constrained argument pairs")
    return c


def parse_cochain(text: str) -> Cochain:
    doc = _Doc(text)
    return _cochain_from(doc, doc.data, [])


def cochain_document(c: Cochain) -> dict:
    out = {"arity": c.arity, "coeff_dim": c.m, "dim": c.n}
    if c.pairs != c.arity // 2:
        out["pairs"] = c.pairs
    out["entries"] = _entries(c.tensor)
    return out


def serialize_cochain(c: Cochain) -> str:
    return dumps(cochain_document(c))


# ---------------------------------------------------------------------------
# deformations


def parse_deformation(text: str, base_dir: str | None = None) -> TruncatedDeformation:
    doc = _Doc(text)
    obj = doc.data
    L = _resolve_algebra(doc, obj, [], base_dir)
    n = L.dim
    order = doc.get(obj, "order", [], int)
    terms = doc.get(obj, "terms", [], list)
    if len(terms) not in (order, order + 1):
        raise doc.error(["terms"], f"expected {order} or {order + 1} terms for order {order}")
    has_zero = len(terms) == order + 1
    out = []
    for i, term in enumerate(terms):
        path = ["terms", i]
        if not isinstance(term, dict):
            raise doc.error(path, "term must be an object with F and G")
        F = _cochain_from(doc, term, path, n, n, 2, key="F")
        G = _cochain_from(doc, term, path, n, n, 3, key="G")
        out.append((F, G))
    if has_zero:
        F0, G0 = out[0]
        if not (np.array_equal(F0.tensor, L.binary) and np.array_equal(G0.tensor, L.ternary)):
            raise doc.error(["terms", 0], "term 0 must equal the algebra's brackets")
        out = out[1:]
    return TruncatedDeformation.from_terms(L, out)


def deformation_document(d: TruncatedDeformation, algebra_ref=None) -> dict:
    return {
        "algebra": algebra_ref if algebra_ref is not None else algebra_document(d.algebra),
        "order": d.order,
        "terms": [{"F": _entries(F.tensor), "G": _entries(G.tensor)} for F, G in d.terms[1:]],
    }


def serialize_deformation(d: TruncatedDeformation, algebra_ref=None) -> str:
    return dumps(deformation_document(d, algebra_ref))


def pair_document(c: CochainPair) -> dict:
    return {"F": _entries(c.f.tensor), "G": _entries(c.g.tensor)}


# ---------------------------------------------------------------------------
# canonical JSON text


def dumps(obj) -> str:
    """Indented JSON where every innermost list stays on one line."""
    return _emit(obj, 0) + "\n"


def _emit(obj, depth: int) -> str:
    pad = "  " * (depth + 1)
    end = "  " * depth
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_emit(v, depth + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj or all(not isinstance(x, (list, dict)) for x in obj):
            return json.dumps(obj)
        return "[\n" + ",\n".join(pad + _emit(x, depth + 1) for x in obj) + "\n" + end + "]"
    return json.dumps(obj)


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
