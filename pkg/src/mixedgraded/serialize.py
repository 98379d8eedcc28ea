"""JSON documents for chain, graded, mixed and filtered complexes and reports.

Canonical form: sorted keys, two-space indent, rationals as strings ``"a"`` or
``"a/b"``, integer keys as strings, zero matrices omitted, trailing newline.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import __version__
from .chain import ChainComplex, ChainMap
from .errors import ParseError
from .filtered import CONSTANT, ZERO, FilteredComplex
from .graded import GradedComplex
from .linalg import Matrix, as_rational, format_rational
from .mixed import ANTICOMMUTING, COMMUTING, MixedComplex, convert_convention

KINDS = ("chain", "graded", "mixed", "filtered", "report")


@dataclass
class Document:
    kind: str
    payload: object
    meta: dict = field(default_factory=dict)


# ---------------------------------------------------------------- encoding

def matrix_to_json(m: Matrix):
    return [[format_rational(x) for x in row] for row in m.to_rows()]


def chain_to_json(c: ChainComplex) -> dict:
    return {"dims": {str(n): k for n, k in c.dims().items()},
            "diff": {str(n): matrix_to_json(m) for n, m in c.diffs().items()}}


def graded_to_json(g: GradedComplex) -> dict:
    return {"weights": {str(p): chain_to_json(c) for p, c in g.parts().items()}}


def mixed_to_json(m: MixedComplex) -> dict:
    out = graded_to_json(m.graded)
    out["eps"] = {}
    for p, n, e in m.eps_items():
        out["eps"].setdefault(str(p), {})[str(n)] = matrix_to_json(e)
    return out


def filtered_to_json(f: FilteredComplex) -> dict:
    trans = {}
    for p in range(f.lo, f.hi):
        comps = {str(n): matrix_to_json(m) for n, m in f.transition(p).comps.items()}
        if comps:
            trans[str(p)] = comps
    return {"window": [f.lo, f.hi], "above": f.above,
            "terms": {str(p): chain_to_json(f.term(p)) for p in range(f.lo, f.hi + 1)},
            "transitions": trans}


def to_json(obj) -> tuple[str, object]:
    if isinstance(obj, ChainComplex):
        return "chain", chain_to_json(obj)
    if isinstance(obj, GradedComplex):
        return "graded", graded_to_json(obj)
    if isinstance(obj, MixedComplex):
        return "mixed", mixed_to_json(obj)
    if isinstance(obj, FilteredComplex):
        return "filtered", filtered_to_json(obj)
    if isinstance(obj, dict):
        return "report", obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def document(obj, meta: dict | None = None) -> Document:
    kind, _ = to_json(obj)
    return Document(kind, obj, dict(meta or {}))


def canonical(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def serialize(doc: Document) -> str:
    kind, payload = to_json(doc.payload)
    if kind != doc.kind:
        raise TypeError(f"document kind {doc.kind!r} does not match payload {kind!r}")
    meta = {"version": __version__, "convention": ANTICOMMUTING}
    meta.update(doc.meta)
    return canonical({"kind": kind, "base": "Q", "meta": meta, "payload": payload})


def dumps(obj, **meta) -> str:
    return serialize(document(obj, meta))


# ---------------------------------------------------------------- decoding

def _int_key(key, path):
    try:
        return int(key)
    except (TypeError, ValueError):
        raise ParseError(path, f"expected an integer key, got {key!r}") from None


def _obj(x, path, keys=None):
    if not isinstance(x, dict):
        raise ParseError(path, f"expected an object, got {type(x).__name__}")
    if keys is not None:
        missing = [k for k in keys if k not in x]
        if missing:
            raise ParseError(path, f"missing field {missing[0]!r}")
    return x


def matrix_from_json(rows, shape, path) -> Matrix:
    r, c = shape
    if not isinstance(rows, list) or len(rows) != r:
        raise ParseError(path, f"expected {r} rows")
    data = {}
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != c:
            raise ParseError(f"{path}[{i}]", f"expected {c} entries")
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (str, int)):
                raise ParseError(f"{path}[{i}][{j}]", "entries must be rational strings")
            try:
                q = as_rational(v)
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"{path}[{i}][{j}]", f"bad rational {v!r}") from None
            if q:
                data[(i, j)] = q
    return Matrix(r, c, data)


def chain_from_json(x, path="$.payload") -> ChainComplex:
    x = _obj(x, path, ("dims",))
    dims = {}
    for k, v in _obj(x["dims"], f"{path}.dims").items():
        n = _int_key(k, f"{path}.dims")
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise ParseError(f"{path}.dims.{k}", "dimension must be a non-negative integer")
        dims[n] = v
    diffs = {}
    for k, rows in _obj(x.get("diff", {}), f"{path}.diff").items():
        n = _int_key(k, f"{path}.diff")
        diffs[n] = matrix_from_json(rows, (dims.get(n - 1, 0), dims.get(n, 0)), f"{path}.diff.{k}")
    return ChainComplex(dims, diffs, check=True)


def graded_from_json(x, path="$.payload") -> GradedComplex:
    x = _obj(x, path, ("weights",))
    parts = {}
    for k, c in _obj(x["weights"], f"{path}.weights").items():
        parts[_int_key(k, f"{path}.weights")] = chain_from_json(c, f"{path}.weights.{k}")
    return GradedComplex(parts)


def mixed_from_json(x, path="$.payload", convention=ANTICOMMUTING) -> MixedComplex:
    g = graded_from_json(x, path)
    eps = {}
    for k, byn in _obj(x.get("eps", {}), f"{path}.eps").items():
        p = _int_key(k, f"{path}.eps")
        for kn, rows in _obj(byn, f"{path}.eps.{k}").items():
            n = _int_key(kn, f"{path}.eps.{k}")
            shape = (g.part(p - 1).dim(n + 1), g.part(p).dim(n))
            eps.setdefault(p, {})[n] = matrix_from_json(rows, shape, f"{path}.eps.{k}.{kn}")
    m = MixedComplex(g, eps, check=False)
    return convert_convention(m, convention, ANTICOMMUTING)


def filtered_from_json(x, path="$.payload") -> FilteredComplex:
    x = _obj(x, path, ("window", "above", "terms"))
    win = x["window"]
    if (not isinstance(win, list) or len(win) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in win)):
        raise ParseError(f"{path}.window", "expected [lo, hi] integers")
    lo, hi = win
    if hi < lo:
        raise ParseError(f"{path}.window", "empty window")
    above = x["above"]
    if above not in (ZERO, CONSTANT):
        raise ParseError(f"{path}.above", f"expected {ZERO!r} or {CONSTANT!r}")
    terms = {}
    for k, c in _obj(x["terms"], f"{path}.terms").items():
        p = _int_key(k, f"{path}.terms")
        if not lo <= p <= hi:
            raise ParseError(f"{path}.terms.{k}", "term outside the window")
        terms[p] = chain_from_json(c, f"{path}.terms.{k}")
    trans = {}
    for k, byn in _obj(x.get("transitions", {}), f"{path}.transitions").items():
        p = _int_key(k, f"{path}.transitions")
        if not lo <= p < hi:
            raise ParseError(f"{path}.transitions.{k}", "transition outside the window")
        src = terms.get(p + 1) or ChainComplex.zero()
        tgt = terms.get(p) or ChainComplex.zero()
        comps = {}
        for kn, rows in _obj(byn, f"{path}.transitions.{k}").items():
            n = _int_key(kn, f"{path}.transitions.{k}")
            comps[n] = matrix_from_json(rows, (tgt.dim(n), src.dim(n)), f"{path}.transitions.{k}.{kn}")
        trans[p] = ChainMap(src, tgt, comps)
    full = {p: terms.get(p) or ChainComplex.zero() for p in range(lo, hi + 1)}
    for p in range(lo, hi):
        if p not in trans:
            trans[p] = ChainMap(full[p + 1], full[p], {})
    return FilteredComplex(lo, hi, full, trans, above, check=True)


def parse(text: str) -> Document:
    """Parse and validate a document; commuting-convention mixed input is converted."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    data = _obj(data, "$", ("kind", "payload"))
    kind = data["kind"]
    if kind not in KINDS:
        raise ParseError("$.kind", f"unknown kind {kind!r}")
    if data.get("base", "Q") != "Q":
        raise ParseError("$.base", "only the base 'Q' is supported")
    meta = dict(_obj(data.get("meta", {}), "$.meta"))
    conv = meta.get("convention", ANTICOMMUTING)
    if conv not in (ANTICOMMUTING, COMMUTING):
        raise ParseError("$.meta.convention", f"unknown convention {conv!r}")
    payload = data["payload"]
    if kind == "chain":
        obj = chain_from_json(payload)
    elif kind == "graded":
        obj = graded_from_json(payload)
    elif kind == "mixed":
        obj = mixed_from_json(payload, convention=conv)
        if conv != ANTICOMMUTING:
            meta["converted_from"] = conv
    elif kind == "filtered":
        obj = filtered_from_json(payload)
    else:
        obj = _obj(payload, "$.payload")
    meta["convention"] = ANTICOMMUTING
    meta.pop("version", None)
    return Document(kind, obj, meta)


def loads(text: str):
    return parse(text).payload
