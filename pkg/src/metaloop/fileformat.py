"""JSON files for tables, subsets, factor data, specs, topologies and bases.

Every file is an object ``{"format": 1, "kind": <kind>, ...}``.  Kinds and
their payload fields:

* ``table``: ``order``, ``table`` (rows of indices), optional ``names``
* ``subset``: ``members``
* ``permutation``: ``map``
* ``factors``: optional ``a``/``b`` tables, ``phi``, ``eta``, ``kappa``, ``xi``, ``c``
* ``wreath-spec``: ``d``, ``a`` (members), ``b``, optional ``phi``, ``xi``, ``c1``, ``v``
* ``compose-spec``: ``f1``, ``f2`` (factors with tables), optional ``phi3``, ``eta3``, ``kappa3``, ``xi3``
* ``topology``: ``n``, ``opens``
* ``base``: ``n``, ``families``

Wherever a table is expected, ``{"catalog": name, "params": [...]}`` may
stand in for an explicit table.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .errors import InputError, MetaloopError
from .magma import FiniteBinarySystem

FORMAT_VERSION = 1
KINDS = ("table", "subset", "permutation", "factors", "wreath-spec", "compose-spec", "topology", "base")


def _encode(x, depth: int = 0) -> str:
    # innermost lists stay on one line, so a table is one row per line
    pad = " " * (depth + 1)
    if isinstance(x, dict):
        items = [f"{pad}{json.dumps(k)}: {_encode(x[k], depth + 1)}" for k in sorted(x) if not k.startswith("_")]
        return "{\n" + ",\n".join(items) + "\n" + " " * depth + "}" if items else "{}"
    if isinstance(x, list) and any(isinstance(v, (list, dict)) for v in x):
        return "[\n" + ",\n".join(pad + _encode(v, depth + 1) for v in x) + "\n" + " " * depth + "]"
    return json.dumps(x)


def _dump(obj: dict) -> str:
    return _encode(obj) + "\n"


def envelope(kind: str, **payload) -> dict:
    if kind not in KINDS:
        raise InputError(f"unknown kind {kind!r}")
    return {"format": FORMAT_VERSION, "kind": kind, **payload}


def save(path, obj: dict) -> None:
    Path(path).write_text(_dump(obj))


def dumps(obj: dict) -> str:
    return _dump(obj)


def read(path, kind: str | None = None) -> dict:
    """Parse a file and check the envelope; errors carry line/column or field names."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read: {exc.strerror}") from None
    return parse(text, kind, source=str(path))


def parse(text: str, kind: str | None = None, source: str = "<input>") -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}", (exc.lineno, exc.colno)) from None
    if not isinstance(obj, dict):
        raise InputError(f"{source}: top level must be an object")
    if obj.get("format") != FORMAT_VERSION:
        raise InputError(f"{source}: field 'format' must be {FORMAT_VERSION}, got {obj.get('format')!r}")
    k = obj.get("kind")
    if k not in KINDS:
        raise InputError(f"{source}: field 'kind' must be one of {KINDS}, got {k!r}")
    if kind is not None and k != kind:
        raise InputError(f"{source}: expected kind {kind!r}, got {k!r}")
    obj["_source"] = source
    return obj


def _field(obj: dict, name: str, required: bool = True):
    if name not in obj:
        if required:
            raise InputError(f"{obj.get('_source', '<input>')}: missing field {name!r}")
        return None
    return obj[name]


# tables -----------------------------------------------------------------------

def table_payload(T: FiniteBinarySystem) -> dict:
    d: dict[str, Any] = {"order": T.order, "table": T.table.tolist()}
    if T.names:
        d["names"] = list(T.names)
    return d


def table_to_obj(T: FiniteBinarySystem) -> dict:
    return envelope("table", **table_payload(T))


def table_from_obj(obj: dict, where: str = "", require_latin: bool = False) -> FiniteBinarySystem:
    src = obj.get("_source", "<input>")
    label = f"{src}: field {where!r}" if where else src
    if "catalog" in obj:
        from .catalog import catalog

        params = obj.get("params", [])
        if not isinstance(params, list):
            raise InputError(f"{label}: 'params' must be a list")
        return catalog(obj["catalog"], *params)
    table = obj.get("table")
    if table is None:
        raise InputError(f"{label}: missing field 'table'")
    if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
        raise InputError(f"{label}: 'table' must be a list of rows")
    order = obj.get("order", len(table))
    if order != len(table):
        raise InputError(f"{label}: 'order' is {order} but the table has {len(table)} rows")
    for i, row in enumerate(table):
        if len(row) != order:
            raise InputError(f"{label}: table row {i} has {len(row)} entries, expected {order}", i)
        for j, x in enumerate(row):
            if not isinstance(x, int) or isinstance(x, bool):
                raise InputError(f"{label}: table[{i}][{j}] = {x!r} is not an integer", (i, j))
    try:
        T = FiniteBinarySystem(table, obj.get("names"))
    except InputError as exc:
        raise InputError(f"{label}: {exc}", exc.witness) from None
    if require_latin and not T.is_latin:
        from .magma import latin_violation

        raise InputError(f"{label}: not a Latin square", latin_violation(T))
    return T


def load_table(path, require_latin: bool = False) -> FiniteBinarySystem:
    return table_from_obj(read(path, "table"), require_latin=require_latin)


def save_table(path, T: FiniteBinarySystem) -> None:
    save(path, table_to_obj(T))


def _nested(obj: dict, name: str):
    sub = obj[name]
    if isinstance(sub, dict):
        sub = dict(sub)
        sub.setdefault("_source", obj.get("_source", "<input>"))
    return sub


# subsets and permutations -------------------------------------------------------

def _index_list(x, label: str, n: int | None = None) -> list[int]:
    if not isinstance(x, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in x):
        raise InputError(f"{label}: expected a list of integers")
    if n is not None:
        for k, v in enumerate(x):
            if not 0 <= v < n:
                raise InputError(f"{label}[{k}] = {v} is out of range for order {n}", k)
    return x


def load_subset(path, T: FiniteBinarySystem | None = None) -> list[int]:
    """Members as indices of T; follows the identity relabelling applied to T on load."""
    obj = read(path, "subset")
    ms = _index_list(_field(obj, "members"), f"{obj['_source']}: field 'members'", T.order if T else None)
    if T is not None:
        ms = [T.relabel[m] for m in ms]
    return sorted(set(ms))


def subset_to_obj(members) -> dict:
    return envelope("subset", members=sorted(int(m) for m in members))


def load_permutation(path, n: int | None = None) -> list[int]:
    obj = read(path, "permutation")
    return _index_list(_field(obj, "map"), f"{obj['_source']}: field 'map'", n)


def permutation_to_obj(p) -> dict:
    return envelope("permutation", map=[int(x) for x in p])


# factor data and specs ------------------------------------------------------------

def _array(obj: dict, name: str):
    x = obj.get(name)
    if x is None:
        return None
    try:
        return np.array(x, dtype=np.int64)
    except (TypeError, ValueError):
        raise InputError(f"{obj.get('_source', '<input>')}: field {name!r} is not a rectangular integer array") from None


def factors_from_obj(obj: dict, A: FiniteBinarySystem | None = None, B: FiniteBinarySystem | None = None):
    from .products import SmashingFactors

    src = obj.get("_source", "<input>")
    if A is None:
        if "a" not in obj:
            raise InputError(f"{src}: factors need table 'a' (in the file or on the command line)")
        A = table_from_obj(_nested(obj, "a"), "a")
    if B is None:
        if "b" not in obj:
            raise InputError(f"{src}: factors need table 'b' (in the file or on the command line)")
        B = table_from_obj(_nested(obj, "b"), "b")
    C = obj.get("c")
    if C is not None:
        C = _index_list(C, f"{src}: field 'c'", B.order)
    try:
        return SmashingFactors(A, B, _array(obj, "phi"), _array(obj, "eta"), _array(obj, "kappa"),
                               _array(obj, "xi"), C)
    except InputError as exc:
        raise InputError(f"{src}: {exc}", exc.witness) from None


def factors_to_obj(F, with_tables: bool = True) -> dict:
    d = {"phi": F.phi.tolist(), "eta": F.eta.tolist(), "kappa": F.kappa.tolist(),
         "xi": F.xi.tolist(), "c": list(F.C.members)}
    if with_tables:
        d["a"] = table_payload(F.A)
        d["b"] = table_payload(F.B)
    return envelope("factors", **d)


def load_factors(path, A=None, B=None):
    return factors_from_obj(read(path, "factors"), A, B)


def wreath_spec_from_obj(obj: dict):
    from .wreath import WreathSpec

    src = obj.get("_source", "<input>")
    D = table_from_obj(_nested(obj, "d"), "d") if "d" in obj else None
    B = table_from_obj(_nested(obj, "b"), "b") if "b" in obj else None
    if D is None or B is None:
        raise InputError(f"{src}: wreath-spec needs tables 'd' and 'b'")
    A = _index_list(_field(obj, "a"), f"{src}: field 'a'", D.order)
    c1 = obj.get("c1")
    v = obj.get("v")
    return WreathSpec(
        D, A, B, _array(obj, "phi"), _array(obj, "xi"),
        _index_list(c1, f"{src}: field 'c1'", B.order) if c1 is not None else None,
        _index_list(v, f"{src}: field 'v'", D.order) if v is not None else None,
    )


def wreath_spec_to_obj(spec) -> dict:
    d: dict[str, Any] = {"d": table_payload(spec.D), "a": [int(x) for x in spec.A], "b": table_payload(spec.B)}
    for name in ("phi", "xi"):
        val = getattr(spec, name)
        if val is not None:
            d[name] = np.asarray(val).tolist()
    if spec.C1 is not None:
        d["c1"] = [int(x) for x in spec.C1]
    if spec.V is not None:
        d["v"] = [int(x) for x in spec.V]
    return envelope("wreath-spec", **d)


def load_wreath_spec(path):
    return wreath_spec_from_obj(read(path, "wreath-spec"))


def compose_spec_from_obj(obj: dict) -> dict:
    src = obj.get("_source", "<input>")
    out = {}
    for name in ("f1", "f2"):
        sub = _field(obj, name)
        if not isinstance(sub, dict):
            raise InputError(f"{src}: field {name!r} must be a factors object")
        sub = dict(sub)
        sub["_source"] = f"{src}#{name}"
        out[name] = factors_from_obj(sub)
    for name in ("phi3", "eta3", "kappa3", "xi3"):
        out[name] = _array(obj, name)
    return out


def load_compose_spec(path) -> dict:
    return compose_spec_from_obj(read(path, "compose-spec"))


# topologies and bases ---------------------------------------------------------------

def load_topology(path):
    from .topology import FiniteTopology

    obj = read(path, "topology")
    src = obj["_source"]
    n = _field(obj, "n")
    opens = _field(obj, "opens")
    if not isinstance(opens, list):
        raise InputError(f"{src}: field 'opens' must be a list of index lists")
    sets = [_index_list(U, f"{src}: field 'opens'[{k}]", n) for k, U in enumerate(opens)]
    try:
        return FiniteTopology(n, sets)
    except InputError as exc:
        raise InputError(f"{src}: {exc}", exc.witness) from None


def topology_to_obj(T) -> dict:
    return envelope("topology", n=T.n, opens=T.as_lists())


def load_base(path):
    from .topology import BaseFamily

    obj = read(path, "base")
    src = obj["_source"]
    n = _field(obj, "n")
    fams = _field(obj, "families")
    if not isinstance(fams, list):
        raise InputError(f"{src}: field 'families' must be a list (one family per element)")
    parsed = []
    for g, fam in enumerate(fams):
        if not isinstance(fam, list):
            raise InputError(f"{src}: field 'families'[{g}] must be a list of index lists")
        parsed.append([_index_list(U, f"{src}: field 'families'[{g}][{k}]", n) for k, U in enumerate(fam)])
    return BaseFamily(n, parsed)


def base_to_obj(B) -> dict:
    return envelope("base", n=B.n, families=B.as_lists())


__all__ = [
    "FORMAT_VERSION", "KINDS", "MetaloopError", "read", "parse", "save", "dumps", "envelope",
    "load_table", "save_table", "table_to_obj", "table_from_obj", "load_subset", "subset_to_obj",
    "load_permutation", "permutation_to_obj", "load_factors", "factors_to_obj", "factors_from_obj",
    "load_wreath_spec", "wreath_spec_to_obj", "load_compose_spec", "compose_spec_from_obj",
    "load_topology", "topology_to_obj", "load_base", "base_to_obj",
]
