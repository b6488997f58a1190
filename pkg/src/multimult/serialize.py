"""Canonical JSON interchange for tables.

Format::

    {"carrier": ["e", "s", ...], "bound": "omega" | n,
     "mu": {"s|t": {"st": 1}, ...}}

Pairs and targets are emitted in carrier order and zero entries are omitted,
so serializing the same table always yields the same bytes.  Multisemigroups
use the same layout with bound 1 and every listed value equal to 1.
"""
from __future__ import annotations

import itertools
import json

import numpy as np

from .errors import FormatError, UnknownElement
from .mms import MultiMultisemigroup, Multisemigroup, StructureConstantAlgebra, underlying_multisemigroup
from .semiring import format_bound, parse_bound


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def mms_to_json(m: MultiMultisemigroup) -> dict:
    return {
        "carrier": list(m.carrier),
        "bound": format_bound(m.bound),
        "mu": {f"{s}|{t}": f for (s, t), f in m.table().items()},
    }


def multisemigroup_to_json(ms: Multisemigroup) -> dict:
    mu = {}
    for s, t in itertools.product(ms.carrier, repeat=2):
        product = ms(s, t)
        if product:
            mu[f"{s}|{t}"] = {r: 1 for r in ms.ordered(product)}
    return {"carrier": list(ms.carrier), "bound": 1, "mu": mu}


def algebra_to_json(alg: StructureConstantAlgebra) -> dict:
    return {
        "basis": list(alg.basis),
        "constants": [[[int(c) for c in row] for row in plane] for plane in np.asarray(alg.constants)],
    }


def _split_pair(key: str) -> tuple[str, str]:
    parts = key.split("|")
    if len(parts) != 2 or not all(parts):
        raise FormatError(f"pair key {key!r} must look like 'left|right'")
    return parts[0], parts[1]


def mms_from_json(obj) -> MultiMultisemigroup:
    if not isinstance(obj, dict):
        raise FormatError("table must be a JSON object")
    missing = {"carrier", "bound"} - obj.keys()
    if missing:
        raise FormatError(f"missing field(s): {', '.join(sorted(missing))}")
    carrier = obj["carrier"]
    if not isinstance(carrier, list) or not all(isinstance(x, str) for x in carrier):
        raise FormatError("'carrier' must be a list of strings")
    try:
        bound = parse_bound(obj["bound"])
    except (TypeError, ValueError) as exc:
        raise FormatError(str(exc)) from None
    mu = obj.get("mu", {})
    if not isinstance(mu, dict):
        raise FormatError("'mu' must be an object")
    table = {}
    for key, values in mu.items():
        if not isinstance(values, dict):
            raise FormatError(f"mu[{key!r}] must be an object")
        table[_split_pair(key)] = values
    try:
        return MultiMultisemigroup.from_table(carrier, bound, table)
    except UnknownElement:
        raise
    except (TypeError, ValueError) as exc:
        raise FormatError(str(exc)) from None


def multisemigroup_from_json(obj) -> Multisemigroup:
    """Read a multisemigroup: every nonzero listed value means membership."""
    return underlying_multisemigroup(mms_from_json(obj))


def loads(text: str):
    return json.loads(text)
