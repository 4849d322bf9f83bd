"""JSON schema loaders and deterministic report formatting."""

from __future__ import annotations

import json
import math
from pathlib import Path

from privbound import audit
from privbound.dist import DiscreteDistribution
from privbound.errors import ValidationError


def fmt(x: float) -> str:
    """Shortest round-trip decimal; integral values drop the trailing '.0'."""
    x = float(x)
    if x == 0:
        return "0"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    s = repr(x)
    return s[:-2] if s.endswith(".0") else s


def jsonable(value):
    """Replace non-finite floats with None so output stays strict JSON."""
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {k: jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), allow_nan=False) + "\n"


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc


def load_distribution(path) -> DiscreteDistribution:
    return DiscreteDistribution.from_dict(load_json(path))


def mechanism_from_dict(data: dict) -> audit.Mechanism:
    """Build a mechanism from its JSON description.

    ``kind`` is one of ``{"table": {key: dist}}``,
    ``{"builtin": {"n_of_m_release": {"n": n}}}``,
    ``{"builtin": {"randomized_response": {"flip_prob": f}}}``,
    ``{"builtin": {"table_generator": {"n": n, "table": {key: dist}}}}`` or
    ``{"subsample": {"k": k, "inner": <kind>}}``.
    """
    try:
        universe = tuple(data["universe"])
        m = int(data["m"])
        kind = data["kind"]
        multiset = bool(data.get("multiset_invariant", False))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad mechanism object: {exc}") from exc
    return _build(universe, m, kind, multiset)


def _table(obj) -> dict:
    if not isinstance(obj, dict) or not obj:
        raise ValidationError("mechanism table must be a non-empty object")
    return {k: DiscreteDistribution.from_dict(v) for k, v in obj.items()}


def _build(universe, m, kind, multiset):
    if not isinstance(kind, dict) or len(kind) != 1:
        raise ValidationError("mechanism kind must be an object with exactly one key")
    (tag, body), = kind.items()
    try:
        if tag == "table":
            return audit.table_mechanism(universe, m, _table(body), multiset)
        if tag == "builtin":
            (name, params), = body.items()
            if name == "n_of_m_release":
                return audit.n_of_m_release(universe, m, int(params["n"]))
            if name == "randomized_response":
                return audit.randomized_response(universe, m, float(params["flip_prob"]))
            if name == "table_generator":
                return audit.table_generator(universe, m, _table(params["table"]),
                                             int(params.get("n", 1)), multiset)
            raise ValidationError(f"unknown builtin mechanism {name!r}")
        if tag == "subsample":
            k = int(body["k"])
            inner = _build(universe, k, body["inner"], bool(body.get("multiset_invariant", multiset)))
            return audit.subsample_compose(inner, k, m)
    except ValidationError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ValidationError(f"bad mechanism kind {tag!r}: {exc}") from exc
    raise ValidationError(f"unknown mechanism kind {tag!r}")
