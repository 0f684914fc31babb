"""JSON encodings.

Scalars are always strings: plain decimals when the rational terminates,
``"p/q"`` otherwise, so every payload round-trips exactly.  Enclosures are
pairs of decimal strings rounded outward at the working precision.  Top-level
documents carry ``"schema": "seqspace/1"``.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any

from .errors import SchemaError
from .rearrange import FiniteInjection, FinitePermutation, IndexSet, InjectionSpec, Named
from .scalar import Interval, format_directed, format_fraction, get_digits, interval_to_strings
from .sequences import Blocks, Catalog, Finite, Periodic, Sequence
from .spaces import Garling, Linf, LogBase, Lp, Marcinkiewicz, NormResult, PsiSpec, SpaceSpec, Table, WeightedL1

SCHEMA = "seqspace/1"

# ---------------------------------------------------------------------------
# helpers


def _scalar(obj, path: str) -> Fraction:
    if not isinstance(obj, str):
        raise SchemaError(path, f"expected a decimal string, got {type(obj).__name__}")
    try:
        return Fraction(obj.strip())
    except (ValueError, ZeroDivisionError):
        raise SchemaError(path, f"not a rational literal: {obj!r}") from None


def _count(obj, path: str) -> int:
    if isinstance(obj, bool):
        raise SchemaError(path, "expected a positive integer")
    if isinstance(obj, int):
        n = obj
    elif isinstance(obj, str) and obj.strip().isdigit():
        n = int(obj.strip())
    else:
        raise SchemaError(path, f"expected a positive integer string, got {obj!r}")
    if n < 1:
        raise SchemaError(path, "must be at least 1")
    return n


def _int(obj, path: str, minimum: int = 1) -> int:
    if isinstance(obj, bool) or not isinstance(obj, (int, str)):
        raise SchemaError(path, "expected an integer")
    try:
        n = int(obj)
    except ValueError:
        raise SchemaError(path, f"expected an integer, got {obj!r}") from None
    if n < minimum:
        raise SchemaError(path, f"must be at least {minimum}")
    return n


def _obj(obj, path: str) -> dict:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    return obj


def _list(obj, path: str) -> list:
    if not isinstance(obj, list):
        raise SchemaError(path, "expected an array")
    return obj


def _field(d: dict, key: str, path: str):
    if key not in d:
        raise SchemaError(f"{path}.{key}", "missing field")
    return d[key]


def fmt(q) -> str:
    return format_fraction(q)


def interval_json(iv: Interval, digits: int | None = None) -> list[str]:
    return interval_to_strings(iv, digits)


def value_json(v, digits: int | None = None) -> Any:
    """Fractions as exact strings, intervals as ``[lo, hi]``."""
    if isinstance(v, Interval):
        return interval_json(v, digits)
    if isinstance(v, (Fraction, int)):
        return fmt(v)
    return v


# ---------------------------------------------------------------------------
# sequences


def seq_to_json(x: Sequence) -> dict:
    if isinstance(x, Finite):
        return {"kind": "finite", "entries": [[i, fmt(v)] for i, v in x.entries]}
    if isinstance(x, Blocks):
        tail = "zero" if x.tail == 0 else ["const", fmt(x.tail)]
        return {"kind": "blocks", "blocks": [[fmt(v), str(c)] for v, c in x.blocks], "tail": tail}
    if isinstance(x, Periodic):
        d: dict = {"kind": "periodic", "pattern": [fmt(v) for v in x.pattern]}
        if x.prefix_values:
            d["prefix"] = [fmt(v) for v in x.prefix_values]
        return d
    if isinstance(x, Catalog):
        d = {"kind": "catalog", "name": x.name}
        if (x.coef, x.a, x.b) != (1, 1, 0):
            d.update(coef=fmt(x.coef), a=x.a, b=x.b)
        if x.patch:
            d["patch"] = [[i, fmt(v)] for i, v in x.patch]
        return d
    raise TypeError(f"unknown sequence kind {type(x).__name__}")


def seq_from_json(obj, path: str = "$") -> Sequence:
    d = _obj(obj, path)
    kind = _field(d, "kind", path)
    try:
        if kind == "finite":
            if "values" in d and "entries" not in d:
                vals = _list(d["values"], f"{path}.values")
                dense = [_scalar(v, f"{path}.values[{i}]") for i, v in enumerate(vals)]
                return Finite(tuple((i, v) for i, v in enumerate(dense, start=1) if v != 0))
            entries = []
            for i, e in enumerate(_list(_field(d, "entries", path), f"{path}.entries")):
                p = f"{path}.entries[{i}]"
                if not isinstance(e, list) or len(e) != 2:
                    raise SchemaError(p, "expected [index, \"value\"]")
                idx = _int(e[0], f"{p}[0]")
                if entries and idx <= entries[-1][0]:
                    raise SchemaError(f"{p}[0]", "indices must be strictly increasing")
                v = _scalar(e[1], f"{p}[1]")
                if v == 0:
                    raise SchemaError(f"{p}[1]", "finite entries must be non-zero")
                entries.append((idx, v))
            return Finite(tuple(entries))
        if kind == "blocks":
            blocks = []
            for i, b in enumerate(_list(_field(d, "blocks", path), f"{path}.blocks")):
                p = f"{path}.blocks[{i}]"
                if not isinstance(b, list) or len(b) != 2:
                    raise SchemaError(p, "expected [\"value\", \"count\"]")
                blocks.append((_scalar(b[0], f"{p}[0]"), _count(b[1], f"{p}[1]")))
            tail = d.get("tail", "zero")
            if tail == "zero":
                t = Fraction(0)
            elif isinstance(tail, list) and len(tail) == 2 and tail[0] == "const":
                t = _scalar(tail[1], f"{path}.tail[1]")
            else:
                raise SchemaError(f"{path}.tail", "expected \"zero\" or [\"const\", \"value\"]")
            return Blocks(tuple(blocks), t)
        if kind == "periodic":
            pat = _list(_field(d, "pattern", path), f"{path}.pattern")
            if not pat:
                raise SchemaError(f"{path}.pattern", "must be non-empty")
            pattern = tuple(_scalar(v, f"{path}.pattern[{i}]") for i, v in enumerate(pat))
            pre = _list(d.get("prefix", []), f"{path}.prefix")
            prefix = tuple(_scalar(v, f"{path}.prefix[{i}]") for i, v in enumerate(pre))
            return Periodic(pattern, prefix)
        if kind == "catalog":
            name = _field(d, "name", path)
            if name != "harmonic":
                raise SchemaError(f"{path}.name", f"unknown catalog sequence {name!r}")
            coef = _scalar(d.get("coef", "1"), f"{path}.coef")
            a = _int(d.get("a", 1), f"{path}.a")
            b = _int(d.get("b", 0), f"{path}.b", minimum=-(10**18))
            patch = []
            for i, e in enumerate(_list(d.get("patch", []), f"{path}.patch")):
                p = f"{path}.patch[{i}]"
                if not isinstance(e, list) or len(e) != 2:
                    raise SchemaError(p, "expected [index, \"value\"]")
                patch.append((_int(e[0], f"{p}[0]"), _scalar(e[1], f"{p}[1]")))
            if coef == 0:
                raise SchemaError(f"{path}.coef", "must be non-zero")
            return Catalog(name, coef, a, b, tuple(patch))
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None
    raise SchemaError(f"{path}.kind", f"unknown sequence kind {kind!r}")


def digest(obj) -> str:
    """Short stable digest of a JSON-able value (for failure reports)."""
    if isinstance(obj, Sequence):
        obj = seq_to_json(obj)
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# maps and index sets


def map_to_json(pi: InjectionSpec) -> dict:
    if isinstance(pi, FinitePermutation):
        return {"map": "permutation", "values": list(pi.mapping)}
    if isinstance(pi, FiniteInjection):
        return {"map": "injection", "pairs": [list(p) for p in pi.pairs]}
    d = {"map": pi.name}
    if pi.name == "shift":
        d["k"] = pi.k
    return d


def map_from_json(obj, path: str = "$") -> InjectionSpec:
    d = _obj(obj, path)
    name = _field(d, "map", path)
    try:
        if name == "permutation":
            vals = _list(_field(d, "values", path), f"{path}.values")
            return FinitePermutation(tuple(_int(v, f"{path}.values[{i}]") for i, v in enumerate(vals)))
        if name == "injection":
            pairs = _list(_field(d, "pairs", path), f"{path}.pairs")
            out = []
            for i, p in enumerate(pairs):
                if not isinstance(p, list) or len(p) != 2:
                    raise SchemaError(f"{path}.pairs[{i}]", "expected [n, pi(n)]")
                out.append((_int(p[0], f"{path}.pairs[{i}][0]"), _int(p[1], f"{path}.pairs[{i}][1]")))
            return FiniteInjection(tuple(out))
        if name == "shift":
            return Named("shift", _int(d.get("k", 1), f"{path}.k", minimum=0))
        return Named(name)
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


def indexset_to_json(I: IndexSet) -> dict:
    d = {"set": I.kind}
    if I.kind in ("explicit", "complement"):
        d["members"] = list(I.members)
    return d


def indexset_from_json(obj, path: str = "$") -> IndexSet:
    d = _obj(obj, path)
    kind = _field(d, "set", path)
    if kind not in ("explicit", "evens", "odds", "complement"):
        raise SchemaError(f"{path}.set", f"unknown index set {kind!r}")
    members = _list(d.get("members", []), f"{path}.members")
    return IndexSet(kind, tuple(_int(m, f"{path}.members[{i}]") for i, m in enumerate(members)))


# ---------------------------------------------------------------------------
# Psi and spaces


def psi_to_json(psi: PsiSpec) -> dict:
    if isinstance(psi, LogBase):
        return {"family": "log", "base": "e" if psi.base == "e" else fmt(psi.base)}
    return {"family": "table", "values": [fmt(v) for v in psi.values]}


def psi_from_json(obj, path: str = "$") -> PsiSpec:
    d = _obj(obj, path)
    fam = _field(d, "family", path)
    try:
        if fam == "log":
            base = d.get("base", "2")
            if base == "e":
                return LogBase("e")
            return LogBase(_scalar(base, f"{path}.base"))
        if fam == "table":
            vals = _list(_field(d, "values", path), f"{path}.values")
            return Table(tuple(_scalar(v, f"{path}.values[{i}]") for i, v in enumerate(vals)))
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None
    raise SchemaError(f"{path}.family", f"unknown Psi family {fam!r}")


def parse_psi_text(text: str) -> PsiSpec:
    """``log2``, ``loge``, ``log:3/2`` or a JSON object."""
    t = text.strip()
    if t.startswith("{"):
        return psi_from_json(json.loads(t))
    if t.startswith("log"):
        base = t[3:].lstrip(":") or "2"
        return LogBase("e" if base == "e" else Fraction(base))
    raise SchemaError("$", f"unknown Psi {text!r}")


def space_to_json(space: SpaceSpec) -> dict:
    if isinstance(space, Lp):
        return {"space": "lp", "p": fmt(space.p)}
    if isinstance(space, Linf):
        return {"space": "linf"}
    if isinstance(space, WeightedL1):
        return {"space": "wl1", "weights": seq_to_json(space.weights)}
    if isinstance(space, Marcinkiewicz):
        return {"space": "marcinkiewicz", "psi": psi_to_json(space.psi)}
    return {"space": "garling"}


def space_from_json(obj, path: str = "$") -> SpaceSpec:
    d = _obj(obj, path)
    name = _field(d, "space", path)
    try:
        if name == "lp":
            return Lp(_scalar(_field(d, "p", path), f"{path}.p"))
        if name == "linf":
            return Linf()
        if name == "wl1":
            return WeightedL1(seq_from_json(_field(d, "weights", path), f"{path}.weights"))
        if name == "marcinkiewicz":
            return Marcinkiewicz(psi_from_json(d.get("psi", {"family": "log", "base": "2"}), f"{path}.psi"))
        if name == "garling":
            return Garling()
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None
    raise SchemaError(f"{path}.space", f"unknown space {name!r}")


def parse_space_text(text: str) -> SpaceSpec:
    """Shorthands ``lp:2``, ``linf``, ``wl1`` (weights 1/2, 1, 1, ...), ``marcinkiewicz:log2``,
    ``garling``, or a JSON object."""
    t = text.strip()
    if t.startswith("{"):
        return space_from_json(json.loads(t))
    head, _, arg = t.partition(":")
    try:
        if head == "lp":
            return Lp(Fraction(arg or "1"))
        if head == "linf":
            return Linf()
        if head == "wl1":
            from .witnesses import weighted_l1_weights

            return WeightedL1(weighted_l1_weights())
        if head in ("marcinkiewicz", "m"):
            return Marcinkiewicz(parse_psi_text(arg or "log2"))
        if head in ("garling", "g"):
            return Garling()
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError("$", f"bad space {text!r}: {exc}") from None
    raise SchemaError("$", f"unknown space {text!r}")


def norm_to_json(r: NormResult, digits: int | None = None) -> dict:
    d = {
        "schema": SCHEMA,
        "space": r.space,
        "value": ["inf", "inf"] if r.divergent else interval_json(r.value, digits),
        "exact": r.exact,
        "divergent": r.divergent,
        "certificate": r.certificate,
    }
    if r.exact:
        d["exact_value"] = fmt(r.exact_value)
    return d


# ---------------------------------------------------------------------------
# estimators


def estimator_from_json(obj, path: str = "$"):
    from .limits import EstimatorSpec

    d = _obj(obj, path)
    try:
        return EstimatorSpec(
            method=d.get("method", "cesaro"),
            window=_int(d.get("window", 1000), f"{path}.window"),
            offset=_int(d.get("offset", 0), f"{path}.offset", minimum=0),
            depth=_int(d.get("depth", 1), f"{path}.depth"),
            stages=_int(d.get("stages", 0), f"{path}.stages", minimum=0),
            pieces=_int(d.get("pieces", 2), f"{path}.pieces"),
            use_certificate=bool(d.get("use_certificate", True)),
        )
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


def limit_to_json(e, digits: int | None = None) -> dict:
    d = {
        "schema": SCHEMA,
        "value": fmt(e.value) if e.exact else interval_json(e.enclosure, digits),
        "interval": interval_json(e.interval, digits),
        "exact": e.exact,
        "certified": e.certified,
        "method": e.method,
    }
    meta = {k: v for k, v in e.metadata.items() if not hasattr(v, "interval")}
    if meta:
        d["metadata"] = jsonable(meta, digits)
    return d


def jsonable(obj, digits: int | None = None):
    """Recursively convert report structures to JSON-safe values."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) >= 1 << 53 else obj
    if isinstance(obj, (Fraction, Interval)):
        return value_json(obj, digits)
    if isinstance(obj, NormResult):
        return norm_to_json(obj, digits)
    if isinstance(obj, Sequence):
        return seq_to_json(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v, digits) for v in obj]
    if hasattr(obj, "interval") and hasattr(obj, "enclosure"):
        return limit_to_json(obj, digits)
    if isinstance(obj, float):
        return format_directed(Fraction(obj), 17, up=False)
    return str(obj)


def dumps(doc: dict) -> str:
    """Deterministic JSON text with the schema tag first."""
    out = {"schema": SCHEMA}
    out.update({k: v for k, v in doc.items() if k != "schema"})
    return json.dumps(out, indent=2, sort_keys=False) + "\n"


def loads_sequence(text: str, path: str = "$") -> Sequence:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(path, f"invalid JSON: {exc.msg} at line {exc.lineno}") from None
    if isinstance(obj, dict) and "sequence" in obj and "kind" not in obj:
        return seq_from_json(obj["sequence"], f"{path}.sequence")
    return seq_from_json(obj, path)


def precision_tag() -> dict:
    return {"precision": get_digits()}
