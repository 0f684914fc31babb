from fractions import Fraction as F
import json

import pytest
from hypothesis import given

from seqspace.errors import SchemaError
from seqspace.rearrange import FiniteInjection, FinitePermutation, IndexSet, Named
from seqspace.sequences import Blocks, Finite, harmonic
from seqspace.serialize import (
    SCHEMA,
    digest,
    dumps,
    indexset_from_json,
    indexset_to_json,
    loads_sequence,
    map_from_json,
    map_to_json,
    parse_psi_text,
    parse_space_text,
    psi_from_json,
    psi_to_json,
    seq_from_json,
    seq_to_json,
    space_from_json,
    space_to_json,
)
from seqspace.spaces import Garling, Linf, LogBase, Lp, Marcinkiewicz, Table, WeightedL1

from test_sequences import sequences


@given(sequences())
def test_sequence_round_trip(x):
    d = seq_to_json(x)
    assert seq_from_json(json.loads(json.dumps(d))) == x


def test_no_float_literals():
    text = dumps({"x": seq_to_json(Blocks(((F(1, 3), 10**40),), F(1, 10)))})
    assert '"1/3"' in text and '"0.1"' in text and str(10**40) in text
    doc = json.loads(text, parse_float=lambda s: pytest.fail(f"float literal {s}"))
    assert doc["schema"] == SCHEMA and list(doc)[0] == "schema"


def test_dense_finite_values_accepted():
    x = seq_from_json({"kind": "finite", "values": ["1", "0", "1/2"]})
    assert x == Finite(((1, 1), (3, F(1, 2))))


@pytest.mark.parametrize("obj,path", [
    ({"kind": "finite", "entries": [[1, "a"]]}, "$.entries[0][1]"),
    ({"kind": "finite", "entries": [[2, "1"], [1, "1"]]}, "$.entries[1][0]"),
    ({"kind": "blocks", "blocks": [["1", "0"]]}, "$.blocks[0][1]"),
    ({"kind": "blocks", "blocks": [], "tail": "one"}, "$.tail"),
    ({"kind": "periodic", "pattern": []}, "$.pattern"),
    ({"kind": "catalog", "name": "zeta"}, "$.name"),
    ({"kind": "spiral"}, "$.kind"),
    ({"values": []}, "$.kind"),
])
def test_schema_errors_point_at_field(obj, path):
    with pytest.raises(SchemaError) as exc:
        seq_from_json(obj)
    assert exc.value.path == path


def test_float_values_rejected():
    with pytest.raises(SchemaError):
        seq_from_json({"kind": "finite", "entries": [[1, 0.5]]})


def test_loads_sequence_accepts_cli_payload():
    payload = dumps({"sequence": seq_to_json(harmonic())})
    assert loads_sequence(payload) == harmonic()
    with pytest.raises(SchemaError):
        loads_sequence("{not json")


@pytest.mark.parametrize("pi", [FinitePermutation((2, 1, 3)), FiniteInjection(((1, 4), (2, 2))), Named("shift", 3), Named("dilation2")])
def test_map_round_trip(pi):
    assert map_from_json(map_to_json(pi)) == pi


@pytest.mark.parametrize("I", [IndexSet("evens"), IndexSet("explicit", (1, 5)), IndexSet("complement", (2,))])
def test_indexset_round_trip(I):
    assert indexset_from_json(indexset_to_json(I)) == I


@pytest.mark.parametrize("psi", [LogBase(F(2)), LogBase("e"), LogBase(F(3, 2)), Table((1, 2, 3))])
def test_psi_round_trip(psi):
    assert psi_from_json(psi_to_json(psi)) == psi


def test_psi_text():
    assert parse_psi_text("log2") == LogBase(F(2))
    assert parse_psi_text("loge") == LogBase("e")
    assert parse_psi_text("log:3/2") == LogBase(F(3, 2))
    with pytest.raises(SchemaError):
        parse_psi_text("sqrt")


@pytest.mark.parametrize("text,space", [
    ("lp:2", Lp(F(2))), ("linf", Linf()), ("garling", Garling()),
    ("marcinkiewicz:log2", Marcinkiewicz(LogBase(F(2)))),
])
def test_space_text_and_round_trip(text, space):
    assert parse_space_text(text) == space
    assert space_from_json(space_to_json(space)) == space


def test_wl1_shorthand():
    s = parse_space_text("wl1")
    assert isinstance(s, WeightedL1) and s.weights.term(1) == F(1, 2)
    assert space_from_json(space_to_json(s)) == s
    with pytest.raises(SchemaError):
        parse_space_text("lq:2")


def test_digest_is_stable():
    assert digest(seq_to_json(harmonic())) == digest(seq_to_json(harmonic()))
    assert digest(seq_to_json(harmonic())) != digest(seq_to_json(Finite.from_list([1])))
