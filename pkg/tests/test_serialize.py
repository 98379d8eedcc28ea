import json
import random
from pathlib import Path

import pytest

from mixedgraded.chain import ChainComplex
from mixedgraded.errors import InvariantViolation, ParseError
from mixedgraded.generate import GenConfig, gen_random
from mixedgraded.linalg import Matrix
from mixedgraded.mixed import ANTICOMMUTING, COMMUTING, convert_convention, free_mixed
from mixedgraded.serialize import Document, canonical, dumps, loads, parse, serialize

GOLDEN = Path(__file__).resolve().parent.parent / "golden"


@pytest.mark.parametrize("path", sorted(GOLDEN.glob("*.json")), ids=lambda p: p.name)
def test_golden_round_trip(path):
    text = path.read_text(encoding="utf-8")
    assert serialize(parse(text)) == text
    assert canonical(json.loads(text)) == text


@pytest.mark.parametrize("kind", ["chain", "graded", "mixed", "filtered-injective",
                                  "filtered-constant", "filtered-zero"])
def test_random_round_trip(kind):
    rng = random.Random(kind)
    for _ in range(30):
        obj = gen_random(kind, GenConfig(), rng)
        text = dumps(obj)
        again = dumps(loads(text))
        assert again == text


def test_rationals_are_strings():
    c = ChainComplex({0: 1, 1: 1}, {1: Matrix.from_rows([["-3/6"]])})
    data = json.loads(dumps(c))
    assert data["payload"]["diff"]["1"] == [["-1/2"]]


def test_square_violation_names_degree():
    bad = json.loads((GOLDEN / "interval.json").read_text())
    bad["payload"] = {"dims": {"0": 1, "1": 1, "2": 1},
                      "diff": {"1": [["1"]], "2": [["1"]]}}
    with pytest.raises(InvariantViolation) as exc:
        parse(json.dumps(bad))
    assert exc.value.where == "degree 2"


def test_commuting_document_is_converted():
    m = free_mixed(ChainComplex({0: 1, 1: 1}, {1: Matrix.identity(1)}), 0)
    commuting = convert_convention(m, ANTICOMMUTING, COMMUTING)
    text = serialize(Document("mixed", commuting, {"convention": COMMUTING}))
    doc = parse(text)
    assert doc.meta["converted_from"] == COMMUTING
    assert doc.payload == m


def test_commuting_document_invalid_as_anticommuting():
    m = free_mixed(ChainComplex({0: 1, 1: 1}, {1: Matrix.identity(1)}), 0)
    commuting = convert_convention(m, ANTICOMMUTING, COMMUTING)
    data = json.loads(dumps(commuting))
    data["meta"]["convention"] = ANTICOMMUTING
    with pytest.raises(InvariantViolation):
        parse(json.dumps(data))


@pytest.mark.parametrize("text,where", [
    ("{", "line 1"),
    ('{"kind": "chain"}', "$"),
    ('{"kind": "blob", "payload": {}}', "$.kind"),
    ('{"kind": "chain", "base": "Z", "payload": {}}', "$.base"),
    ('{"kind": "chain", "payload": {"dims": {"x": 1}}}', "$.payload.dims"),
    ('{"kind": "chain", "payload": {"dims": {"0": -1}}}', "$.payload.dims.0"),
    ('{"kind": "chain", "payload": {"dims": {"0": 1, "1": 1}, "diff": {"1": [["1", "2"]]}}}',
     "$.payload.diff.1[0]"),
    ('{"kind": "chain", "payload": {"dims": {"0": 1, "1": 1}, "diff": {"1": [["a"]]}}}',
     "$.payload.diff.1[0][0]"),
    ('{"kind": "filtered", "payload": {"window": [1, 0], "above": "zero", "terms": {}}}',
     "$.payload.window"),
    ('{"kind": "filtered", "payload": {"window": [0, 0], "above": "up", "terms": {}}}',
     "$.payload.above"),
    ('{"kind": "mixed", "meta": {"convention": "odd"}, "payload": {"weights": {}}}',
     "$.meta.convention"),
])
def test_parse_errors(text, where):
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert str(exc.value.position).startswith(where)
