import json

import pytest
from hypothesis import given, settings, strategies as st

from qutrit_witness import io as wio
from qutrit_witness.exceptions import WitnessFileError
from qutrit_witness.feasible import vertex_catalog
from qutrit_witness.operators import OperatorLabel, WitnessCoeffs
from qutrit_witness.presets import named_witnesses
from qutrit_witness.su3 import SQRT3

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=100, deadline=None)
@given(finite, st.dictionaries(st.tuples(st.integers(0, 8), st.integers(1, 8)), finite, max_size=12))
def test_kv_round_trip_is_bit_exact(a0, terms):
    w = WitnessCoeffs(a0, {OperatorLabel(i, j): v for (i, j), v in terms.items()}, name="x")
    back, _ = wio.loads_witness(wio.dumps_witness(w))
    assert back == w and back.labels == w.labels


def test_named_round_trip_with_scale():
    for w in named_witnesses().values():
        back, tag = wio.loads_witness(wio.dumps_witness(w, tag="t"))
        assert back == w and tag == "t"
        jback, _ = wio.witness_from_json(json.loads(json.dumps(wio.witness_to_json(w))))
        assert jback == w
    w = named_witnesses()["eq26"]
    assert any(l.scale == SQRT3 for l in wio.loads_witness(wio.dumps_witness(w))[0].labels)


@pytest.mark.parametrize("text,line", [
    ("format = 1\na0 = 1\nbogus = 2\n", 3),
    ("format = 1\na0 = x\n", 2),
    ("format = 2\na0 = 1\n", 1),
    ("format = 1\na0 = 1\nterm = 1 1\n", 3),
    ("format = 1\na0 = 1\nterm = 1 1 1\nterm = 1 1 2\n", 4),
    ("format = 1\na0 = 1\nterm = 1 1 1 scale=\n", 3),
    ("a0 = 1\n", 1),
])
def test_malformed_files(text, line):
    with pytest.raises(WitnessFileError) as exc:
        wio.loads_witness(text)
    assert exc.value.line == line
    assert str(exc.value).startswith(f"line {line}:")


def test_json_rejects_unknown_fields():
    d = wio.witness_to_json(named_witnesses()["eq14"])
    d["extra"] = 1
    with pytest.raises(WitnessFileError):
        wio.witness_from_json(d)


def test_atomic_write_and_read(tmp_path):
    w = named_witnesses()["eq20"]
    p = tmp_path / "sub" / "w.wit"
    wio.atomic_write(p, wio.dumps_witness(w))
    assert wio.read_witness(p)[0] == w
    assert [q.name for q in p.parent.iterdir()] == ["w.wit"]


def test_vertices_csv():
    text = wio.vertices_csv(vertex_catalog("offdiag-b"))
    lines = text.strip().splitlines()
    assert len(lines) == 22
    assert lines[0].startswith("index,P1,P2")
