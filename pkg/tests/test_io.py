import json
from pathlib import Path

import numpy as np
import pytest

from gperfect.algebra import Algebra
from gperfect.evmodules import FpRModule
from gperfect.evring import EvRing
from gperfect.io import DefinitionError, Loader, describe, kind_of, load, write_example
from gperfect.modules import FdModule
from gperfect.suites import example_ring, s1_avatar

DATA = Path(__file__).resolve().parents[1] / "data" / "example_a"


def test_shipped_files_load():
    loader = Loader()
    S = loader.load(DATA / "S.json")
    T = loader.load(DATA / "T.json")
    assert isinstance(S, Algebra) and S.dim == 3 and T.dim == 4
    R = loader.load(DATA / "ring.json")
    assert isinstance(R, EvRing) and R.S is S and R.T is T
    M = loader.load(DATA / "s1_avatar.json")
    assert isinstance(M, FpRModule) and M.ring is R
    assert M.tail_quotient().dim == 1
    S1 = loader.load(DATA / "S1.json")
    assert isinstance(S1, FdModule) and S1.dim == 1 and S1.algebra is S


def test_write_example_round_trip(tmp_path):
    names = write_example(tmp_path)
    assert names == ["S.json", "S1.json", "T.json", "ring.json", "s1_avatar.json"]
    for name in names:
        assert (tmp_path / name).read_text() == (DATA / name).read_text()
    R = load(tmp_path / "ring.json")
    ref = example_ring(2)
    assert np.array_equal(R.iota.matrix, ref.iota.matrix)
    M = load(tmp_path / "s1_avatar.json")
    assert M.presentation.to_json() == s1_avatar(ref).presentation.to_json()


def test_describe():
    assert describe(load(DATA / "S.json")) == {"kind": "algebra", "p": 2, "dim": 3}
    assert describe(load(DATA / "s1_avatar.json"))["kind"] == "fp-module"


def test_kind_of():
    assert kind_of({"mul": []}) == "algebra"
    assert kind_of({"presentation": []}) == "fp-module"
    with pytest.raises(DefinitionError):
        kind_of([])
    with pytest.raises(DefinitionError):
        kind_of({"foo": 1})


def _write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return path


def test_invalid_json(tmp_path):
    path = _write(tmp_path, "broken.json", "{not json")
    with pytest.raises(DefinitionError, match="invalid JSON"):
        load(path)


def test_missing_file(tmp_path):
    with pytest.raises(DefinitionError, match="missing.json"):
        load(tmp_path / "missing.json")


def test_non_associative_algebra(tmp_path):
    mul = np.zeros((2, 2, 2), dtype=int)
    mul[0, 0, 0] = mul[0, 1, 1] = mul[1, 0, 1] = 1
    mul[1, 1] = [1, 1]
    mul[0, 1] = [1, 1]
    path = _write(tmp_path, "A.json", {"p": 2, "dim": 2, "unit": [1, 0], "mul": mul.tolist()})
    with pytest.raises(DefinitionError, match=str(path.name)):
        load(path)


def test_wrong_shape(tmp_path):
    path = _write(tmp_path, "A.json", {"p": 2, "dim": 2, "unit": [1, 0], "mul": [[1]]})
    with pytest.raises(DefinitionError, match="shape"):
        load(path)


def test_bad_prime(tmp_path):
    path = _write(tmp_path, "A.json", {"p": 4, "dim": 1, "unit": [1], "mul": [[[1]]]})
    with pytest.raises(DefinitionError):
        load(path)


def test_module_action_not_a_representation(tmp_path):
    (tmp_path / "S.json").write_text((DATA / "S.json").read_text())
    action = np.zeros((3, 1, 1), dtype=int).tolist()  # the unit acts as 0
    path = _write(tmp_path, "M.json", {"algebra": "S.json", "dim": 1, "action": action})
    with pytest.raises(DefinitionError):
        load(path)


def test_ring_with_non_injective_iota(tmp_path):
    for name in ("S.json", "T.json"):
        (tmp_path / name).write_text((DATA / name).read_text())
    iota = [[1, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]]
    path = _write(tmp_path, "ring.json", {"T": "T.json", "S": "S.json", "iota": iota})
    with pytest.raises(DefinitionError, match="ring.json"):
        load(path)


def test_ragged_presentation(tmp_path):
    for name in ("S.json", "T.json", "ring.json"):
        (tmp_path / name).write_text((DATA / name).read_text())
    one = {"head": [], "tail": [1, 0, 1]}
    path = _write(tmp_path, "N.json", {"ring": "ring.json", "gens": 2, "presentation": [[one], [one, one]]})
    with pytest.raises(DefinitionError, match="ragged"):
        load(path)


def test_broken_reference(tmp_path):
    path = _write(tmp_path, "M.json", {"algebra": "nowhere.json", "dim": 0, "action": []})
    with pytest.raises(DefinitionError, match="nowhere.json"):
        load(path)
