"""JSON definition files for algebras, modules, rings and f.p. modules.

References between files (``"algebra": "S.json"``) are resolved relative to
the referring file.  Loaders re-validate every invariant.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .algebra import Algebra, AlgebraError, AlgebraMap
from .evmodules import PresentationError, fp_module_from_json
from .evring import EvRing
from .modules import FdModule, ModuleError


class DefinitionError(ValueError):
    pass


KINDS = ("algebra", "module", "ring", "fp-module")


def kind_of(data):
    if not isinstance(data, dict):
        raise DefinitionError("definition must be a JSON object")
    if "mul" in data:
        return "algebra"
    if "action" in data:
        return "module"
    if "iota" in data:
        return "ring"
    if "presentation" in data:
        return "fp-module"
    raise DefinitionError("cannot tell the definition kind from its keys")


class Loader:
    """Loads definition files, caching by resolved path so shared refs load once."""

    def __init__(self):
        self._cache = {}

    def load(self, path):
        path = Path(path).resolve()
        if path in self._cache:
            return self._cache[path]
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise DefinitionError(f"{path}: {exc.strerror or exc}") from exc
        except json.JSONDecodeError as exc:
            raise DefinitionError(f"{path}: invalid JSON ({exc})") from exc
        try:
            obj = self._build(kind_of(data), data, path.parent)
        except (AlgebraError, ModuleError, PresentationError, KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DefinitionError) and str(exc).startswith(str(path)):
                raise
            raise DefinitionError(f"{path}: {exc}") from exc
        self._cache[path] = obj
        return obj

    def _ref(self, base, ref):
        return self.load(base / ref)

    def _build(self, kind, data, base):
        if kind == "algebra":
            return algebra_from_json(data)
        if kind == "module":
            A = self._ref(base, data["algebra"])
            return module_from_json(A, data)
        if kind == "ring":
            T = self._ref(base, data["T"])
            S = self._ref(base, data["S"])
            return EvRing(T, S, AlgebraMap(S, T, data["iota"]), name=data.get("name", ""))
        R = self._ref(base, data["ring"])
        return fp_module_from_json(R, data)


def load(path):
    return Loader().load(path)


def algebra_from_json(data):
    p, d = int(data["p"]), int(data["dim"])
    mul = np.asarray(data["mul"], dtype=np.int64)
    if mul.shape != (d, d, d):
        raise DefinitionError(f"mul has shape {mul.shape}, expected {(d, d, d)}")
    return Algebra(p, mul, data["unit"], name=data.get("name", ""), names=data.get("names"))


def module_from_json(A, data):
    m = int(data["dim"])
    action = np.asarray(data["action"], dtype=np.int64)
    if action.shape != (A.dim, m, m):
        raise DefinitionError(f"action has shape {action.shape}, expected {(A.dim, m, m)}")
    return FdModule(A, action, dim=m, name=data.get("name", ""))


def algebra_to_json(A):
    return {"p": A.p, "dim": A.dim, "unit": A.unit.tolist(), "mul": A.mul.tolist(), "name": A.name, "names": list(A.names)}


def module_to_json(M, algebra_ref):
    return {"algebra": algebra_ref, "dim": M.dim, "action": M.action.tolist()}


def ring_to_json(R, T_ref, S_ref):
    return {"T": T_ref, "S": S_ref, "iota": R.iota.matrix.tolist()}


def dump(data, path):
    path = Path(path)
    try:
        path.write_text(json.dumps(data, sort_keys=True, indent=1) + "\n")
    except OSError as exc:
        raise DefinitionError(f"{path}: {exc.strerror or exc}") from exc


def write_example(directory, R=None):
    """Write the ring ``R(M_2(F_2), UT_2(F_2))`` and the S_1 module as definition files."""
    from .suites import example_ring, s1_avatar, simples_UT2

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    R = R or example_ring(2)
    dump(algebra_to_json(R.T), directory / "T.json")
    dump(algebra_to_json(R.S), directory / "S.json")
    dump(ring_to_json(R, "T.json", "S.json"), directory / "ring.json")
    dump(s1_avatar(R).to_json("ring.json"), directory / "s1_avatar.json")
    dump(module_to_json(simples_UT2(R.S)[0], "S.json"), directory / "S1.json")
    return sorted(p.name for p in directory.glob("*.json"))


def describe(obj):
    if isinstance(obj, Algebra):
        return {"kind": "algebra", "p": obj.p, "dim": obj.dim}
    if isinstance(obj, FdModule):
        return {"kind": "module", "dim": obj.dim, "algebra_dim": obj.algebra.dim}
    if isinstance(obj, EvRing):
        return {"kind": "ring", "T_dim": obj.T.dim, "S_dim": obj.S.dim}
    return {"kind": "fp-module", "gens": obj.gens, "relations": obj.presentation.n, "stable_index": obj.stable_index}
