"""Acceptance criteria.

Each test prints a single ``PASS``/``FAIL`` line with its runtime and then
asserts both the verdict and the time budget.  Run on its own with
``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""

import json
import time

import pytest

from gperfect import cli, suites
from gperfect.algebra import jacobson_radical, radical_oracle, upper_triangular
from gperfect.modules import ext1, is_right_minimal, projective_cover

SCHEMA = "gperfect.report/1"


def _report(number, title, ok, elapsed, budget, note=""):
    within = elapsed < budget
    verdict = "PASS" if ok and within else "FAIL"
    line = f"\n{verdict} criterion {number}: {title} ({elapsed:.2f}s, budget {budget:g}s)"
    if note:
        line += f" {note}"
    print(line)
    return verdict == "PASS"


def _failed(records):
    return [r.name for r in records if r.status != "pass"]


@pytest.fixture
def report(capsys):
    # the verdict lines belong in the test log, not in captured output
    def emit(*args, **kwargs):
        with capsys.disabled():
            return _report(*args, **kwargs)

    return emit


def test_criterion_1_example_a(report):
    t0 = time.perf_counter()
    records = suites.example_a(seed=42, trials=10**4)
    by_name = {r.name: r for r in records}
    S, _ = upper_triangular(2, 2)
    ok = not _failed(records)
    ok &= by_name["J(S)"].details["dim"] == 1 and by_name["J(S)"].details["basis"] == ["e12"]
    ok &= by_name["J(T)"].details["dim"] == 0
    ok &= by_name["vnr(T)"].details["is_vnr"] and not by_name["vnr(S)"].details["is_vnr"]
    jr = by_name["J(R)=0"].details
    ok &= jr["random_trials"] == 10**4 and jr["random_accepted"] == 0 and jr["family_accepted"] == 0
    ok &= by_name["non-regular constant(e12)"].passed
    ok &= jacobson_radical(S) == radical_oracle(S)
    elapsed = time.perf_counter() - t0
    assert report(1, "example ring verdicts", ok, elapsed, 5, str(_failed(records) or ""))


def test_criterion_2_radical_battery(report):
    t0 = time.perf_counter()
    records = suites.radical_oracle_suite()
    names = {r.name for r in records}
    # the seven base algebras and every same-characteristic pairwise product
    ok = not _failed(records) and len(records) == 29
    ok &= all(r.details["equal"] for r in records)
    ok &= any("UT2(F3)" in n for n in names)
    elapsed = time.perf_counter() - t0
    assert report(2, "radical equals oracle on the battery", ok, elapsed, 30, str(_failed(records) or ""))


def test_criterion_3_projective_covers(report):
    t0 = time.perf_counter()
    records = suites.fd_covers_suite(seed=0, trials=50)
    randoms = [r for r in records if r.name.startswith("cover random")]
    dims = next(r for r in records if r.name == "cover dims").details
    ok = not _failed(records) and len(randoms) == 50
    ok &= all(r.details["dim"] <= 4 for r in randoms)
    ok &= dims == {"P(S1)": 2, "P(S1+S2)": 3}
    S, _ = upper_triangular(2, 2)
    S1, S2 = suites.simples_UT2(S)
    ok &= all(is_right_minimal(projective_cover(M).map) for M in (S1, S2))
    elapsed = time.perf_counter() - t0
    assert report(3, "projective covers over S", ok, elapsed, 10, str(_failed(records) or ""))


def test_criterion_4_pipeline(report):
    t0 = time.perf_counter()
    records = suites.random_covers(seed=0, trials=100, depth=3)
    ok = not _failed(records) and len(records) >= 100
    ok &= all(r.details["dim_identity"] and r.details["depth_stable"] for r in records)
    ok &= all(set(r.details["checks"].values()) == {"pass"} for r in records)
    brute_runs = sum(len(r.details["brute_small_levels"]) for r in records)
    elapsed = time.perf_counter() - t0
    note = f"brute_small levels run: {brute_runs}"
    assert report(4, "G-flat cover certificates on 100 random modules", ok, elapsed, 120, note)


def test_criterion_5_smallness_lemma(report):
    t0 = time.perf_counter()
    records = suites.lemma_smallness_brute(seed=0, trials=500)
    d = records[0].details
    ok = not _failed(records) and d["instances"] == 500 and d["counterexamples"] == 0
    elapsed = time.perf_counter() - t0
    note = f"instances {d['instances']} (X nonzero {d['instances_with_X_nonzero']}), counterexamples {d['counterexamples']}"
    assert report(5, "smallness lemma, exhaustive", ok, elapsed, 120, note)


def test_criterion_6_ttf(report):
    t0 = time.perf_counter()
    records = suites.ttf_properties(seed=0, trials=200, pairs=100)
    counts = {r.name: r.details.get("sequences", r.details.get("pairs")) for r in records}
    ok = not _failed(records) and sorted(counts.values()) == [100, 200]
    elapsed = time.perf_counter() - t0
    assert report(6, "torsion radical additivity and Hom-orthogonality", ok, elapsed, 60, json.dumps(counts, sort_keys=True))


def test_criterion_7_ext_shadow(report):
    t0 = time.perf_counter()
    records = suites.ext_shadow(depth=3)
    S, _ = upper_triangular(2, 2)
    S1, S2 = suites.simples_UT2(S)
    ok = not _failed(records)
    ok &= ext1(S1, S2) == 1 and ext1(S1, S1) == 0
    ok &= ext1(S2, S1) == 0 and ext1(S2, S2) == 0
    elapsed = time.perf_counter() - t0
    assert report(7, "Ext^1 over S matches truncations", ok, elapsed, 10, str(_failed(records) or ""))


def test_criterion_8_minimality_transfer(report):
    t0 = time.perf_counter()
    records = suites.covers_battery(seed=0, depth=3)
    positives = [r for r in records if not r.name.startswith("negative")]
    control = next(r for r in records if r.name.startswith("negative"))
    ok = all(r.passed and r.details["checks"]["C6"] == "pass" for r in positives)
    ok &= control.passed
    ok &= all(control.details["checks"][c] == "pass" for c in ("C1", "C2", "C3", "C4"))
    ok &= control.details["checks"]["C6"] == "fail"
    elapsed = time.perf_counter() - t0
    assert report(8, "minimality transfer and the non-minimal control", ok, elapsed, 30, str(control.details["checks"]))


SMALL_TRIALS = {"random-covers": 10, "lemma-smallness-brute": 40, "ttf-properties": 20, "fd-covers": 10, "example-a": 500}


def test_criterion_9_determinism(report):
    t0 = time.perf_counter()
    differing = []
    for name in cli.SCENARIOS:
        trials = SMALL_TRIALS.get(name)
        a = cli.to_json(cli.run(name, seed=7, trials=trials))
        b = cli.to_json(cli.run(name, seed=7, trials=trials))
        if a != b or json.loads(a)["schema"] != SCHEMA:
            differing.append(name)
    elapsed = time.perf_counter() - t0
    note = f"{len(cli.SCENARIOS)} scenarios" + (f", differing: {differing}" if differing else "")
    assert report(9, "byte-identical reruns of every scenario", not differing, elapsed, 300, note)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
