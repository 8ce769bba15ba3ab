"""``verifier``: run the verification scenarios and emit reports."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, suites
from .evmodules import DEFAULT_DEPTH

SCHEMA = "gperfect.report/1"


class Scenario:
    def __init__(self, name, summary, runner, trials=None):
        self.name = name
        self.summary = summary
        self.runner = runner
        self.default_trials = trials


SCENARIOS = {
    s.name: s
    for s in [
        Scenario(
            "example-a",
            "R(M2(F2), UT2(F2)): radicals, regularity, J(R) = 0, non-regular witness, flatness of T over S",
            lambda seed, trials, depth: suites.example_a(seed, trials),
            10**4,
        ),
        Scenario(
            "random-covers",
            "random f.p. modules through g_flat_cover and verify_certificate",
            lambda seed, trials, depth: suites.random_covers(seed, trials, depth),
            100,
        ),
        Scenario(
            "lemma-smallness-brute",
            "eps2(X) + Y = L' forces Y = L', exhaustively over truncation rings",
            lambda seed, trials, depth: suites.lemma_smallness_brute(seed, trials),
            500,
        ),
        Scenario(
            "radical-oracle",
            "jacobson_radical against the quasi-regularity oracle on the algebra battery",
            lambda seed, trials, depth: suites.radical_oracle_suite(),
        ),
        Scenario(
            "ttf-properties",
            "torsion radical additivity and Hom-orthogonality on truncations",
            lambda seed, trials, depth: suites.ttf_properties(seed, trials, max(trials // 2, 1)),
            200,
        ),
        Scenario(
            "ext-shadow",
            "Ext^1 over S against Ext^1 over T^k x S",
            lambda seed, trials, depth: suites.ext_shadow(depth),
        ),
        Scenario(
            "covers-battery",
            "named cover instances with expected dimensions and the non-minimal control",
            lambda seed, trials, depth: suites.covers_battery(seed, depth),
        ),
        Scenario(
            "fd-covers",
            "projective covers over UT2(F2): simples, radicals and random modules",
            lambda seed, trials, depth: suites.fd_covers_suite(seed, trials),
            50,
        ),
    ]
}


class UnknownScenario(KeyError):
    def __str__(self):
        return f"unknown scenario {self.args[0]!r}; registered: {', '.join(SCENARIOS)}"


def run(name, seed=0, trials=None, depth=DEFAULT_DEPTH, timings=False):
    if name not in SCENARIOS:
        raise UnknownScenario(name)
    sc = SCENARIOS[name]
    trials = sc.default_trials if trials is None else trials
    t0 = time.perf_counter()
    records = sc.runner(seed, trials, depth)
    elapsed = time.perf_counter() - t0
    counts = {s: sum(r.status == s for r in records) for s in ("pass", "fail", "skipped")}
    report = {
        "schema": SCHEMA,
        "tool": {"name": "verifier", "version": __version__},
        "scenario": {"name": name, "seed": seed, "trials": trials, "depth": depth},
        "records": [],
        "summary": {
            "total": len(records),
            "passed": counts["pass"],
            "failed": counts["fail"],
            "skipped": counts["skipped"],
            "all_passed": counts["pass"] == len(records),
        },
    }
    for r in records:
        rec = r.to_json()
        if timings:
            rec["duration"] = round(r.duration, 6)
        report["records"].append(rec)
    if timings:
        report["summary"]["duration"] = round(elapsed, 6)
    return report


def _plain(obj):
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not serialisable: {type(obj).__name__}")


def to_json(report):
    return json.dumps(report, sort_keys=True, indent=2, default=_plain) + "\n"


def to_text(report):
    sc = report["scenario"]
    trials = "-" if sc["trials"] is None else sc["trials"]
    lines = [f"scenario {sc['name']} (seed {sc['seed']}, trials {trials}, depth {sc['depth']})"]
    for r in report["records"]:
        extra = f" {r['duration']:.3f}s" if "duration" in r else ""
        lines.append(f"{r['status'].upper():7} {r['name']} [{r['mode']}]{extra}")
    s = report["summary"]
    lines.append(f"{s['passed']}/{s['total']} passed, {s['failed']} failed, {s['skipped']} skipped")
    return "\n".join(lines) + "\n"


def emit(report, fmt="json", path=None):
    text = to_json(report) if fmt == "json" else to_text(report)
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror or exc}") from exc


def _cmd_run(args):
    try:
        report = run(args.scenario, args.seed, args.trials, args.depth, args.timings)
    except UnknownScenario as exc:
        print(f"verifier: {exc}", file=sys.stderr)
        return 2
    try:
        emit(report, args.format, args.out)
    except OSError as exc:
        print(f"verifier: {exc}", file=sys.stderr)
        return 2
    if args.out and args.out != "-":
        print(to_text(report).splitlines()[-1], file=sys.stderr)
    return 0 if report["summary"]["all_passed"] else 1


def _cmd_list(args):
    for name, sc in SCENARIOS.items():
        print(f"{name:24} {sc.summary}")
    return 0


def _cmd_check_files(args):
    from .io import DefinitionError, Loader, describe

    loader = Loader()
    ok = True
    for path in args.paths:
        try:
            info = describe(loader.load(path))
        except DefinitionError as exc:
            ok = False
            print(f"error {exc}")
            continue
        fields = " ".join(f"{k}={v}" for k, v in info.items())
        print(f"ok    {path} {fields}")
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="verifier", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--out", default=None, help="report path (stdout when omitted)")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--timings", action="store_true", help="include durations (reports stop being byte-stable)")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("list", help="list scenarios")
    p.set_defaults(func=_cmd_list)

    p = sub.add_parser("check-files", help="validate algebra/module/ring definition files")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=_cmd_check_files)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", 0) < 0:
        print("verifier: --seed must be non-negative", file=sys.stderr)
        return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
