"""Finitely presented modules over the sequence ring and their flat covers.

A module is the cokernel of an ``m x n`` presentation matrix acting on
columns, ``R^n -> R^m``.  Everything is read off from finite data:

* the slot-``i`` component ``N e_i`` is a cokernel over ``T``; beyond the
  stable index every component is the same generic one;
* the tail quotient ``N / NI = N (x)_R S`` is a cokernel over ``S``;
* the truncation at level ``k`` is the base change along ``R -> T^k x S``.

The G-flat cover of ``N`` is the pullback of ``N -> N/NI`` along a
projective cover ``L -> N/NI`` over ``S``.  :func:`g_flat_cover` builds it
and :func:`verify_certificate` re-checks it on truncations.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from . import linalg as la
from .algebra import is_von_neumann_regular, projection
from .evring import EvElement, EvRing, element_from_json
from .modules import (
    FdModule,
    ModuleMap,
    QuotientData,
    Submodule,
    block,
    brute_small,
    fp_module,
    pullback,
    is_projective,
    is_small,
    projective_cover,
    radical_submodule,
    restrict,
    right_minimality,
    BRUTE_MAX_DIM,
    ENDO_SAMPLES,
    EXHAUSTIVE_ENDO_POINTS,
    _scan_endomorphisms,
)

DEFAULT_DEPTH = 3


class PresentationError(ValueError):
    pass


class EvMatrix:
    """``m x n`` matrix over the sequence ring."""

    def __init__(self, ring: EvRing, entries):
        rows = [list(r) for r in entries]
        m = len(rows)
        n = len(rows[0]) if rows else 0
        if any(len(r) != n for r in rows):
            raise PresentationError("ragged presentation matrix")
        for r in rows:
            for a in r:
                if not isinstance(a, EvElement) or a.ring is not ring:
                    raise PresentationError("entries must be elements of the ring")
        self.ring = ring
        self.m = m
        self.n = n
        self.entries = tuple(tuple(r) for r in rows)

    @property
    def stable_index(self):
        return max((a.length for r in self.entries for a in r), default=0)

    def _stack(self, fn, width):
        out = np.zeros((self.m, self.n, width), dtype=np.int64)
        for i, r in enumerate(self.entries):
            for j, a in enumerate(r):
                out[i, j] = fn(a)
        return out

    def slot(self, i):
        return self._stack(lambda a: a.slot_coords(i), self.ring.T.dim)

    def tail(self):
        return self._stack(lambda a: a.tail, self.ring.S.dim)

    def rho(self, k):
        Rk = self.ring.truncation(k)
        return self._stack(Rk.rho_coords, Rk.algebra.dim)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def to_json(self):
        return [[a.to_json() for a in r] for r in self.entries]

    def __eq__(self, other):
        return isinstance(other, EvMatrix) and other.ring is self.ring and other.entries == self.entries

    __hash__ = None


class FpRModule:
    def __init__(self, ring: EvRing, presentation, gens=None, name=""):
        if not isinstance(presentation, EvMatrix):
            presentation = EvMatrix(ring, presentation)
        if presentation.m == 0:
            if gens is None:
                raise PresentationError("an empty presentation needs an explicit number of generators")
        elif gens is not None and gens != presentation.m:
            raise PresentationError("presentation rows must match the number of generators")
        self.ring = ring
        self.presentation = presentation
        self.gens = presentation.m or gens
        self.name = name
        self._components = {}

    def __repr__(self):
        label = self.name or f"coker {self.presentation.m}x{self.presentation.n}"
        return f"FpRModule({label} over {self.ring.name})"

    @property
    def stable_index(self):
        return self.presentation.stable_index

    def _entries(self, stack, width):
        # an empty presentation still needs the right number of generators
        if self.presentation.n == 0:
            return np.zeros((self.gens, 0, width), dtype=np.int64)
        return stack()

    def component_data(self, i) -> QuotientData:
        if i < 1:
            raise ValueError("slots are numbered from 1")
        key = min(i, self.stable_index + 1)
        if key not in self._components:
            T = self.ring.T
            E = self._entries(lambda: self.presentation.slot(key), T.dim)
            self._components[key] = fp_module(T, E)
        return self._components[key]

    def component(self, i) -> FdModule:
        return self.component_data(i).module

    @property
    def generic_component(self):
        return self.component(self.stable_index + 1)

    @cached_property
    def tail_data(self) -> QuotientData:
        S = self.ring.S
        return fp_module(S, self._entries(self.presentation.tail, S.dim))

    def tail_quotient(self) -> FdModule:
        return self.tail_data.module

    def truncate_data(self, k) -> QuotientData:
        key = ("trunc", k)
        if key not in self._components:
            Rk = self.ring.truncation(k)
            E = self._entries(lambda: self.presentation.rho(k), Rk.algebra.dim)
            self._components[key] = fp_module(Rk.algebra, E)
        return self._components[key]

    def truncate(self, k) -> FdModule:
        return self.truncate_data(k).module

    def distinct_components(self):
        """``(slot, module)`` for slots ``1..stable`` and one generic slot."""
        return [(i, self.component(i)) for i in range(1, self.stable_index + 2)]

    def to_json(self, ring_ref="ring.json"):
        return {"ring": ring_ref, "gens": self.gens, "presentation": self.presentation.to_json()}


def fp_module_from_json(ring, data):
    rows = [[element_from_json(ring, a) for a in r] for r in data["presentation"]]
    return FpRModule(ring, EvMatrix(ring, rows) if rows else EvMatrix(ring, []), gens=data["gens"])


def free_fp_module(ring, m=1):
    return FpRModule(ring, EvMatrix(ring, []), gens=m, name=f"R^{m}")


# -- membership and flatness -------------------------------------------------------


def tail_to_generic(M: FpRModule, slot=None):
    """Matrix of ``N/NI -> N e_i`` (``i`` generic), ``w -> iota(w)``.

    Its kernel is ``ann_N(I)``.
    """
    R = M.ring
    V = M.tail_data
    G = M.component_data(slot or M.stable_index + 1)
    lift = np.kron(la.identity(M.gens), R.iota.matrix)
    return la.matmul(la.matmul(V.section, lift, R.p), G.map.matrix, R.p)


def class_membership(M: FpRModule, depth=DEFAULT_DEPTH) -> dict:
    """Membership in the classes ``MI = M``, ``MI = 0`` and ``ann_M(I) = 0``.

    ``ann_M(I)`` is the kernel of ``N/NI -> N e_i`` for a generic slot ``i``
    (see :func:`tail_to_generic`), so the last class is decided exactly; the
    bounded check over ``depth`` generic slots is reported alongside.
    """
    V = M.tail_quotient()
    in_x = V.dim == 0
    in_y = all(C.dim == 0 for _, C in M.distinct_components())
    p = M.ring.p
    to_generic = tail_to_generic(M)
    ann = V.dim - la.rank(to_generic, p) if V.dim else 0
    per_slot = [
        V.dim == 0 or la.rank(tail_to_generic(M, i), p) == V.dim
        for i in range(M.stable_index + 1, M.stable_index + depth + 1)
    ]
    return {
        "in_X": in_x,
        "in_Y": in_y,
        "in_Z": ann == 0,
        "Z_up_to_depth": all(per_slot),
        "ann_dim": ann,
        "depth": depth,
    }


def is_flat(M: FpRModule) -> bool:
    """Tail quotient projective over S and every component projective over T."""
    if not is_projective(M.tail_quotient()):
        return False
    if is_von_neumann_regular(M.ring.T):
        return True
    return all(is_projective(C) for _, C in M.distinct_components())


def _left_mult_block(T, A):
    """Matrix of ``x -> A x`` on rows, for ``A`` an ``m x n`` array of T-coordinates."""
    m, n = A.shape[:2]
    d = T.dim
    big = np.zeros((n * d, m * d), dtype=np.int64)
    for r in range(m):
        for c in range(n):
            big[c * d : (c + 1) * d, r * d : (r + 1) * d] = T.left_matrix(A[r, c])
    return big


def _solve_over(T, A, b):
    m, n = A.shape[:2]
    if n == 0:
        return np.zeros((0, T.dim), dtype=np.int64) if not np.any(b) else None
    x = la.solve_rows(_left_mult_block(T, A), b.reshape(1, -1), T.p)
    return None if x is None else x[0].reshape(n, T.dim)


def solve_over_R(A: EvMatrix, b):
    """Some column ``x`` over R with ``A x = b``, or ``None``.

    Slots up to the joint stable index are solved over T, the tail over S;
    the tail solution fills every later slot.
    """
    R = A.ring
    if not R.left_flat_cert:
        raise PresentationError("T is not certified flat over S; refusing to solve over R")
    b = list(b)
    if len(b) != A.m:
        raise PresentationError("right-hand side has the wrong length")
    stable = max([A.stable_index] + [c.length for c in b])
    tail = _solve_over(R.S, A.tail(), np.array([c.tail for c in b]))
    if tail is None:
        return None
    slots = []
    for i in range(1, stable + 1):
        xi = _solve_over(R.T, A.slot(i), np.array([c.slot_coords(i) for c in b]))
        if xi is None:
            return None
        slots.append(xi)
    x = [EvElement(R, [s[j] for s in slots], tail[j]) for j in range(A.n)]
    for i in range(A.m):
        total = R.zero
        for j in range(A.n):
            total = total + A[i, j] * x[j]
        assert total == b[i]
    return x


def random_fp_module(ring: EvRing, gens, rels, max_head, seed) -> FpRModule:
    rng = np.random.default_rng(seed)
    rows = [[ring.random_element(rng, max_head) for _ in range(rels)] for _ in range(gens)]
    M = FpRModule(ring, EvMatrix(ring, rows), gens=gens, name=f"random(seed={seed})")
    return M


# -- the pullback ------------------------------------------------------------------


class TruncatedPullback(NamedTuple):
    k: int
    Nk: FdModule
    fk: ModuleMap  # Nk -> V, V restricted to T^k x S
    Lk: FdModule
    gk: ModuleMap
    Lp: FdModule
    pi1: ModuleMap
    pi2: ModuleMap
    M: Submodule  # ker fk, the NI part of Nk
    eps1: np.ndarray  # rows: images of a basis of M in Lp
    eps2: np.ndarray  # rows: images of a basis of X in Lp


@dataclass(eq=False)
class PullbackModule:
    N: FpRModule
    V: FdModule
    L: FdModule
    g: ModuleMap
    X: Submodule
    _levels: dict = field(default_factory=dict, repr=False)

    @property
    def ring(self):
        return self.N.ring

    def truncation(self, k) -> TruncatedPullback:
        if k not in self._levels:
            self._levels[k] = _truncated_pullback(self, k)
        return self._levels[k]

    def component(self, i):
        """``L' e_i``: the pullback leaves the ideal part of ``N`` alone."""
        return self.N.component(i)

    def tail_quotient(self):
        return self.L


def _in_sub_coords(basis, vectors):
    return np.asarray(vectors)[:, la.pivots_of(basis)] if len(vectors) else np.zeros((0, len(basis)), dtype=np.int64)


def _truncated_pullback(P: PullbackModule, k: int) -> TruncatedPullback:
    R, N = P.ring, P.N
    p = R.p
    Rk = R.truncation(k)
    A = Rk.algebra
    to_S = projection(A, k)
    Nd = N.truncate_data(k)
    Nk = Nd.module
    Vk = restrict(to_S, P.V)
    Lk = restrict(to_S, P.L)
    # free (T^k x S)^m -> S^m, then onto N/NI
    drop = np.kron(la.identity(N.gens), to_S.matrix)
    fmat = la.matmul(la.matmul(Nd.section, drop, p), N.tail_data.map.matrix, p)
    fk = ModuleMap(Nk, Vk, fmat, check=False)
    gk = ModuleMap(Lk, Vk, P.g.matrix, check=False)
    pb = pullback(fk, gk)
    Mk = fk.kernel()
    zeros_L = np.zeros((Mk.dim, Lk.dim), dtype=np.int64)
    eps1 = _in_sub_coords(pb.basis, np.hstack([Mk.basis, zeros_L]))
    zeros_N = np.zeros((P.X.dim, Nk.dim), dtype=np.int64)
    eps2 = _in_sub_coords(pb.basis, np.hstack([zeros_N, P.X.basis]))
    return TruncatedPullback(k, Nk, fk, Lk, gk, pb.module, pb.p1, pb.p2, Mk, eps1, eps2)


def build_pullback(N: FpRModule, L: FdModule, g: ModuleMap) -> PullbackModule:
    V = N.tail_quotient()
    if g.target is not V:
        g = ModuleMap(L, V, g.matrix)
    return PullbackModule(N, V, L, g, g.kernel())


# -- certificates ------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "skipped"
    mode: str  # "proven" | "exhaustive" | "sampled"
    details: dict = field(default_factory=dict)
    duration: float = 0.0

    @property
    def passed(self):
        return self.status == "pass"

    def to_json(self):
        return {"name": self.name, "status": self.status, "mode": self.mode, "details": self.details}


@dataclass
class CoverCertificate:
    pullback: PullbackModule
    checks: list
    depth: int = DEFAULT_DEPTH

    @property
    def passing(self):
        return all(c.passed for c in self.checks)

    def check(self, name):
        return next(c for c in self.checks if c.name == name)

    def summary(self):
        pb = self.pullback
        return {
            "V_dim": pb.V.dim,
            "L_dim": pb.L.dim,
            "X_dim": pb.X.dim,
            "stable_index": pb.N.stable_index,
            "passing": self.passing,
        }


def truncation_levels(N: FpRModule, depth):
    return list(range(1, N.stable_index + depth + 1))


def _status(ok):
    return "pass" if ok else "fail"


def _c1(pb):
    g = pb.g
    onto = g.is_onto()
    kernel_ok = pb.X == g.kernel()
    flat = is_projective(pb.L)
    return CheckResult(
        "C1",
        _status(onto and kernel_ok and flat),
        "exhaustive",
        {"g_onto": onto, "X_is_ker_g": kernel_ok, "L_projective": flat, "X_dim": pb.X.dim},
    )


def _c2(pb, levels):
    N = pb.N
    T = N.ring.T
    semisimple_T = is_von_neumann_regular(T)
    comp_flat = {}
    for i, C in N.distinct_components():
        comp_flat[i] = True if semisimple_T else is_projective(C)
    tail_flat = is_projective(pb.L)
    per_level = {}
    for k in levels:
        lvl = pb.truncation(k)
        ok = True
        for i in range(k):
            Lb = block(lvl.Lp, i)
            Nb = block(lvl.Nk, i)
            comp = N.component(i + 1)
            # pi1 restricted to the i-th block must be an isomorphism onto N e_i
            restricted = la.matmul(la.matmul(Lb.basis, lvl.pi1.matrix, N.ring.p), Nb.project, N.ring.p)
            iso = Lb.module.dim == Nb.module.dim == comp.dim and (
                comp.dim == 0 or la.rank(restricted, N.ring.p) == comp.dim
            )
            ok &= bool(iso)
        tb = block(lvl.Lp, k)
        tail_iso = tb.module.dim == pb.L.dim and (
            pb.L.dim == 0 or la.rank(la.matmul(tb.basis, lvl.pi2.matrix, N.ring.p), N.ring.p) == pb.L.dim
        )
        per_level[k] = bool(ok and tail_iso)
    flat = all(comp_flat.values()) and tail_flat
    return CheckResult(
        "C2",
        _status(flat and all(per_level.values())),
        "proven" if semisimple_T else "exhaustive",
        {
            "components_flat": {str(i): v for i, v in comp_flat.items()},
            "tail_flat": tail_flat,
            "blocks_match": {str(k): v for k, v in per_level.items()},
            "T_semisimple": semisimple_T,
        },
    )


def _c3(pb, levels):
    per_level = {str(k): pb.truncation(k).pi1.is_onto() for k in levels}
    onto_tail = pb.g.is_onto()
    return CheckResult(
        "C3", _status(all(per_level.values()) and onto_tail), "exhaustive",
        {"pi1_onto": per_level, "g_onto": onto_tail},
    )


def _c4(pb, levels):
    per_level = {}
    dims = {}
    for k in levels:
        lvl = pb.truncation(k)
        ker = lvl.pi1.kernel()
        image = Submodule(lvl.Lp, lvl.eps2, check=False) if len(lvl.eps2) else None
        same = ker.dim == pb.X.dim and (ker.dim == 0 or (image is not None and ker == image))
        dim_identity = lvl.Lp.dim == lvl.Nk.dim + pb.X.dim
        per_level[str(k)] = bool(same and dim_identity)
        dims[str(k)] = {"Lp": lvl.Lp.dim, "Nk": lvl.Nk.dim, "ker_pi1": ker.dim}
    return CheckResult(
        "C4", _status(all(per_level.values())), "exhaustive",
        {"kernel_is_eps2_X": per_level, "dims": dims, "X_dim": pb.X.dim},
    )


def _c5(pb, levels):
    premise = is_small(pb.X, pb.L)
    radical_ok = {}
    brute = {}
    for k in levels:
        lvl = pb.truncation(k)
        Ximg = Submodule(lvl.Lp, lvl.eps2 if len(lvl.eps2) else la.zeros(0, lvl.Lp.dim), check=False)
        radical_ok[str(k)] = bool(Ximg <= radical_submodule(lvl.Lp))
        if lvl.Lp.p == 2 and lvl.Lp.dim <= BRUTE_MAX_DIM:
            brute[str(k)] = brute_small(Ximg, lvl.Lp)
    ok = premise and all(radical_ok.values()) and all(brute.values())
    return CheckResult(
        "C5",
        _status(ok),
        "proven" if premise else "exhaustive",
        {"X_small_in_L": premise, "in_radical": radical_ok, "brute_small": brute},
    )


def _c6(pb, levels, seed):
    g_verdict = right_minimality(pb.g, seed=seed)
    scans = {}
    modes = set()
    for k in levels:
        lvl = pb.truncation(k)
        v = right_minimality_scan(lvl.pi1, seed=seed + k)
        scans[str(k)] = {"all_bijective": v.minimal, "mode": v.mode, "points": v.points}
        modes.add(v.mode)
    ok = g_verdict.minimal and all(s["all_bijective"] for s in scans.values())
    mode = "proven" if g_verdict.minimal and g_verdict.mode == "proven" else g_verdict.mode
    return CheckResult(
        "C6",
        _status(ok),
        mode,
        {
            "g_right_minimal": g_verdict.minimal,
            "g_mode": g_verdict.mode,
            "endomorphism_scans": scans,
            "seed": seed,
            "scan_modes": sorted(modes),
        },
    )


def right_minimality_scan(f, seed=0):
    """Exhaustive or sampled scan of ``{h : f h = f}`` regardless of projectivity."""
    return _scan_endomorphisms(f, seed, EXHAUSTIVE_ENDO_POINTS, ENDO_SAMPLES)


CHECKS = ("C1", "C2", "C3", "C4", "C5", "C6")


def evaluate_checks(pb: PullbackModule, depth=DEFAULT_DEPTH, seed=0) -> list:
    levels = truncation_levels(pb.N, depth)
    out = []
    for name, fn in (
        ("C1", lambda: _c1(pb)),
        ("C2", lambda: _c2(pb, levels)),
        ("C3", lambda: _c3(pb, levels)),
        ("C4", lambda: _c4(pb, levels)),
        ("C5", lambda: _c5(pb, levels)),
        ("C6", lambda: _c6(pb, levels, seed)),
    ):
        t0 = time.perf_counter()
        res = fn()
        res.duration = time.perf_counter() - t0
        out.append(res)
    return out


def g_flat_cover(N: FpRModule, depth=DEFAULT_DEPTH, seed=0) -> CoverCertificate:
    """Pullback of ``N -> N/NI`` along the projective cover of ``N/NI``."""
    V = N.tail_quotient()
    L, g, _ = projective_cover(V)
    pb = build_pullback(N, L, g)
    return CoverCertificate(pb, evaluate_checks(pb, depth, seed), depth)


def verify_certificate(cert: CoverCertificate, depth=DEFAULT_DEPTH, seed=0) -> dict:
    checks = evaluate_checks(cert.pullback, depth, seed)
    return {
        "checks": [c.to_json() for c in checks],
        "passing": all(c.passed for c in checks),
        "depth": depth,
        "depth_stable": depth_stable(checks),
        "summary": cert.summary(),
    }


PER_LEVEL_KEYS = ("blocks_match", "pi1_onto", "kernel_is_eps2_X", "in_radical")


def depth_stable(checks) -> bool:
    """Per-level verdicts agree across every tested truncation."""
    for c in checks:
        for key in PER_LEVEL_KEYS:
            if key in c.details and len(set(c.details[key].values())) > 1:
                return False
        scans = c.details.get("endomorphism_scans")
        if scans and len({s["all_bijective"] for s in scans.values()}) > 1:
            return False
    return True


def pullback_truncation(P: PullbackModule, k: int) -> TruncatedPullback:
    return P.truncation(k)
