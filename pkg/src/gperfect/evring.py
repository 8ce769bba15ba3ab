"""The ring of eventually-constant sequences over an extension ``S <= T``.

An element is ``(x_1, ..., x_n, s, s, ...)`` with ``x_i`` in ``T`` and the
constant tail ``s`` in ``S`` (embedded in ``T`` by ``iota``).  It is stored
as a finite head plus the tail; trailing head entries equal to ``iota(s)``
are trimmed so equal elements have equal representations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg as la
from .algebra import (
    SCAN_BOUND,
    UNIT_TABLE_BOUND,
    Algebra,
    AlgebraError,
    AlgebraMap,
    AlgElement,
    direct_product,
    is_regular_element as alg_regular,
    try_inverse as alg_inverse,
    opposite_algebra,
)
from .modules import FdModule, is_projective


class EvRing:
    def __init__(self, T: Algebra, S: Algebra, iota: AlgebraMap, name=""):
        if iota.source != S or iota.target != T:
            raise AlgebraError("iota must map S into T")
        iota.validate()
        if not iota.is_injective():
            raise AlgebraError("iota is not injective")
        self.T = T
        self.S = S
        self.iota = iota
        self.p = T.p
        self.name = name or f"R({T.name}, {S.name})"
        self._truncations = {}

    def __repr__(self):
        return self.name

    # -- elements ---------------------------------------------------------------

    def element(self, head=(), tail=None):
        return EvElement(self, head, tail)

    def constant(self, s):
        s = s.coords if isinstance(s, AlgElement) else s
        return EvElement(self, (), s)

    def slot(self, i, t):
        """``e(i) * t``: the value ``t`` at slot ``i`` and zero elsewhere."""
        t = t.coords if isinstance(t, AlgElement) else np.asarray(t)
        head = np.zeros((i, self.T.dim), dtype=np.int64)
        head[i - 1] = t
        return EvElement(self, head, None)

    def e(self, i):
        if i < 1:
            raise ValueError("slots are numbered from 1")
        return self.slot(i, self.T.unit)

    @property
    def one(self):
        return self.constant(self.S.unit)

    @property
    def zero(self):
        return EvElement(self, (), None)

    def iota_coords(self, s):
        return la.matmul(np.asarray(s), self.iota.matrix, self.p)

    def random_element(self, rng, max_head=3, family=None):
        T, S = self.T, self.S
        family = family or ("slot", "constant", "mixed")[rng.integers(0, 3)]
        if family == "slot" and max_head:
            i = int(rng.integers(1, max_head + 1))
            return self.slot(i, rng.integers(0, self.p, T.dim))
        if family in ("constant", "slot"):
            return self.constant(rng.integers(0, self.p, S.dim))
        n = int(rng.integers(0, max_head + 1))
        return EvElement(self, rng.integers(0, self.p, (n, T.dim)), rng.integers(0, self.p, S.dim))

    # -- structure maps ----------------------------------------------------------

    def phi(self, a):
        return AlgElement(self.S, a.tail)

    def pi(self, i, a):
        if i < 1:
            raise ValueError("slots are numbered from 1")
        return AlgElement(self.T, a.slot_coords(i))

    # -- invertibility, radical, regularity --------------------------------------

    def try_inverse(self, a):
        heads = []
        for row in a.head:
            inv = alg_inverse(AlgElement(self.T, row))
            if inv is None:
                return None
            heads.append(inv.coords)
        tail = alg_inverse(AlgElement(self.S, a.tail))
        if tail is None:
            return None
        return EvElement(self, np.array(heads).reshape(-1, self.T.dim), tail.coords)

    def is_unit(self, a):
        return bool(np.all(self.T.is_unit_coords(a.head)) if len(a.head) else True) and bool(
            self.S.is_unit_coords(a.tail)
        )

    def in_jacobson(self, a):
        """Heads in J(T); tail in J(S) with ``iota(tail)`` in J(T)."""
        JT, JS = self.T.radical, self.S.radical
        if len(a.head) and not la.contains(JT.basis, a.head, self.p):
            return False
        return a.tail in JS and self.iota_coords(a.tail) in JT

    def jacobson_refutation_oracle(self, a, trials=10**4, seed=0):
        """Search for ``b`` with ``1 - a b`` not invertible.

        Structured candidates first (``b = 1``, every constant, every
        single-slot value at each head slot and one generic slot), then
        seeded random elements until ``trials`` candidates were examined.
        """
        T, S, p = self.T, self.S, self.p
        checked = 0
        one = self.one
        if not self.is_unit(one - a * one):
            return one
        checked += 1
        if S.size <= UNIT_TABLE_BOUND and checked < trials:
            svals = S.all_elements()[: max(trials - checked, 0)]
            checked += len(svals)
            bad = ~S.is_unit_coords((S.unit - S.mul_coords(a.tail, svals)) % p)
            slot_rows = np.vstack([a.head, self.iota_coords(a.tail)[None, :]])
            tv = self.iota_coords(svals)
            for row in slot_rows:
                bad |= ~T.is_unit_coords((T.unit - T.mul_coords(row, tv)) % p)
            hits = np.flatnonzero(bad)
            if hits.size:
                return self.constant(svals[hits[0]])
        if T.size <= UNIT_TABLE_BOUND:
            tvals = T.all_elements()
            for i in range(1, len(a.head) + 2):
                if checked >= trials:
                    break
                tv = tvals[: trials - checked]
                checked += len(tv)
                row = a.slot_coords(i)
                bad = ~T.is_unit_coords((T.unit - T.mul_coords(row, tv)) % p)
                hits = np.flatnonzero(bad)
                if hits.size:
                    return self.slot(i, tv[hits[0]])
        rng = np.random.default_rng(seed)
        while checked < trials:
            b = self.random_element(rng, max_head=len(a.head) + 2)
            checked += 1
            if not self.is_unit(one - a * b):
                return b
        return None

    def is_regular_element(self, a):
        """Witness ``x`` with ``a x a == a``, solved slotwise and on the tail."""
        heads = []
        for row in a.head:
            w = alg_regular(AlgElement(self.T, row))
            if w is None:
                return None
            heads.append(w.coords)
        tail = alg_regular(AlgElement(self.S, a.tail))
        if tail is None:
            return None
        x = EvElement(self, np.array(heads).reshape(-1, self.T.dim), tail.coords)
        assert a * x * a == a
        return x

    # -- flatness of T over S -----------------------------------------------------

    @cached_property
    def left_flat_cert(self):
        """Whether ``T`` is projective as a left ``S``-module."""
        Sop = opposite_algebra(self.S)
        # left multiplication by iota(b_i), as a right S^op action on rows of T
        act = self.T.left_matrix(self.iota.matrix)
        M = FdModule(Sop, act, dim=self.T.dim, name=f"_{self.S.name}{self.T.name}")
        return is_projective(M)

    def truncation(self, k):
        if k < 1:
            raise ValueError("truncation level must be >= 1")
        if k not in self._truncations:
            self._truncations[k] = TruncationRing(self, k)
        return self._truncations[k]


@dataclass(frozen=True, eq=False)
class EvElement:
    ring: EvRing
    head: np.ndarray
    tail: np.ndarray

    def __post_init__(self):
        R = self.ring
        dT, dS = R.T.dim, R.S.dim
        tail = np.zeros(dS, dtype=np.int64) if self.tail is None else np.asarray(self.tail, dtype=np.int64)
        tail = tail.reshape(dS) % R.p
        head = np.asarray(self.head, dtype=np.int64).reshape(-1, dT) % R.p
        generic = R.iota_coords(tail)
        n = len(head)
        while n and np.array_equal(head[n - 1], generic):
            n -= 1
        head = head[:n].copy()
        head.setflags(write=False)
        tail.setflags(write=False)
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "tail", tail)

    @property
    def length(self):
        return len(self.head)

    def slot_coords(self, i):
        if i <= len(self.head):
            return self.head[i - 1]
        return self.ring.iota_coords(self.tail)

    def padded_head(self, n):
        if n <= len(self.head):
            return self.head
        extra = np.tile(self.ring.iota_coords(self.tail), (n - len(self.head), 1))
        return np.vstack([self.head, extra])

    def _other(self, other):
        if isinstance(other, int):
            return self.ring.one * other
        if not isinstance(other, EvElement) or other.ring is not self.ring:
            raise AlgebraError("elements of different rings")
        return other

    def __add__(self, other):
        other = self._other(other)
        n = max(self.length, other.length)
        return EvElement(self.ring, self.padded_head(n) + other.padded_head(n), self.tail + other.tail)

    __radd__ = __add__

    def __neg__(self):
        return EvElement(self.ring, -self.head, -self.tail)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        R = self.ring
        if isinstance(other, int):
            return EvElement(R, self.head * other, self.tail * other)
        other = self._other(other)
        n = max(self.length, other.length)
        head = R.T.mul_coords(self.padded_head(n), other.padded_head(n)) if n else ()
        return EvElement(R, head, R.S.mul_coords(self.tail, other.tail))

    def __rmul__(self, other):
        return self._other(other) * self

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.one * other
        return (
            isinstance(other, EvElement)
            and other.ring is self.ring
            and np.array_equal(self.head, other.head)
            and np.array_equal(self.tail, other.tail)
        )

    def __hash__(self):
        return hash((id(self.ring), self.head.tobytes(), self.tail.tobytes()))

    def __bool__(self):
        return bool(np.any(self.head) or np.any(self.tail))

    def __repr__(self):
        T, S = self.ring.T, self.ring.S
        parts = [repr(AlgElement(T, h)) for h in self.head]
        return f"({', '.join(parts + [repr(AlgElement(S, self.tail)) + ', ...'])})"

    def to_json(self):
        return {"head": self.head.tolist(), "tail": self.tail.tolist()}


def element_from_json(R, data):
    return EvElement(R, np.array(data.get("head", []), dtype=np.int64).reshape(-1, R.T.dim), data["tail"])


class TruncationRing:
    """``T^k x S`` with the surjection ``rho_k`` from the sequence ring."""

    def __init__(self, ring, k, samples=64, seed=0):
        self.ring = ring
        self.k = k
        self.algebra = direct_product(*([ring.T] * k + [ring.S]))
        self.algebra.name = f"{ring.T.name}^{k} x {ring.S.name}"
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            a = ring.random_element(rng, max_head=k + 1)
            b = ring.random_element(rng, max_head=k + 1)
            if self.rho(a * b) != self.rho(a) * self.rho(b):
                raise AssertionError("rho_k is not multiplicative")
        if self.rho(ring.one) != self.algebra.one:
            raise AssertionError("rho_k does not preserve 1")

    def rho_coords(self, a):
        return np.concatenate([a.padded_head(self.k)[: self.k].reshape(-1), a.tail])

    def rho(self, a):
        return AlgElement(self.algebra, self.rho_coords(a))

    @property
    def tail_factor(self):
        return self.k

    def __repr__(self):
        return f"TruncationRing({self.ring.name}, k={self.k})"
