"""Finite-dimensional right modules over an :class:`~gperfect.algebra.Algebra`.

A module of dimension ``m`` carries one ``m x m`` action matrix per algebra
basis vector; vectors are rows and ``v . b_i = v @ action[i]``.  A
homomorphism ``M -> N`` is an ``m x n`` matrix ``F`` with
``action_M[i] @ F == F @ action_N[i]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import linalg as la
from .algebra import (
    SCAN_BOUND,
    Algebra,
    AlgebraMap,
    AlgElement,
    ScanBoundExceeded,
    injection,
    primitive_idempotents,
)

MAX_MODULE_DIM = 512
BRUTE_MAX_DIM = 6
EXHAUSTIVE_ENDO_POINTS = 2**12
ENDO_SAMPLES = 10**4


class ModuleError(ValueError):
    pass


class FdModule:
    def __init__(self, algebra, action, dim=None, name="", check=True):
        self.algebra = algebra
        p, d = algebra.p, algebra.dim
        if dim is None:
            dim = np.asarray(action).shape[-1] if np.asarray(action).size else 0
        action = np.asarray(action, dtype=np.int64).reshape(d, dim, dim) % p
        if dim > MAX_MODULE_DIM:
            raise ModuleError(f"module dimension {dim} exceeds cap {MAX_MODULE_DIM}")
        action.setflags(write=False)
        self.action = action
        self.dim = dim
        self.name = name
        if check:
            self.validate()

    @property
    def p(self):
        return self.algebra.p

    def __repr__(self):
        label = f"{self.name}, " if self.name else ""
        return f"FdModule({label}dim={self.dim} over {self.algebra.name})"

    def validate(self):
        A, m = self.algebra, self.dim
        if not np.array_equal(self.element_matrix(A.unit), la.identity(m)):
            raise ModuleError("the unit does not act as the identity")
        if m == 0:
            return
        flat = self.action.reshape(A.dim, -1)
        # action(b_i b_j) == action(b_i) @ action(b_j)
        lhs = la.matmul(A.mul.reshape(-1, A.dim), flat, A.p).reshape(A.dim, A.dim, m, m)
        rhs = la.matmul(self.action[:, None], self.action[None, :], A.p)
        if not np.array_equal(lhs, rhs):
            raise ModuleError("action does not respect the structure constants")

    def element_matrix(self, a):
        a = a.coords if isinstance(a, AlgElement) else np.asarray(a, dtype=np.int64)
        if self.dim == 0:
            return la.zeros(0, 0)
        return la.matmul(a, self.action.reshape(self.algebra.dim, -1), self.p).reshape(
            self.dim, self.dim
        )

    def act(self, v, a):
        return la.matmul(np.asarray(v), self.element_matrix(a), self.p)

    def identity(self):
        return ModuleMap(self, self, la.identity(self.dim), check=False)

    def zero_map(self, other):
        return ModuleMap(self, other, la.zeros(self.dim, other.dim), check=False)


class ModuleMap:
    def __init__(self, source, target, matrix, check=True):
        if source.algebra != target.algebra:
            raise ModuleError("map between modules over different algebras")
        self.source = source
        self.target = target
        self.matrix = la.asmat(np.asarray(matrix, dtype=np.int64).reshape(source.dim, target.dim), source.p)
        if check:
            self.validate()

    def validate(self):
        S, T, F = self.source, self.target, self.matrix
        if S.dim == 0 or T.dim == 0:
            return
        lhs = la.matmul(S.action, F, S.p)
        rhs = la.matmul(F, T.action, S.p)
        if not np.array_equal(lhs, rhs):
            raise ModuleError("matrix does not intertwine the actions")

    def __call__(self, v):
        return la.matmul(np.asarray(v), self.matrix, self.source.p)

    def compose(self, other):
        """``self`` after ``other``."""
        return ModuleMap(other.source, self.target, la.matmul(other.matrix, self.matrix, self.source.p), check=False)

    def __add__(self, other):
        return ModuleMap(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other):
        return ModuleMap(self.source, self.target, self.matrix - other.matrix, check=False)

    def __eq__(self, other):
        return (
            isinstance(other, ModuleMap)
            and other.source is self.source
            and other.target is self.target
            and np.array_equal(self.matrix, other.matrix)
        )

    __hash__ = None

    def rank(self):
        return la.rank(self.matrix, self.source.p) if self.matrix.size else 0

    def is_onto(self):
        return self.rank() == self.target.dim

    def is_injective(self):
        return self.rank() == self.source.dim

    def is_bijective(self):
        return self.source.dim == self.target.dim and self.is_onto()

    def kernel(self):
        return Submodule(self.source, la.left_kernel(self.matrix, self.source.p) if self.source.dim else la.zeros(0, 0))

    def image(self):
        return Submodule(self.target, la.row_basis(self.matrix, self.source.p, self.target.dim))


@dataclass(frozen=True, eq=False)
class Submodule:
    """Action-closed subspace of ``module``, rref basis."""

    module: FdModule
    basis: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        M = self.module
        B = la.row_basis(self.basis, M.p, M.dim)
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)
        if self.check and len(B):
            moved = la.matmul(B, M.action, M.p).reshape(-1, M.dim)
            if not la.contains(B, moved, M.p):
                raise ModuleError("subspace is not closed under the action")

    @property
    def dim(self):
        return len(self.basis)

    def __le__(self, other):
        return la.contains(other.basis, self.basis, self.module.p)

    def __eq__(self, other):
        return (
            isinstance(other, Submodule)
            and other.module is self.module
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((id(self.module), self.basis.tobytes()))

    def __add__(self, other):
        M = self.module
        return Submodule(M, la.span_sum(self.basis, other.basis, M.p, M.dim), check=False)

    def __and__(self, other):
        M = self.module
        return Submodule(M, la.intersection(self.basis, other.basis, M.p, M.dim), check=False)


def zero_submodule(M):
    return Submodule(M, la.zeros(0, M.dim), check=False)


def whole(M):
    return Submodule(M, la.identity(M.dim), check=False)


def generated_submodule(M, vectors):
    """Smallest submodule containing the given row vectors."""
    p = M.p
    B = la.row_basis(vectors, p, M.dim)
    while len(B):
        moved = la.matmul(B, M.action, p).reshape(-1, M.dim)
        B2 = la.row_basis(np.vstack([B, moved]), p, M.dim)
        if len(B2) == len(B):
            break
        B = B2
    return Submodule(M, B, check=False)


def image_under(f, sub):
    return Submodule(f.target, la.row_basis(f(sub.basis), f.source.p, f.target.dim), check=False)


def preimage(f, sub):
    """``f^{-1}(sub)`` as a submodule of the source."""
    M, p = f.source, f.source.p
    Q, q, _ = quotient(f.target, sub)
    if not Q.dim:
        return whole(M)
    return Submodule(M, la.left_kernel(la.matmul(f.matrix, q.matrix, p), p), check=False)


# -- constructions ----------------------------------------------------------------


def regular_module(A):
    return FdModule(A, A.regular_action, name=f"{A.name}_{A.name}", check=False)


def free_module(A, m):
    return direct_sum(*([regular_module(A)] * m)).module if m else zero_module(A)


def zero_module(A):
    return FdModule(A, np.zeros((A.dim, 0, 0), dtype=np.int64), dim=0, check=False)


class SumData(NamedTuple):
    module: FdModule
    injections: list
    projections: list


def direct_sum(*modules):
    if not modules:
        raise ModuleError("empty direct sum")
    A = modules[0].algebra
    if any(M.algebra != A for M in modules):
        raise ModuleError("direct sum over different algebras")
    m = sum(M.dim for M in modules)
    act = np.zeros((A.dim, m, m), dtype=np.int64)
    offs = np.cumsum([0] + [M.dim for M in modules])
    for M, o in zip(modules, offs):
        act[:, o : o + M.dim, o : o + M.dim] = M.action
    S = FdModule(A, act, dim=m, check=False)
    inj, proj = [], []
    for M, o in zip(modules, offs):
        E = np.zeros((M.dim, m), dtype=np.int64)
        E[:, o : o + M.dim] = la.identity(M.dim)
        inj.append(ModuleMap(M, S, E, check=False))
        proj.append(ModuleMap(S, M, E.T, check=False))
    return SumData(S, inj, proj)


def submodule_as_module(sub):
    """Realise a submodule on its own basis; returns ``(module, inclusion)``."""
    M, B = sub.module, sub.basis
    piv = la.pivots_of(B)
    moved = la.matmul(B, M.action, M.p)  # (d, r, m)
    act = moved[:, :, piv] if len(B) else np.zeros((M.algebra.dim, 0, 0), dtype=np.int64)
    S = FdModule(M.algebra, act, dim=len(B), check=False)
    return S, ModuleMap(S, M, B if len(B) else la.zeros(0, M.dim), check=False)


class Pullback(NamedTuple):
    module: FdModule
    p1: ModuleMap
    p2: ModuleMap
    basis: np.ndarray  # rows in the coordinates of source(f) (+) source(g)


def pullback(f: ModuleMap, g: ModuleMap) -> Pullback:
    """``{(x, y) : f(x) = g(y)}`` inside ``source(f) (+) source(g)``."""
    p = f.source.p
    D = direct_sum(f.source, g.source)
    stacked = np.vstack([f.matrix, (-g.matrix) % p])
    K = la.left_kernel(stacked, p) if stacked.size else la.identity(D.module.dim)
    P, inc = submodule_as_module(Submodule(D.module, K, check=False))
    p1 = ModuleMap(P, f.source, la.matmul(inc.matrix, D.projections[0].matrix, p), check=False)
    p2 = ModuleMap(P, g.source, la.matmul(inc.matrix, D.projections[1].matrix, p), check=False)
    return Pullback(P, p1, p2, inc.matrix)


class QuotientData(NamedTuple):
    module: FdModule
    map: ModuleMap
    section: np.ndarray  # rows: representatives of the quotient basis


def quotient(M, sub):
    """``M / sub`` on the non-pivot coordinates of ``sub``."""
    B, p = sub.basis, M.p
    keep = la.complement_columns(B, M.dim)
    q = la.reduce_mod(la.identity(M.dim), B, la.pivots_of(B), p)[:, keep]
    section = la.identity(M.dim)[keep]
    act = la.matmul(M.action[:, keep, :], q, p)
    Q = FdModule(M.algebra, act, dim=len(keep), check=False)
    return QuotientData(Q, ModuleMap(M, Q, q, check=False), section)


def cokernel(f):
    return quotient(f.target, f.image())


def induced_map(src: QuotientData, dst: QuotientData, linear):
    """Map between quotients induced by a compatible map of their covers."""
    p = src.module.p
    mat = la.matmul(la.matmul(src.section, linear, p), dst.map.matrix, p)
    return ModuleMap(src.module, dst.module, mat, check=False)


def fp_module(A, entries):
    """Cokernel of ``A^n -> A^m`` given by an ``m x n`` matrix of element coordinates.

    ``entries`` has shape ``(m, n, dim A)``; column ``j`` times ``b`` is a
    relation for each basis vector ``b``.  Returns the quotient data over the
    free module ``A^m`` (whose coordinates are blocks of algebra coordinates).
    """
    E = np.asarray(entries, dtype=np.int64) % A.p
    m = E.shape[0]
    F = free_module(A, m)
    if E.size == 0:
        return quotient(F, zero_submodule(F))
    n, d = E.shape[1], A.dim
    # relation (j, l): block r holds entries[r, j] * b_l
    rel = np.einsum("rji,ilk->jlrk", E, A.mul) % A.p
    B = la.row_basis(rel.reshape(n * d, m * d), A.p, m * d)
    return quotient(F, Submodule(F, B, check=False))


def restrict(phi: AlgebraMap, M: FdModule) -> FdModule:
    """``M`` as a module over ``phi.source``."""
    if phi.target != M.algebra:
        raise ModuleError("restriction along a map into a different algebra")
    S = phi.source
    if M.dim == 0:
        return zero_module(S)
    act = la.matmul(phi.matrix, M.action.reshape(M.algebra.dim, -1), M.p).reshape(S.dim, M.dim, M.dim)
    return FdModule(S, act, dim=M.dim, name=M.name, check=False)


def restrict_map(phi, f, source=None, target=None):
    source = source or restrict(phi, f.source)
    target = target or restrict(phi, f.target)
    return ModuleMap(source, target, f.matrix, check=False)


def induce_right(V: FdModule, iota: AlgebraMap) -> FdModule:
    """``V (x)_S T`` as a right T-module.

    Built as ``V (x)_F T`` modulo ``(v s) (x) t - v (x) iota(s) t``.
    """
    S, T = iota.source, iota.target
    if V.algebra != S:
        raise ModuleError("module is not over the source of the algebra map")
    p, m, n = T.p, V.dim, T.dim
    if m == 0:
        return zero_module(T)
    act = np.einsum("ab,ijk->iajbk", la.identity(m), T.regular_action).reshape(n, m * n, m * n)
    free = FdModule(T, act % p, dim=m * n, check=False)
    rels = []
    eye_t = la.identity(n)
    for i in range(S.dim):
        vs = V.action[i]  # v_a . s_i, as rows
        left = np.einsum("ab,lk->albk", vs, eye_t).reshape(m * n, m * n)
        its = T.mul_coords(iota.matrix[i], eye_t)  # iota(s_i) t_l, rows over l
        right = np.einsum("ab,lk->albk", la.identity(m), its).reshape(m * n, m * n)
        rels.append((left - right) % p)
    sub = generated_submodule(free, np.vstack(rels))
    Q = quotient(free, sub).module
    Q.name = f"{V.name or 'V'} (x) {T.name}"
    return Q


def random_module(A, gens, rels, seed):
    """Cokernel of a seeded random map ``A^rels -> A^gens``."""
    rng = np.random.default_rng(seed)
    E = rng.integers(0, A.p, size=(gens, rels, A.dim))
    return fp_module(A, E).module


def principal_module(e: AlgElement):
    """The right ideal ``eA`` as a module, with its inclusion into ``A_A``."""
    A = e.algebra
    R = regular_module(A)
    rows = A.mul_coords(e.coords, la.identity(A.dim))
    return submodule_as_module(Submodule(R, rows, check=False))


# -- radical, top, smallness ---------------------------------------------------------


def radical_submodule(M):
    A = M.algebra
    J = A.radical.basis
    if not len(J) or M.dim == 0:
        return zero_submodule(M)
    mats = la.matmul(J, M.action.reshape(A.dim, -1), M.p).reshape(-1, M.dim)
    return Submodule(M, mats, check=False)


def top(M):
    return quotient(M, radical_submodule(M)).module


def is_small(X: Submodule, M: FdModule) -> bool:
    """Superfluity via containment in ``M J``; valid over artinian algebras."""
    return X <= radical_submodule(M)


def submodules(M, containing=None, bound=2**8):
    """Every submodule of ``M`` (containing a given one), by exhaustive search.

    Works in ``Q = M / start``: every submodule of ``Q`` is a sum of cyclic
    ones ``vA = span{v b_i}``, so the cost is ``p ** dim Q`` cyclics plus
    sums of the distinct ones.  Over F_2 vectors are packed into ints.
    """
    start = containing if containing is not None else zero_submodule(M)
    Q, _, section = quotient(M, start)
    count = M.p**Q.dim
    if count > bound:
        raise ScanBoundExceeded(f"submodule enumeration over {count} vectors exceeds {bound}")
    if Q.dim == 0:
        return [start]
    vectors = la.all_vectors(Q.dim, Q.p)[1:]
    moved = np.einsum("vj,ajk->vak", vectors, Q.action) % Q.p  # v b_a for every v and a
    lattice = _lattice_gf2(moved, Q.dim) if Q.p == 2 else _lattice_generic(Q, moved)
    out = []
    for W in lattice:
        lifted = la.matmul(W, section, M.p) if len(W) else la.zeros(0, M.dim)
        out.append(Submodule(M, np.vstack([start.basis, lifted]), check=False))
    return sorted(out, key=lambda Y: (Y.dim, Y.basis.tobytes()))


def _closure_bfs(cyclic, zero, add, leq):
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for Y in frontier:
            for C in cyclic:
                if leq(C, Y):
                    continue
                Z = add(Y, C)
                if Z not in seen:
                    seen.add(Z)
                    nxt.append(Z)
        frontier = nxt
    return seen


def _xor_insert(basis, v):
    """Insert ``v`` into a reduced echelon basis of packed F_2 rows (descending pivots)."""
    for b in basis:
        if v ^ b < v:
            v ^= b
    if not v:
        return basis
    top = v.bit_length() - 1
    rows = [b ^ v if (b >> top) & 1 else b for b in basis]
    rows.append(v)
    return tuple(sorted(rows, reverse=True))


def _lattice_gf2(moved, dim):
    weights = 1 << np.arange(dim, dtype=np.int64)
    packed = (moved @ weights).tolist()
    cyclic = set()
    for rows in packed:
        B = ()
        for r in rows:
            B = _xor_insert(B, r)
        cyclic.add(B)

    def add(Y, C):
        for r in C:
            Y = _xor_insert(Y, r)
        return Y

    def leq(C, Y):
        return len(add(Y, C)) == len(Y)

    found = _closure_bfs(sorted(cyclic), (), add, leq)
    bits = lambda r: [(r >> j) & 1 for j in range(dim)]
    return [np.array([bits(r) for r in Y], dtype=np.int64).reshape(-1, dim) for Y in found]


def _lattice_generic(Q, moved):
    p, d = Q.p, Q.dim
    cyclic = {}
    for rows in moved:
        B = la.row_basis(rows, p, d)
        cyclic.setdefault(B.tobytes(), B)
    shapes = {k: len(B) for k, B in cyclic.items()}
    store = dict(cyclic)
    zero = la.zeros(0, d).tobytes()
    store[zero] = la.zeros(0, d)
    shapes[zero] = 0

    def add(Y, C):
        Z = la.span_sum(store[Y], store[C], p, d)
        key = Z.tobytes()
        store.setdefault(key, Z)
        return key

    def leq(C, Y):
        return la.contains(store[Y], store[C], p)

    found = _closure_bfs(sorted(cyclic), zero, add, leq)
    return [store[k] for k in found]


def brute_small(X: Submodule, M: FdModule) -> bool:
    """Definition-level smallness: ``X + Y = M`` forces ``Y = M``."""
    if M.p != 2 or M.dim > BRUTE_MAX_DIM:
        raise ScanBoundExceeded(f"brute_small needs p = 2 and dim <= {BRUTE_MAX_DIM}")
    for Y in submodules(M):
        if Y.dim < M.dim and (X + Y).dim == M.dim:
            return False
    return True


# -- homomorphisms ---------------------------------------------------------------------


def hom_space(M: FdModule, N: FdModule) -> list:
    """Basis of ``Hom_A(M, N)``."""
    if M.algebra != N.algebra:
        raise ModuleError("Hom between modules over different algebras")
    return [ModuleMap(M, N, F, check=False) for F in _hom_basis(M, N)]


def _hom_basis(M, N):
    p, m, n = M.p, M.dim, N.dim
    if m == 0 or n == 0:
        return np.zeros((0, m, n), dtype=np.int64)
    if M.algebra.kind == "product":
        return _hom_basis_blockwise(M, N)
    return _hom_basis_direct(M, N)


def _hom_basis_direct(M, N):
    p, m, n = M.p, M.dim, N.dim
    if not m or not n:
        return la.zeros(0, m * n).reshape(0, m, n)
    # unknown F is a row of length m*n; impose a_M F - F a_N = 0 one basis vector at a time
    K = la.identity(m * n)
    for i in range(M.algebra.dim):
        Am, An = M.action[i], N.action[i]
        Fs = K.reshape(-1, m, n)
        R = (la.matmul(Am, Fs, p) - la.matmul(Fs, An, p)) % p
        null = la.left_kernel(R.reshape(len(K), m * n), p)
        K = la.matmul(null, K, p) if len(null) else la.zeros(0, m * n)
        if not len(K):
            break
    K = la.row_basis(K, p, m * n) if len(K) else K
    return K.reshape(-1, m, n)


def _hom_basis_blockwise(M, N):
    # central idempotents split Hom over a product into Homs of the blocks
    p = M.p
    out = []
    for i in range(len(M.algebra.factors)):
        Mi, Pm, _ = block(M, i)
        Ni, _, Bn = block(N, i)
        if not Mi.dim or not Ni.dim:
            continue
        for H in _hom_basis(Mi, Ni):
            out.append(la.matmul(la.matmul(Pm, H, p), Bn, p))
    if not out:
        return np.zeros((0, M.dim, N.dim), dtype=np.int64)
    K = la.row_basis(np.array(out).reshape(len(out), -1), p, M.dim * N.dim)
    return K.reshape(-1, M.dim, N.dim)


class Block(NamedTuple):
    module: FdModule  # over the factor algebra
    project: np.ndarray  # ambient coords -> block coords
    basis: np.ndarray  # block coords -> ambient coords (rows)


def block(M, i):
    """The summand ``M e_i`` for the i-th factor unit of a product algebra."""
    cache = M.__dict__.setdefault("_blocks", {})
    if i in cache:
        return cache[i]
    A, p = M.algebra, M.p
    F = A.factors[i]
    emb = injection(A, i)
    E = M.element_matrix(la.matmul(F.unit, emb, p))
    B = la.row_basis(E, p, M.dim)
    piv = la.pivots_of(B)
    if len(B):
        # rref rows: coordinates of a vector in span(B) are its pivot entries
        acts = la.matmul(B, la.matmul(emb, M.action.reshape(A.dim, -1), p).reshape(F.dim, M.dim, M.dim), p)[:, :, piv]
    else:
        acts = np.zeros((F.dim, 0, 0), dtype=np.int64)
    Mi = FdModule(F, acts, dim=len(B), check=False)
    proj = E[:, piv] if len(B) else la.zeros(M.dim, 0)
    out = Block(Mi, proj, B)
    cache[i] = out
    return out


def hom_dim(M, N):
    return len(_hom_basis(M, N))


# -- projective covers ------------------------------------------------------------------


@dataclass(frozen=True)
class PrincipalIndecomposable:
    idempotent: AlgElement
    module: FdModule
    top: FdModule


def principal_indecomposables(A, scan_bound=SCAN_BOUND):
    """One ``eA`` per isomorphism class, in primitive-idempotent order."""
    cached = A.__dict__.get("_pims")
    if cached is not None:
        return cached
    reps = []
    for e in primitive_idempotents(A, scan_bound):
        P, _ = principal_module(e)
        # top(eA) ~ top(fA) iff top(fA) e != 0
        if any(np.any(rep.top.element_matrix(e)) for rep in reps):
            continue
        reps.append(PrincipalIndecomposable(e, P, top(P)))
    A.__dict__["_pims"] = reps
    return reps


class Cover(NamedTuple):
    module: FdModule
    map: ModuleMap
    multiplicities: tuple


def projective_cover(M: FdModule, scan_bound=SCAN_BOUND) -> Cover:
    A, p = M.algebra, M.p
    reps = principal_indecomposables(A, scan_bound)
    R = radical_submodule(M)
    Tq = quotient(M, R)
    q = Tq.map.matrix
    chosen = []  # (rep index, vector in M)
    U = la.zeros(0, Tq.module.dim)
    for t, rep in enumerate(reps):
        if U.shape[0] == Tq.module.dim:
            break
        Me = la.row_basis(M.element_matrix(rep.idempotent), p, M.dim)
        for v in Me:
            vbar = la.matmul(v, q, p)
            if len(U) and la.contains(U, vbar.reshape(1, -1), p):
                continue
            if not np.any(vbar):
                continue
            chosen.append((t, v))
            U = generated_submodule(Tq.module, np.vstack([U, vbar])).basis
            if U.shape[0] == Tq.module.dim:
                break
    summands, blocks = [], []
    mult = [0] * len(reps)
    for t, v in chosen:
        rep = reps[t]
        mult[t] += 1
        P = rep.module
        # basis vectors of eA are algebra elements w; send w to v . w
        _, inc = principal_module(rep.idempotent)
        summands.append(P)
        blocks.append(la.matmul(v, _elements_action(M, inc.matrix), p))
    if summands:
        Ps = direct_sum(*summands)
        P = Ps.module
        pi = ModuleMap(P, M, np.vstack(blocks), check=False)
    else:
        P = zero_module(A)
        pi = ModuleMap(P, M, la.zeros(0, M.dim), check=False)
    _verify_cover(M, P, pi, reps, mult)
    return Cover(P, pi, tuple(mult))


def _elements_action(M, W):
    """Stack ``(r, m, m)`` of action matrices for the algebra elements in rows of ``W``."""
    d = M.algebra.dim
    return la.matmul(W, M.action.reshape(d, -1), M.p).reshape(len(W), M.dim, M.dim)


def _verify_cover(M, P, pi, reps, mult):
    if not pi.is_onto():
        raise AssertionError("projective cover map is not onto")
    if not pi.kernel() <= radical_submodule(P):
        raise AssertionError("projective cover kernel is not superfluous")
    if top(P).dim != top(M).dim:
        raise AssertionError("projective cover does not induce an isomorphism on tops")
    topM = top(M)
    for rep, k in zip(reps, mult):
        end_dim = hom_dim(rep.module, rep.top)
        if hom_dim(rep.module, topM) != k * end_dim:
            raise AssertionError("cover multiplicity disagrees with Hom count")


def is_projective(M, scan_bound=SCAN_BOUND):
    return projective_cover(M, scan_bound).module.dim == M.dim


# -- minimality ----------------------------------------------------------------------------


class MinimalityVerdict(NamedTuple):
    minimal: bool
    mode: str  # "proven", "exhaustive" or "sampled"
    points: int
    witness: np.ndarray | None = None


def right_minimality(f: ModuleMap, seed=0, exhaustive_limit=EXHAUSTIVE_ENDO_POINTS, samples=ENDO_SAMPLES):
    """Decide whether every ``g`` with ``f g = f`` is bijective."""
    L = f.source
    if f.is_onto() and is_projective(L):
        ok = is_small(f.kernel(), L)
        return MinimalityVerdict(ok, "proven", 0)
    return _scan_endomorphisms(f, seed, exhaustive_limit, samples)


def _scan_endomorphisms(f, seed, exhaustive_limit, samples):
    L, p = f.source, f.source.p
    # {g : f g = f} = id + Hom(L, ker f)
    Kmod, inc = submodule_as_module(f.kernel())
    H = _hom_basis(L, Kmod)
    if not len(H):
        return MinimalityVerdict(True, "exhaustive", 1)
    H = la.matmul(H, inc.matrix, p)  # into L
    count = p ** len(H)
    if count <= exhaustive_limit:
        coeffs = la.all_vectors(len(H), p)
        mode = "exhaustive"
    else:
        rng = np.random.default_rng(seed)
        coeffs = rng.integers(0, p, size=(samples, len(H)))
        mode = "sampled"
    eye = la.identity(L.dim)
    for start in range(0, len(coeffs), 1024):
        chunk = coeffs[start : start + 1024]
        G = (eye + np.einsum("sh,hij->sij", chunk, H)) % p
        ok = la.batch_nonsingular(G, p)
        if not ok.all():
            bad = G[np.flatnonzero(~ok)[0]]
            return MinimalityVerdict(False, mode, len(coeffs), bad)
    return MinimalityVerdict(True, mode, len(coeffs))


def is_right_minimal(f, seed=0):
    return right_minimality(f, seed).minimal


# -- Ext -------------------------------------------------------------------------------------


def ext1(X: FdModule, Y: FdModule, scan_bound=SCAN_BOUND) -> int:
    """``dim Ext^1(X, Y)`` from ``0 -> K -> P -> X -> 0`` with ``P`` the cover.

    ``Ext^1 = coker(Hom(P, Y) -> Hom(K, Y))``.
    """
    if X.algebra != Y.algebra:
        raise ModuleError("Ext between modules over different algebras")
    P, pi, _ = projective_cover(X, scan_bound)
    K, inc = submodule_as_module(pi.kernel())
    hK = _hom_basis(K, Y)
    if not len(hK):
        return 0
    hP = _hom_basis(P, Y)
    if not len(hP):
        return len(hK)
    restricted = la.matmul(inc.matrix, hP, X.p)  # (r, k, y): phi o inc
    rank = la.rank(restricted.reshape(len(hP), -1), X.p)
    return len(hK) - rank
