"""Finite-dimensional associative unital algebras over F_p.

An algebra is stored by structure constants ``mul[i, j, k]``: the
``k``-th coordinate of ``b_i * b_j``.  Elements are coordinate rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product as iproduct

import numpy as np

from . import linalg as la

SCAN_BOUND = 2**20
UNIT_TABLE_BOUND = 2**12


class ScanBoundExceeded(RuntimeError):
    """An exhaustive search would exceed the configured element-count bound."""


class AlgebraError(ValueError):
    pass


def _check_scan(count, bound, what):
    if count > bound:
        raise ScanBoundExceeded(f"{what}: {count} elements exceed scan bound {bound}")


class Algebra:
    """Associative unital algebra given by structure constants.

    ``structure`` records how the algebra was built (``("matrix", n)``,
    ``("product", factors)``, ``("opposite", base)``) so the radical and
    idempotent routines can take shortcuts.
    """

    def __init__(self, p, mul, unit, name="", names=None, structure=None, check=True):
        mul = np.asarray(mul, dtype=np.int64) % p
        unit = np.asarray(unit, dtype=np.int64).reshape(-1) % p
        d = unit.shape[0]
        if d == 0:
            raise AlgebraError("algebras must be unital, so dim >= 1")
        if mul.shape != (d, d, d):
            raise AlgebraError(f"structure constants have shape {mul.shape}, expected {(d, d, d)}")
        la._check_prime(p)
        self.p = p
        self.dim = d
        self.mul = mul
        self.mul.setflags(write=False)
        self.unit = unit
        self.unit.setflags(write=False)
        self.name = name or f"A{d}"
        self.names = tuple(names) if names else tuple(f"b{i}" for i in range(d))
        self.structure = structure
        if check:
            self.validate()

    def __repr__(self):
        return f"Algebra({self.name}, p={self.p}, dim={self.dim})"

    def __eq__(self, other):
        return (
            isinstance(other, Algebra)
            and self.p == other.p
            and self.dim == other.dim
            and np.array_equal(self.mul, other.mul)
            and np.array_equal(self.unit, other.unit)
        )

    def __hash__(self):
        return hash((self.p, self.dim, self.mul.tobytes()))

    def validate(self):
        p, C = self.p, self.mul
        # (b_i b_j) b_k == b_i (b_j b_k) for every basis triple
        left = np.einsum("ijm,mkn->ijkn", C, C) % p
        right = np.einsum("jkm,imn->ijkn", C, C) % p
        if not np.array_equal(left, right):
            i, j, k = np.argwhere(np.any(left != right, axis=-1))[0]
            raise AlgebraError(f"not associative on basis triple {(int(i), int(j), int(k))}")
        eye = la.identity(self.dim)
        if not np.array_equal(self.left_matrix(self.unit), eye):
            raise AlgebraError("unit is not a left identity")
        if not np.array_equal(self.right_matrix(self.unit), eye):
            raise AlgebraError("unit is not a right identity")

    # -- elements -------------------------------------------------------------

    def element(self, coords):
        return AlgElement(self, coords)

    def basis(self, i):
        if isinstance(i, str):
            i = self.names.index(i)
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return AlgElement(self, v)

    def __getitem__(self, name):
        return self.basis(name)

    @property
    def one(self):
        return AlgElement(self, self.unit)

    @property
    def zero(self):
        return AlgElement(self, np.zeros(self.dim, dtype=np.int64))

    def random_element(self, rng):
        return AlgElement(self, rng.integers(0, self.p, self.dim))

    @property
    def size(self):
        return self.p**self.dim

    def all_elements(self, bound=SCAN_BOUND):
        _check_scan(self.size, bound, f"enumerating {self.name}")
        return la.all_vectors(self.dim, self.p)

    # -- coordinate arithmetic (vectorised over leading axes) -----------------

    def mul_coords(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        return np.einsum("...i,...j,ijk->...k", a, b, self.mul, optimize=True) % self.p

    def left_matrix(self, a):
        """Matrix of ``x -> a x`` acting on rows: ``x @ L``."""
        return np.einsum("...i,ijk->...jk", np.asarray(a, dtype=np.int64), self.mul) % self.p

    def right_matrix(self, a):
        """Matrix of ``x -> x a`` acting on rows."""
        return np.einsum("...i,jik->...jk", np.asarray(a, dtype=np.int64), self.mul) % self.p

    @cached_property
    def regular_action(self):
        """Right regular representation, one matrix per basis vector."""
        return np.ascontiguousarray(np.transpose(self.mul, (1, 0, 2)))

    @cached_property
    def unit_mask(self):
        """Boolean table over element codes: is the element invertible."""
        _check_scan(self.size, UNIT_TABLE_BOUND, f"unit table of {self.name}")
        elems = la.all_vectors(self.dim, self.p)
        return la.batch_nonsingular(self.left_matrix(elems), self.p)

    def is_unit_coords(self, a):
        a = np.asarray(a, dtype=np.int64) % self.p
        if self.size <= UNIT_TABLE_BOUND:
            return self.unit_mask[la.encode(a, self.p)]
        if a.ndim == 1:
            return la.is_invertible(self.left_matrix(a), self.p)
        return la.batch_nonsingular(self.left_matrix(a.reshape(-1, self.dim)), self.p).reshape(a.shape[:-1])

    # -- structural data -------------------------------------------------------

    @property
    def kind(self):
        return self.structure[0] if self.structure else None

    @cached_property
    def factors(self):
        return self.structure[1] if self.kind == "product" else (self,)

    @cached_property
    def offsets(self):
        out, acc = [], 0
        for f in self.factors:
            out.append(acc)
            acc += f.dim
        return tuple(out)

    @cached_property
    def radical(self):
        return jacobson_radical(self)


@dataclass(frozen=True, eq=False)
class AlgElement:
    algebra: Algebra
    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=np.int64).reshape(-1) % self.algebra.p
        if c.shape[0] != self.algebra.dim:
            raise AlgebraError(f"expected {self.algebra.dim} coordinates, got {c.shape[0]}")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def _same(self, other):
        if isinstance(other, int):
            return self.algebra.one * other
        if not isinstance(other, AlgElement) or other.algebra != self.algebra:
            raise AlgebraError("elements belong to different algebras")
        return other

    def __add__(self, other):
        other = self._same(other)
        return AlgElement(self.algebra, self.coords + other.coords)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._same(other)
        return AlgElement(self.algebra, self.coords - other.coords)

    def __rsub__(self, other):
        return self._same(other) - self

    def __neg__(self):
        return AlgElement(self.algebra, -self.coords)

    def __mul__(self, other):
        if isinstance(other, int):
            return AlgElement(self.algebra, self.coords * other)
        other = self._same(other)
        return AlgElement(self.algebra, self.algebra.mul_coords(self.coords, other.coords))

    def __rmul__(self, other):
        if isinstance(other, int):
            return AlgElement(self.algebra, self.coords * other)
        return self._same(other) * self

    def __pow__(self, n):
        out = self.algebra.one
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.algebra.one * other
        return isinstance(other, AlgElement) and other.algebra == self.algebra and np.array_equal(
            self.coords, other.coords
        )

    def __hash__(self):
        return hash((id(self.algebra), self.coords.tobytes()))

    def __bool__(self):
        return bool(np.any(self.coords))

    def __repr__(self):
        terms = [
            (f"{c}*" if c != 1 else "") + self.algebra.names[i]
            for i, c in enumerate(self.coords)
            if c
        ]
        return " + ".join(terms) if terms else "0"

    def is_idempotent(self):
        return self * self == self

    def tolist(self):
        return [int(c) for c in self.coords]


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of an algebra, kept as a canonical rref basis."""

    algebra: Algebra
    basis: np.ndarray

    def __post_init__(self):
        B = la.row_basis(self.basis, self.algebra.p, self.algebra.dim)
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)

    @property
    def dim(self):
        return len(self.basis)

    def __contains__(self, x):
        v = x.coords if isinstance(x, AlgElement) else np.asarray(x)
        return la.contains(self.basis, v.reshape(1, -1), self.algebra.p)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and other.algebra == self.algebra
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash(self.basis.tobytes())

    def elements(self):
        return [AlgElement(self.algebra, v) for v in la.span_elements(self.basis, self.algebra.p)]


class AlgebraMap:
    """Unital algebra homomorphism, ``coords @ matrix``."""

    def __init__(self, source, target, matrix, check=True):
        self.source = source
        self.target = target
        self.matrix = la.asmat(matrix, target.p, target.dim)
        if self.matrix.shape != (source.dim, target.dim):
            raise AlgebraError(f"map matrix has shape {self.matrix.shape}")
        if check:
            self.validate()

    def validate(self):
        S, T, M = self.source, self.target, self.matrix
        if S.p != T.p:
            raise AlgebraError("algebra map between different characteristics")
        if not np.array_equal(la.matmul(S.unit, M, S.p), T.unit):
            raise AlgebraError("map does not preserve the unit")
        # phi(b_i b_j) == phi(b_i) phi(b_j)
        lhs = la.matmul(S.mul.reshape(-1, S.dim), M, S.p).reshape(S.dim, S.dim, T.dim)
        rhs = np.einsum("ia,jb,abk->ijk", M, M, T.mul) % T.p
        if not np.array_equal(lhs, rhs):
            raise AlgebraError("map is not multiplicative")

    def __call__(self, a):
        if isinstance(a, AlgElement):
            return AlgElement(self.target, la.matmul(a.coords, self.matrix, self.target.p))
        return la.matmul(np.asarray(a), self.matrix, self.target.p)

    def is_injective(self):
        return la.rank(self.matrix, self.target.p) == self.source.dim

    def compose(self, other):
        """``self`` after ``other``."""
        return AlgebraMap(other.source, self.target, la.matmul(other.matrix, self.matrix, self.target.p))

    def __repr__(self):
        return f"AlgebraMap({self.source.name} -> {self.target.name})"


def identity_map(A):
    return AlgebraMap(A, A, la.identity(A.dim), check=False)


# -- constructors ---------------------------------------------------------------


def matrix_algebra(p, n):
    """Full matrix algebra M_n(F_p) on matrix units ``e_ij`` (row-major)."""
    d = n * n
    C = np.zeros((d, d, d), dtype=np.int64)
    for i, j, l in iproduct(range(n), repeat=3):
        C[i * n + j, j * n + l, i * n + l] = 1
    unit = np.zeros(d, dtype=np.int64)
    unit[[i * n + i for i in range(n)]] = 1
    names = [f"e{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    name = f"F{p}" if n == 1 else f"M{n}(F{p})"
    return Algebra(p, C, unit, name=name, names=names, structure=("matrix", n))


def field(p):
    return matrix_algebra(p, 1)


def upper_triangular(p, n):
    """Upper triangular matrices, with the inclusion into ``matrix_algebra(p, n)``."""
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    index = {ij: t for t, ij in enumerate(pairs)}
    d = len(pairs)
    C = np.zeros((d, d, d), dtype=np.int64)
    for (i, j), a in index.items():
        for (k, l), b in index.items():
            if j == k:
                C[a, b, index[(i, l)]] = 1
    unit = np.zeros(d, dtype=np.int64)
    unit[[index[(i, i)] for i in range(n)]] = 1
    names = [f"e{i + 1}{j + 1}" for i, j in pairs]
    S = Algebra(
        p, C, unit, name=f"UT{n}(F{p})" if n > 1 else f"F{p}", names=names,
        structure=("matrix", 1) if n == 1 else None,
    )
    T = matrix_algebra(p, n)
    M = np.zeros((d, n * n), dtype=np.int64)
    for (i, j), a in index.items():
        M[a, i * n + j] = 1
    return S, AlgebraMap(S, T, M)


def truncated_polynomial(p, n):
    """F_p[x]/(x^n) on the monomial basis 1, x, ..., x^(n-1)."""
    C = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n - i):
            C[i, j, i + j] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[0] = 1
    names = ["1"] + ["x" if k == 1 else f"x^{k}" for k in range(1, n)]
    return Algebra(
        p, C, unit, name=f"F{p}[x]/(x^{n})", names=names,
        structure=("matrix", 1) if n == 1 else None,
    )


def direct_product(*algebras):
    """Componentwise product; coordinates are concatenated in factor order."""
    if not algebras:
        raise AlgebraError("direct product of no algebras")
    p = algebras[0].p
    if any(A.p != p for A in algebras):
        raise AlgebraError("direct product of algebras over different fields")
    if len(algebras) == 1:
        return algebras[0]
    d = sum(A.dim for A in algebras)
    C = np.zeros((d, d, d), dtype=np.int64)
    unit = np.zeros(d, dtype=np.int64)
    names = []
    o = 0
    for t, A in enumerate(algebras):
        s = slice(o, o + A.dim)
        C[s, s, s] = A.mul
        unit[s] = A.unit
        names += [f"{n}[{t}]" for n in A.names]
        o += A.dim
    name = " x ".join(A.name for A in algebras)
    return Algebra(p, C, unit, name=name, names=names, structure=("product", tuple(algebras)), check=False)


def injection(P, i):
    """Coordinate matrix of the (non-unital) inclusion of factor ``i``."""
    F = P.factors[i]
    M = np.zeros((F.dim, P.dim), dtype=np.int64)
    M[:, P.offsets[i] : P.offsets[i] + F.dim] = la.identity(F.dim)
    return M


def projection(P, i):
    F = P.factors[i]
    M = np.zeros((P.dim, F.dim), dtype=np.int64)
    M[P.offsets[i] : P.offsets[i] + F.dim, :] = la.identity(F.dim)
    return AlgebraMap(P, F, M, check=False)


def opposite_algebra(A):
    if A.kind == "opposite":
        return A.structure[1]
    C = np.transpose(A.mul, (1, 0, 2))
    return Algebra(
        A.p, C, A.unit, name=f"{A.name}^op", names=A.names, structure=("opposite", A), check=False
    )


def quotient_algebra(A, ideal):
    """``A / I`` for a two-sided ideal, on the complement coordinates."""
    B = ideal.basis if isinstance(ideal, Subspace) else la.row_basis(ideal, A.p, A.dim)
    keep = la.complement_columns(B, A.dim)
    piv = la.pivots_of(B)
    q = la.reduce_mod(la.identity(A.dim), B, piv, A.p)[:, keep]
    if not len(keep):
        raise AlgebraError("quotient by the whole algebra is the zero ring")
    C = np.stack([la.matmul(A.mul[np.ix_(keep, keep)].reshape(-1, A.dim), q, A.p)]).reshape(
        len(keep), len(keep), len(keep)
    )
    unit = la.matmul(A.unit, q, A.p)
    return Algebra(A.p, C, unit, name=f"{A.name}/I", names=[A.names[k] for k in keep])


def linear_span_ideal(A, vectors):
    """Two-sided ideal generated by ``vectors``: span of ``b_i v b_j``."""
    V = la.row_basis(vectors, A.p, A.dim)
    if not len(V):
        return V
    left = np.einsum("ijk,vj->ivk", A.mul, V) % A.p  # b_i v
    both = np.einsum("ivk,kjl->ivjl", left, A.mul) % A.p  # (b_i v) b_j
    return la.row_basis(both.reshape(-1, A.dim), A.p, A.dim)


def _products_span(A, U, V):
    if not len(U) or not len(V):
        return la.zeros(0, A.dim)
    P = A.mul_coords(U[:, None, :], V[None, :, :])
    return la.row_basis(P.reshape(-1, A.dim), A.p, A.dim)


def _ideal_is_nilpotent(A, I):
    power = I
    for _ in range(A.dim + 1):
        if not len(power):
            return True
        power = _products_span(A, power, I)
    return not len(power)


def is_nilpotent_ideal(V):
    """Close ``V`` to a two-sided ideal and test whether some power vanishes."""
    A = V.algebra
    return _ideal_is_nilpotent(A, linear_span_ideal(A, V.basis))


# -- radical --------------------------------------------------------------------


def jacobson_radical(A, scan_bound=SCAN_BOUND):
    """Largest nilpotent two-sided ideal of ``A``."""
    kind = A.kind
    if kind == "matrix" or A.dim == 1:
        return Subspace(A, la.zeros(0, A.dim))
    if kind == "opposite":
        return Subspace(A, A.structure[1].radical.basis)
    if kind == "product":
        blocks = []
        for i, F in enumerate(A.factors):
            JF = F.radical.basis
            if len(JF):
                blocks.append(la.matmul(JF, injection(A, i), A.p))
        return Subspace(A, np.vstack(blocks) if blocks else la.zeros(0, A.dim))
    return _radical_scan(A, scan_bound)


def _radical_scan(A, scan_bound):
    # x lies in J(A) exactly when the ideal A x A is nilpotent
    _check_scan(A.size, scan_bound, f"radical scan of {A.name}")
    p, d = A.p, A.dim
    J = la.zeros(0, d)
    for x in la.all_vectors(d, p)[1:]:
        if len(J) and la.contains(J, x.reshape(1, -1), p):
            continue
        if _ideal_is_nilpotent(A, linear_span_ideal(A, x.reshape(1, -1))):
            J = la.row_basis(np.vstack([J, x]), p, d)
    return Subspace(A, J)


def radical_oracle(A, bound=UNIT_TABLE_BOUND):
    """Elementwise reference: ``x`` in J iff ``1 - y x`` is a unit for every ``y``.

    Independent of :func:`jacobson_radical`; exhaustive, so only for small
    algebras.  Returns the subspace and checks the member set is one.
    """
    _check_scan(A.size, bound, f"radical oracle on {A.name}")
    p = A.p
    elems = la.all_vectors(A.dim, p)
    units = A.unit_mask
    members = []
    for x in elems:
        prods = la.matmul(elems, A.right_matrix(x), p)  # y x for every y
        if units[la.encode((A.unit - prods) % p, p)].all():
            members.append(x)
    members = np.array(members, dtype=np.int64)
    J = la.row_basis(members, p, A.dim)
    if len(members) != p ** len(J):
        raise AssertionError("quasi-regular elements do not form a subspace")
    return Subspace(A, J)


def is_von_neumann_regular(A):
    """For finite-dimensional algebras this is semisimplicity: J(A) = 0."""
    return A.radical.dim == 0


def is_semiprimitive(A):
    return A.radical.dim == 0


# -- elementwise ------------------------------------------------------------------


def try_inverse(a):
    A = a.algebra
    x = la.solve_rows(A.left_matrix(a.coords), A.unit.reshape(1, -1), A.p)
    if x is None:
        return None
    inv = AlgElement(A, x[0])
    if inv * a != A.one or a * inv != A.one:
        return None
    return inv


def is_regular_element(a):
    """A witness ``x`` with ``a x a == a``, or ``None``."""
    A = a.algebra
    # row j of M is a b_j a, so x @ M == a x a
    M = A.mul_coords(A.mul_coords(a.coords, la.identity(A.dim)), a.coords)
    x = la.solve_rows(M, a.coords.reshape(1, -1), A.p)
    if x is None:
        return None
    w = AlgElement(A, x[0])
    assert a * w * a == a
    return w


def lift_idempotent(x, N):
    """Idempotent ``e`` with ``e - x`` in the nilpotent ideal ``N``.

    Iterates ``t -> 3t^2 - 2t^3``; the iteration stays inside the
    commutative subalgebra generated by ``x``, so it works in every
    characteristic.
    """
    A = x.algebra
    if (x * x - x) not in N:
        raise AlgebraError("x is not idempotent modulo N")
    t = x
    for _ in range(max(A.dim, 1)):
        if t * t == t:
            break
        t2 = t * t
        t = 3 * t2 - 2 * (t2 * t)
    if t * t != t:
        raise AlgebraError("idempotent lifting did not stabilise; is N nilpotent?")
    if (t - x) not in N:
        raise AlgebraError("lifted idempotent left the coset x + N")
    return t


def corner(e):
    """Basis of ``e A e``."""
    A = e.algebra
    left = A.mul_coords(e.coords, la.identity(A.dim))
    return la.row_basis(A.mul_coords(left, e.coords), A.p, A.dim)


def _corner_idempotent(e, scan_bound):
    """First idempotent of ``eAe`` other than 0 and ``e`` (code order), if any."""
    A = e.algebra
    B = corner(e)
    _check_scan(A.p ** len(B), scan_bound, f"idempotent scan in a corner of {A.name}")
    elems = la.span_elements(B, A.p)
    sq = A.mul_coords(elems, elems)
    is_idem = np.all(sq == elems, axis=1)
    is_idem &= np.any(elems != 0, axis=1) & np.any(elems != e.coords, axis=1)
    hits = np.flatnonzero(is_idem)
    return AlgElement(A, elems[hits[0]]) if hits.size else None


def is_primitive(e, scan_bound=SCAN_BOUND):
    return bool(e) and e.is_idempotent() and _corner_idempotent(e, scan_bound) is None


def primitive_idempotents(A, scan_bound=SCAN_BOUND):
    """Complete set of orthogonal primitive idempotents summing to 1."""
    out = _primitive_idempotents(A, scan_bound)
    total = A.zero
    for i, e in enumerate(out):
        if not is_primitive(e, scan_bound):
            raise AssertionError(f"{e} is not primitive")
        for f in out[i + 1 :]:
            if e * f or f * e:
                raise AssertionError("idempotents are not orthogonal")
        total = total + e
    if total != A.one:
        raise AssertionError("idempotents do not sum to 1")
    return out


def _primitive_idempotents(A, scan_bound):
    if A.kind == "matrix":
        n = A.structure[1]
        return [A.basis(i * n + i) for i in range(n)]
    if A.kind == "opposite":
        base = A.structure[1]
        return [A.element(e.coords) for e in _primitive_idempotents(base, scan_bound)]
    if A.kind == "product":
        out = []
        for i, F in enumerate(A.factors):
            emb = injection(A, i)
            out += [A.element(la.matmul(e.coords, emb, A.p)) for e in _primitive_idempotents(F, scan_bound)]
        return out

    def split(e):
        f = _corner_idempotent(e, scan_bound)
        if f is None:
            return [e]
        return split(f) + split(e - f)

    return split(A.one)
