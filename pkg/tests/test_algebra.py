import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gperfect import linalg as la
from gperfect.algebra import (
    Algebra,
    AlgebraError,
    AlgebraMap,
    AlgElement,
    ScanBoundExceeded,
    Subspace,
    direct_product,
    field,
    is_nilpotent_ideal,
    is_regular_element,
    is_von_neumann_regular,
    jacobson_radical,
    lift_idempotent,
    matrix_algebra,
    opposite_algebra,
    primitive_idempotents,
    projection,
    quotient_algebra,
    radical_oracle,
    truncated_polynomial,
    try_inverse,
    upper_triangular,
)
from gperfect.suites import radical_battery


@pytest.fixture(scope="module")
def UT2():
    return upper_triangular(2, 2)[0]


@pytest.fixture(scope="module")
def M2():
    return matrix_algebra(2, 2)


def test_matrix_unit_products(UT2, M2):
    e11, e12 = UT2.basis("e11"), UT2.basis("e12")
    assert e11 * e12 == e12
    assert e12 * e11 == UT2.zero
    assert M2.basis("e12") * M2.basis("e21") == M2.basis("e11")
    x = UT2.element([1, 1, 0])
    assert UT2.one * x == x == x * UT2.one


def test_mixing_algebras_raises(UT2, M2):
    with pytest.raises(AlgebraError):
        UT2.one * M2.one


def test_constructors():
    assert matrix_algebra(2, 2).dim == 4
    assert matrix_algebra(2, 1) == field(2)
    assert matrix_algebra(3, 2).dim == 4 and matrix_algebra(3, 2).p == 3
    S, iota = upper_triangular(2, 2)
    assert S.dim == 3 and iota.target == matrix_algebra(2, 2)
    assert iota.is_injective()
    assert upper_triangular(2, 1)[0].dim == 1
    assert upper_triangular(2, 3)[0].dim == 6


def test_direct_product(UT2, M2):
    F = field(2)
    FF = direct_product(F, F)
    assert FF.dim == 2
    for i in range(2):
        e = FF.element(np.eye(2, dtype=np.int64)[i])
        assert e * e == e
        assert all(e * FF.basis(j) == FF.basis(j) * e for j in range(2))
    assert direct_product(M2, UT2).dim == 7
    with pytest.raises(AlgebraError):
        direct_product(F, field(3))
    with pytest.raises(AlgebraError):
        Algebra(2, np.zeros((0, 0, 0)), [])


def test_projection_is_homomorphism(UT2, M2):
    P = direct_product(M2, UT2)
    projection(P, 1).validate()


def test_opposite(UT2):
    A = truncated_polynomial(2, 3)
    assert opposite_algebra(A) == A
    assert opposite_algebra(opposite_algebra(UT2)) is UT2
    O = opposite_algebra(UT2)
    e11, e12 = O.basis("e11"), O.basis("e12")
    assert e11 * e12 == O.zero
    assert e12 * e11 == e12


def test_validation_rejects_bad_tables():
    bad = np.zeros((2, 2, 2), dtype=np.int64)
    bad[0, 0, 0] = bad[0, 1, 1] = bad[1, 0, 1] = 1
    bad[1, 1, 0] = 1
    Algebra(2, bad, [1, 0])  # F_2[x]/(x^2 + 1) is fine
    nonassoc = bad.copy()
    nonassoc[1, 1] = [1, 1]
    nonassoc[0, 1] = [1, 1]
    with pytest.raises(AlgebraError):
        Algebra(2, nonassoc, [1, 0])
    with pytest.raises(AlgebraError):
        Algebra(2, bad, [0, 1])


def test_try_inverse(UT2):
    assert try_inverse(UT2.one) == UT2.one
    assert try_inverse(UT2.basis("e12")) is None
    x = UT2.one + UT2.basis("e12")
    assert try_inverse(x) == x


def test_radical_examples(UT2, M2):
    assert jacobson_radical(M2).dim == 0
    J = jacobson_radical(UT2)
    assert J.dim == 1 and UT2.basis("e12") in J
    A = truncated_polynomial(2, 2)
    assert A.basis(1) in jacobson_radical(A)
    assert jacobson_radical(M2) == radical_oracle(M2)
    assert J == radical_oracle(UT2)


def test_radical_scan_bound():
    A = truncated_polynomial(2, 6)
    with pytest.raises(ScanBoundExceeded):
        jacobson_radical(A, scan_bound=2**4)


def test_vnr(UT2, M2):
    assert is_von_neumann_regular(M2)
    assert not is_von_neumann_regular(UT2)
    assert is_von_neumann_regular(field(2))


def test_regular_elements(UT2, M2):
    e = UT2.basis("e11")
    w = is_regular_element(e)
    assert w is not None and e * w * e == e
    assert is_regular_element(UT2.basis("e12")) is None
    # brute force: a x a = 0 for all eight x
    e12 = UT2.basis("e12")
    assert all(e12 * AlgElement(UT2, x) * e12 == UT2.zero for x in UT2.all_elements())
    for x in M2.all_elements():
        a = AlgElement(M2, x)
        w = is_regular_element(a)
        assert w is not None and a * w * a == a


def test_lift_idempotent(UT2):
    A = truncated_polynomial(2, 3)
    N = Subspace(A, [[0, 1, 0], [0, 0, 1]])
    assert lift_idempotent(A.one + A.basis(1), N) == A.one
    t = UT2.basis("e11") + UT2.basis("e12")
    assert lift_idempotent(t, jacobson_radical(UT2)) == t
    assert lift_idempotent(UT2.basis("e22"), jacobson_radical(UT2)) == UT2.basis("e22")


def _check_idempotents(A, es):
    assert sum(es[1:], es[0]) == A.one
    for i, e in enumerate(es):
        assert e * e == e
        for j, f in enumerate(es):
            if i != j:
                assert e * f == A.zero


def test_primitive_idempotents(UT2, M2):
    assert primitive_idempotents(field(2)) == [field(2).one]
    for A in (UT2, M2, direct_product(M2, UT2)):
        es = primitive_idempotents(A)
        _check_idempotents(A, es)
        assert len(primitive_idempotents(A)) == len(es)
    assert len(primitive_idempotents(UT2)) == 2
    assert len(primitive_idempotents(M2)) == 2


def test_nilpotent_ideal(UT2):
    assert is_nilpotent_ideal(Subspace(UT2, la.zeros(0, 3)))
    assert is_nilpotent_ideal(Subspace(UT2, [UT2.basis("e12").coords]))
    assert not is_nilpotent_ideal(Subspace(UT2, la.identity(3)))


@pytest.mark.parametrize("A", radical_battery()[:7], ids=lambda A: A.name)
def test_radical_matches_oracle(A):
    J = jacobson_radical(A)
    assert J == radical_oracle(A)
    assert is_nilpotent_ideal(J)
    if J.dim:
        assert jacobson_radical(quotient_algebra(A, J)).dim == 0
    # von Neumann regular exactly when every element has a witness
    every = all(is_regular_element(AlgElement(A, x)) is not None for x in A.all_elements())
    assert every == is_von_neumann_regular(A)


def test_product_radical_shortcut(UT2, M2):
    P = direct_product(UT2, truncated_polynomial(2, 2))
    shortcut = jacobson_radical(P)
    # the same table without the product tag goes through the generic scan
    plain = Algebra(P.p, P.mul, P.unit)
    assert np.array_equal(jacobson_radical(plain).basis, shortcut.basis)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["UT2", "UT3", "M2", "x3"]), st.integers(0, 2**16))
def test_inverse_implies_regular(name, seed):
    A = {
        "UT2": lambda: upper_triangular(2, 2)[0],
        "UT3": lambda: upper_triangular(2, 3)[0],
        "M2": lambda: matrix_algebra(2, 2),
        "x3": lambda: truncated_polynomial(2, 3),
    }[name]()
    a = A.random_element(np.random.default_rng(seed))
    inv = try_inverse(a)
    if inv is not None:
        assert a * inv == A.one == inv * a
        w = is_regular_element(a)
        assert w is not None and a * w * a == a


def test_algebra_map_checks(UT2, M2):
    with pytest.raises(AlgebraError):
        AlgebraMap(UT2, M2, np.zeros((3, 4), dtype=np.int64))
