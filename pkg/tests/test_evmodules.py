import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gperfect.algebra import AlgebraMap, direct_product, field, upper_triangular
from gperfect.evmodules import (
    CHECKS,
    EvMatrix,
    FpRModule,
    PresentationError,
    class_membership,
    depth_stable,
    evaluate_checks,
    free_fp_module,
    g_flat_cover,
    is_flat,
    pullback_truncation,
    random_fp_module,
    solve_over_R,
    truncation_levels,
    verify_certificate,
)
from gperfect.evring import EvRing
from gperfect.modules import hom_dim, is_projective
from gperfect.suites import column_module, example_ring, non_minimal_pullback, s1_avatar, scalar_ring


@pytest.fixture(scope="module")
def R():
    return example_ring(2)


def coker(R, rows):
    return FpRModule(R, rows)


def test_presentation_validation(R):
    with pytest.raises(PresentationError):
        EvMatrix(R, [[R.one], [R.one, R.one]])
    with pytest.raises(PresentationError):
        EvMatrix(R, [[1]])
    with pytest.raises(PresentationError):
        FpRModule(R, [])
    with pytest.raises(PresentationError):
        FpRModule(R, [[R.one]], gens=2)


def test_components(R):
    F = free_fp_module(R)
    for i in (1, 2, 7):
        assert F.component(i).dim == 4
    E = coker(R, [[R.e(1)]])
    assert E.component(1).dim == 0
    assert E.component(2).dim == 4 and E.component(5).dim == 4
    A = s1_avatar(R)
    assert all(A.component(i).dim == 0 for i in (1, 2, 3))
    with pytest.raises(ValueError):
        F.component(0)


def test_tail_quotient(R):
    assert free_fp_module(R).tail_quotient().dim == 3
    assert coker(R, [[R.e(1)]]).tail_quotient().dim == 3
    V = s1_avatar(R).tail_quotient()
    assert V.dim == 1 and not is_projective(V)


def test_class_membership(R):
    free = class_membership(free_fp_module(R))
    assert free["in_Z"] and free["Z_up_to_depth"] and not free["in_X"] and not free["in_Y"]
    avatar = class_membership(s1_avatar(R))
    assert avatar["in_Y"] and not avatar["in_X"] and not avatar["in_Z"]
    # kill the tail but keep slot 1: the module lives in the first class
    M = coker(R, [[R.one - R.e(1)]])
    v = class_membership(M)
    assert M.component(1).dim == 4 and v["in_X"] and not v["in_Y"]


def test_is_flat(R):
    assert is_flat(free_fp_module(R))
    assert not is_flat(s1_avatar(R))
    over_ut = scalar_ring(upper_triangular(2, 2)[0])
    ideal_only = FpRModule(over_ut, [[over_ut.one - over_ut.e(1)]])
    assert ideal_only.tail_quotient().dim == 0
    assert is_flat(ideal_only)
    not_flat = FpRModule(over_ut, [[over_ut.one - over_ut.e(1), over_ut.slot(1, over_ut.T.basis("e12"))]])
    assert not is_projective(not_flat.component(1))
    assert not is_flat(not_flat)


def test_flat_with_vanishing_slot():
    # generic components are V (x)_S T, so a module with tail S never has all components zero;
    # the nearest check: slot 1 vanishes, tail S and generic slots T are projective
    Rut = scalar_ring(upper_triangular(2, 2)[0])
    M = FpRModule(Rut, [[Rut.e(1)]])
    assert M.component(1).dim == 0 and M.tail_quotient().dim == 1
    assert is_flat(M)


def test_truncate_dims(R):
    F = free_fp_module(R)
    assert [F.truncate(k).dim for k in (1, 2, 3, 4)] == [7, 11, 15, 19]
    A = s1_avatar(R)
    assert {A.truncate(k).dim for k in (1, 2, 3)} == {1}
    rng = np.random.default_rng(5)
    for _ in range(5):
        M = random_fp_module(R, 2, 2, 2, int(rng.integers(1 << 30)))
        s = M.stable_index
        for k in range(max(s, 1), s + 3):
            assert M.truncate(k + 1).dim - M.truncate(k).dim == M.generic_component.dim


def test_solve_over_R(R):
    I = EvMatrix(R, [[R.one, R.zero], [R.zero, R.one]])
    b = [R.e(2), R.constant(R.S.basis("e12"))]
    assert solve_over_R(I, b) == b
    x = solve_over_R(EvMatrix(R, [[R.e(1)]]), [R.e(1)])
    assert x is not None and R.pi(1, x[0]) == R.T.one
    assert solve_over_R(EvMatrix(R, [[R.constant(R.S.basis("e12"))]]), [R.one]) is None
    with pytest.raises(PresentationError):
        solve_over_R(I, [R.one])


def test_solve_over_R_is_gated():
    # s -> (s, s22): the second factor is the simple left module top(S e22), not projective
    S = upper_triangular(2, 2)[0]
    T = direct_product(S, field(2))
    iota = AlgebraMap(S, T, np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1]]))
    Rg = EvRing(T, S, iota)
    assert not Rg.left_flat_cert
    with pytest.raises(PresentationError):
        solve_over_R(EvMatrix(Rg, [[Rg.one]]), [Rg.one])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**30), st.integers(1, 2), st.integers(1, 2))
def test_solve_round_trip(seed, m, n):
    R = example_ring(2)
    rng = np.random.default_rng(seed)
    A = EvMatrix(R, [[R.random_element(rng, 2) for _ in range(n)] for _ in range(m)])
    x0 = [R.random_element(rng, 2) for _ in range(n)]
    b = [sum((A[i, j] * x0[j] for j in range(n)), R.zero) for i in range(m)]
    x = solve_over_R(A, b)
    assert x is not None
    for i in range(m):
        assert sum((A[i, j] * x[j] for j in range(n)), R.zero) == b[i]


def test_random_fp_module(R):
    F = random_fp_module(R, 2, 0, 3, seed=1)
    assert F.truncate(1).dim == 14
    a, b = random_fp_module(R, 2, 2, 3, 7), random_fp_module(R, 2, 2, 3, 7)
    assert a.presentation == b.presentation
    c = random_fp_module(R, 2, 3, 0, 11)
    assert c.stable_index == 0


def test_cover_free(R):
    cert = g_flat_cover(free_fp_module(R))
    assert cert.passing
    s = cert.summary()
    assert (s["V_dim"], s["L_dim"], s["X_dim"]) == (3, 3, 0)
    for k in truncation_levels(cert.pullback.N, 3):
        assert pullback_truncation(cert.pullback, k).pi1.is_bijective()


def test_cover_s1_avatar(R):
    cert = g_flat_cover(s1_avatar(R))
    assert cert.passing
    pb = cert.pullback
    assert (pb.V.dim, pb.L.dim, pb.X.dim) == (1, 2, 1)
    for k in truncation_levels(pb.N, 3):
        lvl = pb.truncation(k)
        assert lvl.Nk.dim == 1 and lvl.Lp.dim == 2
        assert lvl.fk.compose(lvl.pi1) == lvl.gk.compose(lvl.pi2)
    assert cert.check("C5").details["brute_small"]
    report = verify_certificate(cert)
    assert report["passing"] and report["depth_stable"]
    assert [c["name"] for c in report["checks"]] == list(CHECKS)


def test_cover_column(R):
    cert = g_flat_cover(column_module(R))
    assert cert.passing
    pb = cert.pullback
    assert pb.X.dim == pb.L.dim - pb.V.dim


def test_negative_control(R):
    pb = non_minimal_pullback(R)
    checks = {c.name: c for c in evaluate_checks(pb)}
    for name in ("C1", "C2", "C3", "C4"):
        assert checks[name].passed, name
    assert not checks["C6"].passed
    assert not checks["C6"].details["g_right_minimal"]


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**30))
def test_random_certificates(seed):
    R = example_ring(2)
    rng = np.random.default_rng(seed)
    N = random_fp_module(R, int(rng.integers(1, 3)), int(rng.integers(0, 3)), 2, seed)
    cert = g_flat_cover(N, depth=2, seed=seed)
    assert cert.passing, [c.to_json() for c in cert.checks if not c.passed]
    assert depth_stable(cert.checks)
    pb = cert.pullback
    for k in truncation_levels(N, 2):
        lvl = pb.truncation(k)
        assert lvl.Lp.dim == lvl.Nk.dim + pb.X.dim
        assert lvl.pi1.kernel().dim == pb.X.dim
    # the pullback's components are those of N and its tail is the cover
    assert pb.tail_quotient() is pb.L
    assert is_projective(pb.L)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**30))
def test_stabilization(seed):
    R = example_ring(2)
    M = random_fp_module(R, 2, 2, 3, seed)
    s = M.stable_index
    G = M.generic_component
    for i in range(s + 1, s + 5):
        C = M.component(i)
        assert C.dim == G.dim
        assert hom_dim(C, C) == hom_dim(G, G)
