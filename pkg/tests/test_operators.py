from fractions import Fraction as F

import pytest
from hypothesis import assume, given

from kzdyn.errors import PoleAtOne, PoleError
from kzdyn.exact import RationalMatrix
from kzdyn.modules import build_module, sl2_hef, sl2_module, vector_rep
from kzdyn.operators import (
    EvalContext,
    abrr_residual,
    bb_alpha,
    bb_alpha_inverse,
    bb_product,
    bb_w,
    bb_w_universal,
    fusion_J,
    fusion_transformed,
    is_unipotent_lower,
    omega_matrices,
    p_series,
    reflection_scalar,
    r_matrix,
    r_matrix_euler,
    verify_r_exchange,
    verify_coproduct_factorization,
)

from conftest import small_fractions

ALPHA = (1, -1)


def sl2_lam(a):
    return (a / 2, -a / 2)


def product_eigenvalue(m, k, a):
    # a = (lam, alpha^vee); eigenvalue on v_k
    out = F(1)
    for j in range(k):
        out *= (a + F(m, 2) - j) / (a - F(m, 2) + j)
    return out


@pytest.mark.parametrize("m", range(1, 7))
@given(a=small_fractions)
def test_sl2_eigenvalues(m, a):
    assume(all(a - F(m, 2) + j != 0 for j in range(m)))
    got = bb_alpha(sl2_module(m), ALPHA, sl2_lam(a))
    assert got == RationalMatrix.diag([product_eigenvalue(m, k, a) for k in range(m + 1)])


def test_highest_weight_eigenvalue_is_one():
    for m in range(1, 5):
        assert bb_alpha(sl2_module(m), ALPHA, sl2_lam(F(7, 3)))[0, 0] == 1


def test_p_series_without_e_is_identity():
    H, _, F_ = sl2_hef(sl2_module(3))
    zero = RationalMatrix.zeros(4)
    assert p_series(F(5, 7), H, zero, F_) == RationalMatrix.identity(4)


@pytest.mark.parametrize("m", range(1, 7))
@given(t=small_fractions)
def test_inversion_identity(m, t):
    assume(t + 1 != 0)
    H, E, F_ = sl2_hef(sl2_module(m))
    try:
        lhs = p_series(-t - 2, -H, F_, E) @ p_series(t, H, E, F_)
    except PoleError:
        return
    assert lhs == (RationalMatrix.identity(m + 1).scale(t + 1) - H).scale(1 / (t + 1))


def test_limit_toward_identity():
    V = build_module(3, (1, 2))
    lam = (F(1, 3), F(1, 5), F(-8, 15))
    alpha = (1, 0, -1)
    ident = RationalMatrix.identity(V.dim)

    def off(s):
        d = bb_alpha(V, alpha, tuple(x * s for x in lam)) - ident
        return max(abs(v) for _, _, v in d.nonzero())

    assert off(10**6) < off(10**3) < off(1)


GENERIC = [
    (F(1, 3), F(2, 7), F(-13, 21)),
    (F(-5, 4), F(1, 9), F(41, 36)),
    (F(11, 6), F(-3, 2), F(-1, 3)),
]


@pytest.mark.parametrize("lam", GENERIC)
@pytest.mark.parametrize("degrees", [(1, 1), (1, 2)])
def test_reflection_scalar(lam, degrees):
    V = build_module(3, degrees)
    for a in V.root_system.positive_roots:
        neg = tuple(-x for x in a)
        assert bb_alpha(V, a, lam) @ bb_alpha(V, neg, lam) == reflection_scalar(V, a, lam)
        assert bb_alpha(V, a, lam) @ bb_alpha_inverse(V, a, lam) == RationalMatrix.identity(V.dim)


@pytest.mark.parametrize("lam", GENERIC)
def test_braid_relations_sl3(lam):
    V = build_module(3, (1, 2))
    a1, a2, a12 = (1, -1, 0), (0, 1, -1), (1, 0, -1)
    assert bb_product(V, [a1, a12, a2], lam) == bb_product(V, [a2, a12, a1], lam)


def test_commuting_relation_sl4():
    V = build_module(4, (1, 1))
    lam = (F(1, 3), F(2, 7), F(-1, 5), F(-44, 105))
    a1, a3 = (1, -1, 0, 0), (0, 0, 1, -1)
    assert bb_product(V, [a1, a3], lam) == bb_product(V, [a3, a1], lam)


def test_bb_w_identity_and_routes():
    V = build_module(3, (1, 1))
    rs = V.root_system
    lam = GENERIC[0]
    assert bb_w(V, rs.identity(), lam) == RationalMatrix.identity(V.dim)
    for w in rs.elements():
        assert bb_w(V, w, lam) == bb_w_universal(V, w, lam)
        assert bb_w(V, w, lam, w.reduced_word("max")) == bb_w(V, w, lam, w.reduced_word("min"))


def test_casimir_is_permutation_minus_scalar():
    N = 3
    V = build_module(N, (1, 1))
    perm = RationalMatrix.from_entries(
        V.dim, V.dim, {(b * N + a, a * N + b): F(1) for a in range(N) for b in range(N)}
    )
    om = omega_matrices(V, 0, 1)
    assert om.full == perm - RationalMatrix.identity(V.dim).scale(F(1, N))
    assert om.plus.transpose() == om.minus


@given(u=small_fractions, h=small_fractions)
def test_r_matrix_difference_quotient(u, h):
    assume(u != 1 and u + h != 1 and h != 0)
    V = build_module(2, (1, 1))
    om = omega_matrices(V, 0, 1).full
    quotient = (r_matrix(V, 0, 1, u + h) - r_matrix(V, 0, 1, u)).scale(1 / h)
    assert quotient == om.scale(-1 / ((u - 1) * (u + h - 1)))
    assert r_matrix_euler(V, 0, 1, u) == om.scale(-1 / (u - 1) ** 2).scale(u)


def test_r_matrix_pole_and_infinity():
    V = build_module(2, (1, 1))
    with pytest.raises(PoleAtOne):
        r_matrix(V, 0, 1, 1)
    om = omega_matrices(V, 0, 1)
    big = [F(10**6), F(10**9)]
    gaps = [max(abs(v) for _, _, v in (r_matrix(V, 0, 1, z) - om.plus).nonzero()) for z in big]
    assert gaps[1] < gaps[0]
    assert r_matrix(V, 0, 1, big[0]) - om.plus == om.full.scale(1 / (big[0] - 1))


def test_sl2_fusion_hand_value():
    V = build_module(2, (1, 1))
    J = fusion_transformed(V, sl2_lam(F(3)))
    # the only off-diagonal entry lowers the first factor and raises the second
    assert J == RationalMatrix.from_entries(4, 4, {(0, 0): 1, (1, 1): 1, (2, 2): 1, (3, 3): 1, (2, 1): F(-1, 3)})


@pytest.mark.parametrize("N,degrees", [(2, (1, 1)), (3, (1, 1)), (3, (1, 2))])
@pytest.mark.parametrize("lam_index", range(3))
def test_abrr(N, degrees, lam_index):
    V = build_module(N, degrees)
    lam = GENERIC[lam_index][:N] if N == 3 else (F(7, 5), F(-7, 5))
    J = fusion_transformed(V, lam)
    assert abrr_residual(V, lam, J).is_zero()
    assert is_unipotent_lower(V, J)
    assert is_unipotent_lower(V, fusion_J(V, lam))


@pytest.mark.parametrize("which", ["s1", "w0"])
def test_coproduct_factorization_and_r_exchange(which):
    W, U = vector_rep(3), build_module(3, (2,))
    WV = build_module(3, (1, 2))
    rs = WV.root_system
    w = rs.s(1) if which == "s1" else rs.w0
    ctx = EvalContext(GENERIC[1], F(3, 7))
    assert verify_coproduct_factorization(W, U, w, ctx).passed
    assert verify_r_exchange(WV, w, ctx).passed
    assert verify_r_exchange(WV, rs.identity(), ctx).passed


def test_bb_alpha_inverse_pole():
    V = sl2_module(1)
    with pytest.raises(PoleError):
        bb_alpha_inverse(V, ALPHA, sl2_lam(F(1, 2)))


def unshifted_eigenvalue(m, k, a):
    num = den = F(1)
    for s in range(k):
        num *= a + 2 + s
        den *= a - m + k + 1 + s
    return num / den


@pytest.mark.parametrize("m", range(1, 7))
@given(a=small_fractions)
def test_p_series_unshifted_eigenvalues(m, a):
    assume(all(a - m + k + 1 + s != 0 for k in range(m + 1) for s in range(k)))
    assume(all(a - 2 * k + m - j != 0 for k in range(m + 1) for j in range(k)))
    H, E, F_ = sl2_hef(sl2_module(m))
    try:
        p = p_series(a, H, E, F_)
    except PoleError:
        return
    assert p == RationalMatrix.diag([unshifted_eigenvalue(m, k, a) for k in range(m + 1)])
