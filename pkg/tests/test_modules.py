from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from kzdyn.errors import ConfigError, EmptyWeightSpace, MixedRank
from kzdyn.exact import RationalMatrix, mat_inverse
from kzdyn.modules import (
    ModuleDescriptor,
    build_module,
    exterior_power,
    group_lift,
    simple_lift,
    sl2_hef,
    sl2_module,
    tensor,
    torus_element,
    vector_rep,
    weyl_action_weight_zero,
)


def _bracket_ok(V):
    N = V.N
    for i in range(N):
        for j in range(N):
            for k in range(N):
                for l in range(N):
                    lhs = V.e(i, j).commutator(V.e(k, l))
                    rhs = RationalMatrix.zeros(V.dim)
                    if j == k:
                        rhs = rhs + V.e(i, l)
                    if l == i:
                        rhs = rhs - V.e(k, j)
                    if lhs != rhs:
                        return False
    return True


@pytest.mark.parametrize("N,degrees", [(2, (1,)), (3, (2,)), (4, (2,)), (3, (1, 2)), (2, (1, 1, 1))])
def test_gl_relations(N, degrees):
    assert _bracket_ok(build_module(N, degrees))


def test_dimensions_and_weights():
    V3 = vector_rep(3)
    assert exterior_power(V3, 1) is V3
    L2 = exterior_power(V3, 2)
    assert L2.dim == 3
    expected = {tuple(int(a in pair) for a in range(3)) for pair in combinations(range(3), 2)}
    assert {tuple(int(x) for x in w) for w in L2.gl_weights} == expected
    assert exterior_power(vector_rep(4), 2).dim == 6


def test_tensor_single_factor_and_mixed_rank():
    V = vector_rep(3)
    assert tensor([V]) is V
    with pytest.raises(MixedRank):
        tensor([V, vector_rep(4)])


def test_c2_is_l1():
    V = vector_rep(2)
    L1 = sl2_module(1)
    assert sl2_hef(V) == sl2_hef(L1)


@pytest.mark.parametrize("m", range(7))
def test_sl2_module_relations(m):
    H, E, F_ = sl2_hef(sl2_module(m))
    assert E.commutator(F_) == H
    assert H.commutator(E) == E.scale(2)
    assert H.commutator(F_) == F_.scale(-2)


def test_weight_space_lookup():
    V = build_module(2, (1, 1))
    assert len(V.weight_space((0, 0))) == 2
    with pytest.raises(EmptyWeightSpace):
        V.weight_space((5, -5))


def test_lift_of_identity_and_w0_word_independence():
    V = build_module(3, (1, 2))
    rs = V.root_system
    assert group_lift(V, rs.identity()).matrix == RationalMatrix.identity(V.dim)
    w0 = rs.w0
    a = group_lift(V, w0, w0.reduced_word("min")).matrix
    b = group_lift(V, w0, w0.reduced_word("max")).matrix
    assert a == b


def test_lift_acts_on_cartan_by_reflection():
    V = build_module(3, (1, 1))
    rs = V.root_system
    lam = (F(1, 3), F(2, 5), F(-11, 15))
    for i in (1, 2):
        x = simple_lift(V, i)
        got = x @ V.cartan(lam) @ mat_inverse(x)
        assert got == V.cartan(rs.s(i).act(lam))


def test_weyl_action_on_zero_weight_identity():
    V = build_module(2, (1, 1))
    rs = V.root_system
    assert weyl_action_weight_zero(V, rs.identity()) == RationalMatrix.identity(2)


@given(st.lists(st.integers(1, 6), min_size=3, max_size=3))
def test_torus_element_commutes_with_cartan(coords):
    V = build_module(3, (1, 2))
    t = torus_element(V, coords)
    assert t.commutator(V.cartan((F(1), F(2), F(-3)))).is_zero()


def test_descriptor_roundtrip_and_errors():
    d = ModuleDescriptor.parse("3:1,2")
    assert (d.N, d.degrees, str(d)) == (3, (1, 2), "3:1,2")
    assert ModuleDescriptor.parse("[1,1]", N=4).degrees == (1, 1)
    assert d.build().dim == 9
    for bad, N in (("3:0,1", None), ("1,4", 4), ("x:1", None), ("1,1", None), ("3:1", 4)):
        with pytest.raises(ConfigError):
            ModuleDescriptor.parse(bad, N)
