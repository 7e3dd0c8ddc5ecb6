from collections import Counter

import pytest
from hypothesis import given, strategies as st

from kzdyn import roots
from kzdyn.errors import InvalidCartanType, NotInOStar, NotMinuscule
from kzdyn.roots import AffineRoot, build_root_system

TYPES = [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 3), ("D", 4), ("G", 2), ("F", 4), ("E", 6)]
POS_COUNTS = {"A1": 1, "A2": 3, "A3": 6, "B2": 4, "B3": 9, "C3": 9, "D4": 12, "G2": 6, "F4": 24, "E6": 36}
WEYL_ORDERS = {"A1": 2, "A2": 6, "A3": 24, "B2": 8, "C3": 48, "G2": 12}


def test_a1_data():
    rs = build_root_system("A", 1)
    (a,) = rs.simple_roots
    assert rs.positive_roots == [a]
    assert rs.dual_fundamental(1) == tuple(x / 2 for x in a)
    assert rs.rho == rs.fundamental(1)


def test_a2_data():
    rs = build_root_system("A2")
    assert len(rs.positive_roots) == 3
    assert rs.theta == roots.vadd(rs.simple(1), rs.simple(2))


def test_g2_positive_roots():
    rs = build_root_system("G", 2)
    got = {tuple(int(c) for c in rs.coefficients(a)) for a in rs.positive_roots}
    assert got == {(1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2)}


@pytest.mark.parametrize("letter,rank", TYPES)
def test_root_counts_and_duality(letter, rank):
    rs = build_root_system(letter, rank)
    assert len(rs.positive_roots) == POS_COUNTS[rs.name]
    for i in range(1, rank + 1):
        for j in range(1, rank + 1):
            assert rs.pair(rs.dual_fundamental(i), rs.coroot(rs.simple(j))) * rs.pair(
                rs.simple(j), rs.simple(j)
            ) / 2 == (i == j)
            assert rs.pair(rs.fundamental(i), rs.coroot(rs.simple(j))) == (i == j)


@pytest.mark.parametrize("letter,rank", [t for t in TYPES if f"{t[0]}{t[1]}" in WEYL_ORDERS])
def test_weyl_group_order_and_longest_element(letter, rank):
    rs = build_root_system(letter, rank)
    elems = rs.elements()
    assert len(elems) == WEYL_ORDERS[rs.name]
    assert rs.w0.length == len(rs.positive_roots)
    assert max(w.length for w in elems) == rs.w0.length


def test_minuscule():
    for N in range(2, 6):
        rs = build_root_system("A", N - 1)
        assert all(roots.is_minuscule(rs, i) for i in range(1, N))
    g2 = build_root_system("G2")
    assert not roots.is_minuscule(g2, 1) and not roots.is_minuscule(g2, 2)


@pytest.mark.parametrize(
    "name,expected",
    [("B2", [1]), ("C3", [3]), ("D4", [1, 3, 4]), ("E6", [1, 6]), ("E7", [7]), ("F4", []), ("G2", []), ("E8", [])],
)
def test_o_star(name, expected):
    assert build_root_system(name).o_star == expected


def test_invalid_type():
    for bad in ("X2", "A0", "B1", "G3", ""):
        with pytest.raises(InvalidCartanType):
            build_root_system(bad)


def test_w_bracket_not_minuscule():
    with pytest.raises(NotMinuscule):
        roots.w_bracket(build_root_system("G2"), 1)


@given(st.lists(st.integers(1, 3), max_size=8))
def test_reduced_words_agree_on_inversion_set(word):
    rs = build_root_system("A3")
    w = rs.from_word(word)
    a, b = w.reduced_word("min"), w.reduced_word("max")
    assert rs.from_word(a) == w == rs.from_word(b)
    assert len(a) == len(b) == w.length
    assert set(roots.inversion_sequence(rs, a)) == set(roots.inversion_sequence(rs, b))
    assert all(rs.is_positive(x) and not rs.is_positive(w.act(x)) for x in roots.inversion_sequence(rs, a))


@given(st.lists(st.integers(1, 2), max_size=8), st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_dot_action_is_an_action(word, coeffs):
    rs = build_root_system("G2")
    lam = rs.from_coefficients(coeffs)
    w = rs.from_word(word)
    assert roots.dot_action(rs, rs.identity(), lam) == lam
    got = roots.dot_action(rs, w * rs.s(1), lam)
    assert got == roots.dot_action(rs, w, roots.dot_action(rs, rs.s(1), lam))


def test_affine_reduced_word_small_cases():
    rs = build_root_system("A1")
    ident = roots.affine_from_finite(rs.identity())
    assert ident.reduced_word() == (0, ())
    t = roots.translation(rs, rs.dual_fundamental(1))
    assert t.reduced_word() == (1, (1,))
    assert roots.pi_action_on_simple(rs, 1) == (1, 0)


def test_pi_elements():
    rs = build_root_system("A2")
    assert roots.pi_action_on_simple(rs, 1) == (1, 2, 0)
    assert roots.pi_element(rs, 1).length == 0
    with pytest.raises(NotInOStar):
        roots.pi_element(build_root_system("G2"), 1)


FULL_SEQ_TYPES = ["A1", "A2", "A3", "B2", "C3", "D4", "G2"]


@pytest.mark.parametrize("name", FULL_SEQ_TYPES)
def test_a_tilde_equals_useful_set(name):
    rs = build_root_system(name)
    for i in range(1, rs.rank + 1):
        t = roots.translation(rs, rs.dual_fundamental(i))
        seq, counts = roots.a_tilde_set(t)
        assert counts == roots.useful_set(rs, i)
        assert len(seq) == t.length


def _aff(rs, a, b, level):
    return AffineRoot(rs.from_coefficients((a, b)), level)


def test_g2_translation_roots():
    rs = build_root_system("G2")
    _, counts = roots.a_tilde_set(roots.translation(rs, rs.dual_fundamental(1)))
    expected = Counter(
        [_aff(rs, 1, 0, 0), _aff(rs, 1, 1, 0)]
        + [_aff(rs, 2, 1, k) for k in range(2)]
        + [_aff(rs, 3, 1, k) for k in range(3)]
        + [_aff(rs, 3, 2, k) for k in range(3)]
    )
    assert counts == expected


def test_b2_translation_roots():
    rs = build_root_system("B2")
    seq, _ = roots.a_tilde_set(roots.translation(rs, rs.dual_fundamental(2)))
    assert seq == [_aff(rs, 0, 1, 0), _aff(rs, 1, 2, 0), _aff(rs, 1, 1, 0), _aff(rs, 1, 2, 1)]


@pytest.mark.parametrize("name", ["A2", "B2", "C3", "G2"])
def test_solve_level(name):
    rs = build_root_system(name)
    for a in rs.positive_roots:
        for level in range(3):
            for alt in range(3):
                omega = roots.solve_level(rs, a, level, alt)
                assert rs.pair(omega, a) == -level
