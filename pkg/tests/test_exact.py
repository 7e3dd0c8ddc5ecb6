from fractions import Fraction as F
from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from kzdyn.errors import FractionalExponent, NonClearingDenominator, SingularMatrix
from kzdyn.exact import PuiseuxMatrix, RationalMatrix, cofactor_det, first_difference, mat_det, mat_inverse, mat_rank

from conftest import small_fractions, square_matrices


def leibniz_det(rows):
    n = len(rows)
    total = F(0)
    for perm in permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = F(-1) ** inversions
        for i, j in enumerate(perm):
            term *= rows[i][j]
        total += term
    return total


def gauss_inverse(rows):
    """Plain Gaussian elimination with back substitution, column by column."""
    n = len(rows)
    cols = []
    for k in range(n):
        a = [list(r) + [F(int(i == k))] for i, r in enumerate(rows)]
        for c in range(n):
            p = max(range(c, n), key=lambda r: abs(a[r][c]))
            a[c], a[p] = a[p], a[c]
            for r in range(c + 1, n):
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        x = [F(0)] * n
        for r in reversed(range(n)):
            x[r] = (a[r][n] - sum(a[r][j] * x[j] for j in range(r + 1, n))) / a[r][r]
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def test_det_examples():
    assert mat_det(RationalMatrix([[F(5, 3)]])) == F(5, 3)
    assert mat_det(RationalMatrix([[1, 2], [3, 4]])) == -2
    assert mat_det(RationalMatrix.zeros(0)) == 1


def test_inverse_examples():
    assert mat_inverse(RationalMatrix.identity(3)) == RationalMatrix.identity(3)
    got = mat_inverse(RationalMatrix([[2, 0], [0, F(1, 2)]]))
    assert got == RationalMatrix([[F(1, 2), 0], [0, 2]])


def test_singular_inverse_raises():
    with pytest.raises(SingularMatrix):
        mat_inverse(RationalMatrix([[1, 2], [2, 4]]))
    assert mat_det(RationalMatrix([[1, 2], [2, 4]])) == 0


@given(square_matrices())
def test_bareiss_matches_leibniz(rows):
    m = RationalMatrix(rows)
    assert mat_det(m) == leibniz_det(rows) == cofactor_det(m)


@given(square_matrices())
def test_inverse_matches_independent_elimination(rows):
    m = RationalMatrix(rows)
    if leibniz_det(rows) == 0:
        with pytest.raises(SingularMatrix):
            mat_inverse(m)
        return
    inv = mat_inverse(m)
    assert inv == RationalMatrix(gauss_inverse(rows))
    assert m @ inv == RationalMatrix.identity(len(rows))


@given(square_matrices(2, 3), square_matrices(2, 3))
def test_det_multiplicative(a, b):
    if len(a) != len(b):
        return
    A, B = RationalMatrix(a), RationalMatrix(b)
    assert mat_det(A @ B) == mat_det(A) * mat_det(B)


@given(square_matrices(1, 4))
def test_rank_full_iff_nonzero_det(rows):
    m = RationalMatrix(rows)
    assert (mat_rank(m) == len(rows)) == (mat_det(m) != 0)


def test_kron_shape_and_mixed_product():
    a = RationalMatrix([[1, 2], [3, 4]])
    b = RationalMatrix([[0, 1], [1, 0]])
    assert a.kron(b).shape == (4, 4)
    assert a.kron(b) @ b.kron(a) == (a @ b).kron(b @ a)


def test_first_difference_reports_entry_and_shape():
    a = RationalMatrix([[1, 2], [3, 4]])
    b = RationalMatrix([[1, 2], [3, 5]])
    assert first_difference(a, a) is None
    assert first_difference(a, b) == (1, 1, 4, 5)
    assert first_difference(a, RationalMatrix.zeros(3))[0] == "shape"


def _mono(exps, nvars):
    return PuiseuxMatrix(1, 1, nvars, {(0, 0): {tuple(exps): 1}})


def test_substitute_power_clears_denominators():
    m = _mono((F(2, 3),), 1).substitute_power(3)
    assert m.entries == {(0, 0): {(F(2),): F(1)}}
    ex = PuiseuxMatrix.diagonal_monomials([(F(2, 3),), (F(-1, 3),)]).substitute_power(3)
    assert sorted(e[0] for e in ex.exponents()) == [-1, 2]
    with pytest.raises(NonClearingDenominator):
        _mono((F(1, 2),), 1).substitute_power(3)


def test_evaluate():
    assert _mono((1, -1), 2).evaluate((2, 3)) == RationalMatrix([[F(2, 3)]])
    c = RationalMatrix([[1, F(1, 2)], [0, 7]])
    assert PuiseuxMatrix.from_rational(c, 2).evaluate((F(5), F(1, 9))) == c
    with pytest.raises(FractionalExponent):
        _mono((F(1, 2),), 1).evaluate((4,))


@given(
    st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=2, max_size=2),
    st.lists(small_fractions, min_size=2, max_size=2),
    st.tuples(st.integers(1, 5), st.integers(1, 5)),
)
def test_puiseux_evaluation_is_a_homomorphism(exps, coeffs, z):
    a = PuiseuxMatrix.diagonal_monomials([tuple(map(F, e)) for e in exps], coeffs)
    b = PuiseuxMatrix.from_rational(RationalMatrix([[1, 2], [3, 4]]), 2)
    assert (a @ b).evaluate(z) == a.evaluate(z) @ b.evaluate(z)
    assert (a + b).evaluate(z) == a.evaluate(z) + b.evaluate(z)


def test_euler_derivative():
    m = PuiseuxMatrix(1, 1, 2, {(0, 0): {(F(3), F(-1)): F(2), (F(0), F(1)): F(1)}})
    d = m.z_derivative(0)
    assert d.entries == {(0, 0): {(F(3), F(-1)): F(6)}}
