import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from vortsym import exactla as la
from vortsym.exactla import Matrix, span


def F(*xs):
    return tuple(Fraction(x) for x in xs)


def sympy_rank(rows):
    if not rows:
        return 0
    return sympy.Matrix([[sympy.Rational(a.numerator, a.denominator) for a in r] for r in rows]).rank()


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(rationals, min_size=c, max_size=c), min_size=1, max_size=max_rows))


def test_rref_identity_is_fixed():
    assert la.rref(Matrix.identity(3)) == Matrix.identity(3)


def test_rref_rank_one():
    assert la.rref(Matrix.from_rows([[2, 4], [1, 2]])) == Matrix.from_rows([[1, 2], [0, 0]])


def test_rref_preserves_row_space(rng):
    # oracle: sympy ranks of the stacked rows, i.e. mutual membership of row spaces
    for _ in range(20):
        m = Matrix.from_rows([[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(5)]
                              for _ in range(5)])
        r = la.rref(m)
        rank = sympy_rank(m.entries)
        assert sympy_rank(r.entries) == rank
        assert sympy_rank(m.entries + r.entries) == rank


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_rref_idempotent(rows):
    m = Matrix.from_rows(rows)
    assert la.rref(la.rref(m)) == la.rref(m)


def test_span_examples():
    assert span([F(1, 0), F(0, 1), F(1, 1)]) == la.full_space(2)
    assert span([], 3) == la.zero_subspace(3)
    assert span([], 3).ambient_dim == 3
    s = span([F(2, 4, 0), F(1, 2, 0)])
    assert s.basis == (F(1, 2, 0),)


def test_span_needs_ambient_for_empty_set():
    with pytest.raises(la.DimensionError):
        span([])


def test_span_rejects_mixed_lengths():
    with pytest.raises(la.DimensionError):
        span([F(1, 0), F(1, 0, 0)])


@given(st.lists(st.lists(rationals, min_size=4, max_size=4), min_size=1, max_size=5), st.randoms())
@settings(max_examples=50, deadline=None)
def test_span_is_canonical(vectors, r):
    # a different generating set of the same space yields the identical basis
    vs = [F(*v) for v in vectors]
    mixed = []
    for _ in range(len(vs) + 1):
        coeffs = [Fraction(r.randint(-3, 3)) for _ in vs]
        mixed.append(la.combine(coeffs, vs, 4))
    a = span(vs)
    b = span(mixed + list(vs))
    assert a == b
    assert la.equals(a, b)


def test_sum_and_intersect_examples():
    e1, e2, e3 = (la.unit_vector(3, i) for i in range(3))
    assert la.sum_(span([e1]), span([e2])) == span([e1, e2])
    assert la.intersect(span([e1, e2]), span([e2, e3])) == span([e2])
    assert la.intersect(span([e1]), la.zero_subspace(3)) == la.zero_subspace(3)


def test_dimension_mismatch_is_reported():
    with pytest.raises(la.DimensionError):
        la.sum_(la.full_space(2), la.full_space(3))
    with pytest.raises(la.DimensionError):
        la.contains(la.full_space(2), F(1, 2, 3))


def test_modular_dimension_law():
    r = random.Random(7)
    for _ in range(120):
        n = r.randint(2, 8)
        a = span([[Fraction(r.randint(-2, 2)) for _ in range(n)] for _ in range(r.randint(0, n))], n)
        b = span([[Fraction(r.randint(-2, 2)) for _ in range(n)] for _ in range(r.randint(0, n))], n)
        s, i = a + b, a & b
        assert a.dim + b.dim == s.dim + i.dim
        assert i <= a and i <= b and a <= s and b <= s


def test_contains():
    s = span([F(1, 1, 0)])
    assert la.contains(s, F(3, 3, 0))
    assert not la.contains(s, F(1, 0, 0))
    assert F(-2, -2, 0) in s


def test_solve_examples():
    assert la.solve(Matrix.identity(2), F(1, 2)) == F(1, 2)
    a, b = la.solve(Matrix.from_rows([[1, 1]]), F(3))
    assert a + b == 3
    assert la.solve(Matrix.from_rows([[1], [1]]), F(0, 1)) is None


def test_solve_rejects_wrong_rhs_length():
    with pytest.raises(la.DimensionError):
        la.solve(Matrix.identity(2), F(1))


def test_solve_exact_against_integer_arithmetic(rng):
    # clear denominators and check m x = b with integers only
    for _ in range(30):
        n = rng.randint(1, 5)
        m = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        b = [rng.randint(-9, 9) for _ in range(n)]
        x = la.solve(Matrix.from_rows(m, cols=n), F(*b))
        if x is None:
            assert sympy_rank([F(*r) for r in m]) < n
            continue
        den = math.lcm(*(v.denominator for v in x))
        ints = [v.numerator * (den // v.denominator) for v in x]
        for row, rhs in zip(m, b):
            assert sum(a * v for a, v in zip(row, ints)) == rhs * den


def test_nullspace_vectors_are_annihilated(rng):
    for _ in range(20):
        m = Matrix.from_rows([[rng.randint(-2, 2) for _ in range(6)] for _ in range(4)])
        ker = la.nullspace(m)
        assert len(ker) == 6 - la.rank(m)
        for v in ker:
            assert la.is_zero(m.apply(v))


def test_as_fraction_refuses_floats():
    with pytest.raises(TypeError):
        la.as_fraction(0.5)
    assert la.as_fraction("3/6") == Fraction(1, 2)


def test_matrix_shape_checked():
    with pytest.raises(la.DimensionError):
        Matrix(2, 2, ((1, 2),))
    with pytest.raises(la.DimensionError):
        Matrix.identity(2) @ Matrix.identity(3)
