import random
from fractions import Fraction

import pytest
import sympy

from vortsym import exactla as la
from vortsym import liealg as lg
from vortsym import vortmodel as vm
from vortsym.liealg import LieAlgebra

import oracles
from small_algebras import suite

SL2 = next(a for n, a, _ in suite() if n == "sl2")
AFFINE2 = next(a for n, a, _ in suite() if n == "affine2")
NONSPLIT = next(a for n, a, _ in suite() if n == "nonsplit3")


def poly(d):
    return vm.build_algebra(vm.TruncationSpec.polynomial(d))


def test_antisymmetry_violation_reports_pair():
    with pytest.raises(lg.StructureConstantError) as info:
        LieAlgebra(["a", "b"], {(0, 1): [1, 0], (1, 0): [1, 0]})
    assert info.value.triple == (1, 0)


def test_jacobi_violation_reports_triple():
    # [a,b]=c, [a,c]=a leaves a Jacobi defect of c at (a, b, c)
    with pytest.raises(lg.StructureConstantError) as info:
        LieAlgebra(["a", "b", "c"], {(0, 1): [0, 0, 1], (0, 2): [1, 0, 0]})
    assert info.value.triple == (0, 1, 2)


def test_bracket_vectors(p2):
    D, dt = p2.unit("D"), p2.unit("dt")
    assert p2.bracket(dt, D) == dt
    v = la.vec(1, 2, -1, 0, 3, 0, 1, 0, 5)
    assert la.is_zero(p2.bracket(v, v))
    p1 = poly(1)
    # [dy, X(t)] = -Z(1)
    assert p1.bracket(p1.unit("dy"), p1.unit("X1")) == la.scale(-1, p1.unit("Z0"))


def test_bracket_vectors_length_check(p2):
    with pytest.raises(la.DimensionError):
        p2.bracket(la.vec(1, 0), la.vec(0, 1))


def test_bracket_subspaces(p2):
    assert lg.bracket_subspaces(p2, p2.full(), p2.zero()) == p2.zero()
    assert lg.bracket_subspaces(AFFINE2, AFFINE2.full(), AFFINE2.full()) == AFFINE2.subspace("e2")
    assert lg.bracket_subspaces(p2, p2.full(), p2.full()) == p2.subspace(
        "dt", "dy", "X0", "X1", "X2", "Z0", "Z1", "Z2")


@pytest.mark.parametrize("d", range(0, 5))
def test_polynomial_derived_series(d):
    L = poly(d)
    rep = lg.derived_series(L)
    if d == 0:
        assert rep.dims == (5, 4, 0)
    else:
        assert rep.dims == (2 * d + 5, 2 * d + 4, 2 * d, 0)
    assert lg.is_solvable(L)
    for big, small in zip(rep.terms, rep.terms[1:]):
        assert lg.bracket_subspaces(L, big, small) <= small


def test_lower_central_terms_are_ideals(p2):
    for term in lg.lower_central_series(p2).terms:
        assert lg.is_ideal(p2, term)


def test_abelian_algebra():
    L = LieAlgebra(["a", "b", "c"], {})
    assert lg.derived_series(L).terms == (L.full(), L.zero())
    assert lg.center(L) == L.full()
    assert lg.radical(L) == L.full()
    assert lg.megaideal_closure(L).closure == [L.zero(), L.full()]


def test_center_of_p2_matches_brute_force(p2):
    assert lg.center(p2) == p2.zero()
    assert oracles.center(oracles.constants(p2)) == []


def test_center_against_oracle_on_suite():
    for name, L, _ in suite():
        expected = la.span([tuple(Fraction(int(a.p), int(a.q)) for a in v)
                            for v in oracles.center(oracles.constants(L))], L.dim)
        assert lg.center(L) == expected, name


def test_upper_central_series_of_filiform():
    L = next(a for n, a, _ in suite() if n == "filiform4")
    dims = lg.upper_central_series(L).dims
    assert dims == (0, 1, 2, 4)


def test_solvability():
    assert lg.is_solvable(poly(3))
    assert not lg.is_solvable(SL2)
    assert lg.derived_series(SL2).terms == (SL2.full(),)


def test_nilpotent_ideal_of_exponential_model(e01):
    n = e01.subspace("dy", "X0", "X1", "Z0", "Z1")
    assert lg.is_nilpotent(e01, n)
    assert not lg.is_nilpotent(e01)


def test_is_nilpotent_rejects_non_ideal(e01):
    with pytest.raises(lg.NotAnIdealError):
        lg.is_nilpotent(e01, e01.subspace("X1"))


def test_killing_form_of_sl2_is_nondegenerate():
    K = lg.killing_form(SL2)
    # independent 3x3 determinant
    m = [[K[i, j] for j in range(3)] for i in range(3)]
    det = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
           + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    assert det != 0
    assert lg.radical(SL2) == SL2.zero()


def test_killing_form_of_nonsplit_algebra_vanishes():
    assert all(a == 0 for a in lg.killing_form(NONSPLIT).flatten())


@pytest.mark.parametrize("d", [0, 2, 4])
def test_radical_of_polynomial_model_is_everything(d):
    L = poly(d)
    assert lg.radical(L) == L.full()


def test_radical_contains_sampled_solvable_ideals():
    r = random.Random(11)
    for name, L, _ in suite():
        rad = lg.radical(L)
        assert lg.is_solvable_subalgebra(L, rad) and lg.is_ideal(L, rad)
        for _ in range(50 // len(suite()) + 1):
            cand = lg.ideal_generated(L, [tuple(Fraction(r.randint(-1, 1)) for _ in range(L.dim))])
            if lg.is_solvable_subalgebra(L, cand):
                assert cand <= rad, name


def test_radical_of_semidirect_product():
    L = next(a for n, a, _ in suite() if n == "sl2_semidirect_Q2")
    assert lg.radical(L) == L.subspace("v1", "v2")


@pytest.mark.parametrize("name,L,expected", suite(), ids=[s[0] for s in suite()])
def test_nilradical_suite(name, L, expected):
    nil = lg.nilradical(L)
    assert nil == L.subspace(*expected)
    c = oracles.constants(L)
    basis = [[oracles.rat(a) for a in b] for b in nil.basis]
    assert oracles.is_ideal(c, basis)
    assert oracles.is_nilpotent(c, basis)
    assert oracles.nilradical_is_maximal(c, basis, trials=40)


def test_nilradical_inside_radical_and_contains_derived_algebra():
    for name, L, _ in suite():
        nil, rad = lg.nilradical(L), lg.radical(L)
        assert nil <= rad
        if lg.is_solvable(L):
            assert lg.bracket_subspaces(L, L.full(), L.full()) <= nil, name


def test_nonsplit_adjoint_is_not_nilpotent():
    # ad h has no zero power, so the Killing radical (everything here) overshoots
    ad_h = sympy.Matrix([[int(a) for a in row] for row in NONSPLIT.ad(NONSPLIT.unit("h")).entries])
    assert all(not (ad_h ** k).is_zero_matrix for k in range(1, 8))
    assert lg.nilradical(NONSPLIT) == NONSPLIT.subspace("x", "y")


def test_polynomial_nilradical_is_derived_algebra(p2):
    assert lg.nilradical(p2) == lg.derived_series(p2).terms[1]


def test_exponential_nilradical(e01):
    nil = lg.nilradical(e01)
    assert nil == e01.subspace("dy", "X0", "X1", "Z0", "Z1")
    assert lg.bracket_subspaces(e01, nil, nil) == e01.subspace("Z1")


def test_trace_radical_of_upper_triangular_matrices():
    from vortsym.exactla import Matrix
    E = lambda i, j: Matrix(2, 2, tuple(tuple(Fraction(int((r, c) == (i, j))) for c in range(2)) for r in range(2)))
    basis = lg.associative_closure([E(0, 0), E(0, 1), E(1, 1)])
    assert len(basis) == 3
    rad = lg.trace_radical(basis)
    assert len(rad) == 1
    nilpart = la.combine(rad[0], [b.flatten() for b in basis], 4)
    assert la.span([nilpart]) == la.span([E(0, 1).flatten()])


def test_megaideal_closure_on_p2(p2):
    lat = lg.megaideal_closure(p2)
    g1, g2 = lg.derived_series(p2).terms[1:3]
    low = lg.bracket_subspaces(p2, g1, g2)
    chain = [p2.zero(), low, g2, g1, p2.full()]
    assert all(s in lat for s in chain)
    assert all(a < b for a, b in zip(chain, chain[1:]))
    assert low == p2.subspace("X0", "Z0")


def test_megaideal_closure_on_e01(e01):
    lat = lg.megaideal_closure(e01)
    n = e01.subspace("dy", "X0", "X1", "Z0", "Z1")
    assert e01.subspace("Z1") in lat and n in lat
    assert e01.subspace("Z1") < n


@pytest.mark.parametrize("name", ["p2", "e01", "heis"])
def test_megaideal_closure_is_fixed_point_of_ideals(name, p2, e01):
    L = {"p2": p2, "e01": e01, "heis": next(a for n, a, _ in suite() if n == "heisenberg3")}[name]
    lat = lg.megaideal_closure(L)
    assert lg.closure_round(L, lat.closure) == set(lat.closure)
    assert L.zero() in lat and L.full() in lat
    for m in lat.closure:
        assert lg.bracket_subspaces(L, L.full(), m) <= m
    for i, j in lat.inclusion_order:
        assert lat.closure[i] < lat.closure[j]


def test_megaideal_closure_seed_flags(e01):
    lat = lg.megaideal_closure(e01, depth=1, include_seeds={"nilradical": False})
    assert all(tag != "nilradical" for tag, _ in lat.generators)


def test_megaideal_closure_is_deterministic(p2):
    assert lg.megaideal_closure(p2).closure == lg.megaideal_closure(p2).closure


def test_restrict_round_trip(p2):
    g1 = lg.derived_series(p2).terms[1]
    sub = lg.restrict(p2, g1)
    assert sub.dim == 8
    inner = lg.derived_series(sub).terms[1]
    assert lg.embed(p2, g1, inner) == lg.derived_series(p2).terms[2]
