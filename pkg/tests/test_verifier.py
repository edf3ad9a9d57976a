import random
from fractions import Fraction

import pytest
import sympy

from vortsym import polyfield as pf
from vortsym import verifier as vf
from vortsym import vortmodel as vm
from vortsym.polyfield import Polynomial, psi, t, x, y
from vortsym.vortmodel import SymmetryFamilyParams

ST, SX, SY = sympy.symbols("t x y")


def sym(p):
    return sum((sympy.Rational(c.numerator, c.denominator) * ST ** e[0] * SX ** e[1] * SY ** e[2]
                for e, c in p.items()), sympy.Integer(0))


def sym_residual(q, beta, tv=ST, xv=SX, yv=SY):
    z = sympy.diff(q, xv, 2) + sympy.diff(q, yv, 2)
    return sympy.diff(z, tv) + sympy.diff(q, xv) * sympy.diff(z, yv) - sympy.diff(q, yv) * sympy.diff(z, xv) \
        + beta * sympy.diff(q, xv)


def test_residual_examples():
    assert vf.residual_bve(x, 1) == 1
    assert vf.residual_bve(x * y) == 0
    # zeta = 2t, so the residual is zeta_t = 2
    assert vf.residual_bve(t * x ** 2) == 2
    # zeta = 6xy: 3x^2 y * 6x - x^3 * 6y
    assert vf.residual_bve(x ** 3 * y) == 12 * x ** 3 * y
    with pytest.raises(vf.StreamFunctionError):
        vf.residual_bve(psi)


def test_residual_matches_sympy(rng):
    for beta in vf.BETAS:
        q = vf.random_psi(rng, 4)
        want = sympy.expand(sym_residual(sym(q), sympy.Rational(beta.numerator, beta.denominator)))
        assert sym(vf.residual_bve(q, beta)) == want


def test_hspec_validation():
    with pytest.raises(vf.HSpecError):
        vf.HSpec(((1, ("zeta_z",)),))
    with pytest.raises(vf.HSpecError):
        vf.HSpec(((psi, "zeta_x"),))
    with pytest.raises(vf.HSpecError):
        vf.HSpec((1,))
    h = vf.HSpec(((y, "zeta_x"),))
    assert h.evaluate(x ** 3) == 6 * y


def test_theorem1_example():
    p = SymmetryFamilyParams(T1=2, T0=1, Y0=-3, epsilon=-1, f=t ** 2 + 1, g=5 * t ** 3)
    assert p.factor == Fraction(-1, 4)
    r = random.Random(5)
    for _ in range(20):
        rep = vf.verify_theorem1(p, vf.random_psi(r), Fraction(7, 3))
        assert rep.holds
        assert rep.factor == Fraction(-1, 4)


def test_theorem1_against_sympy_chain_rule():
    beta = sympy.Rational(7, 3)
    T1, T0, Y0, eps = sympy.Integer(2), sympy.Integer(1), sympy.Integer(-3), -1
    f, g = ST ** 2 + 1, 5 * ST ** 3
    q = SX ** 3 * SY + ST * SY ** 2 * SX - SX * SY ** 3
    nt, nx, ny = sympy.symbols("nt nx ny")
    # old coordinates in terms of the new ones
    told = (nt - T0) / T1
    xold = (nx - f.subs(ST, told)) * T1
    yold = (ny - Y0) * T1 / eps
    old = {ST: told, SX: xold, SY: yold}
    new_psi = eps / T1 ** 3 * q.subs(old, simultaneous=True) \
        - eps / T1 ** 2 * sympy.diff(f, ST).subs(ST, told) * yold + g.subs(ST, told)
    r_new = sym_residual(new_psi, beta, nt, nx, ny)
    back = r_new.subs({nt: T1 * ST + T0, nx: SX / T1 + f, ny: eps * SY / T1 + Y0}, simultaneous=True)
    assert sympy.simplify(back - sympy.Rational(-1, 4) * sym_residual(q, beta)) == 0
    p = SymmetryFamilyParams(T1=2, T0=1, Y0=-3, epsilon=-1, f=t ** 2 + 1, g=5 * t ** 3)
    ours = vf.transformed_residual(vm.family_to_substitution(p), x ** 3 * y + t * y ** 2 * x - x * y ** 3,
                                   lambda z: vf.residual_bve(z, Fraction(7, 3)))
    assert sym(ours) == sympy.expand(back)


def test_bare_substitution_needs_factor():
    with pytest.raises(ValueError):
        vf.verify_theorem1(pf.AffineSubstitution.identity(), x)


@pytest.mark.parametrize("kind", vf.INJECTIONS)
def test_injected_perturbations_fail(kind, rng):
    p = vf.random_family(rng)
    fails = 0
    for _ in range(3):
        s, factor = vf.perturbed_family(p, kind)
        if not vf.verify_theorem1(s, vf.random_psi(rng), 1, factor).holds:
            fails += 1
    assert fails >= 1


def test_unperturbed_restricted_map_is_the_family(rng):
    p = vf.random_family(rng)
    eps = Fraction(p.epsilon)
    s = vf.restricted_substitution(p.T1, p.T0, 1 / p.T1, 0, eps / p.T1, p.Y0, eps / p.T1 ** 3,
                                   -(pf.diff(p.f, "t") * (eps / p.T1 ** 2)), p.g, p.f)
    assert s == vm.family_to_substitution(p)
    assert vf.restricted_factor(p.T1, 1 / p.T1, eps / p.T1 ** 3) == p.factor


def test_unknown_injection():
    with pytest.raises(ValueError):
        vf.perturbed_family(SymmetryFamilyParams.identity(), "bogus")


def test_discrete_group():
    rep = vf.verify_discrete_group(1)
    assert rep.holds
    assert rep.table[("G1", "G2")] == "G1G2"
    assert rep.table[("G1G2", "G1G2")] == "id"
    assert rep.render_table()[0].split() == ["TABLE", ".", "id", "G1", "G2", "G1G2"]
    g1 = rep.maps["G1"]
    assert [g1[v] for v in pf.VARS] == [-t, -x, y, psi]


def test_klein_detector_rejects_cyclic_group():
    names = ["e", "a", "b", "c"]
    z4 = {(names[i], names[j]): names[(i + j) % 4] for i in range(4) for j in range(4)}
    assert not vf._is_klein(names, z4, "e")


def test_conjugation_map():
    rep = vf.verify_conjugation_map(x, 1)
    assert rep.holds and rep.lhs == 1
    r = random.Random(3)
    for beta in vf.BETAS:
        assert vf.verify_conjugation_map(vf.random_psi(r, 4), beta).holds


def test_conjugation_rules_invert():
    fwd, back = vf.conjugation_rules(2), vf.conjugation_rules(2, inverse=True)
    assert vf.then_rules(fwd, back)["psi"] == psi


G2_EXAMPLE = dict(tau1=2, tau0=1, epsilon=-1, gamma1=t, gamma2=3, delta0=t ** 2)


def test_g2_golden_dictionary():
    e = vf.EquivTransform2.constrained(1, **G2_EXAMPLE)
    # sigma = eps beta gamma2 / (2 tau1^2) = -3/8
    assert e.sigma == Fraction(-3, 8)
    rep = vf.verify_g2_composition(e, 1)
    assert rep.dictionary == {"T1": "2", "T0": "1", "Y0": "-3", "epsilon": "-1", "f": "t", "g": "t^2 + 9/2"}
    assert rep.matches_closed_form


def test_g2_identity_element():
    e = vf.EquivTransform2.constrained(Fraction(7, 3), tau1=1)
    assert vf.verify_g2_composition(e, Fraction(7, 3)).family == SymmetryFamilyParams.identity()


def test_g2_constraint_violation_raises():
    e = vf.EquivTransform2(tau1=2, lam=1)
    assert "lambda != 1/tau_t" in e.constraint_violations(1)
    with pytest.raises(vm.NotTheorem1FormError):
        vf.verify_g2_composition(e, 1)


def test_g2_validation():
    with pytest.raises(ValueError):
        vf.EquivTransform2(tau1=1, lam=-1)
    with pytest.raises(ValueError):
        vf.EquivTransform2(tau1=1, delta=x ** 2)
    with pytest.raises(ValueError):
        vf.EquivTransform2(tau1=1, rotation=(1, 1))


def test_constrained_g2_is_symmetry_of_shifted_equation(rng):
    for beta in vf.BETAS:
        e = vf.random_g2(rng, beta)
        h = vf.conjugated_bve_h(beta)
        factor = Fraction(e.epsilon) / e.tau1 ** 2
        for _ in range(2):
            rep = vf.verify_point_map(e.rules(), vf.random_psi(rng, 4), factor, lambda q: vf.residual_class2(q, h))
            assert rep.holds


def test_random_g2_matches_closed_form(rng):
    for beta in vf.BETAS:
        for _ in range(3):
            assert vf.verify_g2_composition(vf.random_g2(rng, beta), beta).matches_closed_form


def test_family_closure_and_factor_multiplicativity(rng):
    for _ in range(10):
        a, b = vf.random_family(rng), vf.random_family(rng)
        c = vm.compose_families(a, b)
        assert c.factor == a.factor * b.factor
        assert vf.verify_theorem1(c, vf.random_psi(rng, 3), 1).holds
    a = vf.random_family(rng)
    inv = vm.family_from_substitution(pf.invert_affine(vm.family_to_substitution(a)))
    assert vm.compose_families(a, inv) == SymmetryFamilyParams.identity()


def test_structured_psis_are_stream_functions():
    for q in vf.structured_psis():
        assert not q.depends_on("psi")
