"""Exact invariance checks for the barotropic vorticity equation

    zeta_t + psi_x zeta_y - psi_y zeta_x + beta psi_x = 0,   zeta = psi_xx + psi_yy.

A point map is checked on a concrete stream function psi(t, x, y): the image
psi~ is built in the new variables, the residual is evaluated there, pulled
back to the old variables and compared with a constant multiple of the
original residual.  With psi drawn as a generic polynomial this is an exact
identity test; it never re-derives the symmetry group.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence, Union

from .exactla import as_fraction
from .polyfield import (
    VARS,
    AffineSubstitution,
    NotAffineError,
    Polynomial,
    compose,
    diff,
    invert_affine,
    t as T,
    x as X,
    y as Y,
    psi as PSI,
)
from .vortmodel import (
    NotTheorem1FormError,
    SymmetryFamilyParams,
    compose_families,
    family_from_substitution,
    family_to_substitution,
)


class StreamFunctionError(ValueError):
    """A stream-function candidate depends on the psi coordinate."""


@dataclass(frozen=True)
class VorticityParameters:
    beta: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "beta", as_fraction(self.beta))


def _beta(params) -> Fraction:
    if isinstance(params, VorticityParameters):
        return params.beta
    return as_fraction(params)


def _stream(psi: Polynomial) -> Polynomial:
    psi = Polynomial._coerce(psi)
    if psi.depends_on("psi"):
        raise StreamFunctionError("a stream function must not depend on the psi coordinate")
    return psi


def vorticity(psi: Polynomial) -> Polynomial:
    return diff(diff(psi, "x"), "x") + diff(diff(psi, "y"), "y")


def residual_bve(psi: Polynomial, params=0) -> Polynomial:
    psi = _stream(psi)
    beta = _beta(params)
    z = vorticity(psi)
    px, py = diff(psi, "x"), diff(psi, "y")
    return diff(z, "t") + px * diff(z, "y") - py * diff(z, "x") + px * beta


# ---------------------------------------------------------------------------
# class of generalized vorticity equations with right-hand side H


JET_SYMBOLS = ("zeta_x", "zeta_y", "zeta_xx", "zeta_xy", "zeta_yy")


class HSpecError(ValueError):
    """Malformed right-hand side for the generalized vorticity class."""


@dataclass(frozen=True)
class HSpec:
    """H = sum_k coeff_k(t, x, y) * prod(symbols_k), symbols from JET_SYMBOLS."""

    terms: tuple

    def __post_init__(self):
        clean = []
        for item in self.terms:
            try:
                coeff, symbols = item
            except (TypeError, ValueError):
                raise HSpecError(f"term {item!r} is not a (coefficient, symbols) pair") from None
            coeff = Polynomial._coerce(coeff)
            if coeff.depends_on("psi"):
                raise HSpecError("H coefficients may depend on t, x, y only")
            if isinstance(symbols, str):
                symbols = (symbols,)
            symbols = tuple(symbols)
            bad = [s for s in symbols if s not in JET_SYMBOLS]
            if bad:
                raise HSpecError(f"unknown jet symbols {bad}; allowed: {JET_SYMBOLS}")
            clean.append((coeff, symbols))
        object.__setattr__(self, "terms", tuple(clean))

    def evaluate(self, psi: Polynomial) -> Polynomial:
        z = vorticity(psi)
        zx, zy = diff(z, "x"), diff(z, "y")
        jets = {"zeta_x": zx, "zeta_y": zy, "zeta_xx": diff(zx, "x"),
                "zeta_xy": diff(zx, "y"), "zeta_yy": diff(zy, "y")}
        out = Polynomial()
        for coeff, symbols in self.terms:
            term = coeff
            for s in symbols:
                term = term * jets[s]
            out = out + term
        return out


def conjugated_bve_h(params) -> HSpec:
    """H = -(beta/2) y^2 zeta_x, the right-hand side reached from the beta-plane equation."""
    return HSpec(((Y ** 2 * (-_beta(params) / 2), ("zeta_x",)),))


def residual_class2(psi: Polynomial, h: HSpec) -> Polynomial:
    psi = _stream(psi)
    if not isinstance(h, HSpec):
        raise HSpecError("expected an HSpec")
    z = vorticity(psi)
    px, py = diff(psi, "x"), diff(psi, "y")
    return diff(z, "t") + px * diff(z, "y") - py * diff(z, "x") - h.evaluate(psi)


# ---------------------------------------------------------------------------
# transforming residuals


@dataclass
class ResidualReport:
    holds: bool
    factor: Fraction
    lhs: Polynomial  # transformed residual, pulled back to the old variables
    rhs: Polynomial  # residual of the original stream function

    def proportional(self) -> Optional[Fraction]:
        """The constant c with lhs = c * rhs, if one exists."""
        if self.rhs.is_zero():
            return Fraction(0) if self.lhs.is_zero() else None
        e, c = next(iter(self.rhs.items()))
        ratio = self.lhs.coeff(e) / c
        return ratio if self.lhs == self.rhs * ratio else None


def transformed_residual(s: Union[AffineSubstitution, Mapping], psi: Polynomial,
                         residual: Callable[[Polynomial], Polynomial]) -> Polynomial:
    """Residual of the image of ``psi`` under ``s``, as a polynomial in the old variables.

    The (t, x, y) rules must be affine and free of psi; the psi rule may be
    any polynomial.
    """
    psi = _stream(psi)
    rules = s.as_mapping() if isinstance(s, AffineSubstitution) else {v: Polynomial._coerce(s[v]) for v in VARS}
    for v in ("t", "x", "y"):
        if rules[v].depends_on("psi"):
            raise NotAffineError(f"{v}-rule depends on psi; the image of a graph is not a graph")
    base = AffineSubstitution({"t": rules["t"], "x": rules["x"], "y": rules["y"]})
    inv = invert_affine(base)
    # psi~ as a function of the old variables, then of the new ones
    image_old = compose(rules["psi"], {"psi": psi})
    image_new = compose(image_old, {"t": inv["t"], "x": inv["x"], "y": inv["y"]})
    r_new = residual(image_new)
    return compose(r_new, {"t": rules["t"], "x": rules["x"], "y": rules["y"]})


def verify_point_map(s: Union[AffineSubstitution, Mapping], psi: Polynomial, factor,
                     residual: Callable[[Polynomial], Polynomial]) -> ResidualReport:
    factor = as_fraction(factor)
    lhs = transformed_residual(s, psi, residual)
    rhs = residual(_stream(psi))
    return ResidualReport(lhs == rhs * factor, factor, lhs, rhs)


def verify_theorem1(p: Union[SymmetryFamilyParams, AffineSubstitution], psi: Polynomial, params=0,
                    factor=None) -> ResidualReport:
    """Check that a family member maps the residual to eps/T1^2 times itself.

    ``p`` may also be a bare substitution (for perturbed maps), in which case
    ``factor`` must be supplied.
    """
    beta = _beta(params)
    if isinstance(p, SymmetryFamilyParams):
        s = family_to_substitution(p)
        factor = p.factor if factor is None else factor
    else:
        s = p
        if factor is None:
            raise ValueError("a factor is required for a bare substitution")
    return verify_point_map(s, psi, factor, lambda q: residual_bve(q, beta))


def restricted_substitution(T1=1, T0=0, X1=1, X2=0, Y1=1, Y0=0, Psi1=1,
                            Psi2: Polynomial = Polynomial(), Psi4: Polynomial = Polynomial(),
                            f: Polynomial = Polynomial()) -> AffineSubstitution:
    """T = T1 t + T0, X = X1 x + X2 y + f(t), Y = Y1 y + Y0, Psi = Psi1 psi + Psi2(t) y + Psi4(t)."""
    return AffineSubstitution({
        "t": T * as_fraction(T1) + T0,
        "x": X * as_fraction(X1) + Y * as_fraction(X2) + f,
        "y": Y * as_fraction(Y1) + Y0,
        "psi": PSI * as_fraction(Psi1) + Polynomial._coerce(Psi2) * Y + Psi4,
    })


def restricted_factor(T1, X1, Psi1) -> Fraction:
    """Psi1 / (T1 X1^2): the coefficient carried by zeta_t."""
    return as_fraction(Psi1) / (as_fraction(T1) * as_fraction(X1) ** 2)


INJECTIONS = ("shear", "anisotropic", "psi-scale")


def perturbed_family(p: SymmetryFamilyParams, kind: str) -> tuple:
    """A map off the symmetry family, with the factor the family would have.

    shear: x~ gains a y term; anisotropic: y~ is rescaled so that
    Y1^2 != X1^2; psi-scale: the psi coefficient is doubled.
    """
    if kind not in INJECTIONS:
        raise ValueError(f"unknown injection {kind!r}; expected one of {INJECTIONS}")
    eps = Fraction(p.epsilon)
    T1 = p.T1
    X1, Y1, Psi1, X2 = 1 / T1, eps / T1, eps / T1 ** 3, Fraction(0)
    if kind == "shear":
        X2 = Fraction(1)
    elif kind == "anisotropic":
        Y1 = 2 * Y1
    else:
        Psi1 = 2 * Psi1
    s = restricted_substitution(T1, p.T0, X1, X2, Y1, p.Y0, Psi1,
                                Psi2=-(diff(p.f, "t") * (eps / T1 ** 2)), Psi4=p.g, f=p.f)
    return s, restricted_factor(T1, X1, eps / T1 ** 3)


# ---------------------------------------------------------------------------
# discrete symmetries


DISCRETE_ELEMENTS = {
    "id": SymmetryFamilyParams(T1=1, epsilon=1),
    "G1": SymmetryFamilyParams(T1=-1, epsilon=-1),  # (t,x,y,psi) -> (-t,-x,y,psi)
    "G2": SymmetryFamilyParams(T1=1, epsilon=-1),  # (t,x,y,psi) -> (t,x,-y,-psi)
    "G1G2": SymmetryFamilyParams(T1=-1, epsilon=1),
}


@dataclass
class DiscreteGroupReport:
    symmetries: dict  # name -> list of ResidualReport
    table: dict  # (a, b) -> name of "a then b"
    involutions: bool
    commutative: bool
    klein: bool
    maps: dict = field(default_factory=dict)  # name -> substitution

    @property
    def holds(self) -> bool:
        return self.involutions and self.commutative and self.klein and all(
            r.holds for reps in self.symmetries.values() for r in reps)

    def render_table(self) -> list:
        names = list(DISCRETE_ELEMENTS)
        lines = ["TABLE " + " ".join(f"{n:>4}" for n in ["."] + names)]
        for a in names:
            lines.append("TABLE " + " ".join(f"{n:>4}" for n in [a] + [self.table[(a, b)] for b in names]))
        return lines


def _is_klein(names: Sequence[str], table: Mapping, identity: str) -> bool:
    if len(names) != 4:
        return False
    for a in names:
        if table[(identity, a)] != a or table[(a, identity)] != a:
            return False
        if table[(a, a)] != identity:
            return False
        for b in names:
            if table[(a, b)] not in names:
                return False
            for c in names:
                if table[(table[(a, b)], c)] != table[(a, table[(b, c)])]:
                    return False
    # with every element self-inverse and order 4 the group is Z2 x Z2
    return True


def verify_discrete_group(params=0, psis: Sequence[Polynomial] = ()) -> DiscreteGroupReport:
    beta = _beta(params)
    names = list(DISCRETE_ELEMENTS)
    lookup = {p: n for n, p in DISCRETE_ELEMENTS.items()}
    table = {}
    for a in names:
        for b in names:
            c = compose_families(DISCRETE_ELEMENTS[a], DISCRETE_ELEMENTS[b])
            table[(a, b)] = lookup.get(c, "?")
    if not psis:
        psis = structured_psis()
    reports = {n: [verify_theorem1(p, q, beta) for q in psis] for n, p in DISCRETE_ELEMENTS.items()}
    involutions = all(table[(a, a)] == "id" for a in names)
    commutative = all(table[(a, b)] == table[(b, a)] for a in names for b in names)
    maps = {n: family_to_substitution(p) for n, p in DISCRETE_ELEMENTS.items()}
    return DiscreteGroupReport(reports, table, involutions, commutative, _is_klein(names, table, "id"), maps)


# ---------------------------------------------------------------------------
# the cubic shift to the generalized vorticity class


def conjugation_rules(params, inverse: bool = False) -> dict:
    """psi -> psi + beta y^3 / 6 (or its inverse); t, x, y untouched."""
    beta = _beta(params)
    shift = Y ** 3 * (beta / 6)
    return {"t": T, "x": X, "y": Y, "psi": PSI - shift if inverse else PSI + shift}


def verify_conjugation_map(psi: Polynomial, params=0) -> ResidualReport:
    """The beta-plane residual of psi equals the shifted equation's residual of psi + beta y^3/6."""
    beta = _beta(params)
    psi = _stream(psi)
    shifted = psi + Y ** 3 * (beta / 6)
    lhs = residual_bve(psi, beta)
    rhs = residual_class2(shifted, conjugated_bve_h(beta))
    return ResidualReport(lhs == rhs, Fraction(1), lhs, rhs)


# ---------------------------------------------------------------------------
# equivalence transformations of the generalized class


def _laplacian(p: Polynomial) -> Polynomial:
    return diff(diff(p, "x"), "x") + diff(diff(p, "y"), "y")


@dataclass(frozen=True)
class EquivTransform2:
    """Projection to (t, x, y, psi) of an equivalence transformation of the class
    zeta_t + psi_x zeta_y - psi_y zeta_x = H, restricted to tau linear in t,
    constant gamma2 and constant rotation angle.

    The rotation is stored as a rational point (c, s) on the unit circle; only
    (1, 0) is used by the checks here.
    """

    tau1: Fraction
    tau0: Fraction = Fraction(0)
    lam: Fraction = Fraction(1)
    epsilon: int = 1
    gamma1: Polynomial = Polynomial()
    gamma2: Fraction = Fraction(0)
    sigma: Fraction = Fraction(0)
    delta: Polynomial = Polynomial()
    rotation: tuple = (Fraction(1), Fraction(0))

    def __post_init__(self):
        for name in ("tau1", "tau0", "lam", "gamma2", "sigma"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        object.__setattr__(self, "gamma1", Polynomial._coerce(self.gamma1))
        object.__setattr__(self, "delta", Polynomial._coerce(self.delta))
        c, s = (as_fraction(a) for a in self.rotation)
        object.__setattr__(self, "rotation", (c, s))
        if not self.tau1:
            raise ValueError("tau must have a nonzero derivative")
        if self.lam <= 0:
            raise ValueError("lambda must be positive")
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        if c * c + s * s != 1:
            raise ValueError("rotation must lie on the unit circle")
        if set(self.gamma1.variables()) - {"t"}:
            raise ValueError("gamma1 must depend on t only")
        if self.delta.depends_on("psi"):
            raise ValueError("delta must depend on t, x, y only")
        if not _laplacian(self.delta).is_zero():
            raise ValueError(f"delta = {self.delta} is not harmonic in (x, y)")

    @classmethod
    def constrained(cls, params, tau1, tau0=0, epsilon=1, gamma1=Polynomial(), gamma2=0,
                    delta0: Polynomial = Polynomial()) -> "EquivTransform2":
        """Element whose parameters satisfy the constraints that make it a
        symmetry of the shifted beta-plane equation.  ``delta0`` is the free
        t-dependent part of delta."""
        beta = _beta(params)
        tau1, gamma2 = as_fraction(tau1), as_fraction(gamma2)
        eps = Fraction(epsilon)
        sigma = eps * beta * gamma2 / (2 * tau1 ** 2)
        delta = ((Y ** 2 - X ** 2) * (sigma / 2) + Y * (eps * beta * gamma2 ** 2 / (2 * tau1))
                 + Polynomial._coerce(delta0))
        return cls(tau1, tau0, 1 / tau1, epsilon, gamma1, gamma2, sigma, delta)

    def constraint_violations(self, params) -> list:
        beta = _beta(params)
        eps = Fraction(self.epsilon)
        out = []
        if self.rotation != (1, 0):
            out.append("rotation angle must vanish")
        if self.lam != 1 / self.tau1:
            out.append("lambda != 1/tau_t")
        sigma = eps * beta * self.gamma2 / (2 * self.tau1 ** 2)
        if self.sigma != sigma:
            out.append("sigma != eps*beta*gamma2/(2 tau_t^2)")
        if diff(self.delta, "x") != X * -self.sigma:
            out.append("delta_x != -sigma x")
        if diff(self.delta, "y") != Y * self.sigma + eps * beta * self.gamma2 ** 2 / (2 * self.tau1):
            out.append("delta_y != sigma y + eps*beta*gamma2^2/(2 tau_t)")
        return out

    def rules(self) -> dict:
        c, s = self.rotation
        lam, eps = self.lam, Fraction(self.epsilon)
        g1t = diff(self.gamma1, "t")
        r2 = X ** 2 + Y ** 2
        return {
            "t": T * self.tau1 + self.tau0,
            "x": (X * c - Y * s) * lam + self.gamma1,
            "y": ((X * s + Y * c) * lam + self.gamma2) * eps,
            "psi": (PSI * lam - g1t * (X * s + Y * c)) * (eps * lam / self.tau1) + self.delta + r2 * (self.sigma / 2),
        }


def then_rules(first: Mapping, second: Mapping) -> dict:
    """Rules of 'apply first, then second' for arbitrary polynomial point maps."""
    return {v: compose(Polynomial._coerce(second[v]), first) for v in VARS}


@dataclass
class G2CompositionReport:
    family: SymmetryFamilyParams
    dictionary: dict  # family parameter -> value as a string
    composite: dict  # rules of the conjugated map
    matches_closed_form: bool  # agrees with g2_parameter_map


def verify_g2_composition(e: EquivTransform2, params=0) -> G2CompositionReport:
    """Conjugate e by the cubic shift and read off the symmetry-family parameters.

    Raises NotTheorem1FormError if the conjugated map leaves the family
    (a constraint violation, or a bug).
    """
    beta = _beta(params)
    bad = e.constraint_violations(beta)
    if bad:
        raise NotTheorem1FormError("; ".join(bad))
    composite = then_rules(then_rules(conjugation_rules(beta), e.rules()), conjugation_rules(beta, inverse=True))
    try:
        s = AffineSubstitution(composite)
    except NotAffineError as exc:
        raise NotTheorem1FormError(f"conjugated map is not affine: {exc}") from exc
    fam = family_from_substitution(s)
    dictionary = {"T1": str(fam.T1), "T0": str(fam.T0), "Y0": str(fam.Y0),
                  "epsilon": str(fam.epsilon), "f": str(fam.f), "g": str(fam.g)}
    return G2CompositionReport(fam, dictionary, composite, fam == g2_parameter_map(e, beta))


def g2_parameter_map(e: EquivTransform2, params=0) -> SymmetryFamilyParams:
    """Closed-form family parameters of the conjugated element.

    T1 = tau1, T0 = tau0, eps = eps, f = gamma1, Y0 = eps gamma2 and
    g = delta0 - eps beta gamma2^3 / 6, where delta0 is the part of delta
    free of x and y.
    """
    beta = _beta(params)
    eps = Fraction(e.epsilon)
    delta0 = e.delta.coefficient_of("x", 0).coefficient_of("y", 0)
    return SymmetryFamilyParams(e.tau1, e.tau0, eps * e.gamma2, e.epsilon, e.gamma1,
                                delta0 - eps * beta * e.gamma2 ** 3 / 6)


# ---------------------------------------------------------------------------
# sampling


SMALL_RATIONALS = tuple(Fraction(n, d) for n in range(-4, 5) for d in (1, 2, 3) if n)
T1_CHOICES = (Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(3, 2))
BETAS = (Fraction(0), Fraction(1), Fraction(7, 3))


def random_rational(rng: random.Random) -> Fraction:
    return rng.choice(SMALL_RATIONALS)


def random_poly_t(rng: random.Random, degree: int) -> Polynomial:
    return Polynomial.univariate([random_rational(rng) if rng.random() < 0.7 else 0 for _ in range(degree + 1)])


def random_psi(rng: random.Random, degree: int = 5, density: float = 0.5) -> Polynomial:
    """Random stream function in (t, x, y) of total degree <= degree."""
    terms = {}
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            for c in range(degree + 1 - a - b):
                if rng.random() < density:
                    terms[(c, a, b, 0)] = random_rational(rng)
    # make sure the top degree is present in x and y
    terms[(0, degree, 0, 0)] = random_rational(rng)
    terms[(0, 1, degree - 1, 0) if degree else (0, 0, 0, 0)] = random_rational(rng)
    return Polynomial(terms)


def structured_psis(degree: int = 4) -> list:
    """Monomials x^a y^b t^c spread over degrees, plus a couple of mixtures."""
    out = [X, Y, X * Y, X ** 2 * Y, X ** 3, Y ** 3 * T, X * Y ** 2 * T, X ** 2 * Y ** 2]
    out.append(X ** degree + Y ** (degree - 1) * T)
    return out


def random_family(rng: random.Random, fg_degree: int = 3) -> SymmetryFamilyParams:
    return SymmetryFamilyParams(
        T1=rng.choice(T1_CHOICES),
        T0=random_rational(rng),
        Y0=random_rational(rng),
        epsilon=rng.choice((1, -1)),
        f=random_poly_t(rng, rng.randint(0, fg_degree)),
        g=random_poly_t(rng, rng.randint(0, fg_degree)),
    )


def random_g2(rng: random.Random, params) -> EquivTransform2:
    return EquivTransform2.constrained(
        params,
        tau1=rng.choice((Fraction(1), Fraction(2), Fraction(3, 2), Fraction(1, 2))),
        tau0=random_rational(rng),
        epsilon=rng.choice((1, -1)),
        gamma1=random_poly_t(rng, rng.randint(0, 3)),
        gamma2=random_rational(rng) if rng.random() < 0.8 else 0,
        delta0=random_poly_t(rng, rng.randint(0, 3)),
    )
