"""Finite-dimensional models of the vorticity equation's Lie invariance algebra.

The full algebra is spanned by

    D = t dt - x dx - y dy - 3 psi dpsi,   dt,   dy,
    X(f) = f(t) dx - f'(t) y dpsi,          Z(g) = g(t) dpsi

with f, g running through a space of functions of t.  Two finite choices of
that space are provided:

* ``polynomial(d)``: f, g of degree <= d.  Closed under the bracket, has D,
  and every element is a polynomial vector field.  On this space ad(dt) is
  nilpotent, so the nilradical grows to contain dt.
* ``exponential(L)``: f, g in span{exp(l t) : l in L}.  No D (t*exp(l t)
  leaves the span) and no polynomial realization, but dt acts semisimply,
  which keeps the nilradical as small as in the infinite algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import exactla as la
from . import liealg
from .exactla import Matrix, Subspace, as_fraction
from .liealg import LieAlgebra
from .polyfield import (
    VARS,
    AffineSubstitution,
    Polynomial,
    compose,
    diff,
    invert_affine,
    t as T,
    x as X,
    y as Y,
    psi as PSI,
)


@dataclass(frozen=True)
class TruncationSpec:
    model: str  # "polynomial" | "exponential"
    degree: int = 0
    exponents: tuple = ()
    include_D: bool = True

    def __post_init__(self):
        if self.model == "polynomial":
            if self.degree < 0:
                raise ValueError("degree must be non-negative")
        elif self.model == "exponential":
            if self.include_D:
                raise ValueError("the exponential model cannot contain D")
            exps = tuple(as_fraction(e) for e in self.exponents)
            if len(set(exps)) != len(exps):
                raise ValueError("repeated exponent")
            if Fraction(0) not in exps:
                raise ValueError("the exponent set must contain 0")
            object.__setattr__(self, "exponents", tuple(sorted(exps)))
        else:
            raise ValueError(f"unknown model {self.model!r}")

    @classmethod
    def polynomial(cls, degree: int, include_D: bool = True) -> "TruncationSpec":
        return cls("polynomial", degree=degree, include_D=include_D)

    @classmethod
    def exponential(cls, exponents: Sequence) -> "TruncationSpec":
        return cls("exponential", exponents=tuple(exponents), include_D=False)

    @property
    def slots(self) -> tuple:
        """Slot keys: degrees for polynomial, exponents for exponential."""
        if self.model == "polynomial":
            return tuple(range(self.degree + 1))
        return self.exponents

    @property
    def dim(self) -> int:
        return (3 if self.include_D else 2) + 2 * len(self.slots)

    def labels(self) -> list:
        head = (["D"] if self.include_D else []) + ["dt", "dy"]
        names = [_slot_name(s) for s in self.slots]
        return head + [f"X{s}" for s in names] + [f"Z{s}" for s in names]

    def index(self, label: str) -> int:
        return self.labels().index(label)

    def x_index(self, slot) -> int:
        return self.index("X" + _slot_name(slot))

    def z_index(self, slot) -> int:
        return self.index("Z" + _slot_name(slot))

    def with_degree(self, degree: int) -> "TruncationSpec":
        return TruncationSpec.polynomial(degree, self.include_D)


def _slot_name(s) -> str:
    s = as_fraction(s)
    return str(s.numerator) if s.denominator == 1 else f"[{s}]"


def build_algebra(spec: TruncationSpec) -> LieAlgebra:
    """Structure constants of the truncated algebra.

    Slot k of the polynomial model is f = t^k, so d/dt sends slot k to
    k * slot (k-1) and t d/dt + c sends slot k to (k + c) * slot k.  Slot l of
    the exponential model is exp(l t) and d/dt multiplies it by l.
    """
    labels = spec.labels()
    n = spec.dim
    idx = {name: i for i, name in enumerate(labels)}
    brackets = {}

    def put(a: str, b: str, terms: dict):
        i, j = idx[a], idx[b]
        v = [Fraction(0)] * n
        for name, c in terms.items():
            v[idx[name]] += c
        if i > j:
            i, j, v = j, i, [-c for c in v]
        if any(v):
            brackets[(i, j)] = tuple(v)

    names = [_slot_name(s) for s in spec.slots]
    if spec.include_D:
        put("dt", "D", {"dt": 1})
        put("dy", "D", {"dy": -1})
    if spec.model == "polynomial":
        for k, s in zip(spec.slots, names):
            if spec.include_D:
                put("D", f"X{s}", {f"X{s}": k + 1})
                put("D", f"Z{s}", {f"Z{s}": k + 3})
            if k > 0:
                lower = _slot_name(k - 1)
                put("dt", f"X{s}", {f"X{lower}": k})
                put("dt", f"Z{s}", {f"Z{lower}": k})
                put("dy", f"X{s}", {f"Z{lower}": -k})
    else:
        for lam, s in zip(spec.slots, names):
            if lam:
                put("dt", f"X{s}", {f"X{s}": lam})
                put("dt", f"Z{s}", {f"Z{s}": lam})
                put("dy", f"X{s}", {f"Z{s}": -lam})
    return LieAlgebra(labels, brackets)


# ---------------------------------------------------------------------------
# vector fields


@dataclass(frozen=True)
class VectorField:
    """xi_t dt + xi_x dx + xi_y dy + eta dpsi with polynomial coefficients."""

    xi_t: Polynomial = Polynomial()
    xi_x: Polynomial = Polynomial()
    xi_y: Polynomial = Polynomial()
    eta: Polynomial = Polynomial()

    @property
    def components(self) -> tuple:
        return (self.xi_t, self.xi_x, self.xi_y, self.eta)

    @classmethod
    def from_components(cls, comps) -> "VectorField":
        return cls(*(Polynomial._coerce(c) for c in comps))

    def apply(self, p: Polynomial) -> Polynomial:
        out = Polynomial()
        for c, v in zip(self.components, VARS):
            if c:
                out = out + c * diff(p, v)
        return out

    def bracket(self, other: "VectorField") -> "VectorField":
        return VectorField.from_components(
            self.apply(b) - other.apply(a) for a, b in zip(self.components, other.components))

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField.from_components(a + b for a, b in zip(self.components, other.components))

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField.from_components(a - b for a, b in zip(self.components, other.components))

    def scale(self, c) -> "VectorField":
        return VectorField.from_components(a * c for a in self.components)

    def is_zero(self) -> bool:
        return not any(self.components)

    def __str__(self):
        parts = [f"({c})*d{v}" for c, v in zip(self.components, VARS) if c]
        return " + ".join(parts) if parts else "0"


def basis_fields(spec: TruncationSpec) -> list:
    if spec.model != "polynomial":
        raise ValueError("only the polynomial model has a vector-field realization")
    fields = []
    if spec.include_D:
        fields.append(VectorField(T, -X, -Y, PSI * -3))
    fields.append(VectorField(xi_t=Polynomial.const(1)))
    fields.append(VectorField(xi_y=Polynomial.const(1)))
    for k in spec.slots:
        f = T ** k
        fields.append(VectorField(xi_x=f, eta=-(diff(f, "t") * Y)))
    for k in spec.slots:
        fields.append(VectorField(eta=T ** k))
    return fields


def realize(spec: TruncationSpec, v: Sequence) -> VectorField:
    fields = basis_fields(spec)
    if len(v) != len(fields):
        raise la.DimensionError(f"vector of length {len(v)} for a model of dimension {len(fields)}")
    out = VectorField()
    for c, fld in zip(v, fields):
        c = as_fraction(c)
        if c:
            out = out + fld.scale(c)
    return out


def field_coordinates(spec: TruncationSpec, field: VectorField) -> Optional[tuple]:
    """Coordinates of ``field`` in the realized basis, or None if outside the span."""
    fields = basis_fields(spec)
    keys = sorted({(i, e) for fld in fields + [field] for i, c in enumerate(fld.components) for e in c.terms})
    pos = {k: r for r, k in enumerate(keys)}
    cols = []
    for fld in fields:
        col = [Fraction(0)] * len(keys)
        for i, c in enumerate(fld.components):
            for e, a in c.items():
                col[pos[(i, e)]] = a
        cols.append(col)
    rhs = [Fraction(0)] * len(keys)
    for i, c in enumerate(field.components):
        for e, a in c.items():
            rhs[pos[(i, e)]] = a
    m = Matrix(len(keys), len(fields), tuple(tuple(col[r] for col in cols) for r in range(len(keys))))
    if not keys:
        return la.zero_vector(len(fields))
    return la.solve(m, rhs)


def embed_vector(small: TruncationSpec, big: TruncationSpec, v: Sequence) -> tuple:
    """Map coordinates between two polynomial models by matching labels."""
    big_labels = big.labels()
    out = [Fraction(0)] * big.dim
    for c, name in zip(v, small.labels()):
        if c:
            out[big_labels.index(name)] = as_fraction(c)
    return tuple(out)


def embed_subspace(small: TruncationSpec, big: TruncationSpec, s: Subspace) -> Subspace:
    return la.span([embed_vector(small, big, b) for b in s.basis], big.dim)


# ---------------------------------------------------------------------------
# the symmetry family and push-forwards


class NotTheorem1FormError(ValueError):
    """A point map is not a member of the vorticity equation's symmetry family."""


@dataclass(frozen=True)
class SymmetryFamilyParams:
    """t~ = T1 t + T0,  x~ = x/T1 + f(t),  y~ = eps y/T1 + Y0,
    psi~ = eps/T1^3 psi - eps/T1^2 f'(t) y + g(t)."""

    T1: Fraction
    T0: Fraction = Fraction(0)
    Y0: Fraction = Fraction(0)
    epsilon: int = 1
    f: Polynomial = Polynomial()
    g: Polynomial = Polynomial()

    def __post_init__(self):
        for name in ("T1", "T0", "Y0"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        object.__setattr__(self, "f", Polynomial._coerce(self.f))
        object.__setattr__(self, "g", Polynomial._coerce(self.g))
        if not self.T1:
            raise ValueError("T1 must be nonzero")
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        for name in ("f", "g"):
            if set(getattr(self, name).variables()) - {"t"}:
                raise ValueError(f"{name} must depend on t only")

    @classmethod
    def identity(cls) -> "SymmetryFamilyParams":
        return cls(T1=1)

    @property
    def factor(self) -> Fraction:
        """Constant relating the transformed residual to the original one."""
        return Fraction(self.epsilon) / self.T1 ** 2

    def describe(self) -> str:
        return (f"T1={self.T1} T0={self.T0} Y0={self.Y0} eps={self.epsilon} "
                f"f={self.f} g={self.g}")


def family_to_substitution(p: SymmetryFamilyParams) -> AffineSubstitution:
    eps = p.epsilon
    return AffineSubstitution({
        "t": T * p.T1 + p.T0,
        "x": X / p.T1 + p.f,
        "y": Y * (Fraction(eps) / p.T1) + p.Y0,
        "psi": PSI * (Fraction(eps) / p.T1 ** 3) - diff(p.f, "t") * Y * (Fraction(eps) / p.T1 ** 2) + p.g,
    })


def family_from_substitution(s: AffineSubstitution) -> SymmetryFamilyParams:
    """Recover the family parameters of a point map, or raise NotTheorem1FormError."""
    T1, T0 = s.t_coefficients()
    f = s["x"] - X / T1
    if set(f.variables()) - {"t"}:
        raise NotTheorem1FormError(f"x-rule {s['x']} is not x/T1 + f(t)")
    yrule = s["y"]
    ycoef = yrule.coefficient_of("y", 1)
    if not ycoef.is_constant():
        raise NotTheorem1FormError(f"y-rule {yrule} has a non-constant y coefficient")
    eps = ycoef.constant_term() * T1
    if eps not in (1, -1):
        raise NotTheorem1FormError(f"y-rule {yrule} gives epsilon={eps}")
    Y0 = yrule - Y * ycoef.constant_term()
    if not Y0.is_constant():
        raise NotTheorem1FormError(f"y-rule {yrule} is not eps*y/T1 + Y0")
    eps = int(eps)
    expected_lin = PSI * (Fraction(eps) / T1 ** 3) - diff(f, "t") * Y * (Fraction(eps) / T1 ** 2)
    g = s["psi"] - expected_lin
    if set(g.variables()) - {"t"}:
        raise NotTheorem1FormError(f"psi-rule {s['psi']} does not match the family")
    return SymmetryFamilyParams(T1, T0, Y0.constant_term(), eps, f, g)


def compose_families(first: SymmetryFamilyParams, second: SymmetryFamilyParams) -> SymmetryFamilyParams:
    """Parameters of 'apply first, then second'."""
    s = family_to_substitution(first).then(family_to_substitution(second))
    return family_from_substitution(s)


def pushforward(s: AffineSubstitution, v: VectorField) -> VectorField:
    """Push-forward of v by the point map s, written in the new variables."""
    inv = invert_affine(s).as_mapping()
    return VectorField.from_components(compose(v.apply(rule), inv) for rule in s.rules)


# ---------------------------------------------------------------------------
# megaideal preservation


def named_megaideal(spec: TruncationSpec, name: str, algebra: Optional[LieAlgebra] = None) -> Subspace:
    """One of g, g', g'', g''', nilradical, n' (derived ideal of the nilradical), center."""
    L = algebra or build_algebra(spec)
    if name == "g":
        return L.full()
    if name in ("g'", "g''", "g'''"):
        terms = liealg.derived_series(L).terms
        k = len(name) - 1
        return terms[k] if k < len(terms) else L.zero()
    if name in ("n", "nilradical"):
        return liealg.nilradical(L)
    if name == "n'":
        n = liealg.nilradical(L)
        return liealg.bracket_subspaces(L, n, n)
    if name == "center":
        return liealg.center(L)
    raise ValueError(f"unknown megaideal name {name!r}")


def ambient_degree(spec: TruncationSpec, s: AffineSubstitution) -> int:
    """Polynomial degree large enough to hold every pushed-forward basis field."""
    extra = max(s["x"].degree_in("t"), s["psi"].degree_in("t"), 0)
    return spec.degree + extra + 1


@dataclass
class PreservationReport:
    preserved: bool
    ambient: TruncationSpec
    witnesses: list  # (label, coordinates in ambient or None, pushed field, inside target)

    def failures(self) -> list:
        return [w for w in self.witnesses if not w[3]]


def check_megaideal_preservation(spec: TruncationSpec, s: AffineSubstitution,
                                 m: Union[Subspace, str], target: Optional[Subspace] = None
                                 ) -> PreservationReport:
    """Whether the push-forward by ``s`` maps the megaideal ``m`` into itself.

    Pushed fields are expressed in a larger polynomial model so that degree
    growth from f and g stays representable.  With ``m`` given by name the
    target is the same-named megaideal of that larger model; with ``m`` a
    subspace the target defaults to its plain embedding.
    """
    if spec.model != "polynomial":
        raise ValueError("push-forward checks need the polynomial model")
    amb = spec.with_degree(ambient_degree(spec, s))
    if isinstance(m, str):
        sub = named_megaideal(spec, m)
        if target is None:
            target = named_megaideal(amb, m)
    else:
        sub = m
        if target is None:
            target = embed_subspace(spec, amb, m)
    L = build_algebra(spec)
    witnesses = []
    ok = True
    for b in sub.basis:
        pushed = pushforward(s, realize(spec, b))
        coords = field_coordinates(amb, pushed)
        inside = coords is not None and la.contains(target, coords)
        ok = ok and inside
        witnesses.append((L.format_vector(b), coords, pushed, inside))
    return PreservationReport(ok, amb, witnesses)


def shear_substitution(c=1) -> AffineSubstitution:
    """x -> x + c*y with everything else fixed."""
    return AffineSubstitution({"x": X + Y * c})

