"""Exact polynomials over Q in the variables t, x, y, psi.

A polynomial is a mapping from exponent tuples ``(t, x, y, psi)`` to nonzero
Fraction coefficients.  Values are immutable and compare by their term map.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional

from .exactla import as_fraction

VARS = ("t", "x", "y", "psi")
NVARS = 4
_INDEX = {v: i for i, v in enumerate(VARS)}
_INDEX["ψ"] = 3
_DISPLAY = ("t", "x", "y", "psi")


def var_index(v) -> int:
    if isinstance(v, int):
        if not 0 <= v < NVARS:
            raise ValueError(f"variable index {v} out of range")
        return v
    try:
        return _INDEX[v]
    except KeyError:
        raise ValueError(f"unknown variable {v!r}; expected one of {VARS}") from None


class Polynomial:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping] = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                c = as_fraction(c)
                if c:
                    e = tuple(e)
                    if len(e) != NVARS or any(k < 0 for k in e):
                        raise ValueError(f"bad exponent tuple {e}")
                    clean[e] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "Polynomial":
        c = as_fraction(c)
        return cls._raw({(0, 0, 0, 0): c} if c else {})

    @classmethod
    def var(cls, v) -> "Polynomial":
        e = [0] * NVARS
        e[var_index(v)] = 1
        return cls._raw({tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, exponents, coeff=1) -> "Polynomial":
        return cls({tuple(exponents): coeff})

    @classmethod
    def univariate(cls, coeffs, v="t") -> "Polynomial":
        """sum coeffs[k] * v**k."""
        i = var_index(v)
        terms = {}
        for k, c in enumerate(coeffs):
            e = [0] * NVARS
            e[i] = k
            terms[tuple(e)] = c
        return cls(terms)

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(e == (0, 0, 0, 0) for e in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0, 0, 0, 0), Fraction(0))

    def coeff(self, exponents) -> Fraction:
        return self._terms.get(tuple(exponents), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, v) -> int:
        i = var_index(v)
        return max((e[i] for e in self._terms), default=-1)

    def depends_on(self, v) -> bool:
        i = var_index(v)
        return any(e[i] for e in self._terms)

    def variables(self) -> tuple:
        return tuple(v for i, v in enumerate(VARS) if any(e[i] for e in self._terms))

    def coefficient_of(self, v, k: int) -> "Polynomial":
        """Coefficient of v**k, viewing self as a polynomial in v."""
        i = var_index(v)
        out = {}
        for e, c in self._terms.items():
            if e[i] == k:
                e2 = list(e)
                e2[i] = 0
                out[tuple(e2)] = c
        return Polynomial._raw(out)

    # -- ring operations ---------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    @staticmethod
    def _coerce(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = as_fraction(other)
            if not c:
                return Polynomial._raw({})
            return Polynomial._raw({e: c * a for e, a in self._terms.items()})
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = as_fraction(other)
        return self * (1 / c)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = Polynomial.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        return self * as_fraction(c)

    # -- calculus and composition -----------------------------------------

    def diff(self, v, times: int = 1) -> "Polynomial":
        p = self
        for _ in range(times):
            p = diff(p, v)
        return p

    def compose(self, images: Mapping) -> "Polynomial":
        return compose(self, images)

    def evaluate(self, point: Mapping) -> Fraction:
        """Value at a point given as {variable: rational}; all variables present must be given."""
        vals = [None] * NVARS
        for k, val in point.items():
            vals[var_index(k)] = as_fraction(val)
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    if vals[i] is None:
                        raise ValueError(f"no value for {VARS[i]}")
                    term *= vals[i] ** k
            total += term
        return total

    # -- rendering ---------------------------------------------------------

    def sorted_terms(self):
        """Terms in graded lexicographic order, t < x < y < psi, highest first."""
        return sorted(self._terms.items(), key=lambda ec: (sum(ec[0]), ec[0][::-1]), reverse=True)

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"Polynomial({render(self)!r})"


def const(c) -> Polynomial:
    return Polynomial.const(c)


t = Polynomial.var("t")
x = Polynomial.var("x")
y = Polynomial.var("y")
psi = Polynomial.var("psi")
ZERO_POLY = Polynomial()
ONE_POLY = Polynomial.const(1)


def diff(p: Polynomial, v) -> Polynomial:
    i = var_index(v)
    out = {}
    for e, c in p._terms.items():
        k = e[i]
        if k:
            e2 = list(e)
            e2[i] = k - 1
            out[tuple(e2)] = c * k
    return Polynomial._raw(out)


def compose(p: Polynomial, images: Mapping) -> Polynomial:
    """Replace each variable by a polynomial; unmentioned variables stay put."""
    imgs = [Polynomial.var(i) for i in range(NVARS)]
    for k, q in images.items():
        imgs[var_index(k)] = Polynomial._coerce(q)
    powers = [{0: ONE_POLY, 1: q} for q in imgs]

    def power(i, k):
        cache = powers[i]
        if k not in cache:
            best = max(j for j in cache if j <= k)
            cache[k] = power(i, best) * power(i, k - best) if best < k else cache[best]
        return cache[k]

    # group by the (x, y, psi) part so t-powers multiply once per group
    acc = {}
    for e, c in p._terms.items():
        q = Polynomial.const(c)
        for i in (1, 2, 3, 0):
            if e[i]:
                q = q * power(i, e[i])
        for e2, c2 in q._terms.items():
            acc[e2] = acc.get(e2, 0) + c2
    return Polynomial._raw({e: c for e, c in acc.items() if c})


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render(p: Polynomial) -> str:
    """Canonical text form, e.g. ``-1/2*t*y + x^2 + 3``."""
    if not p._terms:
        return "0"
    pieces = []
    for e, c in p.sorted_terms():
        mono = "*".join(f"{_DISPLAY[i]}^{k}" if k > 1 else _DISPLAY[i] for i, k in enumerate(e) if k)
        mag = abs(c)
        if not mono:
            body = _fmt_coeff(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt_coeff(mag)}*{mono}"
        sign = "-" if c < 0 else "+"
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# affine substitutions


class NotAffineError(ValueError):
    """A replacement rule is not of the triangular affine shape."""


class SingularSubstitutionError(ValueError):
    """The linear part of a substitution cannot be inverted."""


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


class AffineSubstitution:
    """Rules t -> a*t + b and (x, y, psi) -> M(t) (x, y, psi) + c(t).

    ``rules`` maps variable names to polynomials; missing variables map to
    themselves.  Construction rejects anything outside this shape (for example
    psi -> psi**2) and a linear part whose determinant vanishes identically.
    """

    __slots__ = ("rules",)

    def __init__(self, rules: Optional[Mapping] = None):
        full = [Polynomial.var(i) for i in range(NVARS)]
        for k, q in (rules or {}).items():
            full[var_index(k)] = Polynomial._coerce(q)
        self.rules = tuple(full)
        self._validate()

    def _validate(self):
        trule = self.rules[0]
        if trule.variables() not in ((), ("t",)) or trule.degree() > 1:
            raise NotAffineError(f"t-rule must be affine in t alone, got {trule}")
        if not trule.coeff((1, 0, 0, 0)):
            raise NotAffineError("t-rule has zero leading coefficient")
        for i in (1, 2, 3):
            r = self.rules[i]
            for e in r._terms:
                if e[1] + e[2] + e[3] > 1:
                    raise NotAffineError(f"{VARS[i]}-rule is not affine in (x, y, psi): {r}")
        if _det3(self.linear_part()).is_zero():
            raise SingularSubstitutionError("linear part has identically vanishing determinant")

    def __getitem__(self, v) -> Polynomial:
        return self.rules[var_index(v)]

    def __eq__(self, other):
        return isinstance(other, AffineSubstitution) and self.rules == other.rules

    def __hash__(self):
        return hash(self.rules)

    def __repr__(self):
        return "AffineSubstitution(" + ", ".join(f"{v} -> {r}" for v, r in zip(VARS, self.rules)) + ")"

    @classmethod
    def identity(cls) -> "AffineSubstitution":
        return cls()

    def as_mapping(self) -> dict:
        return dict(zip(VARS, self.rules))

    def t_coefficients(self):
        r = self.rules[0]
        return r.coeff((1, 0, 0, 0)), r.constant_term()

    def linear_part(self):
        """3x3 matrix of t-polynomials: rows are the x, y, psi rules."""
        units = ((0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
        out = []
        for i in (1, 2, 3):
            row = []
            for u in units:
                j = u.index(1)
                row.append(self.rules[i].coefficient_of(VARS[j], 1))
            out.append(row)
        return out

    def offset(self):
        return [self.rules[i].coefficient_of("x", 0).coefficient_of("y", 0).coefficient_of("psi", 0)
                for i in (1, 2, 3)]

    def determinant(self) -> Polynomial:
        return _det3(self.linear_part())

    def then(self, other: "AffineSubstitution") -> "AffineSubstitution":
        """The point map 'apply self, then other' (other's rules fed self's output)."""
        images = self.as_mapping()
        return AffineSubstitution({v: compose(r, images) for v, r in zip(VARS, other.rules)})


def substitute(p: Polynomial, s: AffineSubstitution) -> Polynomial:
    return compose(p, s.as_mapping())


def invert_affine(s: AffineSubstitution) -> AffineSubstitution:
    """Inverse point map; needs a nonzero constant determinant."""
    a, b = s.t_coefficients()
    det = s.determinant()
    if not det.is_constant() or det.is_zero():
        raise SingularSubstitutionError(f"determinant {det} is not a nonzero constant")
    d = det.constant_term()
    m = s.linear_part()
    adj = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != j]
            cols = [c for c in range(3) if c != i]
            minor = m[rows[0]][cols[0]] * m[rows[1]][cols[1]] - m[rows[0]][cols[1]] * m[rows[1]][cols[0]]
            adj[i][j] = minor if (i + j) % 2 == 0 else -minor
    off = s.offset()
    new_vars = (x, y, psi)
    told = (t - b) / a
    rules = {"t": told}
    for i in range(3):
        expr = Polynomial()
        for j in range(3):
            expr = expr + adj[i][j] * (new_vars[j] - off[j])
        rules[VARS[i + 1]] = compose(expr / d, {"t": told})
    return AffineSubstitution(rules)
