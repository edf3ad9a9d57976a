"""Finite-dimensional Lie algebras over Q given by structure constants.

Besides the usual structural invariants (derived and central series,
center, Killing form, radical, nilradical) this module builds a lattice of
provable megaideals: subspaces fixed by every automorphism.  Seeds are the
characteristic ideals every Lie algebra has, and the lattice is closed under
sums, intersections and brackets.  Nothing here claims the lattice lists
*all* megaideals.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import exactla as la
from .exactla import ZERO, Matrix, Subspace, Vector, span


class StructureConstantError(ValueError):
    """Bracket table violates antisymmetry or the Jacobi identity."""

    def __init__(self, message: str, triple: tuple):
        super().__init__(f"{message} at {triple}")
        self.triple = triple


class NotAnIdealError(ValueError):
    """A subspace expected to be an ideal is not closed under [g, .]."""


class InternalCheckError(AssertionError):
    """A postcondition of one of the algorithms failed; this is a bug."""


class LieAlgebra:
    """Lie algebra with basis e_0..e_{n-1} and [e_i, e_j] = sum_k c[i][j][k] e_k.

    ``brackets`` maps (i, j) with i < j to the coefficient vector of [e_i, e_j];
    omitted pairs bracket to zero.  Antisymmetry and Jacobi are checked on
    construction unless ``check=False``.
    """

    def __init__(self, labels: Sequence[str], brackets: dict, check: bool = True):
        self.labels = tuple(labels)
        self.dim = n = len(self.labels)
        table = {}
        for (i, j), coeffs in brackets.items():
            if not (0 <= i < n and 0 <= j < n):
                raise StructureConstantError("basis index out of range", (i, j))
            coeffs = tuple(la.as_fraction(c) for c in coeffs)
            if len(coeffs) != n:
                raise la.DimensionError(f"bracket ({i},{j}) has {len(coeffs)} coefficients, expected {n}")
            if i == j:
                if any(coeffs):
                    raise StructureConstantError("[e_i, e_i] must vanish", (i, i))
                continue
            neg = tuple(-c for c in coeffs)
            for key, val in (((i, j), coeffs), ((j, i), neg)):
                if key in table and table[key] != val:
                    raise StructureConstantError("antisymmetry violated", key)
                table[key] = val
        self._table = {k: v for k, v in table.items() if any(v)}
        self._ad_cache = None
        if check:
            self.check_jacobi()

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, labels={list(self.labels)})"

    def structure_constant(self, i: int, j: int, k: int) -> Fraction:
        v = self._table.get((i, j))
        return v[k] if v is not None else ZERO

    def basis_bracket(self, i: int, j: int) -> Vector:
        return self._table.get((i, j), la.zero_vector(self.dim))

    def nonzero_brackets(self):
        """(i, j, coefficients) for i < j with a nonzero bracket, sorted."""
        return [(i, j, v) for (i, j), v in sorted(self._table.items()) if i < j]

    def check_jacobi(self) -> None:
        n = self.dim
        for i, j, k in itertools.combinations(range(n), 3):
            total = la.add(la.add(
                self.bracket(la.unit_vector(n, i), self.basis_bracket(j, k)),
                self.bracket(la.unit_vector(n, j), self.basis_bracket(k, i))),
                self.bracket(la.unit_vector(n, k), self.basis_bracket(i, j)))
            if any(total):
                raise StructureConstantError("Jacobi identity violated", (i, j, k))

    def bracket(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
        return bracket_vectors(self, u, v)

    def unit(self, i) -> Vector:
        if isinstance(i, str):
            i = self.labels.index(i)
        return la.unit_vector(self.dim, i)

    def element(self, **coeffs) -> Vector:
        """Vector from label=coefficient keywords (labels must be identifiers)."""
        out = [ZERO] * self.dim
        for name, c in coeffs.items():
            out[self.labels.index(name)] = la.as_fraction(c)
        return tuple(out)

    def full(self) -> Subspace:
        return la.full_space(self.dim)

    def zero(self) -> Subspace:
        return la.zero_subspace(self.dim)

    def subspace(self, *labels: str) -> Subspace:
        return span([self.unit(a) for a in labels], self.dim)

    def ad(self, u: Sequence[Fraction]) -> Matrix:
        """Matrix of ad u acting on column coordinate vectors."""
        cols = [self.bracket(u, la.unit_vector(self.dim, j)) for j in range(self.dim)]
        return Matrix(self.dim, self.dim, tuple(tuple(c[i] for c in cols) for i in range(self.dim)))

    def ad_basis(self) -> list:
        if self._ad_cache is None:
            self._ad_cache = [self.ad(la.unit_vector(self.dim, i)) for i in range(self.dim)]
        return self._ad_cache

    def format_vector(self, v: Sequence[Fraction]) -> str:
        parts = []
        for c, name in zip(v, self.labels):
            if not c:
                continue
            if c == 1:
                term = name
            elif c == -1:
                term = "-" + name
            else:
                term = f"{c}*{name}"
            parts.append(term)
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")

    def format_subspace(self, s: Subspace) -> str:
        return "<" + ", ".join(self.format_vector(b) for b in s.basis) + ">"


def bracket_vectors(L: LieAlgebra, u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    if len(u) != L.dim or len(v) != L.dim:
        raise la.DimensionError(f"bracket of vectors of length {len(u)}, {len(v)} in dim {L.dim}")
    out = [ZERO] * L.dim
    for (i, j), c in L._table.items():
        a, b = u[i], v[j]
        if a and b:
            w = a * b
            for k, ck in enumerate(c):
                if ck:
                    out[k] += w * ck
    return tuple(out)


def bracket_subspaces(L: LieAlgebra, a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != L.dim or b.ambient_dim != L.dim:
        raise la.DimensionError("subspace not in this algebra")
    return span([L.bracket(u, v) for u in a.basis for v in b.basis], L.dim)


def is_ideal(L: LieAlgebra, s: Subspace) -> bool:
    return bracket_subspaces(L, L.full(), s) <= s


def is_subalgebra(L: LieAlgebra, s: Subspace) -> bool:
    return bracket_subspaces(L, s, s) <= s


# ---------------------------------------------------------------------------
# series


SERIES_KINDS = ("derived", "lower_central", "upper_central")


@dataclass(frozen=True)
class SeriesReport:
    kind: str
    terms: tuple
    stabilized: bool = True

    @property
    def dims(self) -> tuple:
        return tuple(t.dim for t in self.terms)

    @property
    def last(self) -> Subspace:
        return self.terms[-1]


def _descending(L: LieAlgebra, start: Subspace, step) -> tuple:
    terms = [start]
    while True:
        nxt = step(terms[-1])
        if nxt == terms[-1]:
            return tuple(terms)
        terms.append(nxt)


def derived_series(L: LieAlgebra) -> SeriesReport:
    """g, [g,g], [g',g'], ... up to the first repeated term."""
    terms = _descending(L, L.full(), lambda s: bracket_subspaces(L, s, s))
    return SeriesReport("derived", terms)


def lower_central_series(L: LieAlgebra) -> SeriesReport:
    g = L.full()
    terms = _descending(L, g, lambda s: bracket_subspaces(L, g, s))
    return SeriesReport("lower_central", terms)


def _centralizer_mod(L: LieAlgebra, inner: Subspace) -> Subspace:
    """{x : [x, g] ⊆ inner}, computed with functionals annihilating ``inner``."""
    n = L.dim
    ann = la.annihilator(inner)
    if not ann:
        return L.full()
    ads = L.ad_basis()
    # [x, e_j] = sum_i x_i [e_i, e_j]; phi([x, e_j]) = sum_i x_i phi(ad(e_i) e_j)
    rows = []
    for phi in ann:
        for j in range(n):
            rows.append(tuple(la.dot(phi, ads[i].column(j)) for i in range(n)))
    return span(la.nullspace(Matrix(len(rows), n, tuple(rows))), n)


def center(L: LieAlgebra) -> Subspace:
    return _centralizer_mod(L, L.zero())


def upper_central_series(L: LieAlgebra) -> SeriesReport:
    """0 ⊆ z(g) ⊆ z_2(g) ⊆ ..., each term the preimage of the center of the quotient."""
    terms = [L.zero()]
    while True:
        nxt = _centralizer_mod(L, terms[-1])
        if nxt == terms[-1]:
            return SeriesReport("upper_central", tuple(terms))
        terms.append(nxt)


def is_solvable(L: LieAlgebra) -> bool:
    return derived_series(L).last.dim == 0


def _lower_central_of(L: LieAlgebra, ideal: Subspace) -> tuple:
    return _descending(L, ideal, lambda s: bracket_subspaces(L, ideal, s))


def is_nilpotent(L: LieAlgebra, ideal: Optional[Subspace] = None) -> bool:
    """Nilpotency of L, or of an ideal of L viewed as a Lie algebra.

    Raises NotAnIdealError when ``ideal`` is not an ideal, so a bad input is
    never reported as a plain "not nilpotent".
    """
    if ideal is None:
        return lower_central_series(L).last.dim == 0
    if not is_ideal(L, ideal):
        raise NotAnIdealError("subspace is not an ideal of the algebra")
    return _lower_central_of(L, ideal)[-1].dim == 0


def is_nilpotent_subalgebra(L: LieAlgebra, s: Subspace) -> bool:
    return _lower_central_of(L, s)[-1].dim == 0


def is_solvable_subalgebra(L: LieAlgebra, s: Subspace) -> bool:
    return _descending(L, s, lambda a: bracket_subspaces(L, a, a))[-1].dim == 0


# ---------------------------------------------------------------------------
# Killing form, radical, nilradical


def killing_form(L: LieAlgebra) -> Matrix:
    ads = L.ad_basis()
    n = L.dim
    return Matrix(n, n, tuple(tuple((ads[i] @ ads[j]).trace() for j in range(n)) for i in range(n)))


def radical(L: LieAlgebra) -> Subspace:
    """Maximal solvable ideal, as the Killing-orthogonal complement of [g, g]."""
    n = L.dim
    K = killing_form(L)
    dg = bracket_subspaces(L, L.full(), L.full())
    rows = tuple(K.apply(y) for y in dg.basis)  # K symmetric: row y.K gives K(., y)
    r = span(la.nullspace(Matrix(len(rows), n, rows)), n) if rows else L.full()
    if not (is_ideal(L, r) and is_solvable_subalgebra(L, r)):
        raise InternalCheckError("radical is not a solvable ideal")
    return r


def associative_closure(generators: Sequence[Matrix]) -> list:
    """Basis (as flattened vectors) of the non-unital associative algebra
    generated by square matrices, grown by right multiplication until stable.
    """
    if not generators:
        return []
    n = generators[0].rows
    cap = n * n
    basis_rows = []  # echelon rows (lists) with their pivots
    pivots = []
    found = []

    def reduce(v):
        v = list(v)
        for row, p in zip(basis_rows, pivots):
            f = v[p]
            if f:
                for k, a in enumerate(row):
                    if a:
                        v[k] -= f * a
        return v

    def insert(m: Matrix) -> bool:
        v = reduce(m.flatten())
        p = next((k for k, a in enumerate(v) if a), None)
        if p is None:
            return False
        inv = 1 / v[p]
        v = [a * inv for a in v]
        for row in basis_rows:
            f = row[p]
            if f:
                for k, a in enumerate(v):
                    if a:
                        row[k] -= f * a
        basis_rows.append(v)
        pivots.append(p)
        found.append(m)
        return True

    frontier = [g for g in generators if insert(g)]
    while frontier and len(found) < cap:
        nxt = []
        for a in frontier:
            for g in generators:
                prod = a @ g
                if insert(prod):
                    nxt.append(prod)
        frontier = nxt
    return found


def _trace_product(a: Matrix, b: Matrix) -> Fraction:
    n = a.rows
    return sum((a.entries[i][k] * b.entries[k][i]
                for i in range(n) for k in range(n) if a.entries[i][k] and b.entries[k][i]), ZERO)


def trace_radical(algebra_basis: Sequence[Matrix]) -> list:
    """{a in A : tr(ab) = 0 for all b in A}; the Jacobson radical in characteristic 0.

    Returned as coordinate vectors with respect to ``algebra_basis``.
    """
    k = len(algebra_basis)
    gram = Matrix(k, k, tuple(tuple(_trace_product(a, b) for a in algebra_basis) for b in algebra_basis))
    return la.nullspace(gram) if k else []


def nilradical(L: LieAlgebra, check: bool = True) -> Subspace:
    """Maximal nilpotent ideal.

    Inside the radical r, the nilradical is the set of x with ad x nilpotent.
    Over Q this set is found without eigenvalues: x qualifies exactly when
    ad x lies in the trace-form radical of the associative algebra generated
    by ad(r).  The Killing form alone is not enough; [h,x]=x-y, [h,y]=x+y has
    zero Killing form but h is not ad-nilpotent.
    """
    n = L.dim
    r = radical(L)
    if r.dim == 0:
        return r
    ads_r = [_ad_of(L, x) for x in r.basis]
    A = associative_closure(ads_r)
    # x = sum c_i r_i qualifies iff tr(ad x . b) = 0 for every b in A
    rows = tuple(tuple(_trace_product(adr, b) for adr in ads_r) for b in A)
    coeffs = la.nullspace(Matrix(len(rows), len(ads_r), rows))
    nr = span((la.combine(c, r.basis, n) for c in coeffs), n)
    if check:
        _check_nilradical(L, r, nr)
    return nr


def _ad_of(L: LieAlgebra, x: Sequence[Fraction]) -> Matrix:
    ads = L.ad_basis()
    n = L.dim
    acc = [[ZERO] * n for _ in range(n)]
    for c, m in zip(x, ads):
        if not c:
            continue
        for i in range(n):
            for j, a in enumerate(m.entries[i]):
                if a:
                    acc[i][j] += c * a
    return Matrix(n, n, tuple(tuple(row) for row in acc))


def ideal_generated(L: LieAlgebra, vectors: Iterable[Sequence[Fraction]]) -> Subspace:
    s = span(list(vectors), L.dim)
    g = L.full()
    while True:
        nxt = s + bracket_subspaces(L, g, s)
        if nxt == s:
            return s
        s = nxt


def _check_nilradical(L: LieAlgebra, r: Subspace, nr: Subspace) -> None:
    if not is_ideal(L, nr):
        raise InternalCheckError("nilradical is not an ideal")
    if not is_nilpotent_subalgebra(L, nr):
        raise InternalCheckError("nilradical is not nilpotent")
    for v in la.complement_basis(nr):
        if is_nilpotent_subalgebra(L, ideal_generated(L, nr.basis + (v,))):
            raise InternalCheckError("nilradical extends to a larger nilpotent ideal")


# ---------------------------------------------------------------------------
# restriction to subalgebras


def restrict(L: LieAlgebra, s: Subspace, prefix: str = "b") -> LieAlgebra:
    """The subalgebra ``s`` as a Lie algebra in its canonical basis."""
    if not is_subalgebra(L, s):
        raise NotAnIdealError("subspace is not closed under the bracket")
    k = s.dim
    brackets = {}
    for i, j in itertools.combinations(range(k), 2):
        coords = s.coordinates(L.bracket(s.basis[i], s.basis[j]))
        if any(coords):
            brackets[(i, j)] = coords
    return LieAlgebra([f"{prefix}{i}" for i in range(k)], brackets, check=False)


def embed(L: LieAlgebra, s: Subspace, sub: Subspace) -> Subspace:
    """Image in L of a subspace given in the coordinates of ``restrict(L, s)``."""
    return span((la.combine(v, s.basis, L.dim) for v in sub.basis), L.dim)


# ---------------------------------------------------------------------------
# megaideal lattice


@dataclass
class MegaidealLattice:
    generators: list  # (tag, Subspace)
    closure: list  # Subspace, sorted by (dim, basis)
    inclusion_order: list = field(default_factory=list)  # (i, j): closure[i] ⊊ closure[j]

    def index(self, s: Subspace) -> int:
        return self.closure.index(s)

    def __contains__(self, s: Subspace) -> bool:
        return s in self.closure

    def tags_of(self, s: Subspace) -> list:
        return [t for t, g in self.generators if g == s]


def characteristic_seeds(L: LieAlgebra) -> list:
    """Tagged subspaces that every automorphism fixes."""
    seeds = [("0", L.zero()), ("g", L.full())]
    for i, t in enumerate(derived_series(L).terms):
        seeds.append(("g" + "'" * i if i < 4 else f"g^({i})", t))
    for i, t in enumerate(lower_central_series(L).terms):
        seeds.append((f"C{i + 1}", t))
    for i, t in enumerate(upper_central_series(L).terms):
        seeds.append((f"z{i}", t))
    seeds.append(("center", center(L)))
    seeds.append(("radical", radical(L)))
    seeds.append(("nilradical", nilradical(L)))
    return seeds


def closure_round(L: LieAlgebra, members: Sequence[Subspace]) -> set:
    out = set(members)
    ms = list(members)
    for a, b in itertools.combinations_with_replacement(ms, 2):
        out.add(a + b)
        out.add(a & b)
        out.add(bracket_subspaces(L, a, b))
    return out


def megaideal_closure(L: LieAlgebra, depth: int = 2, include_seeds: Optional[dict] = None) -> MegaidealLattice:
    """Provable megaideals of L.

    Level-1 seeds are the characteristic subspaces of L.  With ``depth >= 2``
    each seed that is a proper nonzero ideal is restricted to a Lie algebra of
    its own and its characteristic subspaces are added too (a megaideal of a
    megaideal is a megaideal of L).  ``include_seeds`` may switch off seed
    families by tag prefix, e.g. ``{"nilradical": False}``.
    """
    flags = include_seeds or {}

    def wanted(tag: str) -> bool:
        for key, on in flags.items():
            if tag.startswith(key) and not on:
                return False
        return True

    gens = [(t, s) for t, s in characteristic_seeds(L) if wanted(t)]
    level = gens
    for d in range(2, depth + 1):
        new = []
        seen = {s for _, s in gens}
        parents = {}
        for tag, s in level:
            if 0 < s.dim < L.dim and s not in parents:
                parents[s] = tag
        for s, tag in parents.items():
            sub = restrict(L, s)
            for subtag, t in characteristic_seeds(sub):
                if not wanted(subtag):
                    continue
                image = embed(L, s, t)
                if image not in seen:
                    seen.add(image)
                    new.append((f"{subtag}({tag})", image))
        gens.extend(new)
        level = new

    members = {s for _, s in gens}
    members.add(L.zero())
    members.add(L.full())
    while True:
        nxt = closure_round(L, members)
        if nxt == members:
            break
        members = nxt
    closure = sorted(members, key=Subspace.sort_key)
    order = [(i, j) for i, a in enumerate(closure) for j, b in enumerate(closure)
             if i != j and a.dim < b.dim and a <= b]
    return MegaidealLattice(gens, closure, order)


def random_subspace(rng: random.Random, n: int, k: int, coeff_range: int = 3) -> Subspace:
    return span([tuple(Fraction(rng.randint(-coeff_range, coeff_range)) for _ in range(n))
                 for _ in range(k)], n)
