"""Complement maps: compatible sections ``M_{sigma,Q} -> M_Q``.

Only the inner-product instance is provided.  For a positive-definite Gram
matrix ``G`` on ``N_Q`` the complement of ``M(sigma)_Q`` is
``Psi(sigma) = G · span(sigma)``, and the section of a functional ``f`` on
``span(sigma)`` is the unique covector in ``Psi(sigma)`` restricting to ``f``.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .series import LinearForm, PolySeries


class GenericityError(ValueError):
    """The complement map has no section for the requested subspace."""


class NotAFunctionalError(ValueError):
    """Prescribed values are inconsistent with any linear functional."""


class ComplementMap(ABC):
    rank: int

    @abstractmethod
    def section(self, vectors, values):
        """Covector ``m in Psi(span(vectors))`` with ``<m, v_i> = values[i]``."""

    @abstractmethod
    def psi_subspace(self, vectors):
        """Basis of ``Psi(span(vectors))``."""

    @abstractmethod
    def induced(self, basis):
        """The complement map induced on the sublattice with Z-basis ``basis``."""

    def is_generic(self, vectors):
        try:
            self.psi_subspace(vectors)
        except GenericityError:
            return False
        return True


class InnerProductMap(ComplementMap):
    def __init__(self, gram):
        G = [[Fraction(x) for x in row] for row in gram]
        n = len(G)
        if any(len(row) != n for row in G):
            raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(n):
                if G[i][j] != G[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        for k in range(1, n + 1):
            if linalg.det([row[:k] for row in G[:k]]) <= 0:
                raise ValueError("Gram matrix must be positive definite")
        self.gram = G
        self.rank = n

    @classmethod
    def standard(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    def key(self):
        return tuple(tuple(r) for r in self.gram)

    def __eq__(self, other):
        return isinstance(other, InnerProductMap) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"InnerProductMap({[[str(x) for x in r] for r in self.gram]})"

    def apply(self, v):
        """``G v`` as a covector."""
        return [sum(self.gram[i][j] * v[j] for j in range(self.rank)) for i in range(self.rank)]

    def inner(self, u, v):
        return linalg.dot(u, self.apply(v))

    def _basis(self, vectors):
        idx = linalg.independent_subset([list(v) for v in vectors])
        return [list(vectors[i]) for i in idx]

    def psi_subspace(self, vectors):
        return [self.apply(b) for b in self._basis(vectors)]

    def section(self, vectors, values):
        vectors = [list(v) for v in vectors]
        if not vectors:
            return LinearForm((0,) * self.rank)
        idx = linalg.independent_subset(vectors)
        basis = [vectors[i] for i in idx]
        gram = [[self.inner(a, b) for b in basis] for a in basis]
        coef = linalg.solve(gram, [Fraction(values[i]) for i in idx])
        if coef is None:
            raise GenericityError("singular Gram system")
        m = [sum(c * gb for c, gb in zip(coef, col)) for col in zip(*[self.apply(b) for b in basis])]
        for v, val in zip(vectors, values):
            if linalg.dot(m, v) != Fraction(val):
                raise NotAFunctionalError(f"values {list(values)} are not linear on the given vectors")
        return LinearForm(tuple(m))

    def induced(self, basis):
        B = [list(b) for b in basis]
        return InnerProductMap([[self.inner(a, b) for b in B] for a in B])


@dataclass(frozen=True)
class CosetFunctional:
    """A covector considered modulo ``M(sigma)_Q`` (i.e. as a functional on ``N_sigma``)."""

    representative: LinearForm
    span: tuple  # Z-basis of N_sigma

    def values(self):
        return [self.representative.pair(b) for b in self.span]

    def equivalent(self, other):
        return all(self.representative.pair(b) == other.representative.pair(b) for b in self.span)

    def lift(self, psi):
        """``d^Psi``: the section of this functional."""
        return psi.section(self.span, self.values())


def section(psi, cone, functional):
    """``i^Psi`` applied to a functional on ``N_sigma`` (a :class:`CosetFunctional`
    or a covector restricted to the cone's span)."""
    if not isinstance(functional, CosetFunctional):
        functional = CosetFunctional(LinearForm(tuple(functional)), tuple(map(tuple, cone.span_basis)))
    return psi.section(cone.span_basis, functional.values())


def psi_subspace(psi, cone):
    return psi.psi_subspace(cone.span_basis) if cone.generators else []


class SublatticeEmbedding:
    """A saturated sublattice ``N' ⊂ N`` with the induced complement map.

    ``lift_form`` is ``i^Psi : M'_Q -> M_Q`` (covectors in the dual of
    ``basis``); ``lift_series`` extends it to polynomial/series coefficients
    by substituting each dual basis symbol.
    """

    def __init__(self, psi, basis):
        self.psi = psi
        self.basis = [list(b) for b in basis]
        self.induced = psi.induced(self.basis)

    @property
    def rank(self):
        return len(self.basis)

    def coordinates(self, v):
        x = linalg.solve(linalg.transpose(self.basis), list(v))
        if x is None:
            raise ValueError(f"{v} is not in the sublattice span")
        return x

    def lift_form(self, form):
        return self.psi.section(self.basis, list(form.coeffs if isinstance(form, LinearForm) else form))

    def lift_series(self, s):
        images = []
        for k in range(self.rank):
            e = [0] * self.rank
            e[k] = 1
            images.append(self.lift_form(e).series(s.order))
        if not images:
            return PolySeries(self.psi.rank, s.order, {(0,) * self.psi.rank: s.constant_term})
        return s.compose(images)
