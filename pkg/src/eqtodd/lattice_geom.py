"""Lattices, rational polyhedral cones and fans in ``N = Z^n``.

Cones are stored by primitive integer generators.  Face structure comes
from facet enumeration inside the cone's own lattice ``N_sigma``, which is
exponential in the number of generators and meant for small cones.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd

from . import linalg


class ConeError(ValueError):
    pass


class FanError(ValueError):
    pass


def primitive(v):
    """``v / gcd(v)``; raises for the zero vector."""
    v = [linalg.as_int(x) for x in v]
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(x // g for x in v)


def primitive_rational(v):
    """Primitive integer vector on the ray through a rational vector."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    return primitive([int(Fraction(x) * den) for x in v])


@dataclass(frozen=True)
class LatticeContext:
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("lattice rank must be positive")

    def check(self, v):
        if len(v) != self.rank:
            raise ValueError(f"vector {v} does not have {self.rank} coordinates")
        return v


@dataclass(frozen=True)
class ConeData:
    """The cone spanned by ``generators`` (primitive, distinct)."""

    generators: tuple
    ambient_dim: int = field(default=None, compare=False)

    def __post_init__(self):
        gens = []
        for g in self.generators:
            p = primitive(g)
            if p not in gens:
                gens.append(p)
        object.__setattr__(self, "generators", tuple(gens))
        if self.ambient_dim is None:
            if not gens:
                raise ConeError("ambient dimension needed for the zero cone")
            object.__setattr__(self, "ambient_dim", len(gens[0]))
        for g in gens:
            if len(g) != self.ambient_dim:
                raise ConeError(f"generator {g} not in Z^{self.ambient_dim}")

    @classmethod
    def zero(cls, n):
        return cls((), n)

    @classmethod
    def from_generators(cls, gens, n=None):
        """Cone with redundant (non-extreme) generators removed."""
        c = cls(tuple(gens), n)
        if not c.is_pointed:
            return c
        return cls(tuple(c.generators[i] for i in c.extreme_indices), c.ambient_dim)

    # -- basic invariants -------------------------------------------------
    @cached_property
    def dim(self):
        return linalg.rank([list(g) for g in self.generators], self.ambient_dim)

    @property
    def is_simplicial(self):
        return len(self.generators) == self.dim

    @cached_property
    def span_basis(self):
        """Z-basis of ``N_sigma = span(sigma) ∩ N``."""
        return linalg.saturate(self.generators, self.ambient_dim)

    @cached_property
    def perp_basis(self):
        """Z-basis of ``M(sigma) = sigma^⊥ ∩ M``."""
        if not self.generators:
            return linalg.integer_kernel([], self.ambient_dim)
        return linalg.integer_kernel([list(g) for g in self.generators], self.ambient_dim)

    def coordinates(self, v):
        """Coordinates of ``v in N_sigma`` relative to :attr:`span_basis`."""
        B = self.span_basis
        x = linalg.solve(linalg.transpose(B), list(v))
        if x is None:
            raise ConeError(f"{v} is not in the span of the cone")
        return x

    @cached_property
    def multiplicity(self):
        if not self.is_simplicial:
            raise ConeError("multiplicity is defined for simplicial cones only")
        if not self.generators:
            return 1
        return linalg.gcd_of_maximal_minors([list(g) for g in self.generators])

    @property
    def is_smooth(self):
        return self.is_simplicial and self.multiplicity == 1

    # -- facets and faces -----------------------------------------------
    @cached_property
    def _local_gens(self):
        return [tuple(int(c) for c in self.coordinates(g)) for g in self.generators]

    @cached_property
    def facets(self):
        """Facets as ``(inner normal in M_sigma coordinates, generator indices)``.

        The normal is a primitive integer functional on ``N_sigma`` written in
        the dual of :attr:`span_basis`.
        """
        d = self.dim
        gens = self._local_gens
        found = {}
        if d == 0:
            return []
        for sub in combinations(range(len(gens)), d - 1):
            rows = [list(gens[i]) for i in sub]
            if linalg.rank(rows, d) != d - 1:
                continue
            normal = linalg.integer_kernel(rows, d)[0] if rows else [1]
            vals = [linalg.dot(normal, g) for g in gens]
            if all(v >= 0 for v in vals):
                pass
            elif all(v <= 0 for v in vals):
                normal = [-x for x in normal]
                vals = [-v for v in vals]
            else:
                continue
            if all(v == 0 for v in vals):
                continue
            zero = frozenset(i for i, v in enumerate(vals) if v == 0)
            found[zero] = tuple(normal)
        return [(n, s) for s, n in sorted(found.items(), key=lambda t: sorted(t[0]))]

    @cached_property
    def is_pointed(self):
        d = self.dim
        if d == 0:
            return True
        normals = [list(n) for n, _ in self.facets]
        return bool(normals) and linalg.rank(normals, d) == d

    @cached_property
    def faces(self):
        """All faces as frozensets of generator indices (``frozenset()`` = 0)."""
        if not self.is_pointed:
            raise ConeError("faces requested for a cone containing a line")
        full = frozenset(range(len(self.generators)))
        result = {full}
        frontier = [s for _, s in self.facets]
        while frontier:
            new = []
            for s in frontier:
                if s in result:
                    continue
                result.add(s)
                new.extend(s & t for _, t in self.facets)
            frontier = new
        return sorted(result, key=lambda s: (len(s), sorted(s)))

    @cached_property
    def extreme_indices(self):
        return [i for i in range(len(self.generators)) if frozenset([i]) in set(self.faces)]

    def face_cone(self, index_set):
        return ConeData(tuple(self.generators[i] for i in sorted(index_set)), self.ambient_dim)

    def face_dim(self, index_set):
        return linalg.rank([list(self.generators[i]) for i in index_set], self.ambient_dim)

    # -- H-representation in the ambient lattice ------------------------
    @cached_property
    def inequalities(self):
        """``(ineqs, eqs)`` with ``sigma = {v : a·v >= 0 for a in ineqs, e·v = 0}``."""
        B = self.span_basis
        ineqs = []
        for normal, _ in self.facets:
            # lift the functional on N_sigma to M: solve <m, b_i> = normal_i
            m = linalg.solve(B, list(normal))
            ineqs.append(m)
        return ineqs, [list(p) for p in self.perp_basis]

    def contains(self, v):
        ineqs, eqs = self.inequalities
        return all(linalg.dot(e, v) == 0 for e in eqs) and all(linalg.dot(a, v) >= 0 for a in ineqs)

    def key(self):
        return tuple(sorted(self.generators))

    def __repr__(self):
        return f"Cone({list(self.generators)})" if self.generators else f"Cone(0 in Z^{self.ambient_dim})"


def is_smooth(cone):
    return cone.is_smooth


def multiplicity(cone):
    return cone.multiplicity


# ---------------------------------------------------------------- duals


def dual_cone(cone):
    """``{m : <m, v> >= 0 for v in sigma}`` as a cone in ``M``.

    Generators are the lifted inner facet normals plus ``±`` a basis of
    ``sigma^⊥`` when ``sigma`` is not full-dimensional.
    """
    n = cone.ambient_dim
    ineqs, eqs = cone.inequalities
    gens = []
    for a in ineqs:
        # pick the lift that is integral: solve over Z, fall back to primitivizing
        normal_lift = _integral_lift(cone, a)
        gens.append(normal_lift)
    for e in eqs:
        gens.append(tuple(e))
        gens.append(tuple(-x for x in e))
    if cone.dim == 0:
        gens = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            gens.append(tuple(e))
            gens.append(tuple(-x for x in e))
    return ConeData(tuple(gens), n)


def _integral_lift(cone, a):
    """An integer covector equal to ``a`` on ``N_sigma`` (``a`` rational)."""
    B = cone.span_basis
    vals = [linalg.dot(a, b) for b in B]
    if all(Fraction(v).denominator == 1 for v in vals):
        sol = linalg.integer_solve(B, [int(v) for v in vals])
        if sol is not None:
            return tuple(sol)
    return primitive_rational(a)


# ---------------------------------------------------------------- quotients


class QuotientLattice:
    """``N(sigma) = N / N_sigma`` presented as ``Z^{n-k}``.

    The projection pairs with a Z-basis of ``M(sigma)``; it is surjective
    because that basis spans a saturated sublattice of ``M``.
    """

    def __init__(self, cone):
        self.cone = cone
        self.basis = [list(p) for p in cone.perp_basis]

    @property
    def rank(self):
        return len(self.basis)

    def project(self, v):
        return tuple(int(linalg.dot(p, v)) for p in self.basis)

    def lift(self, c):
        if not self.basis:
            return (0,) * self.cone.ambient_dim
        x = linalg.integer_solve(self.basis, list(c))
        if x is None:
            raise ConeError(f"{c} has no integral lift")
        return tuple(x)


@dataclass(frozen=True)
class NormalGenerator:
    """``n_{tau,sigma}``: its class in ``N(sigma)`` and an integral lift in ``N_tau``."""

    quotient_class: tuple
    lift: tuple


def normal_generator(tau, sigma):
    """Primitive generator of the image of ``tau`` in ``N/N_sigma``.

    The lift is chosen inside ``N_tau`` so that it pairs correctly with any
    representative of a local equation on ``tau``.
    """
    if tau.dim != sigma.dim + 1 or not _is_face(tau, sigma):
        raise ConeError(f"{sigma} is not a maximal proper face of {tau}")
    Bt = tau.span_basis
    k1 = len(Bt)
    sub = [[int(c) for c in tau.coordinates(b)] for b in sigma.span_basis]
    if sub:
        phi = linalg.integer_kernel(sub, k1)[0]
    else:
        phi = [1]
    u = next(g for g in tau.generators if not _in_span(sigma, g))
    if linalg.dot(phi, [int(c) for c in tau.coordinates(u)]) < 0:
        phi = [-x for x in phi]
    w = linalg.integer_solve([phi], [1])
    lift = tuple(int(sum(w[i] * Bt[i][j] for i in range(k1))) for j in range(tau.ambient_dim))
    q = QuotientLattice(sigma)
    return NormalGenerator(q.project(lift), lift)


def _is_face(tau, sigma):
    idx = frozenset(i for i, g in enumerate(tau.generators) if _in_span(sigma, g))
    if idx not in set(tau.faces):
        return False
    return {tau.generators[i] for i in idx} >= set(sigma.generators) or not sigma.generators


def _in_span(cone, v):
    if not cone.generators:
        return not any(v)
    return linalg.rank([list(g) for g in cone.generators] + [list(v)]) == cone.dim


# ---------------------------------------------------------------- fans


class FanData:
    """A fan given by rays and cones (ray-index sets), closed under faces.

    Construction checks that each listed cone's extreme rays are exactly the
    listed rays, that no other fan ray lies in it, and that any two cones
    meet in a common face (brute force over pairs of maximal cones).
    """

    def __init__(self, rank, rays, cones, validate=True):
        self.context = LatticeContext(rank)
        self.rank = rank
        self.rays = [primitive(self.context.check(tuple(r))) for r in rays]
        if len(set(self.rays)) != len(self.rays):
            raise FanError("duplicate rays")
        self._cone_data = {}
        closed = {frozenset()}
        for c in cones:
            c = frozenset(c)
            for i in c:
                if not 0 <= i < len(self.rays):
                    raise FanError(f"ray index {i} out of range")
            cd = self.cone_data(c)
            if not cd.is_pointed:
                raise FanError(f"cone {sorted(c)} is not pointed")
            order = sorted(c)
            if validate and len(cd.extreme_indices) != len(order):
                raise FanError(f"cone {order} lists a non-extreme ray")
            for face in cd.faces:
                closed.add(frozenset(order[i] for i in face))
        for i in range(len(self.rays)):
            closed.add(frozenset([i]))
        self.cones = sorted(closed, key=lambda s: (len(s), sorted(s)))
        self._cone_set = set(self.cones)
        if validate:
            self._validate()

    @classmethod
    def from_cone(cls, cone):
        """The fan of all faces of a single pointed cone."""
        cone = ConeData.from_generators(cone.generators, cone.ambient_dim)
        return cls(cone.ambient_dim, list(cone.generators), [range(len(cone.generators))], validate=False)

    def cone_data(self, s):
        s = frozenset(s)
        if s not in self._cone_data:
            self._cone_data[s] = ConeData(tuple(self.rays[i] for i in sorted(s)), self.rank)
        return self._cone_data[s]

    def __contains__(self, s):
        return frozenset(s) in self._cone_set

    def dim(self, s):
        return self.cone_data(s).dim

    @property
    def maximal_cones(self):
        return [c for c in self.cones if not any(c < d for d in self.cones)]

    @property
    def is_simplicial(self):
        return all(self.cone_data(c).is_simplicial for c in self.cones)

    @property
    def is_smooth(self):
        return all(self.cone_data(c).is_smooth for c in self.cones)

    def maximal_proper_faces(self, tau):
        tau = frozenset(tau)
        if tau not in self:
            raise FanError(f"{sorted(tau)} is not a cone of the fan")
        d = self.dim(tau)
        return [s for s in self.cones if s < tau and self.dim(s) == d - 1]

    def cofaces(self, sigma):
        """Cones ``tau`` with ``tau -> sigma``."""
        sigma = frozenset(sigma)
        d = self.dim(sigma)
        return [t for t in self.cones if sigma < t and self.dim(t) == d + 1]

    def find_cone(self, generators):
        """Ray-index set of the fan cone spanned by ``generators`` (or None)."""
        idx = []
        for g in generators:
            p = primitive(g)
            if p not in self.rays:
                return None
            idx.append(self.rays.index(p))
        s = frozenset(idx)
        return s if s in self else None

    def _validate(self):
        for s in self.cones:
            cd = self.cone_data(s)
            for j, r in enumerate(self.rays):
                if j not in s and cd.contains(r):
                    raise FanError(f"ray {r} lies in cone {sorted(s)} but is not one of its rays")
        maxc = self.maximal_cones
        for a, b in combinations(maxc, 2):
            common = a & b
            if not _meets_in(self.cone_data(a), self.cone_data(b), self.cone_data(common), self.rank):
                raise FanError(f"cones {sorted(a)} and {sorted(b)} do not meet in a common face")

    def to_json(self):
        maxc = self.maximal_cones
        return {"rank": self.rank, "rays": [list(r) for r in self.rays], "cones": [sorted(c) for c in maxc]}

    @classmethod
    def from_json(cls, obj):
        base = obj.get("index_base", 0)
        return cls(obj["rank"], obj["rays"], [[i - base for i in c] for c in obj["cones"]])


def _meets_in(a, b, common, n):
    """Whether ``a ∩ b`` equals ``common`` (assumed a face of both)."""
    ia, ea = a.inequalities
    ib, eb = b.inequalities
    rows = ia + ib
    eqs = ea + eb
    for k in range(0, min(len(rows), n - 1) + 1):
        for sub in combinations(range(len(rows)), k):
            system = eqs + [rows[i] for i in sub]
            if (linalg.rank(system, n) if system else 0) != n - 1:
                continue
            null = linalg.nullspace(system, n)
            for sgn in (1, -1):
                v = [sgn * x for x in null[0]]
                if all(linalg.dot(r, v) >= 0 for r in rows):
                    if not _in_span(common, v):
                        return False
    return True


# ---------------------------------------------------------- subdivision


def _parallelepiped_points(cone):
    """Nonzero coefficient vectors ``lambda in [0,1)^k`` with ``sum lambda_i v_i`` integral."""
    k = cone.dim
    V = [[Fraction(c) for c in cone.coordinates(g)] for g in cone.generators]
    Vinv = linalg.inverse(V)
    gens = [tuple(x - (x.numerator // x.denominator) for x in row) for row in Vinv]
    zero = (Fraction(0),) * k
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple((a + b) - ((a + b).numerator // (a + b).denominator) for a, b in zip(p, g))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    seen.discard(zero)
    return sorted(seen)


def stellar_point(cone):
    """Primitive lattice vector used to subdivide a singular simplicial cone."""
    pts = _parallelepiped_points(cone)
    lam = pts[0]
    v = [sum(l * g[j] for l, g in zip(lam, cone.generators)) for j in range(cone.ambient_dim)]
    return primitive_rational(v), lam


def triangulate(cone):
    """Simplicial cones covering ``cone``, pulling from its first generator."""
    if cone.is_simplicial:
        return [cone]
    cone = ConeData.from_generators(cone.generators, cone.ambient_dim)
    if cone.is_simplicial:
        return [cone]
    apex = cone.generators[0]
    pieces = []
    for _, s in cone.facets:
        if 0 in s:
            continue
        facet = cone.face_cone(s)
        for simp in triangulate(facet):
            pieces.append(ConeData((apex,) + simp.generators, cone.ambient_dim))
    return pieces


def subdivide_to_smooth(cone):
    """Smooth cones of the same dimension whose union is ``cone``.

    Non-simplicial cones are triangulated first; a singular simplicial cone
    is split at the parallelepiped point with lexicographically minimal
    fractional coordinates, and the pieces are refined recursively.
    """
    if not cone.is_pointed:
        raise ConeError("cannot subdivide a cone containing a line")
    out = []
    stack = list(triangulate(cone))
    while stack:
        c = stack.pop()
        if c.is_smooth:
            out.append(c)
            continue
        w, lam = stellar_point(c)
        for i, li in enumerate(lam):
            if li == 0:
                continue
            gens = list(c.generators)
            gens[i] = w
            stack.append(ConeData(tuple(gens), c.ambient_dim))
    return sorted(out, key=lambda c: c.key())


def stellar_subdivide(cone, point):
    """Split a simplicial cone at ``point`` (nonzero pieces only)."""
    V = [[Fraction(x) for x in g] for g in cone.generators]
    lam = linalg.solve(linalg.transpose(V), [Fraction(x) for x in point])
    if lam is None or any(l < 0 for l in lam):
        raise ConeError(f"{point} is not in {cone}")
    pieces = []
    for i, li in enumerate(lam):
        if li == 0:
            continue
        gens = list(cone.generators)
        gens[i] = primitive_rational(point)
        pieces.append(ConeData(tuple(gens), cone.ambient_dim))
    return pieces
