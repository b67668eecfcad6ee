"""Lattice polytopes, exponential sums and integrals, and the Euler–Maclaurin sum.

Polytopes live in ``M = Z^n``; the series variables are the coordinates of
``xi in N ⊗ C``, so ``<xi, x>`` for a lattice point ``x`` is the linear
polynomial with coefficient vector ``x``.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from math import factorial

from . import linalg
from .lattice_geom import ConeData, ConeError, primitive
from .series import (
    LinearForm,
    MeromorphicGerm,
    PolySeries,
    exp_linear,
    g_coefficients,
    germ_negate,
    negate_variables,
    univariate,
)
from .todd import r_general

MAX_DIM = 3
ENUMERATION_BUDGET = 10**6


class PolytopeError(ValueError):
    pass


class VerificationError(AssertionError):
    """Euler–Maclaurin and direct enumeration disagree."""


@dataclass(frozen=True)
class Facet:
    normal: tuple  # primitive inner normal in N
    offset: Fraction  # <normal, x> >= offset on P

    def value(self, x):
        return sum(a * b for a, b in zip(self.normal, x))


@dataclass(frozen=True)
class FaceRecord:
    vertices: frozenset  # indices into the polytope's vertex list
    dim: int
    tangent_cone: tuple  # generators in M_Q
    normal_cone: ConeData  # sigma_{P,F} in N


def _affine_rank(points):
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return linalg.rank([[a - b for a, b in zip(p, p0)] for p in points[1:]], len(p0))


class LatticePolytope:
    """Convex hull of integer ``vertices``; facets are computed if not given."""

    def __init__(self, vertices, facets=None):
        verts = []
        for v in vertices:
            v = tuple(linalg.as_int(c) for c in v)
            if v not in verts:
                verts.append(v)
        if not verts:
            raise PolytopeError("a polytope needs at least one vertex")
        self.rank = len(verts[0])
        if any(len(v) != self.rank for v in verts):
            raise PolytopeError("vertices have inconsistent dimensions")
        if self.rank > MAX_DIM:
            raise PolytopeError(f"ambient dimension {self.rank} exceeds {MAX_DIM}")
        self.dim = _affine_rank(verts)
        if self.dim not in (0, self.rank):
            raise PolytopeError("polytope must be full-dimensional or a single point")
        if facets is None:
            self.facets = self._compute_facets(verts)
        else:
            self.facets = [Facet(tuple(linalg.as_int(a) for a in n), Fraction(b)) for n, b in facets]
            self._check_facets(verts)
        self.vertices = self._extreme(verts)

    # -- construction ---------------------------------------------------
    def _compute_facets(self, verts):
        n = self.rank
        if self.dim == 0:
            return []
        found = {}
        for sub in combinations(verts, n):
            diffs = [[a - b for a, b in zip(p, sub[0])] for p in sub[1:]]
            if n > 1 and linalg.rank(diffs, n) != n - 1:
                continue
            normal = primitive(linalg.integer_kernel(diffs, n)[0]) if diffs else (1,)
            off = sum(a * b for a, b in zip(normal, sub[0]))
            vals = [sum(a * b for a, b in zip(normal, v)) - off for v in verts]
            if all(v >= 0 for v in vals):
                pass
            elif all(v <= 0 for v in vals):
                normal, off = tuple(-a for a in normal), -off
            else:
                continue
            found[normal] = Facet(normal, Fraction(off))
        return [found[k] for k in sorted(found)]

    def _check_facets(self, verts):
        for f in self.facets:
            on = [v for v in verts if f.value(v) == f.offset]
            if any(f.value(v) < f.offset for v in verts) or _affine_rank(on) != self.rank - 1:
                raise PolytopeError(f"{f} is not a facet of the vertex hull")

    def _extreme(self, verts):
        if self.dim == 0:
            return verts
        out = []
        for v in verts:
            tight = [list(f.normal) for f in self.facets if f.value(v) == f.offset]
            if tight and linalg.rank(tight, self.rank) == self.rank:
                out.append(v)
        return out

    def contains(self, x):
        if self.dim == 0:
            return tuple(x) == self.vertices[0]
        return all(f.value(x) >= f.offset for f in self.facets)

    def translate(self, v):
        return LatticePolytope([tuple(a + b for a, b in zip(p, v)) for p in self.vertices])

    def dilate(self, k):
        return LatticePolytope([tuple(k * a for a in p) for p in self.vertices])

    # -- faces ------------------------------------------------------------
    def _facet_vertex_sets(self):
        return [
            frozenset(i for i, v in enumerate(self.vertices) if f.value(v) == f.offset)
            for f in self.facets
        ]

    @cached_property
    def face_lattice(self):
        """All faces, ``P`` itself included, sorted by dimension then vertex set."""
        allv = frozenset(range(len(self.vertices)))
        fsets = self._facet_vertex_sets()
        sets = {allv}
        frontier = set(fsets)
        while frontier:
            sets |= frontier
            frontier = {a & b for a in frontier for b in fsets if a & b} - sets
        records = []
        for s in sets:
            pts = [self.vertices[i] for i in sorted(s)]
            d = _affine_rank(pts)
            normals = [self.facets[k].normal for k, fs in enumerate(fsets) if s <= fs]
            records.append(FaceRecord(s, d, self._tangent(s), self._normal_cone(normals)))
        return sorted(records, key=lambda r: (r.dim, sorted(r.vertices)))

    def _tangent(self, s):
        gens = []
        for i in sorted(s):
            for w in self.vertices:
                d = tuple(a - b for a, b in zip(w, self.vertices[i]))
                if any(d) and d not in gens:
                    gens.append(d)
        return tuple(gens)

    def _normal_cone(self, normals):
        if not normals:
            return ConeData.zero(self.rank)
        return ConeData.from_generators(normals, self.rank)

    def faces_of(self, face, dim):
        return [g for g in self.face_lattice if g.dim == dim and g.vertices <= face.vertices]

    # -- enumeration ------------------------------------------------------
    def lattice_points(self):
        lo = [min(v[k] for v in self.vertices) for k in range(self.rank)]
        hi = [max(v[k] for v in self.vertices) for k in range(self.rank)]
        size = 1
        for a, b in zip(lo, hi):
            size *= b - a + 1
        if size > ENUMERATION_BUDGET:
            raise PolytopeError(f"bounding box has {size} points, over budget")
        ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
        return [x for x in product(*ranges) if self.contains(x)]

    def to_json(self):
        return {
            "rank": self.rank,
            "vertices": [list(v) for v in self.vertices],
            "facets_optional": [{"normal": list(f.normal), "offset": str(f.offset)} for f in self.facets],
        }

    @classmethod
    def from_json(cls, obj):
        facets = obj.get("facets_optional")
        if facets:
            facets = [(f["normal"], Fraction(f["offset"])) for f in facets]
        P = cls(obj["vertices"], facets or None)
        if "rank" in obj and obj["rank"] != P.rank:
            raise PolytopeError("declared rank does not match the vertices")
        return P

    def __repr__(self):
        return f"LatticePolytope({self.vertices})"


def face_lattice(P):
    return P.face_lattice


# ----------------------------------------------------------------- sums


def exp_sum_series(P, order):
    """``sum_{x in P ∩ M} e^{<xi, x>}`` through ``order``."""
    total = PolySeries.zero(P.rank, order)
    for x in P.lattice_points():
        total = total + exp_linear(LinearForm(x), order)
    return total


def _complete_homogeneous(forms, order):
    """List of complete homogeneous polynomials ``h_k(l_0..l_d)``, ``k <= order``."""
    n = forms[0].nvars
    # H[k] is h_k of the forms absorbed so far
    H = [PolySeries.constant(1, n, order)] + [PolySeries.zero(n, order) for _ in range(order)]
    for f in forms:
        fs = f.series(order)
        powers = [PolySeries.constant(1, n, order)]
        for _ in range(order):
            powers.append(powers[-1] * fs)
        H = [sum((powers[i] * H[k - i] for i in range(k + 1)), PolySeries.zero(n, order)) for k in range(order + 1)]
    return H


def _simplex_integral(verts, basis, order):
    """``∫ e^{<xi,x>}`` over a lattice simplex, measure normalized by ``basis``."""
    d = len(verts) - 1
    n = len(verts[0])
    edges = [[a - b for a, b in zip(v, verts[0])] for v in verts[1:]]
    coords = [linalg.solve(linalg.transpose(basis), e) for e in edges]
    vol = abs(linalg.det(coords))
    H = _complete_homogeneous([LinearForm(v) for v in verts], order)
    total = PolySeries.zero(n, order)
    for k in range(order + 1):
        total = total + H[k].scale(Fraction(1, factorial(k + d)))
    return total.scale(vol)


def _triangulate_face(P, face):
    """Pulling triangulation of a face into simplices (vertex tuples)."""
    pts = sorted(face.vertices)
    if face.dim == 0:
        return [(P.vertices[pts[0]],)]
    apex = pts[0]
    out = []
    for sub in P.faces_of(face, face.dim - 1):
        if apex in sub.vertices:
            continue
        for simp in _triangulate_face(P, sub):
            out.append((P.vertices[apex],) + simp)
    return out


def exp_integral_series(P, face, order):
    """``∫_F e^{<xi,x>} dx`` for the relative lattice measure on ``aff(F)``."""
    if face.dim == 0:
        return exp_linear(LinearForm(P.vertices[next(iter(face.vertices))]), order)
    pts = [P.vertices[i] for i in sorted(face.vertices)]
    diffs = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
    basis = linalg.saturate(diffs, P.rank)
    total = PolySeries.zero(P.rank, order)
    for simp in _triangulate_face(P, face):
        total = total + _simplex_integral([list(v) for v in simp], basis, order)
    return total


# ---------------------------------------------------------------- germs


def cone_germs(cone, which, negate=False, order=8):
    """``S(K)`` or ``I(K)`` for a smooth cone ``K`` in ``M``.

    ``I(K) = (-1)^k / prod v_i`` and ``S(K) = prod 1/(1 - e^{v_i})``.  A cone
    containing a line gives the zero germ.  ``negate`` applies ``xi -> -xi``.
    """
    n = cone.ambient_dim
    if which not in ("S", "I"):
        raise ValueError("which must be 'S' or 'I'")
    if cone.dim and not cone.is_pointed:
        return MeromorphicGerm(PolySeries.zero(n, None), ())
    if not cone.is_smooth:
        raise ConeError("germs are only tabulated for smooth cones")
    forms = [LinearForm(v) for v in cone.generators]
    sign = (-1) ** len(forms)
    if which == "I":
        germ = MeromorphicGerm(PolySeries.constant(sign, n, None), tuple(forms))
    else:
        # 1/(1-e^v) = -g(-v)/v with g(z) = z/(1-e^{-z})
        g = univariate(g_coefficients(order), order)
        num = PolySeries.constant(sign, n, order)
        for f in forms:
            num = num * g.compose([(-f).series(order)])
        germ = MeromorphicGerm(num, tuple(forms))
    return germ_negate(germ) if negate else germ


# ------------------------------------------------------- Euler–Maclaurin


def euler_maclaurin_series(P, psi, order):
    """``sum_F r(sigma_{P,F})(-xi) · I(F)(xi)`` through ``order``."""
    if P.dim == 0:
        return exp_linear(LinearForm(P.vertices[0]), order)
    total = PolySeries.zero(P.rank, order)
    for face in P.face_lattice:
        r = negate_variables(r_general(face.normal_cone, psi, order))
        total = total + r * exp_integral_series(P, face, order)
    return total


def count_lattice_points(P, psi):
    """``(count, certificate)``; raises :class:`VerificationError` on disagreement."""
    em = euler_maclaurin_series(P, psi, 0).constant_term
    direct = len(P.lattice_points())
    cert = f"EM={em}, enumeration={direct}"
    if em != direct:
        raise VerificationError(cert)
    return int(em), cert


def verify(P, psi, order):
    """Per-coefficient differences between the EM series and the direct sum."""
    em = euler_maclaurin_series(P, psi, order)
    direct = exp_sum_series(P, order)
    diff = (em - direct).terms
    worst = max((abs(c) for c in diff.values()), default=Fraction(0))
    return {"order": order, "max_abs_diff": worst, "diff": diff}
