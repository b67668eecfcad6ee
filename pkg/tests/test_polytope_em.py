import random
from fractions import Fraction as Q
from math import factorial

import pytest
import sympy as sp

from conftest import random_gram
from eqtodd import polytope_em
from eqtodd.complement import InnerProductMap
from eqtodd.lattice_geom import ConeData
from eqtodd.polytope_em import (
    LatticePolytope,
    PolytopeError,
    VerificationError,
    cone_germs,
    count_lattice_points,
    euler_maclaurin_series,
    exp_integral_series,
    exp_sum_series,
    face_lattice,
    verify,
)
from eqtodd.series import LinearForm, MeromorphicGerm, PolySeries, exp_linear, germ_equal
from eqtodd.todd import dual_basis, s_tilde_germ

TRIANGLE = LatticePolytope([(0, 0), (1, 0), (0, 1)])
SKEW = LatticePolytope([(0, 0), (2, 1), (1, 2)])
CUBE = LatticePolytope([(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)])
SEGMENT = LatticePolytope([(0,), (1,)])


def uni(coeffs, order):
    return PolySeries(1, order, {(k,): c for k, c in enumerate(coeffs)})


def face_with(P, verts):
    idx = frozenset(P.vertices.index(tuple(v)) for v in verts)
    return next(f for f in P.face_lattice if f.vertices == idx)


# ------------------------------------------------------------ face lattice


def test_face_counts():
    assert len(face_lattice(TRIANGLE)) == 7
    assert len(face_lattice(SEGMENT)) == 3
    assert len(face_lattice(CUBE)) == 27


def test_normal_cone_at_origin():
    f = face_with(TRIANGLE, [(0, 0)])
    assert set(f.normal_cone.generators) == {(0, 1), (1, 0)}
    assert face_with(TRIANGLE, TRIANGLE.vertices).normal_cone.dim == 0


@pytest.mark.parametrize("P", [TRIANGLE, SKEW, CUBE, SEGMENT, LatticePolytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])])
def test_face_duality(P):
    for f in P.face_lattice:
        assert f.dim + f.normal_cone.dim == P.rank
        for m in f.tangent_cone:
            for n in f.normal_cone.generators:
                assert sum(a * b for a, b in zip(m, n)) >= 0


def test_vertex_normal_cones_tile():
    rng = random.Random(17)
    for P in (TRIANGLE, SKEW, CUBE):
        vertex_faces = [f for f in P.face_lattice if f.dim == 0]
        for _ in range(40):
            n = tuple(Q(rng.randint(-30, 30), rng.randint(1, 7)) for _ in range(P.rank))
            values = [sum(a * b for a, b in zip(n, v)) for v in P.vertices]
            if values.count(min(values)) > 1:
                continue
            strict = [
                f for f in vertex_faces
                if all(sum(a * b for a, b in zip(ineq, n)) > 0 for ineq in f.normal_cone.inequalities[0])
            ]
            assert len(strict) == 1
            assert P.vertices[next(iter(strict[0].vertices))] == P.vertices[values.index(min(values))]


def test_rejects_bad_input():
    with pytest.raises(PolytopeError):
        LatticePolytope([(0, 0), (1, 1)])
    with pytest.raises(PolytopeError):
        LatticePolytope([(0, 0, 0, 0), (1, 0, 0, 0)])
    with pytest.raises(PolytopeError):
        LatticePolytope([(0, 0), (1, 0), (0, 1)], facets=[((1, 1), 1)])


def test_supplied_facets_and_redundant_points():
    facets = [((1, 0), 0), ((0, 1), 0), ((-1, -1), -1)]
    P = LatticePolytope([(0, 0), (1, 0), (0, 1)], facets=facets)
    assert len(P.face_lattice) == 7
    Q2 = LatticePolytope([(0, 0), (2, 0), (0, 2), (1, 0), (1, 1)])
    assert sorted(Q2.vertices) == [(0, 0), (0, 2), (2, 0)]


def test_json_round_trip():
    again = LatticePolytope.from_json(SKEW.to_json())
    assert again.vertices == SKEW.vertices
    assert [f.normal for f in again.facets] == [f.normal for f in SKEW.facets]


# ------------------------------------------------------------ sums/integrals


def test_exp_sum_examples():
    assert exp_sum_series(LatticePolytope([(0,), (2,)]), 2) == uni([3, 3, Q(5, 2)], 2)
    assert exp_sum_series(LatticePolytope([(3, -1)]), 4) == exp_linear(LinearForm((3, -1)), 4)
    want = exp_linear(LinearForm((0, 0)), 5) + exp_linear(LinearForm((1, 0)), 5) + exp_linear(LinearForm((0, 1)), 5)
    assert exp_sum_series(TRIANGLE, 5) == want


def test_segment_integral():
    f = face_with(SEGMENT, [(0,), (1,)])
    assert exp_integral_series(SEGMENT, f, 3) == uni([1, Q(1, 2), Q(1, 6), Q(1, 24)], 3)


def test_vertex_integral_is_point_mass():
    f = face_with(SKEW, [(2, 1)])
    got = exp_integral_series(SKEW, f, 4)
    assert got == exp_linear(LinearForm((2, 1)), 4)
    assert got.constant_term == 1


def _sympy_triangle_moments(verts, order):
    """Coefficients of the Taylor expansion of the integral of e^{a x + b y} over a triangle."""
    u, w, X, Y = sp.symbols("u w X Y")
    (x0, y0), (x1, y1), (x2, y2) = verts
    jac = abs((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0))
    px = x0 + (x1 - x0) * u + (x2 - x0) * w
    py = y0 + (y1 - y0) * u + (y2 - y0) * w
    out = {}
    for i in range(order + 1):
        for j in range(order + 1 - i):
            val = sp.integrate(sp.integrate(px**i * py**j, (w, 0, 1 - u)), (u, 0, 1)) * jac
            val = val / (sp.factorial(i) * sp.factorial(j))
            if val != 0:
                out[(i, j)] = Q(str(sp.Rational(val)))
    return out


@pytest.mark.parametrize("P", [TRIANGLE, SKEW, LatticePolytope([(0, 0), (3, 0), (0, 3)])])
def test_triangle_integral_matches_sympy(P):
    f = face_with(P, P.vertices)
    assert exp_integral_series(P, f, 3).terms == _sympy_triangle_moments(P.vertices, 3)


def test_square_integral_matches_closed_form():
    sq = LatticePolytope([(1, 1), (2, 1), (1, 2), (2, 2)])
    f = face_with(sq, sq.vertices)
    # integral over [1,2]^2 of e^{a x + b y} is the product of two 1D integrals
    one_d = lambda k: Q(2 ** (k + 1) - 1, k + 1)
    want = {(i, j): one_d(i) * one_d(j) / (factorial(i) * factorial(j)) for i in range(5) for j in range(5 - i)}
    assert exp_integral_series(sq, f, 4).terms == want


def test_edge_uses_lattice_length():
    # the edge from (0,0) to (2,1) has lattice length 1
    f = face_with(SKEW, [(0, 0), (2, 1)])
    got = exp_integral_series(SKEW, f, 3)
    t = PolySeries.linear((2, 1), 3)
    want = sum((t ** k * Q(1, factorial(k + 1)) for k in range(4)), PolySeries.zero(2, 3))
    assert got == want


def test_cube_facet_integral():
    f = face_with(CUBE, [(1, 0, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1)])
    got = exp_integral_series(CUBE, f, 2)
    assert got.constant_term == 1
    assert got.coefficient((1, 0, 0)) == 1
    assert got.coefficient((0, 1, 0)) == Q(1, 2)


def test_translation_covariance():
    v = (2, -3)
    shifted = SKEW.translate(v)
    e = exp_linear(LinearForm(v), 4)
    assert exp_sum_series(shifted, 4) == (e * exp_sum_series(SKEW, 4))
    whole = lambda P: face_with(P, P.vertices)
    assert exp_integral_series(shifted, whole(shifted), 4) == e * exp_integral_series(SKEW, whole(SKEW), 4)


# ------------------------------------------------------------------ germs


def test_quadrant_germs():
    K = ConeData(((1, 0), (0, 1)))
    I = cone_germs(K, "I")
    assert germ_equal(I, MeromorphicGerm(PolySeries.constant(1, 2, None), (LinearForm((1, 0)), LinearForm((0, 1)))))
    S = cone_germs(K, "S", negate=True)
    assert germ_equal(S, s_tilde_germ(dual_basis(ConeData(((1, 0), (0, 1)))), 8), 4)


def test_degenerate_germs():
    zero_cone = ConeData.zero(2)
    assert germ_equal(cone_germs(zero_cone, "S"), MeromorphicGerm(PolySeries.constant(1, 2, None)))
    line = ConeData(((1,), (-1,)))
    assert cone_germs(line, "I").numerator.is_zero()


def test_one_dimensional_sum_germ():
    # 1/(1 - e^x) has Laurent expansion -1/x + 1/2 - x/12 + ...
    S = cone_germs(ConeData(((1,),)), "S")
    laurent = MeromorphicGerm(uni([-1, Q(1, 2), Q(-1, 12), 0], 3), (LinearForm((1,)),))
    assert germ_equal(S, laurent, 2)


# --------------------------------------------------------- Euler-Maclaurin


def test_point_polytope():
    P = LatticePolytope([(4, -1)])
    assert euler_maclaurin_series(P, InnerProductMap.standard(2), 3) == exp_linear(LinearForm((4, -1)), 3)
    assert count_lattice_points(P, InnerProductMap.standard(2))[0] == 1


def test_third_dilate_and_segment():
    P = TRIANGLE.dilate(3)
    std = InnerProductMap.standard(2)
    assert euler_maclaurin_series(P, std, 3) == exp_sum_series(P, 3)
    seg = LatticePolytope([(-2,), (3,)])
    assert euler_maclaurin_series(seg, InnerProductMap.standard(1), 5) == exp_sum_series(seg, 5)


@pytest.mark.parametrize("seed", range(3))
def test_identity_for_random_inner_products(seed):
    rng = random.Random(seed)
    for P in (SKEW, LatticePolytope([(0, 0), (3, 1), (1, 2), (0, 1)])):
        psi = random_gram(rng, 2)
        assert euler_maclaurin_series(P, psi, 3) == exp_sum_series(P, 3)


def test_simplex_in_three_dimensions_with_singular_cones():
    P = LatticePolytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2)])
    psi = InnerProductMap.standard(3)
    assert count_lattice_points(P, psi)[0] == 4
    assert euler_maclaurin_series(P, psi, 2) == exp_sum_series(P, 2)


def test_verify_report():
    rep = verify(TRIANGLE, InnerProductMap.standard(2), 4)
    assert rep["max_abs_diff"] == 0 and rep["diff"] == {}


def test_count_mismatch_raises(monkeypatch):
    monkeypatch.setattr(LatticePolytope, "lattice_points", lambda self: [(0, 0)])
    with pytest.raises(VerificationError):
        count_lattice_points(TRIANGLE, InnerProductMap.standard(2))


def test_enumeration_budget(monkeypatch):
    monkeypatch.setattr(polytope_em, "ENUMERATION_BUDGET", 3)
    with pytest.raises(PolytopeError):
        LatticePolytope([(0, 0), (5, 0), (0, 5)]).lattice_points()
