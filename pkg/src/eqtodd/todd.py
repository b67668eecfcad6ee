"""Equivariant Todd coefficients ``r^Psi(sigma)``.

For a smooth cone the coefficient is read off the square-free expansion of
``prod_i g(D_i)`` (``g(z) = z/(1-e^{-z})``) in the cycle ring of the fan of
faces of the cone.  Singular and non-simplicial cones are subdivided into
smooth cones of the same dimension and the pieces are summed.
"""
import threading
from fractions import Fraction

from . import linalg
from .complement import InnerProductMap, SublatticeEmbedding
from .cycle_ring import CycleRing, EquivariantCycle
from .lattice_geom import ConeData, ConeError, FanData, subdivide_to_smooth
from .series import (
    B_series,
    LinearForm,
    MeromorphicGerm,
    PolySeries,
    divide_by_linear,
    g_coefficients,
)

_cache = {}
_cache_lock = threading.Lock()
_cache_enabled = True


def set_cache_enabled(flag):
    global _cache_enabled
    _cache_enabled = bool(flag)


def clear_cache():
    with _cache_lock:
        _cache.clear()


def _cache_key(kind, cone, psi, order):
    return (kind, cone.ambient_dim, tuple(sorted(cone.generators)), psi.key(), order)


def _cached(kind, cone, psi, order, compute):
    if not _cache_enabled:
        return compute()
    key = _cache_key(kind, cone, psi, order)
    with _cache_lock:
        if key in _cache:
            return _cache[key]
    value = compute()
    with _cache_lock:
        _cache.setdefault(key, value)
    return value


# ------------------------------------------------------- ring expansion


def todd_polynomial(ring, rays, degree):
    """``prod_{i in rays} g(D_i)`` as a D-polynomial, up to total D-degree ``degree``."""
    g = g_coefficients(degree)
    n, s = ring.n, ring.s
    poly = {(0,) * s: Fraction(1)}
    for i in rays:
        nxt = {}
        for exp, c in poly.items():
            used = sum(exp)
            for k in range(0, degree - used + 1):
                if g[k] == 0:
                    continue
                e = list(exp)
                e[i] += k
                e = tuple(e)
                nxt[e] = nxt.get(e, 0) + c * g[k]
        poly = nxt
    return {e: PolySeries.constant(c, n, ring.order) for e, c in poly.items() if c}


def r_smooth(cone, psi, order):
    """``r^Psi(sigma)`` for a smooth cone by multiplying out the Todd product."""
    if not cone.is_smooth:
        raise ConeError(f"{cone} is not smooth")

    def compute():
        if cone.dim == 0:
            return PolySeries.constant(1, cone.ambient_dim, order)
        fan = FanData.from_cone(cone)
        ring = CycleRing(fan, psi, order)
        rays = list(range(len(fan.rays)))
        poly = todd_polynomial(ring, rays, cone.dim + order)
        full = frozenset(rays)
        sqf = ring.reduce(poly)
        return sqf.get(full, PolySeries.zero(cone.ambient_dim, order)).truncate(order)

    return _cached("smooth", cone, psi, order, compute)


def todd_class(fan, psi, order, method="local"):
    """``Td^T(X) = sum_sigma r^Psi(sigma) V_sigma``.

    ``method="expand"`` multiplies out the product over all rays of a smooth
    fan in one ring; ``"local"`` assembles per-cone coefficients.
    """
    if method == "expand":
        if not fan.is_smooth:
            raise ConeError("direct expansion needs a smooth fan")
        ring = CycleRing(fan, psi, order)
        top = max(fan.dim(c) for c in fan.cones)
        poly = todd_polynomial(ring, list(range(len(fan.rays))), top + order)
        return ring.to_cycle(ring.reduce(poly))
    coeffs = {s: r_general(fan.cone_data(s), psi, order) for s in fan.cones}
    return EquivariantCycle(fan, coeffs)


# ---------------------------------------------------------- closed forms


def _psi_ray_ratio(psi, ray):
    """``c / <c, rho>`` for a generator ``c`` of ``Psi(rho)``."""
    c = LinearForm(tuple(psi.apply(ray)))
    return c.scale(1 / c.pair(ray))


def r_closed_0d(n, order):
    return PolySeries.constant(1, n, order)


def r_closed_1d(cone, psi, order):
    """``B(-c/<c, rho>)`` for a ray ``rho``."""
    if cone.dim != 1:
        raise ConeError("expected a ray")
    return B_series(-_psi_ray_ratio(psi, cone.generators[0]), order)


def _r_closed_2d_full(rho1, rho2, psi, order):
    V = [list(rho1), list(rho2)]
    # rows of the inverse-transpose pair to delta with the rays
    W = linalg.inverse(linalg.transpose(V))
    m1, m2 = LinearForm(tuple(W[0])), LinearForm(tuple(W[1]))
    L1, L2 = _psi_ray_ratio(psi, rho1), _psi_ray_ratio(psi, rho2)
    up = order + 1
    Bm1, Bm2 = B_series(-m1, up), B_series(-m2, up)
    t1 = divide_by_linear(B_series(-L1, up) - Bm1, m2)
    t2 = divide_by_linear(B_series(-L2, up) - Bm2, m1)
    return (Bm1 * Bm2 - t1 - t2).truncate(order)


def r_closed_2d(cone, psi, order):
    """Closed form for a smooth two-dimensional cone.

    In a rank-2 lattice this is the formula in the dual basis ``m_1, m_2``;
    otherwise the cone is moved into its own lattice ``N_sigma`` with the
    induced complement map and the result is pushed back along ``i^Psi``.
    """
    if cone.dim != 2 or not cone.is_smooth:
        raise ConeError("expected a smooth two-dimensional cone")
    rho1, rho2 = cone.generators
    if cone.ambient_dim == 2:
        return _r_closed_2d_full(rho1, rho2, psi, order)
    emb = SublatticeEmbedding(psi, cone.span_basis)
    local = [tuple(int(c) for c in emb.coordinates(r)) for r in (rho1, rho2)]
    inner = _r_closed_2d_full(local[0], local[1], emb.induced, order)
    return emb.lift_series(inner)


def r_closed(cone, psi, order):
    if cone.dim == 0:
        return r_closed_0d(cone.ambient_dim, order)
    if cone.dim == 1:
        return r_closed_1d(cone, psi, order)
    if cone.dim == 2:
        return r_closed_2d(cone, psi, order)
    raise ConeError("closed forms exist only up to dimension 2")


def r_via_sublattice(cone, psi, order):
    """``i^Psi(r^{Psi-bar}(sigma_0))`` with ``sigma_0`` the cone inside ``N_sigma``."""
    emb = SublatticeEmbedding(psi, cone.span_basis)
    local = ConeData(tuple(tuple(int(c) for c in emb.coordinates(g)) for g in cone.generators), emb.rank)
    return emb.lift_series(r_smooth(local, emb.induced, order))


# ---------------------------------------------------------------- general


def r_general(cone, psi, order):
    """``r^Psi`` of any pointed cone, via subdivision into smooth cones."""
    if not cone.is_pointed:
        raise ConeError(f"{cone} contains a line")
    if cone.dim == 0:
        return PolySeries.constant(1, cone.ambient_dim, order)
    if cone.is_smooth:
        return r_smooth(cone, psi, order)

    def compute():
        total = PolySeries.zero(cone.ambient_dim, order)
        for piece in subdivide_to_smooth(cone):
            total = total + r_smooth(piece, psi, order)
        return total

    return _cached("general", cone, psi, order, compute)


def r_of_subdivision(pieces, psi, order):
    """Sum of ``r`` over the given same-dimensional pieces."""
    total = PolySeries.zero(pieces[0].ambient_dim, order)
    for piece in pieces:
        total = total + r_general(piece, psi, order)
    return total


# ----------------------------------------------------------- Phi map


def dual_basis(cone):
    """Rows ``m_i`` with ``<m_i, v_j> = delta_ij`` for a full-dimensional simplicial cone."""
    V = [list(g) for g in cone.generators]
    return [LinearForm(tuple(r)) for r in linalg.inverse(linalg.transpose(V))]


def phi_map(poly, cone, ring_rays, order):
    """``gamma(D_1..D_n) -> gamma(m_1..m_n) / prod m_i``.

    ``poly`` is a D-polynomial over the rays ``ring_rays`` (ray indices into
    the cone's generator list) with Lambda coefficients.
    """
    if not (cone.is_smooth and cone.dim == cone.ambient_dim):
        raise ConeError("phi_map needs a smooth full-dimensional cone")
    ms = dual_basis(cone)
    n = cone.ambient_dim
    mser = [m.series(None) for m in ms]
    num = PolySeries.zero(n, order)
    for exp, c in poly.items():
        term = c
        for i, e in zip(ring_rays, exp):
            if e:
                term = term * (mser[i] ** e)
        num = num + term.truncate(order)
    return MeromorphicGerm(num, tuple(ms))


def todd_germ_sides(cone, psi, order):
    """Both sides of ``sum_tau r(tau) I~(K_tau) = S~(K)`` as germs.

    ``K`` is the dual cone with dual basis ``m_i``; ``I~(K_tau) = 1/prod_{i
    not in tau} m_i`` and ``S~(K) = prod 1/(1-e^{-m_i})``.  Returns
    ``(lhs, rhs)``; both have effective order ``order - dim``.
    """
    ms = dual_basis(cone)
    n = cone.ambient_dim
    fan = FanData.from_cone(cone)
    lhs_num = PolySeries.zero(n, order)
    for s in fan.cones:
        r = r_general(fan.cone_data(s), psi, order)
        term = r
        for i in s:
            term = term * ms[i].series(None)
        lhs_num = lhs_num + term.truncate(order)
    lhs = MeromorphicGerm(lhs_num, tuple(ms))
    rhs = s_tilde_germ(ms, order)
    return lhs, rhs


def s_tilde_germ(forms, order):
    """``prod 1/(1-e^{-m_i})`` as ``prod g(m_i) / prod m_i``."""
    n = forms[0].nvars
    g = g_coefficients(order)
    num = PolySeries.constant(1, n, order)
    for m in forms:
        gm = PolySeries(1, order, {(k,): c for k, c in enumerate(g)}).compose([m.series(order)])
        num = num * gm
    return MeromorphicGerm(num, tuple(forms))


def default_psi(n):
    return InnerProductMap.standard(n)
