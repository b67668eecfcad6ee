"""Equivariant cycles, the divisor action, and the square-free cycle ring.

Cycles map fan cones (ray-index frozensets) to coefficients in ``Lambda_Q``,
the polynomial algebra on the dual basis of ``M``.  For a simplicial fan the
ring ``Lambda_Q[D_1..D_s] / (I + J^Psi)`` is realized by rewriting every
monomial into square-free form; a square-free monomial ``D_S`` equals
``V_S / mult(S)``.
"""
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .complement import CosetFunctional
from .lattice_geom import normal_generator
from .series import LinearForm, PolySeries, format_series
from . import linalg


class CartierError(ValueError):
    """Ray values do not come from a piecewise-linear function on the fan."""


class NotSimplicialError(ValueError):
    pass


def cone_label(s, base=1):
    idx = sorted(i + base for i in s)
    if not idx:
        return "V0" if base else "V"
    sep = "" if all(i < 10 for i in idx) else ","
    return "V" + sep.join(map(str, idx))


# ------------------------------------------------------------------ divisors


class EquivariantDivisor:
    """A T-Cartier Q-divisor given by its values ``alpha_i`` on the fan rays.

    The local equation ``d_sigma`` is any covector with ``<d_sigma, n_i> =
    alpha_i`` on the rays of ``sigma``; it is well defined modulo
    ``M(sigma)_Q``.
    """

    def __init__(self, fan, alpha):
        if len(alpha) != len(fan.rays):
            raise ValueError(f"expected {len(fan.rays)} ray values, got {len(alpha)}")
        self.fan = fan
        self.alpha = tuple(Fraction(a) for a in alpha)
        self._local = {}
        for s in fan.maximal_cones:
            self.local_equation(s)

    def local_equation(self, s):
        s = frozenset(s)
        if s not in self._local:
            rays = [list(self.fan.rays[i]) for i in sorted(s)]
            vals = [self.alpha[i] for i in sorted(s)]
            if not rays:
                m = [Fraction(0)] * self.fan.rank
            else:
                m = linalg.solve(rays, vals)
            if m is None:
                raise CartierError(f"ray values on cone {sorted(s)} are not linear")
            self._local[s] = LinearForm(tuple(m))
        return self._local[s]

    def coset(self, s):
        cone = self.fan.cone_data(s)
        return CosetFunctional(self.local_equation(s), tuple(map(tuple, cone.span_basis)))

    def lifted(self, s, psi):
        """``d_sigma^Psi``."""
        s = frozenset(s)
        rays = [self.fan.rays[i] for i in sorted(s)]
        return psi.section(rays, [self.alpha[i] for i in sorted(s)])

    @classmethod
    def principal(cls, fan, m):
        """The divisor whose local equations all equal ``m``."""
        m = LinearForm(tuple(m))
        return cls(fan, [m.pair(r) for r in fan.rays])

    @classmethod
    def of_ray(cls, fan, i):
        """``D_i`` as a Q-Cartier divisor (simplicial fans)."""
        return cls(fan, [int(j == i) for j in range(len(fan.rays))])


# ------------------------------------------------------------------- cycles


@dataclass(eq=False)
class EquivariantCycle:
    fan: object
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {frozenset(k): v for k, v in self.coeffs.items() if not v.is_zero()}

    @classmethod
    def basis(cls, fan, s, order=None):
        return cls(fan, {frozenset(s): PolySeries.constant(1, fan.rank, order)})

    def coefficient(self, s):
        return self.coeffs.get(frozenset(s), PolySeries.zero(self.fan.rank, None))

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return EquivariantCycle(self.fan, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return EquivariantCycle(self.fan, {k: v * c for k, v in self.coeffs.items()})

    def truncate(self, order):
        return EquivariantCycle(self.fan, {k: v.truncate(order) for k, v in self.coeffs.items()})

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, EquivariantCycle):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coefficient(k).terms == other.coefficient(k).terms for k in keys)

    def nonequivariant(self):
        """Image under ``M -> 0``: keep constant terms only."""
        return {k: v.constant_term for k, v in self.coeffs.items() if v.constant_term != 0}

    def to_json(self, pretty=False, base=1, names=None):
        from .series import series_to_json, symbol_names

        if names is None:
            names = symbol_names(self.fan.rank, prefix="m")
        out = {}
        for k in sorted(self.coeffs, key=lambda s: (len(s), sorted(s))):
            v = self.coeffs[k]
            out[cone_label(k, base)] = format_series(v, names) if pretty else series_to_json(v)
        return out

    def __repr__(self):
        return "EquivariantCycle(" + ", ".join(f"{k}: {v}" for k, v in self.to_json(True).items()) + ")"


def divisor_to_cycle(D, order=None):
    """``[D] = sum_i <d_{rho_i}, n_i> V_i``."""
    fan = D.fan
    return EquivariantCycle(
        fan, {frozenset([i]): PolySeries.constant(a, fan.rank, order) for i, a in enumerate(D.alpha)}
    )


def shift_cycle(D, s, psi, order=None):
    """``E_sigma^Psi = sum_i <d_sigma^Psi, n_i> V_i - d_sigma^Psi V_0``."""
    fan = D.fan
    d = D.lifted(s, psi)
    coeffs = {frozenset([i]): PolySeries.constant(d.pair(r), fan.rank, order) for i, r in enumerate(fan.rays)}
    coeffs[frozenset()] = -d.series(order)
    return EquivariantCycle(fan, coeffs)


def act_on_basis(D, s, psi):
    """``D · V_sigma`` (coefficients exact polynomials)."""
    fan = D.fan
    s = frozenset(s)
    if s not in fan:
        raise ValueError(f"{sorted(s)} is not a cone of the fan")
    d_sigma = D.lifted(s, psi)
    sigma = fan.cone_data(s)
    out = {s: d_sigma.series(None)}
    for t in fan.cofaces(s):
        ng = normal_generator(fan.cone_data(t), sigma)
        c = (D.local_equation(t) - d_sigma).pair(ng.lift)
        out[t] = PolySeries.constant(c, fan.rank, None)
    return EquivariantCycle(fan, out)


def act(D, C, psi):
    """``D · C``, extended Lambda-linearly from the basis formula."""
    if C.fan is not D.fan:
        raise ValueError("divisor and cycle live on different fans")
    result = EquivariantCycle(D.fan, {})
    for s, c in C.coeffs.items():
        result = result + act_on_basis(D, s, psi).scale(c)
    return result


# --------------------------------------------------------------------- ring


def _add_into(acc, key, value):
    if key in acc:
        v = acc[key] + value
        if v.is_zero():
            del acc[key]
        else:
            acc[key] = v
    elif not value.is_zero():
        acc[key] = value


class CycleRing:
    """``Lambda_Q[D_1..D_s]/(I + J^Psi)`` for a simplicial fan.

    D-polynomials are dicts from dense exponent tuples to :class:`PolySeries`
    coefficients.  :meth:`reduce` returns the square-free normal form as a
    dict from supports (frozensets) to coefficients.
    """

    def __init__(self, fan, psi, order=None):
        if not fan.is_simplicial:
            raise NotSimplicialError("the cycle ring needs a simplicial fan")
        self.fan = fan
        self.psi = psi
        self.order = order
        self.s = len(fan.rays)
        self.n = fan.rank
        self._dual = {}
        self._memo = {}

    # -- elements ---------------------------------------------------------
    def one(self):
        return {(0,) * self.s: PolySeries.constant(1, self.n, self.order)}

    def gen(self, i):
        e = [0] * self.s
        e[i] = 1
        return {tuple(e): PolySeries.constant(1, self.n, self.order)}

    def scalar(self, series):
        return {(0,) * self.s: series.truncate(self.order)}

    def monomial(self, support):
        e = [0] * self.s
        for i in support:
            e[i] = 1
        return tuple(e)

    def add(self, p, q):
        out = dict(p)
        for k, v in q.items():
            _add_into(out, k, v)
        return out

    def mul_raw(self, p, q):
        out = {}
        for ea, ca in p.items():
            for eb, cb in q.items():
                _add_into(out, tuple(x + y for x, y in zip(ea, eb)), (ca * cb).truncate(self.order))
        return out

    def mul(self, p, q):
        return self.from_squarefree(self.reduce(self.mul_raw(p, q)))

    def from_squarefree(self, sqf):
        return {self.monomial(S): c for S, c in sqf.items()}

    # -- ideals -----------------------------------------------------------
    def stanley_reisner_generators(self):
        """Minimal non-faces ``D_{i1}...D_{ik}``."""
        gens = []
        for k in range(2, min(self.s, self.n + 1) + 1):
            for sub in combinations(range(self.s), k):
                S = frozenset(sub)
                if S in self.fan:
                    continue
                if all(frozenset(t) in self.fan for t in combinations(sub, k - 1)):
                    gens.append({self.monomial(S): PolySeries.constant(1, self.n, self.order)})
        return gens

    def jpsi_generators(self):
        """``D_sigma (sum_j <m, n_j> D_j - m)`` for a basis ``m`` of each ``Psi(sigma)``."""
        gens = []
        for S in self.fan.cones:
            if not S:
                continue
            rays = [self.fan.rays[i] for i in sorted(S)]
            for m in self.psi.psi_subspace(rays):
                m = LinearForm(tuple(m))
                base = list(self.monomial(S))
                poly = {}
                for j, r in enumerate(self.fan.rays):
                    c = m.pair(r)
                    if c:
                        e = list(base)
                        e[j] += 1
                        _add_into(poly, tuple(e), PolySeries.constant(c, self.n, self.order))
                _add_into(poly, tuple(base), -m.series(self.order))
                gens.append(poly)
        return gens

    # -- reduction --------------------------------------------------------
    def dual_vector(self, S, i):
        """``m^Psi`` with ``<m, n_i> = 1`` and ``<m, n_j> = 0`` on the other rays of ``S``."""
        key = (S, i)
        if key not in self._dual:
            rays = [self.fan.rays[j] for j in sorted(S)]
            vals = [int(j == i) for j in sorted(S)]
            self._dual[key] = self.psi.section(rays, vals)
        return self._dual[key]

    def reduce_monomial(self, exp, rng=None):
        """Square-free normal form of ``D^exp`` (dict support -> coefficient)."""
        exp = tuple(exp)
        if rng is None and exp in self._memo:
            return self._memo[exp]
        S = frozenset(i for i, a in enumerate(exp) if a)
        if S not in self.fan:
            result = {}
        else:
            heavy = [i for i, a in enumerate(exp) if a >= 2]
            if not heavy:
                result = {S: PolySeries.constant(1, self.n, self.order)}
            else:
                i = heavy[0] if rng is None else rng.choice(heavy)
                result = self._rewrite(exp, S, i, rng)
        if rng is None:
            self._memo[exp] = result
        return result

    def _rewrite(self, exp, S, i, rng):
        # D^a = D^{a-e_i} (m^Psi - sum_{j not in S} <m^Psi, n_j> D_j)
        m = self.dual_vector(S, i)
        lower = list(exp)
        lower[i] -= 1
        acc = {}
        mser = m.series(self.order)
        for T, c in self.reduce_monomial(lower, rng).items():
            _add_into(acc, T, (c * mser).truncate(self.order))
        for j, r in enumerate(self.fan.rays):
            if j in S:
                continue
            c = m.pair(r)
            if c == 0 or (S | {j}) not in self.fan:
                continue
            e = list(lower)
            e[j] += 1
            for T, v in self.reduce_monomial(e, rng).items():
                _add_into(acc, T, v.scale(-c))
        return acc

    def reduce(self, poly, rng=None):
        out = {}
        for exp, c in poly.items():
            for T, v in self.reduce_monomial(exp, rng).items():
                _add_into(out, T, (v * c).truncate(self.order))
        return out

    def to_cycle(self, sqf):
        """Cycle of a square-free form (``D_S = V_S / mult(S)``)."""
        coeffs = {}
        for S, c in sqf.items():
            mult = self.fan.cone_data(S).multiplicity
            coeffs[S] = c / mult
        return EquivariantCycle(self.fan, coeffs)

    def squarefree_reduce(self, poly, rng=None):
        return self.to_cycle(self.reduce(poly, rng))


def squarefree_reduce(poly, fan, psi, order=None, rng=None):
    return CycleRing(fan, psi, order).squarefree_reduce(poly, rng)


def seeded_rng(seed):
    return random.Random(seed)
