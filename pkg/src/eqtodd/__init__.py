"""Exact equivariant Todd classes of toric varieties and Euler–Maclaurin sums."""
from .complement import InnerProductMap, SublatticeEmbedding
from .cycle_ring import CycleRing, EquivariantCycle, EquivariantDivisor, act, act_on_basis
from .kernels import BACKEND
from .lattice_geom import ConeData, FanData, subdivide_to_smooth
from .polytope_em import (
    LatticePolytope,
    count_lattice_points,
    euler_maclaurin_series,
    exp_integral_series,
    exp_sum_series,
)
from .series import LinearForm, MeromorphicGerm, PolySeries, germ_equal
from .todd import r_closed, r_general, r_smooth, todd_class

__all__ = [
    "BACKEND",
    "ConeData",
    "CycleRing",
    "EquivariantCycle",
    "EquivariantDivisor",
    "FanData",
    "InnerProductMap",
    "LatticePolytope",
    "LinearForm",
    "MeromorphicGerm",
    "PolySeries",
    "SublatticeEmbedding",
    "act",
    "act_on_basis",
    "count_lattice_points",
    "euler_maclaurin_series",
    "exp_integral_series",
    "exp_sum_series",
    "germ_equal",
    "r_closed",
    "r_general",
    "r_smooth",
    "subdivide_to_smooth",
    "todd_class",
]
