"""JSON loaders for fans, divisors, Gram matrices, polytopes and D-polynomials."""
import json
import re
from fractions import Fraction

from .complement import InnerProductMap
from .cycle_ring import EquivariantDivisor
from .lattice_geom import FanData
from .polytope_em import LatticePolytope
from .series import PolySeries


class SchemaError(ValueError):
    """Input does not match the expected JSON layout."""


def _load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"{path}: {exc}") from exc


def _require(obj, *keys, what):
    if not isinstance(obj, dict):
        raise SchemaError(f"{what} must be a JSON object")
    for k in keys:
        if k not in obj:
            raise SchemaError(f"{what} is missing '{k}'")


def rational(value):
    """Parse ``"p/q"`` strings or integers; floats are rejected."""
    if isinstance(value, bool) or isinstance(value, float):
        raise SchemaError(f"{value!r} is not an exact rational")
    try:
        return Fraction(value)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{value!r} is not a rational") from exc


def fan_from_obj(obj):
    _require(obj, "rank", "rays", "cones", what="fan")
    try:
        return FanData.from_json(obj)
    except (TypeError, IndexError) as exc:
        raise SchemaError(f"malformed fan: {exc}") from exc


def load_fan(path):
    return fan_from_obj(_load(path))


def divisor_from_obj(obj, fan):
    _require(obj, "alpha", what="divisor")
    return EquivariantDivisor(fan, [rational(a) for a in obj["alpha"]])


def load_divisor(path, fan):
    return divisor_from_obj(_load(path), fan)


def gram_from_obj(obj):
    _require(obj, "gram", what="Gram file")
    try:
        return InnerProductMap([[rational(x) for x in row] for row in obj["gram"]])
    except ValueError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(str(exc)) from exc


def load_gram(path, rank):
    psi = InnerProductMap.standard(rank) if path is None else gram_from_obj(_load(path))
    if psi.rank != rank:
        raise SchemaError(f"Gram matrix has size {psi.rank}, lattice rank is {rank}")
    return psi


def polytope_from_obj(obj):
    _require(obj, "vertices", what="polytope")
    try:
        return LatticePolytope.from_json(obj)
    except (TypeError, KeyError) as exc:
        raise SchemaError(f"malformed polytope: {exc}") from exc


def load_polytope(path):
    return polytope_from_obj(_load(path))


def parse_cone_label(text, base=1):
    """``"V13"``, ``"V1,3"``, ``"1,3"`` or ``"V0"`` (zero cone) to a ray-index set."""
    t = text.strip()
    if t.upper().startswith("V"):
        t = t[1:]
    if t in ("", "0") and base == 1:
        return frozenset()
    parts = t.split(",") if "," in t else list(t)
    try:
        return frozenset(int(p) - base for p in parts if p.strip())
    except ValueError as exc:
        raise SchemaError(f"bad cone label {text!r}") from exc


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_dpoly(text, nrays, nvars, base=1):
    """A D-polynomial such as ``"D1^2 - 3/2*D1*D2 + 1"`` with rational coefficients."""
    poly = {}
    src = text.strip()
    if not src:
        raise SchemaError("empty polynomial")
    pos = 0
    while pos < len(src):
        m = _TERM.match(src, pos)
        if not m or m.end() == pos:
            raise SchemaError(f"cannot parse {src[pos:]!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(sign)
        exp = [0] * nrays
        for factor in m.group(2).split("*"):
            f = factor.strip()
            if not f:
                raise SchemaError(f"empty factor in {m.group(0)!r}")
            fm = re.fullmatch(r"D(\d+)(?:\^(\d+))?", f)
            if fm:
                i = int(fm.group(1)) - base
                if not 0 <= i < nrays:
                    raise SchemaError(f"no ray {fm.group(1)}")
                exp[i] += int(fm.group(2) or 1)
            else:
                coef *= rational(f)
        key = tuple(exp)
        poly[key] = poly.get(key, 0) + coef
    return {e: PolySeries.constant(c, nvars, None) for e, c in poly.items() if c}
