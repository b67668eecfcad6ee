"""Truncated multivariate power series with exact rational coefficients.

A :class:`PolySeries` in ``n`` variables stores the coefficients of all
monomials of total degree at most ``order``; ``order=None`` means the value
is an exact polynomial.  Binary operations truncate to the smaller order.
The variables are the dual basis ``x_1..x_n`` of ``M``, or equally the
coordinates of ``xi`` in ``N ⊗ C``: a covector ``m`` viewed as a function of
``xi`` is the linear polynomial ``sum m_k x_k``.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .kernels import mul_terms

DEFAULT_ORDER = 6


class DivisionError(ArithmeticError):
    """Raised when a series is not divisible by a linear form."""

    def __init__(self, degree):
        super().__init__(f"not divisible: nonzero remainder in degree {degree}")
        self.degree = degree


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _clean(terms, order):
    return {
        e: c for e, c in terms.items() if c != 0 and (order is None or sum(e) <= order)
    }


@dataclass(frozen=True, eq=False)
class PolySeries:
    nvars: int
    order: int | None
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        terms = {
            tuple(e): c if type(c) is Fraction else Fraction(c) for e, c in self.terms.items()
        }
        object.__setattr__(self, "terms", _clean(terms, self.order))

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, nvars, order=DEFAULT_ORDER):
        return cls(nvars, order, {})

    @classmethod
    def constant(cls, c, nvars, order=DEFAULT_ORDER):
        return cls(nvars, order, {(0,) * nvars: Fraction(c)})

    @classmethod
    def variable(cls, k, nvars, order=DEFAULT_ORDER):
        e = [0] * nvars
        e[k] = 1
        return cls(nvars, order, {tuple(e): Fraction(1)})

    @classmethod
    def linear(cls, coeffs, order=DEFAULT_ORDER):
        n = len(coeffs)
        terms = {}
        for k, c in enumerate(coeffs):
            e = [0] * n
            e[k] = 1
            terms[tuple(e)] = Fraction(c)
        return cls(n, order, terms)

    # -- inspection -----------------------------------------------------
    def coefficient(self, exp):
        return self.terms.get(tuple(exp), Fraction(0))

    @property
    def constant_term(self):
        return self.coefficient((0,) * self.nvars)

    def is_zero(self):
        return not self.terms

    def degree(self):
        """Largest total degree present (−1 for zero)."""
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous(self, d):
        return {e: c for e, c in self.terms.items() if sum(e) == d}

    def truncate(self, order):
        return PolySeries(self.nvars, _min_order(self.order, order), self.terms)

    def with_order(self, order):
        """Reinterpret as known through ``order`` (no check beyond truncation)."""
        return PolySeries(self.nvars, order, self.terms)

    def agrees_with(self, other, order=None):
        """Coefficientwise equality through the common (or given) order."""
        t = _min_order(_min_order(self.order, other.order), order)
        a, b = self.truncate(t).terms, other.truncate(t).terms
        return a == b

    def __eq__(self, other):
        if not isinstance(other, PolySeries):
            return NotImplemented
        return (self.nvars, self.order, self.terms) == (other.nvars, other.order, other.terms)

    def __hash__(self):
        return hash((self.nvars, self.order, frozenset(self.terms.items())))

    def __repr__(self):
        return f"PolySeries({format_series(self)}, order={self.order})"

    # -- arithmetic -----------------------------------------------------
    def _check(self, other):
        if isinstance(other, PolySeries):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        return PolySeries.constant(other, self.nvars, None)

    def __add__(self, other):
        other = self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return PolySeries(self.nvars, _min_order(self.order, other.order), terms)

    __radd__ = __add__

    def __neg__(self):
        return PolySeries(self.nvars, self.order, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = Fraction(c)
        return PolySeries(self.nvars, self.order, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, PolySeries):
            return self.scale(other)
        other = self._check(other)
        order = _min_order(self.order, other.order)
        return PolySeries(self.nvars, order, mul_terms(self.terms, other.terms, self.nvars, order))

    __rmul__ = __mul__

    def __pow__(self, k):
        result = PolySeries.constant(1, self.nvars, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, c):
        return self.scale(Fraction(1) / Fraction(c))

    # -- composition ----------------------------------------------------
    def compose(self, assignment, order=None):
        """Substitute ``x_k -> assignment[k]`` (series in a common variable set).

        Every assignment must have zero constant term unless ``self`` is a
        polynomial; the result is truncated at the smallest known order.
        """
        if len(assignment) != self.nvars:
            raise ValueError(f"assignment has {len(assignment)} entries, need {self.nvars}")
        if not assignment:
            return PolySeries(0, self.order, self.terms)
        m = assignment[0].nvars
        out_order = _min_order(self.order, order)
        for a in assignment:
            out_order = _min_order(out_order, a.order)
        powers = [[PolySeries.constant(1, m, out_order)] for _ in assignment]
        result = PolySeries.zero(m, out_order)
        for e, c in sorted(self.terms.items()):
            term = PolySeries.constant(c, m, out_order)
            for k, ek in enumerate(e):
                while len(powers[k]) <= ek:
                    powers[k].append((powers[k][-1] * assignment[k]).truncate(out_order))
                if ek:
                    term = term * powers[k][ek]
            result = result + term
        return result


def univariate(coeffs, order):
    """One-variable series from a coefficient list ``[c_0, c_1, ...]``."""
    return PolySeries(1, order, {(k,): c for k, c in enumerate(coeffs[: order + 1])})


# ------------------------------------------------------------ linear forms


@dataclass(frozen=True)
class LinearForm:
    """A rational covector ``m in M_Q`` (equivalently a linear function of xi)."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @property
    def nvars(self):
        return len(self.coeffs)

    def is_zero(self):
        return not any(self.coeffs)

    def pair(self, v):
        return sum(c * x for c, x in zip(self.coeffs, v))

    def __add__(self, other):
        return LinearForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return LinearForm(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return LinearForm(tuple(-a for a in self.coeffs))

    def scale(self, c):
        return LinearForm(tuple(Fraction(c) * a for a in self.coeffs))

    def series(self, order=None):
        return PolySeries.linear(self.coeffs, order)

    def normalized(self):
        """``(scale, form)`` with ``self = scale * form`` and leading coefficient 1."""
        lead = next(c for c in self.coeffs if c != 0)
        return lead, self.scale(1 / lead)


def exp_linear(m, order):
    """``sum_{k<=order} m^k / k!`` for a linear form ``m``."""
    if not isinstance(m, LinearForm):
        m = LinearForm(m)
    x = m.series(order)
    result = PolySeries.constant(1, m.nvars, order)
    power = PolySeries.constant(1, m.nvars, order)
    for k in range(1, order + 1):
        power = power * x
        result = result + power.scale(Fraction(1, factorial(k)))
    return result


# ------------------------------------------------------- special functions


def _exp_minus_one_over_z(order):
    # (e^z - 1)/z = sum z^k / (k+1)!
    return [Fraction(1, factorial(k + 1)) for k in range(order + 1)]


def _invert_univariate(c, order):
    if c[0] == 0:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    inv = [Fraction(1) / c[0]]
    for k in range(1, order + 1):
        s = sum(c[j] * inv[k - j] for j in range(1, min(k, len(c) - 1) + 1))
        inv.append(-s / c[0])
    return inv


def bernoulli_numbers(count):
    """``B_0..B_{count-1}`` with ``B_1 = -1/2`` (coefficients of z/(e^z-1))."""
    inv = _invert_univariate(_exp_minus_one_over_z(count), count)
    return [inv[k] * factorial(k) for k in range(count)]


def b_coefficients(order):
    """Taylor coefficients of ``B(z) = 1/(1-e^z) + 1/z`` through ``z^order``.

    ``1/(1-e^z) = -1/(z f)`` with ``f = (e^z-1)/z``, so ``B = (1 - 1/f)/z``.
    """
    inv = _invert_univariate(_exp_minus_one_over_z(order + 1), order + 1)
    return [-inv[k + 1] for k in range(order + 1)]


def g_coefficients(order):
    """Taylor coefficients of the Todd function ``z/(1-e^{-z})``."""
    inv = _invert_univariate(_exp_minus_one_over_z(order), order)
    # z/(1-e^{-z}) = (-z)/(e^{-z}-1) = sum inv_k (-z)^k
    return [inv[k] * (-1) ** k for k in range(order + 1)]


def g_series(order):
    return univariate(g_coefficients(order), order)


def B_series(m, order):
    """``B(m)`` as a series, ``m`` a nonzero linear form."""
    if not isinstance(m, LinearForm):
        m = LinearForm(m)
    if m.is_zero():
        raise ValueError("B is only composed with a nonzero linear form")
    return univariate(b_coefficients(order), order).compose([m.series(order)])


def compose_univariate(coeffs, m, order):
    return univariate(coeffs, order).compose([m.series(order)])


# ---------------------------------------------------------------- division


def divide_by_linear(num, form):
    """Exact quotient ``num / form``; the result is known one order lower.

    Each homogeneous component is divided by long division with respect to
    a variable where ``form`` is nonzero.  A nonzero remainder raises
    :class:`DivisionError` naming the degree.
    """
    if not isinstance(form, LinearForm):
        form = LinearForm(form)
    if form.is_zero():
        raise ZeroDivisionError("division by the zero linear form")
    n = num.nvars
    j = next(k for k, c in enumerate(form.coeffs) if c != 0)
    lead = form.coeffs[j]
    top = num.degree() if num.order is None else num.order
    q_terms = {}
    for d in range(0, top + 1):
        rest = dict(num.homogeneous(d))
        while rest:
            e = max(rest, key=lambda ex: (ex[j], ex))
            if e[j] == 0:
                raise DivisionError(d)
            c = rest[e] / lead
            qe = list(e)
            qe[j] -= 1
            qe = tuple(qe)
            q_terms[qe] = q_terms.get(qe, 0) + c
            for k, fk in enumerate(form.coeffs):
                if fk == 0:
                    continue
                te = list(qe)
                te[k] += 1
                te = tuple(te)
                v = rest.get(te, 0) - c * fk
                if v == 0:
                    rest.pop(te, None)
                else:
                    rest[te] = v
    order = None if num.order is None else num.order - 1
    return PolySeries(n, order, q_terms)


# --------------------------------------------------------------- germs


class GermOrderError(ArithmeticError):
    pass


@dataclass(frozen=True, eq=False)
class MeromorphicGerm:
    """``numerator / prod(denominators)`` with nonzero linear-form denominators.

    Denominators are kept with leading coefficient 1 (scales move into the
    numerator).  ``effective_order`` is the numerator order minus the number
    of denominators: Laurent coefficients of lower total degree are exact.
    """

    numerator: PolySeries
    denominators: tuple = ()

    def __post_init__(self):
        num = self.numerator
        dens = []
        for d in self.denominators:
            if not isinstance(d, LinearForm):
                d = LinearForm(d)
            if d.is_zero():
                raise ZeroDivisionError("zero linear form in a denominator")
            s, d = d.normalized()
            num = num.scale(1 / s)
            dens.append(d)
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominators", tuple(sorted(dens, key=lambda f: f.coeffs)))

    @property
    def nvars(self):
        return self.numerator.nvars

    @property
    def effective_order(self):
        if self.numerator.order is None:
            return None
        return self.numerator.order - len(self.denominators)

    def denominator_series(self):
        p = PolySeries.constant(1, self.nvars, None)
        for d in self.denominators:
            p = p * d.series(None)
        return p

    def __repr__(self):
        dens = " ".join(f"({format_series(d.series())})" for d in self.denominators)
        return f"Germ[{format_series(self.numerator)} / {dens or '1'}]"


def _known_after_mul(series, k):
    """Order through which ``series * (product of k linear forms)`` is exact."""
    return None if series.order is None else series.order + k


def _valuation(s):
    return min((sum(e) for e in s.terms), default=0)


def germ_mul(a, b):
    na, nb = a.numerator, b.numerator
    num = na * nb
    # relative precision: error of one factor times the other's lowest term
    order = _min_order(
        None if na.order is None else na.order + _valuation(nb),
        None if nb.order is None else nb.order + _valuation(na),
    )
    return MeromorphicGerm(PolySeries(num.nvars, order, num.terms), a.denominators + b.denominators)


def _multiset_diff(big, small):
    rest = list(big)
    for d in small:
        rest.remove(d)
    return rest


def _union(a, b):
    out = list(a)
    pool = list(a)
    for d in b:
        if d in pool:
            pool.remove(d)
        else:
            out.append(d)
    return out


def _times_forms(series, forms):
    p = series
    for f in forms:
        # lift the order first so the top known degree survives the product
        p = PolySeries(p.nvars, _known_after_mul(p, 1), p.terms) * f.series(None)
    return p


def germ_add(a, b):
    common = _union(a.denominators, b.denominators)
    na = _times_forms(a.numerator, _multiset_diff(common, a.denominators))
    nb = _times_forms(b.numerator, _multiset_diff(common, b.denominators))
    return MeromorphicGerm(na + nb, tuple(common))


def germ_scale(a, c):
    return MeromorphicGerm(a.numerator * c, a.denominators)


def germ_normalize(a):
    """Cancel denominators that divide the numerator (through its known order)."""
    num = a.numerator
    dens = list(a.denominators)
    changed = True
    while changed:
        changed = False
        for d in list(dens):
            try:
                q = divide_by_linear(num, d)
            except DivisionError:
                continue
            num = q
            dens.remove(d)
            changed = True
    return MeromorphicGerm(num, tuple(dens))


def germ_equal(a, b, order=None):
    """Cross-multiplied comparison ``a.num * prod(b.den) == b.num * prod(a.den)``.

    Compares through the order both sides are exact to; ``order`` (an
    effective order) may only lower that.  Raises :class:`GermOrderError`
    when nothing can be compared.
    """
    left = _times_forms(a.numerator, b.denominators)
    right = _times_forms(b.numerator, a.denominators)
    cleared = len(a.denominators) + len(b.denominators)
    known = _min_order(left.order, right.order)
    if order is not None:
        known = _min_order(known, order + cleared)
    if known is not None and known - cleared < 0:
        raise GermOrderError("effective order below zero")
    return left.agrees_with(right, known)


# ------------------------------------------------------------ formatting

_SYMBOLS = "xyzw"


def symbol_names(n, prefix=None):
    if prefix is not None:
        return [f"{prefix}{k + 1}" for k in range(n)]
    if n <= len(_SYMBOLS):
        return list(_SYMBOLS[:n])
    return [f"x{k + 1}" for k in range(n)]


def format_series(s, names=None):
    if names is None:
        names = symbol_names(s.nvars)
    if not s.terms:
        return "0"
    parts = []
    for e, c in sorted(s.terms.items(), key=lambda t: (sum(t[0]), tuple(-x for x in t[0]))):
        mono = "*".join(
            names[k] if ek == 1 else f"{names[k]}^{ek}" for k, ek in enumerate(e) if ek
        )
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append(f"-{mono}")
        else:
            parts.append(f"{c}*{mono}")
    out = " + ".join(parts).replace("+ -", "- ")
    return out


def series_to_json(s):
    return {
        "order": s.order,
        "terms": [
            {"exp": list(e), "coef": str(c)}
            for e, c in sorted(s.terms.items(), key=lambda t: (sum(t[0]), t[0]))
        ],
    }


def series_from_json(obj, nvars=None):
    terms = {tuple(t["exp"]): Fraction(t["coef"]) for t in obj.get("terms", [])}
    if nvars is None:
        nvars = len(next(iter(terms))) if terms else 0
    return PolySeries(nvars, obj.get("order"), terms)


def negate_variables(s):
    """``s(-x)``."""
    return PolySeries(s.nvars, s.order, {e: c if sum(e) % 2 == 0 else -c for e, c in s.terms.items()})


def germ_negate(a):
    """``a(-x)``: flip the numerator's odd part and every denominator."""
    num = negate_variables(a.numerator)
    if len(a.denominators) % 2:
        num = -num
    return MeromorphicGerm(num, a.denominators)


def substitute(s, assignment=None, negate=False):
    """Evaluate ``m -> <m, ±xi>``: compose with ``assignment`` (identity if omitted)."""
    if assignment is not None:
        s = s.compose([a.series(s.order) if isinstance(a, LinearForm) else a for a in assignment])
    return negate_variables(s) if negate else s
