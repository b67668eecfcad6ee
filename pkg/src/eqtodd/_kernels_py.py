"""Pure-Python truncated series kernels.

Both operands are brought to a common integer denominator, exponent
vectors are packed into a single integer (one digit per variable), and the
product is an integer convolution.  Coefficients are turned back into
``Fraction`` once per output term.
"""
from fractions import Fraction
from math import lcm


def _pack(exp, base):
    key = 0
    for e in reversed(exp):
        key = key * base + e
    return key


def _unpack(key, base, nvars):
    exp = []
    for _ in range(nvars):
        key, e = divmod(key, base)
        exp.append(e)
    return tuple(exp)


def _integerize(terms, base):
    den = 1
    for c in terms.values():
        den = lcm(den, c.denominator)
    items = []
    for exp, c in terms.items():
        items.append((_pack(exp, base), sum(exp), c.numerator * (den // c.denominator)))
    items.sort(key=lambda t: t[1])
    return items, den


def mul_terms(a, b, nvars, order):
    """Product of two sparse coefficient maps, dropping total degree > order.

    ``order=None`` keeps every term.
    """
    if not a or not b:
        return {}
    if order is None:
        base = max(map(sum, a)) + max(map(sum, b)) + 1
    else:
        base = order + 1
    a_items, a_den = _integerize(a, base)
    b_items, b_den = _integerize(b, base)
    acc = {}
    get = acc.get
    for ka, da, na in a_items:
        if order is None:
            limit = None
        else:
            limit = order - da
            if limit < 0:
                break
        for kb, db, nb in b_items:
            if limit is not None and db > limit:
                break
            k = ka + kb
            acc[k] = get(k, 0) + na * nb
    den = a_den * b_den
    return {_unpack(k, base, nvars): Fraction(v, den) for k, v in acc.items() if v}
