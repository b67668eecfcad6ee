import math
import random
from fractions import Fraction

import pytest

from eqtodd.complement import InnerProductMap
from eqtodd.lattice_geom import FanData, primitive

ACCEPTANCE = {}


def record(number, ok, label):
    ACCEPTANCE[number] = (ok, label)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, label = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {label}")


# ---------------------------------------------------------------- fixtures

SQFAN_RAYS = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1), (-1, -1, 0)]
SQFAN_CONES = [(0, 1, 2, 3), (0, 2, 4), (0, 3, 4), (1, 2, 4), (1, 3, 4)]
TRIANGLE_RAYS = [(-1, -1), (1, 0), (0, 1)]  # labelled D_0, D_1, D_2
TRIANGLE_CONES = [(1, 2), (0, 2), (0, 1)]


@pytest.fixture
def sqfan():
    return FanData(3, SQFAN_RAYS, SQFAN_CONES)


@pytest.fixture
def triangle_fan():
    return FanData(2, TRIANGLE_RAYS, TRIANGLE_CONES)


# ---------------------------------------------------------- random objects


def random_unimodular(rng, n, steps=6, bound=3):
    """Product of random elementary matrices with small entries."""
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([k for k in range(-bound, bound + 1) if k])
        M[i] = [a + c * b for a, b in zip(M[i], M[j])]
        if max(abs(x) for row in M for x in row) > 6:
            M[i] = [a - c * b for a, b in zip(M[i], M[j])]
    if rng.random() < 0.5:
        M[0] = [-x for x in M[0]]
    return M


def random_gram(rng, n):
    """Random rational positive-definite matrix ``A^T A + D``."""
    A = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
    G = [[sum(A[k][i] * A[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    for i in range(n):
        G[i][i] += Fraction(rng.randint(1, 4), rng.randint(1, 2))
    return InnerProductMap(G)


def random_primitive(rng, n, bound=4):
    while True:
        v = tuple(rng.randint(-bound, bound) for _ in range(n))
        if any(v):
            return primitive(v)


def random_complete_fan_2d(rng, k=None, bound=3):
    """Complete simplicial fan in Z^2 from random rays sorted by angle."""
    while True:
        k = k or rng.randint(3, 6)
        rays = set()
        while len(rays) < k:
            rays.add(random_primitive(rng, 2, bound))
        rays = sorted(rays, key=lambda v: math.atan2(v[1], v[0]))
        ok = all(
            rays[i][0] * rays[(i + 1) % k][1] - rays[i][1] * rays[(i + 1) % k][0] > 0 for i in range(k)
        )
        if ok:
            return FanData(2, rays, [(i, (i + 1) % k) for i in range(k)])


def sqfan_alpha(rng):
    """Random ray values satisfying the Cartier condition a1 + a2 = a3 + a4."""
    a1, a2, a3, a5 = (Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(4))
    return (a1, a2, a3, a1 + a2 - a3, a5)


@pytest.fixture
def rng():
    return random.Random(20240611)
