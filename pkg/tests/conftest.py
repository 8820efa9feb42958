"""Shared generators for randomized exact-value tests.

All randomness is seeded per test, so failures replay deterministically.
"""

from __future__ import annotations

from fractions import Fraction
from random import Random

from qpb.bundle import BundleSpec, HPMap
from qpb.calculus import Form
from qpb.connection import BasePotential
from qpb.funcs import indices
from qpb.groups import FiniteGroup
from qpb.scalars import ZERO, Scalar

# small pool of exact values, mixing integers, fractions, and imaginary parts
_POOL = [
    Scalar(0),
    Scalar(0),
    Scalar(1),
    Scalar(-1),
    Scalar(2),
    Scalar(Fraction(1, 2)),
    Scalar(Fraction(-1, 3)),
    Scalar(Fraction(3, 4)),
    Scalar(0, 1),
    Scalar(Fraction(1, 2), Fraction(-1, 5)),
]


def random_scalar(rng: Random) -> Scalar:
    return rng.choice(_POOL)


def random_form(size: int, degree: int, rng: Random) -> Form:
    values = []
    for idx in indices((size,) * (degree + 1)):
        if any(idx[j] == idx[j + 1] for j in range(degree)):
            values.append(ZERO)
        else:
            values.append(random_scalar(rng))
    return Form(size, degree, values)


def random_hpmap(group: FiniteGroup, total_size: int, rng: Random) -> HPMap:
    return HPMap(
        group, total_size, [random_scalar(rng) for _ in range(total_size * group.order)]
    )


def random_base_potential(group: FiniteGroup, base_size: int, rng: Random) -> BasePotential:
    """A valid base potential: zero on the diagonal, zero-sum group rows."""
    m = group.order
    density: list[Scalar] = []
    for x in range(base_size):
        for y in range(base_size):
            if x == y:
                density.extend([ZERO] * m)
                continue
            row = [random_scalar(rng) for _ in range(m - 1)]
            total = ZERO
            for v in row:
                total = total + v
            row.append(-total)
            density.extend(row)
    return BasePotential(group, base_size, density)


def all_transition_maps(group: FiniteGroup, base_size: int):
    """Every transition table with identity diagonal, off-diagonal entries free."""
    from itertools import product

    from qpb.connection import TransitionMap

    e = group.identity
    offdiag = [(x, y) for x in range(base_size) for y in range(base_size) if x != y]
    for combo in product(range(group.order), repeat=len(offdiag)):
        table = [[e] * base_size for _ in range(base_size)]
        for (x, y), a in zip(offdiag, combo):
            table[x][y] = a
        yield TransitionMap(group, table)


def all_gauge_maps(group: FiniteGroup, base_size: int):
    from itertools import product

    from qpb.gauge import GaugeMap

    for combo in product(range(group.order), repeat=base_size):
        yield GaugeMap(group, list(combo))


def framed(b: BundleSpec) -> BundleSpec:
    assert b.phi is not None
    return b
