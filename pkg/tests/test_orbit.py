"""Orbit-closure analyzer tests."""

import math
import random

import pytest

from abdyn.errors import ContractError
from abdyn.exactalg import IntMatrix
from abdyn.orbit import (NumericLattice, finite_order_approximations,
                         orbit_dims, real_dual_coords, relation_lattice,
                         split_A_B)

SQRT2, SQRT3, SQRT5 = math.sqrt(2), math.sqrt(3), math.sqrt(5)


def square_lattice():
    return NumericLattice(g=1, basis=((1,), (1j,)))


def std_polarization(g):
    rows = [[0] * (2 * g) for _ in range(2 * g)]
    for i in range(g):
        rows[i][g + i] = 1
        rows[g + i][i] = -1
    return IntMatrix.from_rows(rows)


def test_real_dual_coords_examples():
    lat = square_lattice()
    assert max(abs(x - y) for x, y in
               zip(real_dual_coords(lat, (1,)), (1.0, 0.0))) < 1e-12
    got = real_dual_coords(lat, (0.5 + 0.25j,))
    assert max(abs(x - y) for x, y in zip(got, (0.5, 0.25))) < 1e-12
    assert max(abs(x) for x in real_dual_coords(lat, (0,))) < 1e-12


def test_relation_lattice_sqrt2():
    rels = relation_lattice((SQRT2, 0.0))
    assert len(rels) == 1
    q = rels[0].q
    assert q in ((0, 1), (0, -1)) and rels[0].q_prime == 0


def test_relation_lattice_rationals():
    rels = relation_lattice((0.5, 1 / 3))
    assert len(rels) == 2


def test_relation_lattice_independent_irrationals():
    assert relation_lattice((SQRT2, SQRT3), height_bound=100) == []


def test_orbit_dims_examples():
    lat = square_lattice()
    rep = orbit_dims(lat, (0.5,))
    assert (rep.h, rep.s, rep.r) == (0, 0, 0) and not rep.dense
    rep = orbit_dims(lat, (SQRT2,))
    assert (rep.h, rep.s, rep.r) == (1, 0, 1) and rep.totally_real
    rep = orbit_dims(lat, (SQRT2 + SQRT3 * 1j,))
    assert (rep.h, rep.s, rep.r) == (2, 1, 0) and rep.dense


def test_report_arithmetic_and_serialization():
    rep = orbit_dims(square_lattice(), (SQRT2,))
    assert rep.r == rep.h - 2 * rep.s and 2 * rep.s <= rep.h
    doc = rep.to_json_dict()
    assert doc["h"] == 1 and len(doc["relations"]) == 1


def test_scaling_never_increases_h():
    rng = random.Random(13)
    lat = square_lattice()
    samples = [(0.25,), (SQRT2,), (SQRT2 + SQRT3 * 1j,),
               (rng.random() + rng.random() * 1j,)]
    for alpha in samples:
        h1 = orbit_dims(lat, alpha).h
        for m in (2, 3):
            scaled = tuple(m * z for z in alpha)
            assert orbit_dims(lat, scaled).h <= h1


def test_split_A_B_product_lattice():
    # product of the square lattice and the hexagonal lattice
    w = (1 + 1j * SQRT3) / 2
    basis = ((1, 0), (0, 1), (1j, 0), (0, w))
    lat = NumericLattice(g=2, basis=basis, polarization=std_polarization(2))
    alpha = (SQRT2 + SQRT3 * 1j, SQRT5)
    A_basis, B_basis, a, b = split_A_B(lat, alpha)
    assert len(A_basis) == 1 and len(B_basis) == 1
    # A is the first factor (dense direction), B the second (totally real)
    assert abs(A_basis[0][1]) < 1e-8 and abs(B_basis[0][0]) < 1e-8
    assert abs(a[0] - alpha[0]) < 1e-8 and abs(b[1] - alpha[1]) < 1e-8


def test_split_A_B_extreme_cases():
    lat = NumericLattice(g=1, basis=((1,), (1j,)),
                         polarization=std_polarization(1))
    A_basis, B_basis, a, b = split_A_B(lat, (SQRT2 + SQRT3 * 1j,))
    assert len(A_basis) == 1 and len(B_basis) == 0
    A_basis, B_basis, a, b = split_A_B(lat, (SQRT2,))
    assert len(A_basis) == 0 and len(B_basis) == 1


def test_split_A_B_requires_polarization():
    with pytest.raises(ContractError):
        split_A_B(square_lattice(), (SQRT2 + SQRT3 * 1j,))


def test_finite_order_approximations():
    B = IntMatrix.identity(1)
    approx = finite_order_approximations((1 / 3,), [3], B)
    assert approx[0].distance < 1e-12
    approx = finite_order_approximations((SQRT2,), [10, 100, 1000], B)
    dists = [a.distance for a in approx]
    assert dists[0] < 1 / 20 and dists[1] < 1 / 200 and dists[2] < 1 / 2000
    assert dists == sorted(dists, reverse=True)
    from fractions import Fraction
    approx = finite_order_approximations((SQRT2, SQRT3), [7],
                                         IntMatrix.identity(2))
    assert tuple(approx[0].beta) == (Fraction(10, 7), Fraction(12, 7))
    assert approx[0].distance < 1 / 14
