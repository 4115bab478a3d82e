"""Exact polynomial / matrix algebra tests (values frozen from independent
hand computation or construction oracles)."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abdyn.errors import ContractError, DimensionError
from abdyn.exactalg import (IntMatrix, IntPolynomial, char_poly, cyclotomic,
                            cyclotomic_split, eigenvalue_moduli,
                            is_cyclotomic_free, kernel_lattice,
                            kronecker_is_roots_of_unity, quasi_unipotent_order,
                            smith_normal_form, unipotent_index)

GOLDEN2 = IntMatrix.from_rows([[2, 1], [1, 1]])
ROT4 = IntMatrix.from_rows([[0, -1], [1, 0]])


def P(*coeffs):
    return IntPolynomial(list(coeffs))


# --- char_poly ---------------------------------------------------------------

def test_char_poly_golden():
    assert char_poly(GOLDEN2) == P(1, -3, 1)  # T^2 - 3T + 1


def test_char_poly_identity():
    for n in (1, 2, 4):
        assert char_poly(IntMatrix.identity(n)) == P(-1, 1) ** n


def test_char_poly_rotation():
    assert char_poly(ROT4) == P(1, 0, 1)  # T^2 + 1


def test_char_poly_nonsquare():
    with pytest.raises(DimensionError):
        char_poly(IntMatrix.from_rows([[1, 2, 3], [4, 5, 6]]))


def test_char_poly_matches_numpy_on_random_matrices():
    import numpy as np
    rng = random.Random(7)
    for _ in range(10):
        n = rng.randrange(2, 6)
        M = IntMatrix.from_rows([[rng.randint(-4, 4) for _ in range(n)]
                                 for _ in range(n)])
        cp = char_poly(M)
        numeric = np.poly(M.to_numpy())  # descending
        exact = list(reversed([float(c) for c in cp.coeffs]))
        assert all(abs(a - b) < 1e-6 * max(1.0, abs(b))
                   for a, b in zip(exact, numeric))


# --- cyclotomic split / Kronecker -------------------------------------------

def test_split_already_cyclotomic():
    Pc, Q = cyclotomic_split(P(1, -1, 1))  # Phi_6
    assert Pc == P(1, -1, 1) and Q.is_one()


def test_split_cyclotomic_free_quadratic():
    Pc, Q = cyclotomic_split(P(1, -3, 1))
    assert Pc.is_one() and Q == P(1, -3, 1)


def test_split_mixed_cubic():
    # T^3 - 4T^2 + 4T - 1 = (T - 1)(T^2 - 3T + 1)
    Pc, Q = cyclotomic_split(P(-1, 4, -4, 1))
    assert Pc == P(-1, 1) and Q == P(1, -3, 1)


def test_is_cyclotomic_free():
    assert is_cyclotomic_free(P(1, -3, 1))
    assert not is_cyclotomic_free(P(1, 0, 1))
    assert is_cyclotomic_free(P(1))  # constant 1: empty root set


def test_kronecker():
    assert kronecker_is_roots_of_unity(P(-1, 1) ** 2 * P(1, 1))  # (T-1)^2 (T+1)
    assert not kronecker_is_roots_of_unity(P(1, -3, 1))
    assert kronecker_is_roots_of_unity(P(1, 0, -1, 0, 1))  # Phi_12
    with pytest.raises(ContractError):
        kronecker_is_roots_of_unity(P(0, 1))  # zero constant term


@st.composite
def cyclotomic_products(draw):
    ms = draw(st.lists(st.integers(1, 12), min_size=0, max_size=3))
    p = IntPolynomial([1])
    for m in ms:
        p = p * cyclotomic(m)
    # cyclotomic-free tail: T^2 - aT +/- 1 with |a| >= 3 has a root off the
    # unit circle (construction oracle)
    if draw(st.booleans()):
        a = draw(st.integers(3, 9)) * draw(st.sampled_from((1, -1)))
        c = draw(st.sampled_from((1, -1)))
        p = p * IntPolynomial([c, -a, 1])
    return p, ms


@settings(max_examples=40, deadline=None)
@given(cyclotomic_products())
def test_split_reassembly_and_idempotence(data):
    p, _ = data
    Pc, Q = cyclotomic_split(p)
    assert Pc * Q == p
    Pc2, _ = cyclotomic_split(Q) if Q.degree >= 1 else (IntPolynomial([1]), Q)
    assert Pc2.is_one()
    if Pc.degree >= 1:
        assert kronecker_is_roots_of_unity(Pc)


# --- unipotent index / quasi-unipotent order ---------------------------------

def test_unipotent_index():
    assert unipotent_index(IntMatrix.identity(3)) == 1
    assert unipotent_index(IntMatrix.from_rows([[1, 1], [0, 1]])) == 2
    assert unipotent_index(IntMatrix.companion(P(-1, 1) ** 3)) == 3
    # no eigenvalue 1: convention 0
    assert unipotent_index(GOLDEN2) == 0


def test_unipotent_index_bounded_by_multiplicity():
    rng = random.Random(3)
    for _ in range(10):
        k = rng.randrange(1, 4)
        M = IntMatrix.block_diag(IntMatrix.companion(P(-1, 1) ** k), ROT4)
        cp = char_poly(M)
        mult = 0
        q = cp
        while True:
            quo, rem = q.divmod_monic(P(-1, 1))
            if not rem.is_zero():
                break
            mult += 1
            q = quo
        assert 1 <= unipotent_index(M) <= mult


def test_quasi_unipotent_order():
    assert quasi_unipotent_order(ROT4) == 4
    assert quasi_unipotent_order(IntMatrix.from_rows([[1, 1], [0, 1]])) == 1
    assert quasi_unipotent_order(GOLDEN2) is None


# --- kernel lattices / Smith normal form -------------------------------------

def test_kernel_lattice_full():
    lat = kernel_lattice(P(-1, 1), IntMatrix.identity(3))
    assert lat.rank == 3
    assert lat.check_saturated()


def test_kernel_lattice_rank_one():
    lat = kernel_lattice(P(-1, 1), IntMatrix.from_rows([[1, 0], [0, -1]]))
    assert lat.rank == 1
    assert lat.basis[0] in ((1, 0), (-1, 0))


def test_kernel_lattice_block():
    M = IntMatrix.block_diag(IntMatrix.companion(P(1, 0, 1)),
                             IntMatrix.companion(P(1, -3, 1)))
    lat = kernel_lattice(P(1, -3, 1), M)
    assert lat.rank == 2
    assert all(v[0] == 0 and v[1] == 0 for v in lat.basis)
    assert lat.check_saturated()


def test_smith_normal_form_identity_and_random():
    rng = random.Random(11)
    for _ in range(8):
        r, c = rng.randrange(1, 5), rng.randrange(1, 5)
        M = IntMatrix.from_rows([[rng.randint(-5, 5) for _ in range(c)]
                                 for _ in range(r)])
        U, S, V = smith_normal_form(M)
        assert abs(U.det()) == 1 and abs(V.det()) == 1
        assert U @ M @ V == S
        diag = [S[i, i] for i in range(min(r, c))]
        for a, b in zip(diag, diag[1:]):
            if b != 0:
                assert a != 0 and b % a == 0


# --- eigenvalue moduli --------------------------------------------------------

def test_moduli_golden():
    mods = eigenvalue_moduli(P(1, -3, 1))
    assert len(mods) == 2
    assert abs(mods[0][0] - 2.6180339887) < 1e-9 and mods[0][1] == 1
    assert abs(mods[1][0] - 0.3819660113) < 1e-9 and mods[1][1] == 1


def test_moduli_cyclotomic_exact():
    assert eigenvalue_moduli(P(1, -1, 1)) == [(1.0, 2)]


def test_moduli_split_linear():
    mods = eigenvalue_moduli(P(2, -3, 1))  # (T-2)(T-1)
    assert [(round(m, 9), k) for m, k in mods] == [(2.0, 1), (1.0, 1)]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=5),
       st.sampled_from((1, -1)))
def test_moduli_product_equals_constant_term(mid, const):
    p = IntPolynomial([const] + mid + [1])
    prod = math.prod(m ** k for m, k in eigenvalue_moduli(p))
    assert abs(prod - abs(const)) < 1e-6 * max(1.0, abs(const))
