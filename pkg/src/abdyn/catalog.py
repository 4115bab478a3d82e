"""Example families: units in totally real fields, Type I lattice
constructions, quaternion reduced norms, and the classification of
automorphism types for fiber dimension g <= 5.

Units in real quadratic fields are found by the continued-fraction algorithm
for x^2 - d y^2 = +/-1; we work in the (possibly non-maximal) order Z[sqrt d]
throughout, which is harmless up to isogeny and recorded here.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ContractError
from .exactalg import (IntMatrix, IntPolynomial, char_poly, cyclotomic_split,
                       is_cyclotomic_free)
from .orbit import NumericLattice


# ---------------------------------------------------------------------------
# Pell units
# ---------------------------------------------------------------------------

def pell_fundamental_unit(d):
    """Fundamental solution (x, y, norm) of x^2 - d y^2 = +/-1 with x, y > 0
    minimal, by the continued-fraction expansion of sqrt(d)."""
    if d <= 1:
        raise ContractError("need d > 1")
    a0 = math.isqrt(d)
    if a0 * a0 == d:
        raise ContractError("d must not be a perfect square")
    # continued fraction of sqrt(d): a_i with convergents h_i / k_i
    m, den, a = 0, 1, a0
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    while True:
        norm = h * h - d * k * k
        if norm in (1, -1):
            return h, k, norm
        m = den * a - m
        den = (d - m * m) // den
        a = (a0 + m) // den
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev


def unit_minpoly(d):
    """Minimal polynomial T^2 - 2x T + norm of the fundamental unit
    x + y sqrt(d) of Z[sqrt d]."""
    x, _, norm = pell_fundamental_unit(d)
    return IntPolynomial([norm, -2 * x, 1])


# ---------------------------------------------------------------------------
# Type I construction
# ---------------------------------------------------------------------------

def unit_multiplication_matrix(minpoly, copies):
    """Rational representation of multiplication by a unit on the module
    O_K^copies + O_K^copies: the companion matrix of the unit's minimal
    polynomial, block-repeated 2*copies times."""
    if not minpoly.is_monic():
        raise ContractError("minpoly must be monic")
    if minpoly.coeffs[0] not in (1, -1):
        raise ContractError("not a unit: constant term must be +/-1")
    if copies < 1:
        raise ContractError("copies must be >= 1")
    if minpoly.degree == 0:
        raise ContractError("minpoly must have degree >= 1")
    if minpoly.degree == 1:
        block = IntMatrix.from_rows([[-minpoly.coeffs[0]]])
    else:
        block = IntMatrix.companion(minpoly)
    return IntMatrix.block_diag(*([block] * (2 * copies)))


def _minpoly_from_embeddings(embeddings, tol=1e-6):
    """Recover the integer minimal polynomial prod (T - iota_j(mu)) from the
    real embeddings of a totally real algebraic unit."""
    coeffs = np.poly(list(embeddings))  # descending, float
    ints = [round(c) for c in coeffs]
    if any(abs(c - i) > tol for c, i in zip(coeffs, ints)):
        raise ContractError("embeddings do not round to an integer polynomial")
    p = IntPolynomial(list(reversed(ints)))
    if not p.is_monic():
        raise ContractError("embeddings do not define a monic polynomial")
    return p


def type_I_lattice(Z, unit_embeddings, tol=1e-8):
    """The Type I family datum: for e totally real embeddings and period
    matrices Z_1..Z_e (complex symmetric l x l, positive imaginary part), the
    lattice spanned by lambda_z(alpha, beta) = (alpha_1 Z_1 + beta_1, ...)
    over a Z-basis of O_K^l + O_K^l (O_K realized as Z[mu]), the polarization
    E(v, w) = sum_j Im(v_j (Im Z_j)^{-1} conj(w_j)) as an integer matrix on
    that basis, and the integer matrix of the diagonal unit action
    (mu_1 I_l, ..., mu_e I_l).

    Returns (NumericLattice, automorphism IntMatrix)."""
    e = len(Z)
    Zs = [np.atleast_2d(np.array(zj, dtype=complex)) for zj in Z]
    l = Zs[0].shape[0]
    for zj in Zs:
        if zj.shape != (l, l):
            raise ContractError("all Z_j must be l x l")
        if not np.allclose(zj, zj.T, atol=tol):
            raise ContractError("Z_j must be symmetric")
        if np.linalg.eigvalsh(zj.imag).min() <= 0:
            raise ContractError("Im Z_j must be positive definite")
    if len(unit_embeddings) != e:
        raise ContractError("need one embedding per Z_j")
    minpoly = _minpoly_from_embeddings(unit_embeddings)
    if minpoly.coeffs[0] not in (1, -1):
        raise ContractError("embeddings are not those of a unit")
    g = l * e
    # Z-basis of O_K^l + O_K^l: (mu^s e_m) in the alpha block, then the beta
    # block, s = 0..e-1, m = 0..l-1.  Embedding into C^g, coordinates grouped
    # by j (blocks of size l).
    basis = []
    powers = [[iota ** s for s in range(e)] for iota in unit_embeddings]
    for s in range(e):
        for m in range(l):
            vec = np.zeros(g, dtype=complex)
            for j in range(e):
                vec[j * l:(j + 1) * l] += powers[j][s] * Zs[j][:, m]
            basis.append(tuple(vec.tolist()))
    for s in range(e):
        for m in range(l):
            vec = np.zeros(g, dtype=complex)
            for j in range(e):
                vec[j * l + m] += powers[j][s]
            basis.append(tuple(vec.tolist()))
    # polarization on the basis, rounded from the analytic formula and
    # verified integral
    imZinv = [np.linalg.inv(zj.imag) for zj in Zs]

    def E_form(v, w):
        total = 0.0
        for j in range(e):
            vj = np.array(v[j * l:(j + 1) * l])
            wj = np.array(w[j * l:(j + 1) * l])
            total += float(np.imag(vj @ imZinv[j] @ wj.conj()))
        return total

    n = 2 * g
    Erows = []
    for i in range(n):
        row = []
        for k in range(n):
            val = E_form(basis[i], basis[k])
            r = round(val)
            if abs(val - r) > 1e-6:
                raise ContractError(
                    f"polarization is not integral on the basis: E[{i},{k}] = {val}")
            row.append(r)
        Erows.append(row)
    E = IntMatrix.from_rows(Erows)
    lattice = NumericLattice(g=g, basis=tuple(basis), polarization=E)
    # automorphism: multiplication by mu on both O_K^l blocks
    comp = IntMatrix.companion(minpoly) if minpoly.degree > 1 \
        else IntMatrix.from_rows([[-minpoly.coeffs[0]]])
    # mu acts on the (s, m) basis by the companion structure in s, identity in m
    block = _tensor_with_identity(comp, l)
    auto = IntMatrix.block_diag(block, block)
    return lattice, auto


def _tensor_with_identity(C, l):
    """Kronecker product C (x) I_l as an IntMatrix."""
    e = C.rows
    rows = [[0] * (e * l) for _ in range(e * l)]
    for s in range(e):
        for t in range(e):
            if C[s, t] == 0:
                continue
            for m in range(l):
                rows[s * l + m][t * l + m] = C[s, t]
    return IntMatrix.from_rows(rows)


# ---------------------------------------------------------------------------
# quaternion algebras
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuaternionAlgebra:
    """Rational quaternion algebra with i^2 = a, j^2 = b, ij = -ji."""
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.a == 0 or self.b == 0:
            raise ContractError("a and b must be nonzero")


@dataclass(frozen=True)
class Quaternion:
    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    delta: Fraction

    def __post_init__(self):
        for f in ("alpha", "beta", "gamma", "delta"):
            object.__setattr__(self, f, Fraction(getattr(self, f)))

    def coords(self):
        return (self.alpha, self.beta, self.gamma, self.delta)


def quaternion_nrd(alg, q):
    """Reduced norm alpha^2 - a beta^2 - b gamma^2 + ab delta^2."""
    a, b = alg.a, alg.b
    return (q.alpha ** 2 - a * q.beta ** 2 - b * q.gamma ** 2
            + a * b * q.delta ** 2)


def quaternion_trd(q):
    """Reduced trace 2 alpha."""
    return 2 * q.alpha


def quaternion_reduced_charpoly(alg, q):
    """T^2 - trd T + nrd, integral when the entries are."""
    nrd = quaternion_nrd(alg, q)
    trd = quaternion_trd(q)
    if nrd.denominator != 1 or trd.denominator != 1:
        raise ContractError("reduced charpoly is integral only for integral traces/norms")
    return IntPolynomial([int(nrd), -int(trd), 1])


def quaternion_norm_one_search(alg, height):
    """All integer-coordinate quaternions with |coords| <= height, reduced
    norm +/-1 and reduced trace outside {0, +/-1, +/-2} (excluding the
    obvious finite-order elements).  Each hit is returned with its reduced
    characteristic polynomial and cyclotomic-free status."""
    if height < 0:
        raise ContractError("height must be >= 0")
    hits = []
    rng = range(-height, height + 1)
    for coords in itertools.product(rng, repeat=4):
        q = Quaternion(*coords)
        nrd = quaternion_nrd(alg, q)
        if nrd not in (1, -1):
            continue
        trd = quaternion_trd(q)
        if trd in (0, 1, -1, 2, -2):
            continue
        rc = quaternion_reduced_charpoly(alg, q)
        hits.append((q, rc, is_cyclotomic_free(rc)))
    return hits


def quaternion_rational_rep(alg, q, g):
    """Rational representation of multiplication by an integral quaternion of
    reduced norm +/-1 on a 2g-dimensional lattice: companion of the reduced
    charpoly, block-repeated g times (the reduced charpoly identity
    char = rc^{2g/de} with de = 2 here)."""
    rc = quaternion_reduced_charpoly(alg, q)
    comp = IntMatrix.companion(rc)
    return IntMatrix.block_diag(*([comp] * g))


def reduced_charpoly_relation_check(rational_rep, reduced_charpoly, exponent):
    """char_poly(rational_rep) == reduced_charpoly^exponent, exactly."""
    if exponent < 1 or int(exponent) != exponent:
        raise ContractError("exponent must be a positive integer")
    return char_poly(rational_rep) == reduced_charpoly ** int(exponent)


# ---------------------------------------------------------------------------
# classification g <= 5
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassificationCase:
    id: str
    g: int
    albert_type: str | None  # None for generically non-simple products
    parameters: dict         # l, e, d where applicable
    description: str
    m: int                   # moduli dimension


_CASES = (
    ClassificationCase("2.1", 2, None, {"l": 2, "e": 1},
                       "square of an elliptic curve, unit = hyperbolic "
                       "integer matrix", 1),
    ClassificationCase("2.2", 2, "I", {"l": 1, "e": 2},
                       "generically simple, real multiplication by a real "
                       "quadratic field, unit of the field", 2),
    ClassificationCase("3.1", 3, None, {"l": 3, "e": 1},
                       "cube of an elliptic curve", 1),
    ClassificationCase("3.2", 3, "I", {"l": 1, "e": 3},
                       "generically simple, real multiplication by a totally "
                       "real cubic field", 3),
    ClassificationCase("4.1", 4, None, {"l": 4, "e": 1},
                       "fourth power of an elliptic curve", 1),
    ClassificationCase("4.2", 4, None, {},
                       "product of an elliptic-curve square and a real-"
                       "multiplication surface, units in two real quadratic "
                       "fields", 2),
    ClassificationCase("4.3", 4, None, {},
                       "product of two real-multiplication surfaces with "
                       "units in two real quadratic fields", 4),
    ClassificationCase("4.4", 4, None, {},
                       "square of a real-multiplication surface, unit = "
                       "2x2 matrix over the real quadratic integers", 2),
    ClassificationCase("4.5", 4, "I", {"l": 1, "e": 4},
                       "generically simple, totally real quartic field", 4),
    ClassificationCase("4.6", 4, "I", {"l": 2, "e": 2},
                       "generically simple, real multiplication by a real "
                       "quadratic field, second construction", 6),
    ClassificationCase("4.7", 4, "II", {"l": 1, "e": 2, "d": 2},
                       "generically simple, totally indefinite quaternion "
                       "algebra over a real quadratic field", 2),
    ClassificationCase("4.8", 4, "II", {"l": 2, "e": 1, "d": 2},
                       "generically simple, totally indefinite quaternion "
                       "algebra over Q on a 2-dimensional module", 3),
    ClassificationCase("5.1", 5, None, {"l": 5, "e": 1},
                       "fifth power of an elliptic curve", 1),
    ClassificationCase("5.2", 5, None, {},
                       "product of an elliptic curve power and a real-"
                       "multiplication factor", 4),
    ClassificationCase("5.3", 5, None, {},
                       "product of a surface and a threefold with real "
                       "multiplication", 3),
    ClassificationCase("5.4", 5, None, {},
                       "product with a totally real quintic-field factor", 5),
    ClassificationCase("5.5", 5, "I", {"l": 1, "e": 5},
                       "generically simple, totally real quintic field", 5),
)


def classification_cases(g):
    """The fixed classification table of automorphism types for 2 <= g <= 5."""
    if not (2 <= g <= 5):
        raise ContractError("classification is tabulated for 2 <= g <= 5")
    return [c for c in _CASES if c.g == g]


def moduli_dim_formula(case):
    """The moduli-dimension formula for the simple Albert-type cases:
    type I: m = (e/2) l (l+1) as a rational that must be integral;
    type II: the same expression.  Returns None when no formula applies."""
    if case.albert_type in ("I", "II") and "l" in case.parameters:
        l = case.parameters["l"]
        e = case.parameters["e"]
        val = Fraction(e, 2) * l * (l + 1)
        return int(val) if val.denominator == 1 else None
    return None


# ---------------------------------------------------------------------------
# family builders for the CLI / end-to-end pipeline
# ---------------------------------------------------------------------------

def build_case_matrices(case_id, d=2):
    """Concrete matrices for the buildable cases: returns a dict with the
    automorphism matrix (rational representation), its charpoly, and the
    cyclotomic-free status.  d selects the real quadratic field where one is
    needed."""
    if case_id == "2.1":
        M = IntMatrix.from_rows([[2, 1], [1, 1]])
        auto = IntMatrix.block_diag(M, M)
        label = "unit = [[2,1],[1,1]] acting on E^2"
    elif case_id == "2.2":
        auto = unit_multiplication_matrix(unit_minpoly(d), copies=1)
        label = f"fundamental unit of Z[sqrt {d}] acting on a RM surface"
    elif case_id == "3.1":
        M = IntMatrix.from_rows([[2, 1], [1, 1]])
        auto = IntMatrix.block_diag(M, M, M)
        label = "unit acting on E^3"
    elif case_id == "3.2":
        # totally real cubic unit: T^3 - T^2 - 2T + 1 (the 7th-root trace field)
        p = IntPolynomial([1, -2, -1, 1])
        auto = unit_multiplication_matrix(p, copies=1)
        label = "totally real cubic unit"
    elif case_id == "4.5":
        # totally real quartic unit: T^4 - 4T^2 - T + 1 is not monic-unit; use
        # the Lehmer-ish quartic T^4 - T^3 - 3T^2 + T + 1 (constant term 1)
        p = IntPolynomial([1, 1, -3, -1, 1])
        auto = unit_multiplication_matrix(p, copies=1)
        label = "totally real quartic unit"
    elif case_id == "4.8":
        alg = QuaternionAlgebra(2, 3)
        q = Quaternion(3, 2, 0, 0)
        auto = quaternion_rational_rep(alg, q, g=4)
        label = "norm-one quaternion (3 + 2i) in (2,3 | Q) on a 2-module"
    elif case_id == "5.5":
        # totally real quintic unit: minimal polynomial of 2cos(2*pi/11)
        p = IntPolynomial([1, 3, -3, -4, 1, 1])
        auto = unit_multiplication_matrix(p, copies=1)
        label = "totally real quintic unit"
    else:
        raise ContractError(f"case {case_id} has no concrete matrix builder "
                            "(classification metadata only)")
    cp = char_poly(auto)
    P, Q = cyclotomic_split(cp)
    return {"case": case_id, "label": label, "automorphism": auto,
            "charpoly": cp, "cyclotomic_part": P, "cyclotomic_free_part": Q,
            "is_cyclotomic_free": P.is_one()}
