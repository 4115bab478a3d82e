"""Gamma-invariant Delaunay fans of toroidal degenerations.

A one-parameter degeneration with unipotent monodromy M = [[I, B],[0, I]]
carries a symmetric positive semi-definite integer matrix B which, in a
suitable unimodular basis, becomes diag(0, B') with B' positive definite of
size r' (the torus rank of the degeneration).  The group Gamma acts on the
extended cocharacter lattice N x Z (coordinates (a, b, k) with a the abelian
block, b the torus block, k the height) by

    (alpha, beta) . (a, b, k)  =  (a, b + k * beta * B', k).

The admissible fans supporting the compactified models are the cones over
the Delaunay decomposition of the height-1 affine lattice under a
Gamma-invariant positive definite metric.  The fan is infinite; we store one
fundamental set of cones under Gamma plus the translation data, and perform
all membership tests modulo Gamma.

Delaunay cells are located with scipy's (floating) Delaunay triangulation on
Cholesky-transformed points and then certified exactly: circumcenters are
solved over Fractions and the strict empty-sphere condition is verified in
rational arithmetic.  Any exact cosphericity (non-simplicial cell) triggers a
seeded rational perturbation of the metric, with a retry cap.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.spatial

from .errors import ContractError, DimensionError, NumericIndeterminacyError
from .exactalg import IntMatrix, IntPolynomial, kernel_lattice, smith_normal_form

MAX_METRIC_RETRIES = 16


# ---------------------------------------------------------------------------
# small exact-rational linear algebra helpers
# ---------------------------------------------------------------------------

def _frac_solve(A, rhs):
    """Solve A x = rhs over Fractions; returns None if singular/inconsistent.
    A: list of rows, possibly non-square (least-structure exact solve)."""
    m = len(A)
    n = len(A[0]) if m else 0
    aug = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(rhs[i])] for i in range(m)]
    row = 0
    pivots = []
    for col in range(n):
        piv = next((i for i in range(row, m) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        pv = aug[row][col]
        aug[row] = [x / pv for x in aug[row]]
        for i in range(m):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    for i in range(row, m):
        if aug[i][n] != 0:
            return None  # inconsistent
    if len(pivots) < n:
        return None  # underdetermined: caller only uses full-rank systems
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = aug[i][n]
    return x


def _frac_inverse(A):
    """Inverse of a square Fraction matrix (list of rows)."""
    n = len(A)
    cols = []
    for j in range(n):
        e = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        x = _frac_solve(A, e)
        if x is None:
            raise ContractError("matrix is singular")
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _quad_form(Q, v, w=None):
    """v^T Q w over Fractions (w defaults to v)."""
    if w is None:
        w = v
    return sum(Fraction(v[i]) * Q[i][j] * Fraction(w[j])
               for i in range(len(v)) for j in range(len(w)))


# ---------------------------------------------------------------------------
# Gamma data and cones
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GammaData:
    """Abelian dimension g', torus rank r', and the positive definite
    integral matrix B' driving the Gamma-translations."""
    g_prime: int
    r_prime: int
    Bprime: IntMatrix

    def __post_init__(self):
        if self.g_prime < 0 or self.r_prime < 1:
            raise ContractError("need g' >= 0 and r' >= 1")
        B = self.Bprime
        if B.rows != self.r_prime or B.cols != self.r_prime:
            raise DimensionError("Bprime must be r' x r'")
        if B != B.transpose():
            raise ContractError("Bprime must be symmetric")
        # positive definiteness via leading principal minors
        for k in range(1, self.r_prime + 1):
            minor = IntMatrix.from_rows([[B[i, j] for j in range(k)] for i in range(k)])
            if minor.det() <= 0:
                raise ContractError("Bprime must be positive definite")

    @property
    def g(self):
        return self.g_prime + self.r_prime

    def bprime_rows(self):
        return [list(self.Bprime.row(i)) for i in range(self.r_prime)]


def gamma_act(gamma_data, beta, point):
    """The Gamma-action on N x Z: (alpha, beta).(a, b, k) = (a, b + k*beta*B', k)."""
    a, b, k = point
    a = tuple(int(x) for x in a)
    b = tuple(int(x) for x in b)
    beta = tuple(int(x) for x in beta)
    if len(a) != gamma_data.g_prime or len(b) != gamma_data.r_prime \
            or len(beta) != gamma_data.r_prime:
        raise DimensionError("point/beta dimensions do not match GammaData")
    shift = gamma_data.Bprime.transpose().mat_vec(beta)  # beta * B' (row vector)
    return (a, tuple(bi + k * s for bi, s in zip(b, shift)), int(k))


@dataclass(frozen=True)
class Cone:
    """Simplicial rational cone in the extended lattice N x Z, stored by its
    primitive generators (each a vector in Z^{g+1}, last coordinate = height).
    The zero cone has no generators."""
    generators: tuple

    def __post_init__(self):
        gens = tuple(sorted(tuple(int(x) for x in v) for v in self.generators))
        if len(set(gens)) != len(gens):
            raise ContractError("duplicate cone generators")
        object.__setattr__(self, "generators", gens)

    @property
    def dim(self):
        return len(self.generators)

    def faces(self):
        """All proper and improper faces (simplicial: every generator subset)."""
        for size in range(len(self.generators) + 1):
            for subset in itertools.combinations(self.generators, size):
                yield Cone(subset)


def _translate_cone(cone, beta, gamma):
    gp, rp = gamma.g_prime, gamma.r_prime
    gens = []
    for v in cone.generators:
        a, b, k = v[:gp], v[gp:gp + rp], v[-1]
        a2, b2, k2 = gamma_act(gamma, beta, (a, b, k))
        gens.append(a2 + b2 + (k2,))
    return Cone(tuple(gens))


def _reduce_mod_period(b, gamma):
    """Write b = b0 + beta*B' with b0 in the fundamental half-open cell
    (coordinates of b*B'^-1 in [0,1)); returns (b0, beta)."""
    Binv = _frac_inverse([[Fraction(x) for x in row] for row in gamma.bprime_rows()])
    # x = b * B'^-1 (row vector): x_j = sum_i b_i * Binv[i][j]
    x = [sum(Fraction(b[i]) * Binv[i][j] for i in range(gamma.r_prime))
         for j in range(gamma.r_prime)]
    beta = tuple(int(math.floor(xi)) for xi in x)
    shift = gamma.Bprime.transpose().mat_vec(beta)
    b0 = tuple(bi - s for bi, s in zip(b, shift))
    return b0, beta


def canonical_cone(cone, gamma):
    """Canonical representative of a cone under Gamma-translation.  Defined
    for cones all of whose nonzero generators sit at height 1 (the fan cones
    produced here): translate so the lexicographically smallest generator's
    torus block lies in the fundamental cell."""
    if not cone.generators:
        return cone
    if any(v[-1] != 1 for v in cone.generators):
        return cone  # no canonical translation defined; leave as-is
    gp, rp = gamma.g_prime, gamma.r_prime
    first = cone.generators[0]
    _, beta = _reduce_mod_period(first[gp:gp + rp], gamma)
    return _translate_cone(cone, tuple(-x for x in beta), gamma)


# ---------------------------------------------------------------------------
# monodromy normalization
# ---------------------------------------------------------------------------

def monodromy_to_B(M, D=None):
    """Extract the period-translation matrix B from a unipotent monodromy
    matrix in the normalized block shape [[I, B],[0, I]], verify that B is
    symmetric positive semi-definite, and return (B, basis_change) where the
    unimodular basis_change W satisfies W B W^T = diag(0, B') with B'
    positive definite of size r' = rank B."""
    if not M.is_square() or M.rows % 2 != 0:
        raise DimensionError("monodromy matrix must be square of even size 2g")
    g = M.rows // 2
    if D is not None and D != IntMatrix.identity(g):
        raise ContractError("non-principal polarization: reduce to D = I first")
    # unipotence
    N = M - IntMatrix.identity(2 * g)
    power = IntMatrix.identity(2 * g)
    for _ in range(2 * g):
        power = power @ N
    if power != IntMatrix.zero(2 * g, 2 * g):
        raise ContractError("monodromy is not unipotent: apply quasi_unipotent_order first")
    # block shape
    for i in range(g):
        for j in range(g):
            if M[i, j] != (1 if i == j else 0):
                raise ContractError("top-left block must be the identity")
            if M[g + i, j] != 0:
                raise ContractError("bottom-left block must vanish")
            if M[g + i, g + j] != (1 if i == j else 0):
                raise ContractError("bottom-right block must be the identity")
    B = IntMatrix.from_rows([[M[i, g + j] for j in range(g)] for i in range(g)])
    if B != B.transpose():
        raise ContractError("period translation matrix is not symmetric")
    # psd check: all principal minors nonnegative (desk-scale g)
    for size in range(1, g + 1):
        for idx in itertools.combinations(range(g), size):
            sub = IntMatrix.from_rows([[B[i, j] for j in idx] for i in idx])
            if sub.det() < 0:
                raise ContractError("period translation matrix is not positive semi-definite")
    # basis change: kernel lattice first, completion after
    ker = kernel_lattice(IntPolynomial([0, 1]), B)  # Z^g  intersect  ker B
    r_prime = g - ker.rank
    if ker.rank == 0:
        W = IntMatrix.identity(g)
    elif ker.rank == g:
        W = IntMatrix.identity(g)
    else:
        A = ker.basis_matrix()
        _, S, V = smith_normal_form(A)
        assert all(S[i, i] == 1 for i in range(ker.rank))  # saturated
        # rows of V^{-1}: the first (g - r') span the kernel lattice, the rest complete
        Vinv = _frac_inverse([[Fraction(V[i, j]) for j in range(g)] for i in range(g)])
        W = IntMatrix.from_rows([[int(x) for x in row] for row in Vinv])
    # sanity: W B W^T = diag(0, B')
    WB = W @ B @ W.transpose()
    k = g - r_prime
    for i in range(g):
        for j in range(g):
            if (i < k or j < k) and WB[i, j] != 0:
                raise AssertionError("basis change failed to split off the kernel")
    return B, W


def nakamura_data(M, g_prime=None):
    """Convenience: monodromy -> GammaData (B' block and ranks)."""
    B, W = monodromy_to_B(M)
    g = B.rows
    WB = W @ B @ W.transpose()
    r_prime = g - kernel_lattice(IntPolynomial([0, 1]), B).rank
    if r_prime == 0:
        raise ContractError("non-degenerating monodromy (B = 0): no fan to build")
    Bp = IntMatrix.from_rows([[WB[g - r_prime + i, g - r_prime + j]
                               for j in range(r_prime)] for i in range(r_prime)])
    return GammaData(g_prime=g - r_prime if g_prime is None else g_prime,
                     r_prime=r_prime, Bprime=Bp)


# ---------------------------------------------------------------------------
# Delaunay fan construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Fan:
    """A Gamma-fundamental set of cones plus the translation data."""
    cones: tuple
    gamma: GammaData
    metric: tuple  # rational metric actually used, row tuples of Fractions
    seed: int | None = None

    @property
    def period(self):
        """Generators of the Gamma-translation lattice acting on rays,
        embedded in the b-block of N."""
        gp = self.gamma.g_prime
        return tuple((0,) * gp + tuple(row) for row in self.gamma.bprime_rows())

    def max_dim(self):
        return max((c.dim for c in self.cones), default=0)

    def maximal_cones(self):
        d = self.max_dim()
        return [c for c in self.cones if c.dim == d]

    def rays(self):
        return [c for c in self.cones if c.dim == 1]


class _DegenerateMetric(Exception):
    pass


def _normalize_metric(metric, r_prime):
    if isinstance(metric, str):
        if metric in ("standard", "identity"):
            return [[Fraction(1) if i == j else Fraction(0) for j in range(r_prime)]
                    for i in range(r_prime)]
        raise ContractError(f"unknown metric keyword: {metric}")
    Q = [[Fraction(x) for x in row] for row in metric]
    if len(Q) != r_prime or any(len(row) != r_prime for row in Q):
        raise DimensionError("metric must be r' x r'")
    for i in range(r_prime):
        for j in range(r_prime):
            if Q[i][j] != Q[j][i]:
                raise ContractError("metric must be symmetric")
    if not _is_positive_definite(Q):
        raise ContractError("metric must be positive definite")
    return Q


def _is_positive_definite(Q):
    n = len(Q)
    for k in range(1, n + 1):
        sub = [row[:k] for row in Q[:k]]
        if _frac_det(sub) <= 0:
            return False
    return True


def _frac_det(A):
    n = len(A)
    a = [[Fraction(x) for x in row] for row in A]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return det


def _perturb_metric(Q, rng):
    """Small random rational symmetric perturbation keeping positive
    definiteness (resampled until PD)."""
    n = len(Q)
    for _ in range(64):
        P = [row[:] for row in Q]
        for i in range(n):
            for j in range(i, n):
                eps = Fraction(rng.randint(-9, 9), 997 + 2 * rng.randint(0, 200))
                P[i][j] = P[i][j] + eps
                if i != j:
                    P[j][i] = P[i][j]
        if _is_positive_definite(P):
            return P
    raise NumericIndeterminacyError("could not perturb metric to positive definite")


def _delaunay_cells_1d(gamma):
    """r' = 1: the Delaunay cells of Z are the unit intervals, for any metric."""
    n = gamma.Bprime[0, 0]
    return [(( (i,), (i + 1,) )) for i in range(n)]


def _fundamental_window(gamma, margin):
    """Integer bounding box covering the fundamental cell of the row lattice
    of B', expanded by margin."""
    rp = gamma.r_prime
    corners = []
    for u in itertools.product((0, 1), repeat=rp):
        corners.append(gamma.Bprime.transpose().mat_vec(u))
    lo = [min(c[i] for c in corners) - margin for i in range(rp)]
    hi = [max(c[i] for c in corners) + margin for i in range(rp)]
    return [tuple(p) for p in itertools.product(
        *[range(lo[i], hi[i] + 1) for i in range(rp)])]


def _circumsphere(Q, cell):
    """Exact circumcenter and squared radius of a simplex under the metric Q;
    returns None if the simplex is degenerate."""
    v0 = cell[0]
    rows = []
    rhs = []
    for v in cell[1:]:
        d = [v[i] - v0[i] for i in range(len(v0))]
        rows.append([2 * sum(Fraction(d[i]) * Q[i][j] for i in range(len(d)))
                     for j in range(len(v0))])
        rhs.append(_quad_form(Q, v) - _quad_form(Q, v0))
    c = _frac_solve(rows, rhs)
    if c is None:
        return None
    diff = [Fraction(v0[i]) - c[i] for i in range(len(v0))]
    r2 = _quad_form(Q, diff)
    return c, r2


def _delaunay_cells(gamma, Q):
    """One Gamma-fundamental set of full-dimensional Delaunay cells of Z^{r'}
    under the positive definite rational metric Q, exactly certified.
    Raises _DegenerateMetric on any exact cosphericity."""
    rp = gamma.r_prime
    if rp == 1:
        return _delaunay_cells_1d(gamma)
    margin = 3
    while True:
        pts = _fundamental_window(gamma, margin)
        arr = np.array(pts, dtype=float)
        L = np.linalg.cholesky(np.array([[float(x) for x in row] for row in Q]))
        tri = scipy.spatial.Delaunay(arr @ L.T)
        cells = {}
        max_radius = 0.0
        for simplex in tri.simplices:
            verts = tuple(sorted(pts[i] for i in simplex))
            # canonical translate by the first vertex
            _, beta = _reduce_mod_period(verts[0], gamma)
            shift = gamma.Bprime.transpose().mat_vec(beta)
            canon = tuple(tuple(v[i] - shift[i] for i in range(rp)) for v in verts)
            cells[canon] = True
        # exact certification of each distinct canonical cell
        pts_set = set(pts)
        ok_cells = []
        for cell in sorted(cells):
            sphere = _circumsphere(Q, cell)
            if sphere is None:
                raise _DegenerateMetric("degenerate simplex")
            c, r2 = sphere
            cf = [float(x) for x in c]
            rf = math.sqrt(float(r2))
            max_radius = max(max_radius, rf)
            if rf > margin - 1.5:
                break  # window too small; enlarge
            # check all lattice points that could threaten the sphere
            lo = [math.floor(cf[i] - rf - 1) for i in range(rp)]
            hi = [math.ceil(cf[i] + rf + 1) for i in range(rp)]
            cell_set = set(cell)
            for p in itertools.product(*[range(lo[i], hi[i] + 1) for i in range(rp)]):
                if p in cell_set:
                    continue
                # float prefilter, exact confirmation near the boundary
                df = sum((p[i] - cf[i]) * sum(float(Q[i][j]) * (p[j] - cf[j])
                                              for j in range(rp)) for i in range(rp))
                if df > float(r2) * (1 + 1e-9) + 1e-9:
                    continue
                diff = [Fraction(p[i]) - c[i] for i in range(rp)]
                d2 = _quad_form(Q, diff)
                if d2 < r2:
                    raise _DegenerateMetric("float triangulation missed a closer point")
                if d2 == r2:
                    raise _DegenerateMetric("cospherical configuration")
            else:
                ok_cells.append(cell)
                continue
            break
        else:
            # volume check: the canonical cells must tile one fundamental cell
            total = Fraction(0)
            for cell in ok_cells:
                v0 = cell[0]
                mat = [[cell[i + 1][j] - v0[j] for j in range(rp)] for i in range(rp)]
                total += abs(_frac_det(mat))
            # |det| of each simplex is r'! times its volume, so the sum must
            # equal r'! times the covolume of the period lattice
            covol = Fraction(abs(gamma.Bprime.det()))
            if total != covol * math.factorial(rp):
                raise _DegenerateMetric("cells do not tile the fundamental cell")
            return ok_cells
        margin += 2
        if margin > 15:
            raise NumericIndeterminacyError("Delaunay window did not stabilize")


def delaunay_fan(gamma_data, metric="standard", seed=None):
    """Build the Gamma-invariant Delaunay fan: cones over the Delaunay cells
    of the height-1 lattice, one fundamental set, closed under faces.

    Degenerate (cospherical) metrics are retried with seeded rational
    perturbations up to a cap of 16."""
    rp = gamma_data.r_prime
    if not (1 <= rp <= 3):
        raise ContractError("desk scale: 1 <= r' <= 3")
    base = _normalize_metric(metric if metric != "random" else "standard", rp)
    rng = random.Random(seed)
    Q = base if metric != "random" else _perturb_metric(base, rng)
    last_err = None
    for _ in range(MAX_METRIC_RETRIES):
        try:
            cells = _delaunay_cells(gamma_data, Q)
            break
        except _DegenerateMetric as exc:
            last_err = exc
            Q = _perturb_metric(base, rng)
    else:
        raise NumericIndeterminacyError(
            f"no generic metric found in {MAX_METRIC_RETRIES} retries: {last_err}")
    gp = gamma_data.g_prime
    cones = set()
    for cell in cells:
        gens = tuple((0,) * gp + v + (1,) for v in cell)
        top = Cone(gens)
        for face in top.faces():
            cones.add(canonical_cone(face, gamma_data))
    return Fan(cones=tuple(sorted(cones, key=lambda c: (c.dim, c.generators))),
               gamma=gamma_data,
               metric=tuple(tuple(row) for row in Q),
               seed=seed)


# ---------------------------------------------------------------------------
# validation and queries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FanReport:
    violations: tuple
    non_regular: tuple  # indices of non-regular (but accepted) cones

    @property
    def ok(self):
        return not self.violations


def _gcd_all(v):
    g = 0
    for x in v:
        g = math.gcd(g, abs(x))
    return g


def validate_fan(fan):
    """Check the admissibility and Gamma-structure of a fan: per-cone
    invariants (primitive generators, simplicial/strongly convex, positive
    height, nonnegative heights), face closure and absence of duplicates up
    to Gamma, the ray form (0_{g'}, b, 1), and the covering proxy: the
    height-1 cells of the maximal cones tile one fundamental cell of Pi
    exactly.  Non-regular simplicial cones are flagged, not rejected."""
    gamma = fan.gamma
    gp, rp = gamma.g_prime, gamma.r_prime
    violations = []
    non_regular = []
    canon_seen = {}
    for idx, cone in enumerate(fan.cones):
        if cone.dim == 0:
            continue
        gens = cone.generators
        for v in gens:
            if len(v) != gamma.g + 1:
                violations.append(f"cone {idx}: generator dimension != g+1")
                continue
            if _gcd_all(v) != 1:
                violations.append(f"cone {idx}: non-primitive generator {v}")
            if v[-1] < 0:
                violations.append(f"cone {idx}: negative height generator {v}")
        m = IntMatrix.from_rows([list(v) for v in gens])
        if m.rank() != len(gens):
            violations.append(
                f"cone {idx}: generators dependent (not simplicial / not strongly convex)")
        if all(v[-1] == 0 for v in gens):
            violations.append(f"cone {idx}: contained in N x {{0}}")
        # regularity: generators extend to a basis of the saturated span lattice
        _, S, _ = smith_normal_form(m)
        divisors = [S[i, i] for i in range(min(S.rows, S.cols)) if S[i, i] != 0]
        if any(d != 1 for d in divisors):
            non_regular.append(idx)
        # Gamma-duplicates
        canon = canonical_cone(cone, gamma)
        if canon in canon_seen:
            violations.append(
                f"cone {idx}: Gamma-duplicate of cone {canon_seen[canon]}")
        else:
            canon_seen[canon] = idx
    # face closure up to Gamma
    fan_canon = {canonical_cone(c, gamma) for c in fan.cones}
    for idx, cone in enumerate(fan.cones):
        for face in cone.faces():
            if canonical_cone(face, gamma) not in fan_canon:
                violations.append(f"cone {idx}: missing face {face.generators}")
    # ray condition
    for idx, cone in enumerate(fan.cones):
        if cone.dim == 1:
            v = cone.generators[0]
            if any(x != 0 for x in v[:gp]) or v[-1] != 1:
                violations.append(f"ray {idx}: not of the form (0, b, 1): {v}")
    # covering / invariance proxy: maximal height-1 cells tile a fundamental cell
    max_cones = [c for c in fan.cones if c.dim == rp + 1]
    if all(all(v[-1] == 1 for v in c.generators) for c in max_cones):
        total = Fraction(0)
        degenerate = False
        for c in max_cones:
            cell = [v[gp:gp + rp] for v in c.generators]
            v0 = cell[0]
            mat = [[cell[i + 1][j] - v0[j] for j in range(rp)] for i in range(rp)]
            d = abs(_frac_det(mat))
            if d == 0:
                degenerate = True
            total += d
        covol = Fraction(abs(gamma.Bprime.det())) * math.factorial(rp)
        if degenerate:
            violations.append("degenerate maximal cell")
        elif total != covol:
            violations.append(
                f"height-1 cells do not tile the fundamental cell "
                f"(volume {total}/{math.factorial(rp)} vs covolume {covol}/{math.factorial(rp)}): "
                "Gamma-invariance/covering violated")
    return FanReport(tuple(violations), tuple(non_regular))


def _point_in_cone(point, cone):
    """Exact membership of an integer point in a simplicial rational cone."""
    if cone.dim == 0:
        return all(x == 0 for x in point)
    cols = [list(v) for v in cone.generators]
    A = [[cols[j][i] for j in range(len(cols))] for i in range(len(point))]
    # solve A c = point; need full column rank (simplicial)
    sol = _solve_overdetermined(A, list(point))
    return sol is not None and all(c >= 0 for c in sol)


def _solve_overdetermined(A, rhs):
    """Exact solve of a full-column-rank, possibly overdetermined system;
    None if inconsistent."""
    m, n = len(A), len(A[0])
    aug = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(rhs[i])] for i in range(m)]
    row = 0
    pivots = []
    for col in range(n):
        piv = next((i for i in range(row, m) if aug[i][col] != 0), None)
        if piv is None:
            return None  # not full column rank: treat as no unique solution
        aug[row], aug[piv] = aug[piv], aug[row]
        pv = aug[row][col]
        aug[row] = [x / pv for x in aug[row]]
        for i in range(m):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    for i in range(row, m):
        if aug[i][n] != 0:
            return None
    return [aug[i][n] for i in range(n)]


def section_extends(n_phi, fan):
    """True iff the ray through (n_phi, 1) lies in some cone of the fan,
    membership tested exactly modulo Gamma-translation."""
    gamma = fan.gamma
    gp, rp = gamma.g_prime, gamma.r_prime
    n_phi = tuple(int(x) for x in n_phi)
    if len(n_phi) != gamma.g:
        raise DimensionError("n_phi must have g coordinates")
    a, b = n_phi[:gp], n_phi[gp:]
    b0, _ = _reduce_mod_period(b, gamma)
    # candidate translates: the reduced point plus a small box of periods
    for offsets in itertools.product((-1, 0, 1), repeat=rp):
        shift = gamma.Bprime.transpose().mat_vec(offsets)
        point = a + tuple(x + s for x, s in zip(b0, shift)) + (1,)
        for cone in fan.cones:
            if cone.dim and _point_in_cone(point, cone):
                return True
    return False


def cocharacter_from_orders(orders):
    """Assemble the cocharacter n_phi from the vanishing orders of the basis
    characters along a section (dual-basis bookkeeping)."""
    return tuple(int(x) for x in orders)


def translation_regularizable(n_phi, gamma_data, with_diagnostic=False):
    """The algorithmic core of the finite-order regularization: if the
    abelian block of n_phi vanishes and its torus block lies in the rational
    row span of B', return the minimal N >= 1 with N * n_phi = beta * B' for
    an integer vector beta (plus beta).  Otherwise None."""
    n_phi = tuple(int(x) for x in n_phi)
    gp, rp = gamma_data.g_prime, gamma_data.r_prime
    if len(n_phi) == rp and gp > 0:
        # caller passed only the torus block
        a, b = (), n_phi
    else:
        if len(n_phi) != gamma_data.g:
            raise DimensionError("n_phi must have g (or r') coordinates")
        a, b = n_phi[:gp], n_phi[gp:]
    if any(x != 0 for x in a):
        diag = "abelian coordinate nonzero (a genuine section cannot twist the abelian block)"
        return (None, diag) if with_diagnostic else None
    # solve x * B' = b over Q
    Bt = [[Fraction(gamma_data.Bprime[j, i]) for j in range(rp)] for i in range(rp)]
    x = _frac_solve(Bt, list(b))
    if x is None:
        diag = "torus block not in the rational row span of B'"
        return (None, diag) if with_diagnostic else None
    N = 1
    for xi in x:
        N = N * xi.denominator // math.gcd(N, xi.denominator)
    beta = tuple(int(xi * N) for xi in x)
    result = (N, beta)
    return (result, "") if with_diagnostic else result


def central_fiber_combinatorics(fan):
    """(ray orbits, maximal-cone orbits) of the central fiber of the model."""
    return len(fan.rays()), len(fan.maximal_cones())
