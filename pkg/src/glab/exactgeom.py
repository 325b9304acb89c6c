"""Exact rational linear algebra and polyhedral cone engine.

Everything here computes over `fractions.Fraction`: there are no tolerances
and no floating point, so every predicate (membership, redundancy, equality
of cones) is decided exactly. Cones carry both a generator description
(rays + lineality) and an inequality description (facets + equations), kept
in a canonical form so that two equal cones compare equal structurally.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

Vector = tuple[Fraction, ...]
IntVector = tuple[int, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionMismatchError(ValueError):
    """Operands live in different ambient dimensions."""


class UnboundedRegionError(ValueError):
    """Lattice-point enumeration was asked for an unbounded region."""


# ---------------------------------------------------------------------------
# vectors and matrices
# ---------------------------------------------------------------------------

def vec(entries) -> Vector:
    return tuple(Fraction(e) for e in entries)


def dot(u, v):
    """Exact inner product; stays in int when both operands are integral."""
    if len(u) != len(v):
        raise DimensionMismatchError(f"dot of lengths {len(u)} and {len(v)}")
    acc = 0
    for a, b in zip(u, v):
        acc += a * b
    return acc


def vadd(u, v) -> Vector:
    return tuple(Fraction(a) + Fraction(b) for a, b in zip(u, v))


def vsub(u, v) -> Vector:
    return tuple(Fraction(a) - Fraction(b) for a, b in zip(u, v))


def vscale(s, u) -> Vector:
    s = Fraction(s)
    return tuple(s * Fraction(a) for a in u)


def vneg(u) -> Vector:
    return tuple(-Fraction(a) for a in u)


def is_zero_vec(u) -> bool:
    return all(x == 0 for x in u)


def primitive(v) -> IntVector:
    """Positive rescaling of v to a primitive integer vector (direction kept)."""
    fr = [Fraction(x) for x in v]
    if all(x == 0 for x in fr):
        return tuple(0 for _ in fr)
    den = lcm(*(x.denominator for x in fr)) if fr else 1
    ints = [int(x * den) for x in fr]
    g = gcd(*ints)
    return tuple(x // g for x in ints)


def sign_normalized(v) -> IntVector:
    """Primitive vector with canonical sign: first nonzero entry positive."""
    p = primitive(v)
    for x in p:
        if x > 0:
            return p
        if x < 0:
            return tuple(-y for y in p)
    return p


def mat_vec(rows, x) -> Vector:
    return tuple(dot(r, x) for r in rows)


def mat_mul(a, b):
    bt = list(zip(*b))
    return tuple(tuple(dot(r, c) for c in bt) for r in a)


def transpose(rows):
    return tuple(zip(*rows))


def identity_matrix(n):
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def rref(rows):
    """Reduced row echelon form over Q. Returns (rows, pivot_columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def matrix_rank(rows) -> int:
    rows = [r for r in rows if any(x != 0 for x in r)]
    if not rows:
        return 0
    if all(isinstance(x, int) for r in rows for x in r):
        return _int_rank(rows)
    return len(rref(rows)[0])


def _int_rank(rows) -> int:
    """Fraction-free Gaussian elimination rank for integer matrices."""
    m = [list(r) for r in rows]
    ncols = len(m[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][c]
        for i in range(rank + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c]
                row = [a * pv - f * b for a, b in zip(m[i], m[rank])]
                g = gcd(*row)
                m[i] = [x // g for x in row] if g > 1 else row
        rank += 1
        if rank == len(m):
            break
    return rank


def nullspace_basis(rows, n) -> tuple[IntVector, ...]:
    """Canonical primitive integer basis of {x : rows @ x = 0} in Q^n."""
    red, pivots = rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [ZERO] * n
        v[fc] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][fc]
        basis.append(sign_normalized(v))
    return tuple(basis)


def subspace_basis(vectors, n) -> tuple[IntVector, ...]:
    """Canonical primitive integer basis of span(vectors) in Q^n (via RREF)."""
    red, _ = rref(vectors)
    return tuple(sign_normalized(r) for r in red if not is_zero_vec(r))


def solve_linear(rows, b):
    """One solution of rows @ x = b, or None if inconsistent.

    rows need not be square; free coordinates are set to zero.
    """
    if not rows:
        return None if any(Fraction(x) != 0 for x in b) else ()
    n = len(rows[0])
    aug = [list(r) + [bi] for r, bi in zip(rows, b)]
    red, pivots = rref(aug)
    for row in red:
        if all(x == 0 for x in row[:-1]) and row[-1] != 0:
            return None
    x = [ZERO] * n
    if n in pivots:  # pivot in the augmented column means inconsistent
        return None
    for i, pc in enumerate(pivots):
        x[pc] = red[i][-1]
    return tuple(x)


def mat_inverse(rows):
    n = len(rows)
    aug = [list(map(Fraction, r)) + list(identity_matrix(n)[i]) for i, r in enumerate(rows)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return tuple(tuple(row[n:]) for row in red)


def det(rows) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    sign = 1
    result = ONE
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pr is None:
            return ZERO
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            sign = -sign
        pv = m[c][c]
        result *= pv
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / pv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return result * sign


def project_off(v, basis) -> Vector:
    """Component of v orthogonal (standard dot) to span(basis)."""
    if not basis:
        return vec(v)
    gram = [[dot(a, b) for b in basis] for a in basis]
    rhs = [dot(a, v) for a in basis]
    coeffs = solve_linear(gram, rhs)
    out = vec(v)
    for c, b in zip(coeffs, basis):
        out = vsub(out, vscale(c, b))
    return out


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def smith_normal_form(mat):
    """Smith normal form over Z.

    Returns (U, S, V) with U @ mat @ V == S, U and V unimodular, S diagonal
    with nonnegative entries d_1 | d_2 | ... .
    """
    A = [[int(x) for x in row] for row in mat]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, q):  # row_i -= q * row_j
        A[i] = [a - q * b for a, b in zip(A[i], A[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def add_col(i, j, q):  # col_i -= q * col_j
        for row in A:
            row[i] -= q * row[j]
        for row in V:
            row[i] -= q * row[j]

    t = 0
    while t < min(m, n):
        # pick the nonzero entry of smallest magnitude as pivot
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] != 0 and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if A[i][t] != 0:
                    q = A[i][t] // A[t][t]
                    add_row(i, t, q)
                    if A[i][t] != 0:
                        swap_rows(i, t)
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j] != 0:
                    q = A[t][j] // A[t][t]
                    add_col(j, t, q)
                    if A[t][j] != 0:
                        swap_cols(j, t)
                        dirty = True
            if dirty:
                continue
            # enforce divisibility of the remaining block by the pivot
            culprit = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % A[t][t] != 0:
                        culprit = i
                        break
                if culprit is not None:
                    break
            if culprit is None:
                break
            add_row(t, culprit, -1)  # row_t += row_culprit
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1

    S = tuple(tuple(row) for row in A)
    return tuple(tuple(r) for r in U), S, tuple(tuple(r) for r in V)


def invariant_factors(mat) -> tuple[int, ...]:
    _, s, _ = smith_normal_form(mat)
    return tuple(s[i][i] for i in range(min(len(s), len(s[0]) if s else 0)) if s[i][i] != 0)


# ---------------------------------------------------------------------------
# exact simplex
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LPResult:
    status: str            # "optimal" | "unbounded" | "infeasible"
    point: Vector | None   # an optimal point, when status == "optimal"
    value: Fraction | None
    tight: tuple[int, ...]  # indices of inequality rows tight at the point
    certificate: tuple[Fraction, ...] | None = None  # Farkas multipliers when infeasible


def _simplex_standard(A, b, c):
    """min c.x  s.t.  A x = b, x >= 0, everything exact.

    Returns (status, x, farkas) where farkas is a multiplier vector on the
    rows proving infeasibility (y.A <= 0 componentwise, y.b > 0).
    """
    m = len(A)
    n = len(A[0]) if m else len(c)
    signs = []
    T = []
    for i in range(m):
        row = [Fraction(x) for x in A[i]]
        rhs = Fraction(b[i])
        s = 1
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
            s = -1
        signs.append(s)
        T.append(row + [ONE if j == i else ZERO for j in range(m)] + [rhs])
    basis = [n + i for i in range(m)]
    ncols = n + m

    def pivot(r, col):
        pv = T[r][col]
        T[r] = [x / pv for x in T[r]]
        for i in range(m):
            if i != r and T[i][col] != 0:
                f = T[i][col]
                T[i] = [a - f * p for a, p in zip(T[i], T[r])]
        basis[r] = col

    def run(costs, allowed):
        while True:
            cb = [costs[bi] for bi in basis]
            enter = None
            for j in allowed:
                red = costs[j] - sum(cb[i] * T[i][j] for i in range(m))
                if red < 0:
                    enter = j  # Bland: smallest index
                    break
            if enter is None:
                return "optimal"
            leave = None
            best = None
            for i in range(m):
                if T[i][enter] > 0:
                    ratio = T[i][-1] / T[i][enter]
                    key = (ratio, basis[i])
                    if best is None or key < best:
                        best = key
                        leave = i
            if leave is None:
                return "unbounded"
            pivot(leave, enter)

    # phase 1
    costs1 = [ZERO] * n + [ONE] * m
    st = run(costs1, range(ncols))
    assert st == "optimal"
    cb = [costs1[bi] for bi in basis]
    art_value = sum(cb[i] * T[i][-1] for i in range(m))
    if art_value > 0:
        # Farkas certificate from the phase-1 duals
        y = []
        for k in range(m):
            red = ONE - sum(cb[i] * T[i][n + k] for i in range(m))
            y.append(signs[k] * (ONE - red))
        return "infeasible", None, tuple(y)
    # drive artificials out of the basis
    drop = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is None:
                drop.append(i)
            else:
                pivot(i, col)
    if drop:
        for i in sorted(drop, reverse=True):
            del T[i], basis[i]
        m = len(T)
    # phase 2
    costs2 = [Fraction(x) for x in c] + [ZERO] * (ncols - n)
    st = run(costs2, range(n))
    if st == "unbounded":
        return "unbounded", None, None
    x = [ZERO] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i][-1]
    return "optimal", tuple(x), None


def lp_minimize(objective, inequalities, equalities=(), lexmin=False) -> LPResult:
    """Minimize a linear functional over {x : f.x >= c for (f, c), g.x = d}.

    Variables are free rationals. When ``lexmin`` is set the returned optimal
    point is the lexicographically smallest point of the optimal face, which
    makes the answer canonical.
    """
    ineqs = [(vec(f), Fraction(c)) for f, c in inequalities]
    eqs = [(vec(g), Fraction(d)) for g, d in equalities]
    n = len(objective) if objective else (len(ineqs[0][0]) if ineqs else len(eqs[0][0]))
    obj = vec(objective) if objective else vec([0] * n)

    def solve(extra_eqs):
        A, b = [], []
        mi = len(ineqs)
        for k, (f, cst) in enumerate(ineqs):
            # f.(u - w) - s_k = cst
            row = list(f) + [-x for x in f] + [(-ONE if j == k else ZERO) for j in range(mi)]
            A.append(row)
            b.append(cst)
        for g, d in list(eqs) + list(extra_eqs):
            row = list(g) + [-x for x in g] + [ZERO] * mi
            A.append(row)
            b.append(d)
        cost = list(obj) + [-x for x in obj] + [ZERO] * mi
        st, xfull, farkas = _simplex_standard(A, b, cost)
        if st != "optimal":
            return st, None, farkas
        x = tuple(xfull[i] - xfull[n + i] for i in range(n))
        return st, x, None

    st, x, farkas = solve([])
    if st == "infeasible":
        return LPResult("infeasible", None, None, (), farkas[: len(ineqs)] if farkas else None)
    if st == "unbounded":
        return LPResult("unbounded", None, None, ())
    value = dot(obj, x)
    if lexmin:
        pins = [(obj, value)]
        for i in range(n):
            e = vec([1 if j == i else 0 for j in range(n)])
            sti, xi, _ = _lex_step(e, ineqs, eqs, pins)
            if sti == "optimal":
                pins.append((e, dot(e, xi)))
                x = xi
            else:  # unbounded below along this coordinate cannot improve canonicity
                pins.append((e, x[i]))
    tight = tuple(k for k, (f, cst) in enumerate(ineqs) if dot(f, x) == cst)
    return LPResult("optimal", x, value, tight)


def _lex_step(e, ineqs, eqs, pins):
    n = len(e)
    A, b = [], []
    mi = len(ineqs)
    for k, (f, cst) in enumerate(ineqs):
        A.append(list(f) + [-x for x in f] + [(-ONE if j == k else ZERO) for j in range(mi)])
        b.append(cst)
    for g, d in list(eqs) + list(pins):
        A.append(list(g) + [-x for x in g] + [ZERO] * mi)
        b.append(d)
    cost = list(e) + [-x for x in e] + [ZERO] * mi
    st, xfull, _ = _simplex_standard(A, b, cost)
    if st != "optimal":
        return st, None, None
    return st, tuple(xfull[i] - xfull[n + i] for i in range(n)), None


def linear_feasible(inequalities, equalities=()):
    """Exact feasibility of {f.x >= c, g.x = d}; returns (bool, witness)."""
    res = lp_minimize(None, inequalities, equalities)
    if res.status == "infeasible":
        return False, None
    return True, res.point


def strictly_feasible(strict_rows, weak_rows=(), equalities=(), n=None) -> bool:
    """Whether {h.x > 0 for strict h, g.x >= 0, e.x = 0} has a solution.

    Homogeneous strict feasibility via a margin LP: maximize t subject to
    h.x >= t with a normalization bound, exact throughout.
    """
    strict_rows = [vec(h) for h in strict_rows]
    weak_rows = [vec(g) for g in weak_rows]
    equalities = [vec(e) for e in equalities]
    if n is None:
        n = len((strict_rows + weak_rows + equalities)[0])
    if not strict_rows:
        ok, _ = linear_feasible([(g, ZERO) for g in weak_rows], [(e, ZERO) for e in equalities])
        return ok
    ineqs = []
    for h in strict_rows:
        ineqs.append((tuple(h) + (Fraction(-1),), ZERO))
    for g in weak_rows:
        ineqs.append((tuple(g) + (ZERO,), ZERO))
    total = [sum(h[i] for h in strict_rows) for i in range(n)]
    ineqs.append((tuple(-x for x in total) + (ZERO,), Fraction(-1)))
    eqs = [(tuple(e) + (ZERO,), ZERO) for e in equalities]
    objective = [ZERO] * n + [Fraction(-1)]
    res = lp_minimize(objective, ineqs, eqs)
    return res.status == "optimal" and res.value < 0


def nonneg_combination(target, generators, lineality=()):
    """Whether target = sum c_i g_i + sum d_j l_j with c >= 0, d free."""
    if not generators and not lineality:
        return is_zero_vec(target)
    n = len(target)
    k = len(generators)
    ell = len(lineality)
    A = []
    for coord in range(n):
        row = [Fraction(g[coord]) for g in generators]
        row += [Fraction(l[coord]) for l in lineality]
        row += [-Fraction(l[coord]) for l in lineality]
        A.append(row)
    b = [Fraction(x) for x in target]
    st, _, _ = _simplex_standard(A, b, [ZERO] * (k + 2 * ell))
    return st == "optimal"


# ---------------------------------------------------------------------------
# double description
# ---------------------------------------------------------------------------

def extremal_by_rank(candidates, ineq_rows, equations, n, target=None):
    """Extremal generators by the tight-set corank-one criterion.

    candidates generate the cone {h.x >= 0, e.x = 0} modulo its lineality;
    a candidate spans an extremal ray class iff the rows tight at it, together
    with the equations, have rank n - lineality_dim - 1.
    """
    if target is None:
        lin_dim = n - matrix_rank(list(ineq_rows) + list(equations))
        target = n - lin_dim - 1
    out = []
    for r in sorted(set(candidates)):
        tight = [h for h in ineq_rows if dot(h, r) == 0]
        if matrix_rank(list(equations) + tight) == target:
            out.append(r)
    return out


def dd_vrep(inequalities, equalities, n):
    """Generators of {x in Q^n : h.x >= 0 for h, e.x = 0 for e}.

    Returns (rays, lineality_basis), both tuples of primitive integer
    vectors; rays are extremal modulo the lineality space. Arithmetic is
    integer throughout (rows are rescaled to primitive integers).
    """
    eq_rows = [primitive(e) for e in equalities if not is_zero_vec(e)]
    lin = list(nullspace_basis(eq_rows, n))
    rays: list[IntVector] = []
    inserted: list[IntVector] = []
    for h in inequalities:
        if is_zero_vec(h):
            continue
        h = primitive(h)
        hl = [dot(h, l) for l in lin]
        k = next((i for i, v in enumerate(hl) if v != 0), None)
        if k is not None:
            l0 = lin[k] if hl[k] > 0 else tuple(-x for x in lin[k])
            h0 = abs(hl[k])
            new_lin = []
            for j, l in enumerate(lin):
                if j == k:
                    continue
                new_lin.append(primitive(tuple(h0 * a - hl[j] * b for a, b in zip(l, l0))))
            moved = [
                tuple(h0 * a - dot(h, r) * b for a, b in zip(r, l0)) for r in rays
            ]
            rays = [primitive(r) for r in moved if not is_zero_vec(r)]
            rays.append(l0)
            lin = new_lin
            inserted.append(h)
            rays = extremal_by_rank(rays, inserted, eq_rows, n, n - len(lin) - 1)
            continue
        vals = [dot(h, r) for r in rays]
        inserted.append(h)
        if all(v >= 0 for v in vals):
            continue
        cand = [r for r, v in zip(rays, vals) if v >= 0]
        for (p, vp) in [(r, v) for r, v in zip(rays, vals) if v > 0]:
            for (q, vq) in [(r, v) for r, v in zip(rays, vals) if v < 0]:
                c = tuple(vp * b - vq * a for a, b in zip(p, q))
                if not is_zero_vec(c):
                    cand.append(primitive(c))
        rays = extremal_by_rank(cand, inserted, eq_rows, n, n - len(lin) - 1)
    ray_out = tuple(sorted(rays))
    lin_out = subspace_basis(lin, n)
    return ray_out, lin_out


# ---------------------------------------------------------------------------
# cones
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cone:
    """Rational polyhedral cone with canonical V- and H-representations.

    rays: extremal generators, primitive integer, orthogonal to the lineality
      space, sorted; lineality: canonical basis of the largest linear subspace
      contained in the cone; facets: inward facet normals (primitive, lying in
      the span of the cone), irredundant; equations: canonical basis of the
      orthogonal complement of the span.
    """

    ambient_dim: int
    rays: tuple[IntVector, ...]
    lineality: tuple[IntVector, ...]
    facets: tuple[IntVector, ...]
    equations: tuple[IntVector, ...]

    @property
    def dim(self) -> int:
        return self.ambient_dim - len(self.equations)

    @property
    def lineality_dim(self) -> int:
        return len(self.lineality)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_zero(self) -> bool:
        return not self.rays and not self.lineality

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_rays(rays, lineality=(), ambient_dim=None) -> "Cone":
        rays = [vec(r) for r in rays]
        lineality = [vec(l) for l in lineality]
        if ambient_dim is None:
            if not rays and not lineality:
                raise ValueError("ambient_dim required for the zero cone")
            ambient_dim = len((rays + lineality)[0])
        for v in rays + lineality:
            if len(v) != ambient_dim:
                raise DimensionMismatchError("inconsistent ray dimensions")
        lin = subspace_basis(lineality, ambient_dim)
        cand = []
        for r in rays:
            p = project_off(r, lin)
            if not is_zero_vec(p):
                cand.append(primitive(p))
        cand = sorted(set(cand))
        facets, equations = dd_vrep(cand, lin, ambient_dim)
        facets = tuple(sorted(_inspan_normal(f, equations) for f in facets))
        ray_t = tuple(
            tuple(map(int, r))
            for r in extremal_by_rank(cand, facets, equations, ambient_dim)
        )
        return Cone(ambient_dim, ray_t, lin, facets, equations)

    @staticmethod
    def from_inequalities(inequalities, equations=(), ambient_dim=None) -> "Cone":
        inequalities = [vec(h) for h in inequalities]
        equations = [vec(e) for e in equations]
        if ambient_dim is None:
            if not inequalities and not equations:
                raise ValueError("ambient_dim required for the full space")
            ambient_dim = len((inequalities + equations)[0])
        rays, lin = dd_vrep(inequalities, equations, ambient_dim)
        return Cone.from_rays(rays, lin, ambient_dim)

    @staticmethod
    def full_space(n) -> "Cone":
        return Cone.from_rays([], identity_matrix(n), n)

    @staticmethod
    def zero(n) -> "Cone":
        return Cone.from_rays([], [], n)

    # -- predicates ---------------------------------------------------------

    def contains(self, x) -> bool:
        x = vec(x)
        if len(x) != self.ambient_dim:
            raise DimensionMismatchError("point dimension mismatch")
        return all(dot(e, x) == 0 for e in self.equations) and all(
            dot(f, x) >= 0 for f in self.facets
        )

    def relint_contains(self, x) -> bool:
        x = vec(x)
        return all(dot(e, x) == 0 for e in self.equations) and all(
            dot(f, x) > 0 for f in self.facets
        )

    def interior_point(self) -> Vector:
        """A canonical point in the relative interior."""
        if self.is_zero:
            return vec([0] * self.ambient_dim)
        acc = vec([0] * self.ambient_dim)
        for r in self.rays:
            acc = vadd(acc, r)
        if is_zero_vec(acc) and self.lineality:
            return vec([0] * self.ambient_dim)
        return acc

    # -- derived cones -------------------------------------------------------

    def dual(self) -> "Cone":
        """The dual cone {y : y.x >= 0 for all x in self}."""
        return Cone(self.ambient_dim, self.facets, self.equations, self.rays, self.lineality)

    def face(self, normal) -> "Cone":
        """The face cut out by a supporting normal (normal >= 0 on the cone)."""
        normal = vec(normal)
        ineqs = list(self.facets)
        eqs = list(self.equations) + [normal]
        return Cone.from_inequalities(ineqs, eqs, self.ambient_dim)

    def facet_cones(self) -> tuple["Cone", ...]:
        return tuple(self.face(f) for f in self.facets)

    def key(self):
        return (self.ambient_dim, self.rays, self.lineality)


def _inspan_normal(f, equations) -> IntVector:
    """Canonical facet normal: component in the span of the cone."""
    p = project_off(vec(f), [vec(e) for e in equations])
    return primitive(p)


def dualize(cone: Cone) -> Cone:
    """Dual cone; both representations populated, involutive on canonical forms."""
    return cone.dual()


def intersect(c1: Cone, c2: Cone) -> Cone:
    if c1.ambient_dim != c2.ambient_dim:
        raise DimensionMismatchError("cones live in different dimensions")
    return Cone.from_inequalities(
        list(c1.facets) + list(c2.facets),
        list(c1.equations) + list(c2.equations),
        c1.ambient_dim,
    )


def cone_leq(inner: Cone, outer: Cone) -> bool:
    """inner subseteq outer, decided on generators against the H-rep."""
    gens = list(inner.rays) + list(inner.lineality) + [vneg(l) for l in inner.lineality]
    return all(outer.contains(g) for g in gens)


# ---------------------------------------------------------------------------
# polyhedra and lattice points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    witness: Vector | None
    certificate: tuple[Fraction, ...] | None


@dataclass(frozen=True)
class Polyhedron:
    """H-polyhedron {x : f.x >= c for every row (f, c)}."""

    inequalities: tuple[tuple[Vector, Fraction], ...]
    dim: int

    @staticmethod
    def from_rows(rows, dim=None) -> "Polyhedron":
        rows = tuple((vec(f), Fraction(c)) for f, c in rows)
        if dim is None:
            if not rows:
                raise ValueError("dim required for the trivial polyhedron")
            dim = len(rows[0][0])
        for f, _ in rows:
            if len(f) != dim:
                raise DimensionMismatchError("inconsistent inequality dimensions")
        return Polyhedron(rows, dim)

    def contains(self, x) -> bool:
        x = vec(x)
        return all(dot(f, x) >= c for f, c in self.inequalities)

    def feasibility(self) -> Feasibility:
        return _poly_feasibility(self)

    def vertices(self):
        """Vertices and their tight row index sets, via the homogenization cone.

        Raises UnboundedRegionError if the polyhedron has a nonzero recession
        ray or a lineality direction (no vertex description then).
        """
        ineqs = [vec([-c] + list(f)) for f, c in self.inequalities]
        ineqs.append(vec([1] + [0] * self.dim))
        rays, lin = dd_vrep(ineqs, [], self.dim + 1)
        if lin:
            raise UnboundedRegionError("polyhedron contains a line")
        verts = []
        for r in rays:
            if r[0] == 0:
                raise UnboundedRegionError("polyhedron has a recession direction")
            t = Fraction(r[0])
            v = tuple(Fraction(x) / t for x in r[1:])
            tight = tuple(i for i, (f, c) in enumerate(self.inequalities) if dot(f, v) == c)
            verts.append((v, tight))
        verts.sort(key=lambda p: p[0])
        return tuple(verts)


@lru_cache(maxsize=None)
def _poly_feasibility(poly: Polyhedron) -> Feasibility:
    res = lp_minimize(None, poly.inequalities, lexmin=False)
    if res.status == "infeasible":
        return Feasibility(False, None, res.certificate)
    return Feasibility(True, res.point, None)


def lattice_points(poly: Polyhedron) -> tuple[IntVector, ...]:
    """All integer points of a bounded polyhedron, canonically ordered.

    Boundedness is certified by per-coordinate LPs; brute force over the
    resulting box is intentional (desk-scale contract).
    """
    feas = poly.feasibility()
    if not feas.feasible:
        return ()
    bounds = []
    for i in range(poly.dim):
        e = [1 if j == i else 0 for j in range(poly.dim)]
        lo = lp_minimize(e, poly.inequalities)
        hi = lp_minimize([-x for x in e], poly.inequalities)
        if lo.status != "optimal" or hi.status != "optimal":
            raise UnboundedRegionError(f"region unbounded in coordinate {i}")
        bounds.append((math.ceil(lo.value), math.floor(-hi.value)))
    pts = []
    for cand in itertools.product(*(range(lo, hi + 1) for lo, hi in bounds)):
        if poly.contains(cand):
            pts.append(tuple(int(x) for x in cand))
    return tuple(sorted(pts))
