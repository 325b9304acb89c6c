"""Complete toric models: fans, class groups, sections, and order functions.

A complete simplicial fan stands in for a Q-factorial projective variety.
Divisors are coefficient vectors on the rays; the divisor class group is
presented by Smith normal form of the character relation matrix, with a
deterministic basis taken from the transform, so class coordinates are
reproducible. Asymptotic order functions are computed by exact LP over the
relaxed section polytope.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

from .exactgeom import (
    Cone,
    Polyhedron,
    Vector,
    IntVector,
    dot,
    intersect,
    is_zero_vec,
    lattice_points,
    lp_minimize,
    mat_inverse,
    mat_vec,
    nullspace_basis,
    primitive,
    smith_normal_form,
    solve_linear,
    vadd,
    vec,
    vscale,
)

ZERO = Fraction(0)


class FanValidationError(ValueError):
    """The ray/cone data does not describe a fan."""


class NonCompleteFanError(ValueError):
    """Model construction requires a complete fan."""


class NonSimplicialFanError(ValueError):
    """Model construction requires a simplicial fan."""


class NotEffectiveError(ValueError):
    """No multiple of the divisor class has sections."""


# ---------------------------------------------------------------------------
# fans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Fan:
    """Fan given by primitive ray vectors and maximal cones as ray-index sets."""

    ambient_rank: int
    rays: tuple[IntVector, ...]
    max_cones: tuple[tuple[int, ...], ...]

    @staticmethod
    def make(ambient_rank, rays, max_cones) -> "Fan":
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        for r in rays:
            if len(r) != ambient_rank:
                raise FanValidationError("ray dimension does not match ambient rank")
            if is_zero_vec(r):
                raise FanValidationError("zero vector cannot be a ray")
            if r != primitive(r):
                raise FanValidationError(f"ray {r} is not primitive")
        if len(set(rays)) != len(rays):
            raise FanValidationError("duplicate rays")
        cones = tuple(tuple(sorted(set(int(i) for i in c))) for c in max_cones)
        for c in cones:
            if not c:
                raise FanValidationError("empty maximal cone")
            for i in c:
                if not 0 <= i < len(rays):
                    raise FanValidationError(f"cone index {i} out of range")
        for c in cones:
            for d in cones:
                if c != d and set(c) <= set(d):
                    raise FanValidationError("listed cone contained in another maximal cone")
        fan = Fan(ambient_rank, rays, cones)
        fan._validate_fan_axioms()
        return fan

    @lru_cache(maxsize=None)
    def cone(self, idx: tuple[int, ...]) -> Cone:
        return Cone.from_rays([self.rays[i] for i in idx], ambient_dim=self.ambient_rank)

    def _validate_fan_axioms(self):
        for c in self.max_cones:
            cc = self.cone(c)
            if cc.lineality_dim != 0:
                raise FanValidationError(f"cone {c} is not pointed")
        for a in self.max_cones:
            for b in self.max_cones:
                if a >= b:
                    continue
                meet = intersect(self.cone(a), self.cone(b))
                common = tuple(sorted(set(a) & set(b)))
                span = (
                    Cone.from_rays([self.rays[i] for i in common], ambient_dim=self.ambient_rank)
                    if common
                    else Cone.zero(self.ambient_rank)
                )
                if meet != span:
                    raise FanValidationError(
                        f"cones {a} and {b} do not intersect in a common face"
                    )
                if not _is_face_of(span, self.cone(a)) or not _is_face_of(span, self.cone(b)):
                    raise FanValidationError(f"intersection of {a} and {b} is not a face of both")

    @property
    def is_simplicial(self) -> bool:
        return all(self.cone(c).dim == len(c) for c in self.max_cones)

    @property
    def is_complete(self) -> bool:
        n = self.ambient_rank
        if any(self.cone(c).dim != n for c in self.max_cones):
            return False
        counts: dict = {}
        for c in self.max_cones:
            for f in self.cone(c).facet_cones():
                counts[f.key()] = counts.get(f.key(), 0) + 1
        return all(v == 2 for v in counts.values()) and bool(self.max_cones)

    def max_cone_containing(self, v) -> tuple[int, ...]:
        for c in self.max_cones:
            if self.cone(c).contains(v):
                return c
        raise ValueError(f"no maximal cone contains {v} (fan not complete?)")

    def canonical(self) -> "Fan":
        order = sorted(range(len(self.rays)), key=lambda i: self.rays[i])
        rank = {old: new for new, old in enumerate(order)}
        rays = tuple(self.rays[i] for i in order)
        cones = tuple(sorted(tuple(sorted(rank[i] for i in c)) for c in self.max_cones))
        return Fan(self.ambient_rank, rays, cones)

    def digest(self) -> str:
        c = self.canonical()
        blob = repr((c.ambient_rank, c.rays, c.max_cones)).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def same_fan(self, other: "Fan") -> bool:
        return self.canonical() == other.canonical()


def _is_face_of(face: Cone, cone: Cone) -> bool:
    """Whether ``face`` is a face of ``cone`` (tight supporting facets test)."""
    gens = list(face.rays) + list(face.lineality)
    if not gens:
        return True  # the zero cone is a face of every pointed cone
    tight = [f for f in cone.facets if all(dot(f, g) == 0 for g in gens)]
    cut = Cone.from_inequalities(
        list(cone.facets), list(cone.equations) + tight, cone.ambient_dim
    )
    return cut == face


# ---------------------------------------------------------------------------
# models, divisors, valuations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ToricModel:
    """Complete simplicial fan plus its class-group presentation.

    ``degree_map`` sends a ray coefficient vector to the free part of its
    divisor class; its rows are the bottom rows of the SNF transform U of the
    transposed relation matrix, and ``section`` is the integer right inverse
    read off the corresponding columns of U^-1.
    """

    fan: Fan
    class_rank: int
    torsion: tuple[int, ...]
    degree_map: tuple[IntVector, ...]
    section: tuple[IntVector, ...]
    relations: tuple[IntVector, ...]
    torsion_rows: tuple[tuple[IntVector, int], ...]

    @property
    def n_rays(self) -> int:
        return len(self.fan.rays)

    def class_of(self, coeffs) -> Vector:
        """Free part of the class of a rational coefficient vector."""
        return mat_vec(self.degree_map, vec(coeffs))

    def torsion_class_of(self, coeffs) -> tuple[int, ...]:
        cv = [Fraction(c) for c in coeffs]
        if any(c.denominator != 1 for c in cv):
            raise ValueError("torsion coordinates need an integral divisor")
        return tuple(int(dot(row, cv)) % mod for row, mod in self.torsion_rows)

    def divisor_with_class(self, cls) -> "ToricDivisor":
        """Canonical representative divisor of a (free) class vector."""
        coeffs = mat_vec(self.section, vec(cls))
        return ToricDivisor(self, coeffs)

    def divisor(self, coeffs) -> "ToricDivisor":
        return ToricDivisor(self, vec(coeffs))

    def ray_divisor(self, i: int) -> "ToricDivisor":
        return self.divisor([1 if j == i else 0 for j in range(self.n_rays)])


def transpose_cols(rows):
    return tuple(zip(*rows)) if rows else ()


@dataclass(frozen=True)
class ToricDivisor:
    model: ToricModel
    coeffs: Vector

    def __post_init__(self):
        object.__setattr__(self, "coeffs", vec(self.coeffs))
        if len(self.coeffs) != self.model.n_rays:
            raise ValueError("one coefficient per ray required")

    def floor(self) -> "ToricDivisor":
        return ToricDivisor(self.model, [Fraction(math.floor(c)) for c in self.coeffs])

    def class_vector(self) -> Vector:
        return self.model.class_of(self.coeffs)

    def scale(self, k) -> "ToricDivisor":
        return ToricDivisor(self.model, vscale(k, self.coeffs))

    def add(self, other: "ToricDivisor") -> "ToricDivisor":
        return ToricDivisor(self.model, vadd(self.coeffs, other.coeffs))


@dataclass(frozen=True)
class ToricValuation:
    """Torus-invariant geometric valuation: a primitive vector of N."""

    vector: IntVector

    def __post_init__(self):
        v = tuple(int(x) for x in self.vector)
        if is_zero_vec(v):
            raise ValueError("valuation vector must be nonzero")
        if v != primitive(v):
            raise ValueError("valuation vector must be primitive")
        object.__setattr__(self, "vector", v)


@dataclass(frozen=True)
class SectionPolytope:
    """{m : <m, v_rho> >= -a_rho}; lattice points give global sections."""

    polyhedron: Polyhedron
    ambient_rank: int

    @property
    def feasible(self) -> bool:
        return self.polyhedron.feasibility().feasible

    @property
    def witness(self):
        return self.polyhedron.feasibility().witness


def build_model(fan: Fan) -> ToricModel:
    """Class-group presentation via SNF of the transposed relation matrix."""
    if not fan.is_simplicial:
        raise NonSimplicialFanError("model requires a simplicial fan")
    if not fan.is_complete:
        raise NonCompleteFanError("model requires a complete fan")
    n = fan.ambient_rank
    R = len(fan.rays)
    relations = tuple(tuple(r[i] for r in fan.rays) for i in range(n))  # n x R
    bt = [[fan.rays[j][i] for i in range(n)] for j in range(R)]  # R x n
    U, S, V = smith_normal_form(bt)
    k = sum(1 for i in range(min(R, n)) if S[i][i] != 0)
    if k != n:
        raise NonCompleteFanError("rays do not span the ambient lattice")
    uinv_rows, _ = _integer_inverse(U)
    degree_map = tuple(tuple(U[i]) for i in range(k, R))
    section = tuple(tuple(uinv_rows[i][j] for j in range(k, R)) for i in range(R))  # R x rank
    torsion_rows = tuple(
        (tuple(U[i]), S[i][i]) for i in range(k) if S[i][i] not in (0, 1)
    )
    torsion = tuple(mod for _, mod in torsion_rows)
    model = ToricModel(
        fan=fan,
        class_rank=R - n,
        torsion=torsion,
        degree_map=degree_map,
        section=section,
        relations=relations,
        torsion_rows=torsion_rows,
    )
    return model


def _integer_inverse(U):
    inv = mat_inverse(U)
    rows = tuple(tuple(int(x) for x in r) for r in inv)
    return rows, None


# ---------------------------------------------------------------------------
# sections and order functions
# ---------------------------------------------------------------------------

def section_polytope(model: ToricModel, D: ToricDivisor) -> SectionPolytope:
    rows = [
        (vec(v), -Fraction(a)) for v, a in zip(model.fan.rays, D.coeffs)
    ]
    return SectionPolytope(Polyhedron.from_rows(rows, model.fan.ambient_rank), model.fan.ambient_rank)


def h0(model: ToricModel, D: ToricDivisor) -> int:
    """Number of lattice points of the section polytope of the floor of D."""
    P = section_polytope(model, D.floor())
    return len(lattice_points(P.polyhedron))


def support_function_value(model: ToricModel, D: ToricDivisor, v) -> Fraction:
    """Value at v of the piecewise linear function with value -a_rho at v_rho."""
    vv = v.vector if isinstance(v, ToricValuation) else vec(v)
    idx = model.fan.max_cone_containing(vv)
    rows = [vec(model.fan.rays[i]) for i in idx]
    coeffs = solve_linear(list(zip(*rows)), vv)
    assert coeffs is not None
    return sum(
        (-Fraction(D.coeffs[i]) * c for i, c in zip(idx, coeffs)), ZERO
    )


def is_effective_class(model: ToricModel, D: ToricDivisor) -> bool:
    return section_polytope(model, D).feasible


def asymptotic_order(model: ToricModel, D: ToricDivisor, v) -> Fraction:
    """Asymptotic order of vanishing of the class of D along the valuation v.

    Computed as min over the relaxed rational section polytope of
    <m, v> minus the support function at v; zero exactly on classes whose
    multiples eventually have no base divisor through v.
    """
    vv = v.vector if isinstance(v, ToricValuation) else vec(v)
    P = section_polytope(model, D)
    res = lp_minimize(vv, P.polyhedron.inequalities)
    if res.status == "infeasible":
        raise NotEffectiveError("divisor class has no effective multiple")
    assert res.status == "optimal", "section polytopes of complete fans are bounded"
    value = res.value - support_function_value(model, D, vv)
    assert value >= 0
    return value


def is_semiample(model: ToricModel, D: ToricDivisor) -> bool:
    """Convexity of the support function (the toric semiampleness criterion)."""
    for idx in model.fan.max_cones:
        rows = [vec(model.fan.rays[i]) for i in idx]
        m_sigma = solve_linear(rows, [-Fraction(D.coeffs[i]) for i in idx])
        for tau in range(model.n_rays):
            if tau in idx:
                continue
            if dot(m_sigma, model.fan.rays[tau]) + D.coeffs[tau] < 0:
                return False
    return True


# ---------------------------------------------------------------------------
# cones of divisor classes
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def effective_cone(model: ToricModel) -> Cone:
    """Image in class space of the nonnegative coefficient orthant."""
    gens = [model.class_of([1 if j == i else 0 for j in range(model.n_rays)])
            for i in range(model.n_rays)]
    return Cone.from_rays(gens, ambient_dim=model.class_rank)


@lru_cache(maxsize=None)
def nef_cone(model: ToricModel) -> Cone:
    """Classes with convex support function, via the per-cone inequalities."""
    rows = set()
    for idx in model.fan.max_cones:
        rays = [vec(model.fan.rays[i]) for i in idx]
        vinv_t = tuple(zip(*mat_inverse(rays)))  # transpose of V_sigma^-1
        for tau in range(model.n_rays):
            if tau in idx:
                continue
            coeff = [ZERO] * model.n_rays
            coeff[tau] = Fraction(1)
            wt = mat_vec(vinv_t, vec(model.fan.rays[tau]))  # v_tau^T V^-1
            for pos, i in enumerate(idx):
                coeff[i] -= wt[pos]
            rows.add(tuple(coeff))
    coeff_cone = Cone.from_inequalities(sorted(rows), ambient_dim=model.n_rays)
    return _push_to_classes(model, coeff_cone)


@lru_cache(maxsize=None)
def movable_cone(model: ToricModel) -> Cone:
    """Intersection over rays of the closures of {classes with o_rho = 0}."""
    n = model.fan.ambient_rank
    R = model.n_rays
    result = effective_cone(model)
    for rho in range(R):
        ineqs = []
        for tau in range(R):
            row = list(vec(model.fan.rays[tau])) + [ZERO] * R
            row[n + tau] = Fraction(1)
            ineqs.append(tuple(row))
        eq = list(vec(model.fan.rays[rho])) + [ZERO] * R
        eq[n + rho] = Fraction(1)
        cone_ma = Cone.from_inequalities(ineqs, [tuple(eq)], n + R)
        gens = [g[n:] for g in cone_ma.rays]
        lins = [l[n:] for l in cone_ma.lineality]
        cls_gens = [model.class_of(g) for g in gens]
        cls_lins = [model.class_of(l) for l in lins]
        cls_lins = [l for l in cls_lins if not is_zero_vec(l)]
        c_rho = Cone.from_rays(cls_gens, cls_lins, model.class_rank)
        result = intersect(result, c_rho)
    return result


def _push_to_classes(model: ToricModel, coeff_cone: Cone) -> Cone:
    gens = [model.class_of(r) for r in coeff_cone.rays]
    lins = [model.class_of(l) for l in coeff_cone.lineality]
    lins = [l for l in lins if not is_zero_vec(l)]
    return Cone.from_rays(gens, lins, model.class_rank)


# ---------------------------------------------------------------------------
# Proj fans of section polytopes
# ---------------------------------------------------------------------------

def _polytope_hull_data(points, n):
    """Canonical facet data of conv(points): vertices, facets, equations."""
    homog = [vec([1] + list(p)) for p in points]
    hull = Cone.from_rays(homog, ambient_dim=n + 1)
    facets = [f for f in hull.facets]
    eqs = [e for e in hull.equations if not is_zero_vec(e[1:])]
    verts = []
    for r in hull.rays:
        assert r[0] > 0, "bounded hull expected"
        verts.append(tuple(Fraction(x, r[0]) for x in r[1:]))
    return sorted(verts), facets, eqs


def _quotient_projection(lineality, n):
    """Integer projection Z^n -> Z^n/sat(span lineality); rows of the map."""
    if not lineality:
        return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    normals = nullspace_basis([vec(v) for v in lineality], n)
    sat = _integer_kernel(normals, n)
    cols = [[sat[j][i] for j in range(len(sat))] for i in range(n)]
    U, S, V = smith_normal_form(cols)
    k = len(sat)
    for i in range(k):
        assert S[i][i] == 1, "saturated sublattice expected"
    return tuple(tuple(U[i]) for i in range(k, n))


def _integer_kernel(rows, n):
    """Basis of {v in Z^n : rows @ v = 0} (saturated by construction)."""
    if not rows:
        return [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    mat = [[int(x) for x in r] for r in rows]
    U, S, V = smith_normal_form(mat)
    m = len(mat)
    k = sum(1 for i in range(min(m, n)) if S[i][i] != 0)
    vt = [[V[i][j] for i in range(n)] for j in range(n)]  # columns of V
    return [tuple(vt[j]) for j in range(k, n)]


def normal_fan_of_points(points, n) -> tuple[Fan, int]:
    """Normal fan (min convention) of conv(points), in the quotient by the
    directions along which the polytope is thin. Returns (fan, dropped_rank)."""
    verts, facets, eqs = _polytope_hull_data(points, n)
    lin_dirs = [e[1:] for e in eqs]
    proj = _quotient_projection(lin_dirs, n)
    qrank = len(proj)
    ray_map: dict = {}
    cones = []
    for u in verts:
        tight = [f for f in facets if Fraction(f[0]) + dot(f[1:], u) == 0]
        qrays = []
        for f in tight:
            q = primitive(mat_vec(proj, vec(f[1:])))
            if not is_zero_vec(q):
                qrays.append(q)
        cone = Cone.from_rays(qrays, ambient_dim=qrank) if qrays else Cone.zero(qrank)
        idxs = []
        for r in cone.rays:
            if r not in ray_map:
                ray_map[r] = len(ray_map)
            idxs.append(ray_map[r])
        cones.append(tuple(sorted(idxs)))
    rays = [None] * len(ray_map)
    for r, i in ray_map.items():
        rays[i] = r
    cones = [c for c in cones if c]
    maximal = [c for c in cones if not any(set(c) < set(d) for d in cones)]
    fan = Fan.make(qrank, rays, sorted(set(maximal))) if rays else Fan(qrank, (), ())
    return fan.canonical(), n - qrank


def rational_proj_fan(model: ToricModel, coeffs) -> tuple[Fan, int]:
    """Normal fan of the relaxed rational section polytope of the coefficients."""
    D = ToricDivisor(model, coeffs)
    P = section_polytope(model, D)
    if not P.feasible:
        raise NotEffectiveError("divisor class has no effective multiple")
    verts = [v for v, _ in P.polyhedron.vertices()]
    return normal_fan_of_points(verts, model.fan.ambient_rank)


def stabilized_proj_fan(model: ToricModel, coeffs) -> tuple[Fan, int, int]:
    """Proj fan via lattice points of a sufficiently divisible multiple.

    The multiple starts at the denominator clearing both the coefficients and
    the vertices of the rational section polytope, then doubles until the
    normal fan of the lattice hull matches itself twice. Returns
    (fan, dropped_rank, multiple).
    """
    D = ToricDivisor(model, coeffs)
    P = section_polytope(model, D)
    if not P.feasible:
        raise NotEffectiveError("divisor class has no effective multiple")
    verts = [v for v, _ in P.polyhedron.vertices()]
    dens = [Fraction(c).denominator for c in D.coeffs]
    for u in verts:
        dens.extend(x.denominator for x in u)
    k = lcm(*dens) if dens else 1

    def fan_at(mult):
        pts = lattice_points(section_polytope(model, D.scale(mult)).polyhedron)
        if not pts:
            raise NotEffectiveError("no sections at the stabilizing multiple")
        return normal_fan_of_points([vec(p) for p in pts], model.fan.ambient_rank)

    cur = fan_at(k)
    while True:
        nxt = fan_at(2 * k)
        nxt2 = fan_at(4 * k)
        if cur == nxt and nxt == nxt2:
            break
        cur, k = nxt, 2 * k
    rational = rational_proj_fan(model, coeffs)
    assert cur == rational, "lattice-stabilized fan must agree with the rational normal fan"
    return cur[0], cur[1], k
