"""Support cones of multigraded section rings and their chamber geography.

The support cone lives in divisor-coefficient space. Its chamber complex is
recorded in numerical class coordinates, where all asymptotic order
functions descend: a chamber is a maximal region on which the normal fan of
the section polytope is constant, so every order function is linear there
and the attached Proj model does not move. Each chamber stores, for every
fan ray, the exact linear functional equal to the order function of that
ray, verified against the LP-computed values at the chamber generators and
barycenter.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactgeom import (
    Cone,
    Vector,
    dot,
    intersect,
    is_zero_vec,
    mat_inverse,
    mat_vec,
    primitive,
    sign_normalized,
    solve_linear,
    strictly_feasible,
    subspace_basis,
    vadd,
    vec,
)
from .toric import (
    Fan,
    NotEffectiveError,
    ToricDivisor,
    ToricModel,
    ToricValuation,
    asymptotic_order,
    effective_cone,
    nef_cone,
    rational_proj_fan,
    stabilized_proj_fan,
)

ZERO = Fraction(0)


class DegenerateSupportError(ValueError):
    """The support cone is zero; there is nothing to decompose."""


class NoBigClassError(ValueError):
    """The chamber carries no class with full-dimensional sections."""


class ClassMismatchError(ValueError):
    """The two divisors do not share a class."""


class KappaInsideError(ValueError):
    """The viewpoint must lie strictly outside the cone."""


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RingSpec:
    """A model together with the divisors spanning the multigraded ring."""

    model: ToricModel
    divisors: tuple[ToricDivisor, ...]

    @staticmethod
    def make(model: ToricModel, divisors) -> "RingSpec":
        divisors = tuple(divisors)
        if not divisors:
            raise ValueError("a ring spec needs at least one divisor")
        for d in divisors:
            if d.model != model:
                raise ValueError("all divisors must live on the shared model")
        return RingSpec(model, divisors)

    @staticmethod
    def spanning(model: ToricModel) -> "RingSpec":
        """The spec generated by all ray divisors (spans the effective cone)."""
        return RingSpec.make(model, [model.ray_divisor(i) for i in range(model.n_rays)])


@dataclass(frozen=True)
class SupportCone:
    cone: Cone          # in divisor-coefficient space
    class_cone: Cone    # its image in class space
    contains_big: bool
    contains_ample: bool


@dataclass(frozen=True)
class Chamber:
    cone: Cone                                 # class space
    linear_forms: tuple[Vector, ...]           # one class functional per fan ray
    model_fan: Fan
    model_id: str
    proj_multiple: int
    dropped_rank: int


@dataclass(frozen=True)
class Wall:
    cone: Cone
    chambers: tuple[int, int]


@dataclass(frozen=True)
class ChamberComplex:
    spec: RingSpec
    support: SupportCone
    chambers: tuple[Chamber, ...]
    walls: tuple[Wall, ...]

    def chamber_containing(self, cls) -> int | None:
        for i, ch in enumerate(self.chambers):
            if ch.cone.contains(cls):
                return i
        return None


# ---------------------------------------------------------------------------
# support cone
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def support_cone(spec: RingSpec) -> SupportCone:
    """Preimage of the effective cone inside the cone spanned by the divisors."""
    model = spec.model
    R = model.n_rays
    div_cone = Cone.from_rays([d.coeffs for d in spec.divisors], ambient_dim=R)
    eff = effective_cone(model)
    pre_rows = [_pullback_functional(model, f) for f in eff.facets]
    pre_rows += [_pullback_functional(model, e) for e in eff.equations]
    pre_rows += [tuple(-x for x in _pullback_functional(model, e)) for e in eff.equations]
    cone = intersect(div_cone, Cone.from_inequalities(pre_rows, [], R)) if pre_rows else div_cone
    cls_gens = [model.class_of(r) for r in cone.rays]
    cls_lins = [model.class_of(l) for l in cone.lineality]
    cls_lins = [l for l in cls_lins if not is_zero_vec(l)]
    class_cone = Cone.from_rays(cls_gens, cls_lins, model.class_rank)
    nef = nef_cone(model)
    big = strictly_feasible(
        eff.facets, list(class_cone.facets), list(class_cone.equations), model.class_rank
    ) if not class_cone.is_zero else False
    ample = strictly_feasible(
        nef.facets, list(class_cone.facets), list(class_cone.equations), model.class_rank
    ) if not class_cone.is_zero else False
    return SupportCone(cone, class_cone, big, ample)


def _pullback_functional(model: ToricModel, f) -> tuple:
    """Compose a class functional with the degree map."""
    return tuple(
        sum(Fraction(f[j]) * model.degree_map[j][rho] for j in range(model.class_rank))
        for rho in range(model.n_rays)
    )


# ---------------------------------------------------------------------------
# chamber decomposition
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def chamber_decomposition(spec: RingSpec) -> ChamberComplex:
    model = spec.model
    sc = support_cone(spec)
    S = sc.class_cone
    if S.is_zero:
        raise DegenerateSupportError("support cone is zero")
    rank = model.class_rank
    basis = subspace_basis(list(S.rays) + list(S.lineality), rank)
    d = len(basis)

    def embed(y) -> Vector:
        out = vec([0] * rank)
        for c, b in zip(y, basis):
            out = vadd(out, vec([Fraction(c) * Fraction(x) for x in b]))
        return out

    def coords(x) -> Vector:
        sol = solve_linear(list(zip(*basis)), vec(x))
        assert sol is not None
        return sol

    def to_y_functional(phi) -> tuple:
        return tuple(dot(phi, b) for b in basis)

    S_y = Cone.from_rays([coords(r) for r in S.rays], ambient_dim=d)
    hyperplanes = _secondary_hyperplanes(model, to_y_functional)
    cells = [S_y]
    for h in hyperplanes:
        nxt = []
        for cell in cells:
            pos = intersect(cell, Cone.from_inequalities([h], [], d))
            neg = intersect(cell, Cone.from_inequalities([tuple(-x for x in h)], [], d))
            if pos.dim == cell.dim and neg.dim == cell.dim:
                nxt.extend([pos, neg])
            else:
                nxt.append(cell)
        cells = nxt

    groups: dict = {}
    for cell in cells:
        sample_cls = embed(cell.interior_point())
        a = _integral_rep(model, sample_cls)
        fan, dropped = rational_proj_fan(model, a.coeffs)
        key = (fan, dropped)
        groups.setdefault(key, []).append(cell)

    chambers = []
    for (fan, dropped), cell_group in groups.items():
        gens = [embed(r) for cell in cell_group for r in cell.rays]
        cone = Cone.from_rays(gens, ambient_dim=rank)
        sample_cls = embed(cell_group[0].interior_point())
        forms = _chamber_linear_forms(model, sample_cls)
        _verify_forms(model, cone, forms)
        bary = cone.interior_point()
        model_fan, dropped2, mult = stabilized_proj_fan(model, _integral_rep(model, bary).coeffs)
        assert (model_fan, dropped2) == (fan, dropped)
        chambers.append(
            Chamber(cone, forms, model_fan, model_fan.digest(), mult, dropped)
        )
    chambers.sort(key=lambda ch: ch.cone.key())
    walls = []
    for i in range(len(chambers)):
        for j in range(i + 1, len(chambers)):
            w = intersect(chambers[i].cone, chambers[j].cone)
            if w.dim == S.dim - 1:
                walls.append(Wall(w, (i, j)))
    walls.sort(key=lambda w: w.cone.key())
    return ChamberComplex(spec, sc, tuple(chambers), tuple(walls))


def _secondary_hyperplanes(model: ToricModel, to_y):
    """Sign-canonical hyperplanes across which the section-polytope
    combinatorics can change: feasibility functionals of all vertex bases."""
    n = model.fan.ambient_rank
    R = model.n_rays
    out = set()
    for base in itertools.combinations(range(R), n):
        rows = [vec(model.fan.rays[i]) for i in base]
        try:
            vinv_t = tuple(zip(*mat_inverse(rows)))
        except ValueError:
            continue
        for tau in range(R):
            if tau in base:
                continue
            f = [ZERO] * R
            f[tau] = Fraction(1)
            wt = mat_vec(vinv_t, vec(model.fan.rays[tau]))
            for pos, i in enumerate(base):
                f[i] -= wt[pos]
            phi = _compose_with_section(model, f)
            phi_y = to_y(phi)
            if not is_zero_vec(phi_y):
                out.add(sign_normalized(phi_y))
    return sorted(out)


def _compose_with_section(model: ToricModel, f) -> Vector:
    """Turn a coefficient-space functional into a class-space functional."""
    return tuple(
        sum(Fraction(f[rho]) * model.section[rho][j] for rho in range(model.n_rays))
        for j in range(model.class_rank)
    )


def _integral_rep(model: ToricModel, cls) -> ToricDivisor:
    """Canonical divisor representative; integral when the class is integral."""
    return model.divisor_with_class(cls)


def _chamber_linear_forms(model: ToricModel, sample_cls) -> tuple[Vector, ...]:
    """Per-ray linear forms of the order functions, from the minimizing vertex."""
    a = _integral_rep(model, sample_cls)
    from .toric import section_polytope

    P = section_polytope(model, a)
    verts = P.polyhedron.vertices()
    forms = []
    for rho in range(model.n_rays):
        v_rho = vec(model.fan.rays[rho])
        best = None
        for u, tight in verts:
            val = dot(u, v_rho)
            if best is None or val < best[0]:
                best = (val, u, tight)
        _, u_star, tight = best
        rows = [vec(model.fan.rays[i]) for i in tight]
        sel = _independent_subset(rows, model.fan.ambient_rank)
        base = [tight[i] for i in sel]
        base_rows = [vec(model.fan.rays[i]) for i in base]
        vinv_t = tuple(zip(*mat_inverse(base_rows)))
        f = [ZERO] * model.n_rays
        f[rho] += Fraction(1)
        wt = mat_vec(vinv_t, v_rho)
        for pos, i in enumerate(base):
            f[i] -= wt[pos]
        forms.append(_compose_with_section(model, f))
    return tuple(forms)


def _independent_subset(rows, n):
    """Indices of a maximal linearly independent prefix-greedy subset."""
    chosen: list[int] = []
    mat: list = []
    for i, r in enumerate(rows):
        cand = mat + [r]
        from .exactgeom import matrix_rank

        if matrix_rank(cand) == len(cand):
            mat = cand
            chosen.append(i)
            if len(chosen) == n:
                break
    return chosen


def _verify_forms(model: ToricModel, cone: Cone, forms):
    """Exact agreement of the stored forms with the LP order functions."""
    pts = list(cone.rays) + [cone.interior_point()]
    for rho, phi in enumerate(forms):
        val = ToricValuation(model.fan.rays[rho])
        for p in pts:
            if is_zero_vec(p):
                continue
            expect = asymptotic_order(model, _integral_rep(model, p), val)
            got = dot(phi, p)
            assert got == expect, (
                f"linear form for ray {rho} disagrees with the order function at {p}"
            )
            assert got >= 0


# ---------------------------------------------------------------------------
# Proj models
# ---------------------------------------------------------------------------

def proj_model(spec: RingSpec, chamber: Chamber) -> Fan:
    """The Proj fan attached to a chamber with a big interior class."""
    model = spec.model
    eff = effective_cone(model)
    big = strictly_feasible(
        eff.facets, list(chamber.cone.facets), list(chamber.cone.equations), model.class_rank
    )
    if not big:
        raise NoBigClassError("chamber has no big class in its relative interior")
    return chamber.model_fan


def numerical_proj_invariance(spec: RingSpec, D1: ToricDivisor, D2: ToricDivisor) -> bool:
    """Proj fans of two big divisors with equal class coincide canonically."""
    model = spec.model
    if D1.class_vector() != D2.class_vector():
        raise ClassMismatchError("divisors have different classes")
    if model.torsion:
        t1 = model.torsion_class_of(_cleared(D1.coeffs))
        t2 = model.torsion_class_of(_cleared(D2.coeffs))
        if t1 != t2:
            raise ClassMismatchError("divisors differ by a torsion class")
    eff = effective_cone(model)
    for D in (D1, D2):
        cls = D.class_vector()
        if not all(dot(f, cls) > 0 for f in eff.facets):
            raise NoBigClassError("numerical Proj invariance needs big divisors")
    f1, _, _ = stabilized_proj_fan(model, D1.coeffs)
    f2, _, _ = stabilized_proj_fan(model, D2.coeffs)
    return f1 == f2


def _cleared(coeffs):
    from math import lcm

    den = lcm(*(Fraction(c).denominator for c in coeffs))
    return [Fraction(c) * den for c in coeffs]


# ---------------------------------------------------------------------------
# slices
# ---------------------------------------------------------------------------

def nef_slice(spec: RingSpec) -> Cone:
    """Support meet nef, in class space; every integral class in it is semiample."""
    sc = support_cone(spec)
    return intersect(sc.class_cone, nef_cone(spec.model))


def movable_slice(spec: RingSpec) -> Cone:
    """Union of the chambers on which every ray order function vanishes."""
    cx = chamber_decomposition(spec)
    gens = []
    for ch in cx.chambers:
        if all(is_zero_vec(phi) for phi in ch.linear_forms):
            gens.extend(ch.cone.rays)
    if not gens:
        return Cone.zero(spec.model.class_rank)
    return Cone.from_rays(gens, ambient_dim=spec.model.class_rank)


# ---------------------------------------------------------------------------
# visible boundary
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VisibleFacet:
    normal: tuple
    facet: Cone


def visible_boundary(cone: Cone, kappa) -> tuple[VisibleFacet, ...]:
    """Facets of a full-dimensional cone visible from an exterior viewpoint.

    A facet with inward normal n is visible from kappa exactly when
    n(kappa) < 0: the open segment from kappa to a relative-interior point of
    the facet then meets the cone only at its endpoint.
    """
    kappa = vec(kappa)
    if cone.equations:
        raise ValueError("visible boundary needs a full-dimensional cone")
    vals = [dot(f, kappa) for f in cone.facets]
    if all(v >= 0 for v in vals):
        raise KappaInsideError("viewpoint lies in the cone or on its boundary")
    out = []
    for f, v in zip(cone.facets, vals):
        if v < 0:
            out.append(VisibleFacet(f, cone.face(f)))
    return tuple(out)


def segment_entry_parameter(cone: Cone, kappa, delta) -> Fraction:
    """min {t in [0,1] : kappa + t (delta - kappa) in cone}, for delta in cone.

    Equals 1 exactly when the segment meets the cone only in delta.
    """
    kappa, delta = vec(kappa), vec(delta)
    assert cone.contains(delta)
    t_star = Fraction(0)
    for f in cone.facets:
        fk, fd = dot(f, kappa), dot(f, delta)
        if fk < 0:
            t = fk / (fk - fd)  # f(kappa + t (delta-kappa)) = 0
            if t > t_star:
                t_star = t
    return t_star
