"""Minimal-model chamber walks with classified wall crossings.

A walk starts in the nef chamber, follows the straight segment from a fixed
interior ample class to the target class, and crosses one wall at a time,
classifying each crossing by comparing the canonical Proj fans of the two
chambers: a deleted ray is a divisorial contraction, an unchanged ray set
with a different cone structure is a flip. The walk halts in the chamber
containing the target; a target on the support boundary whose Proj model
drops dimension ends in a fiber-type state instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactgeom import Cone, dot, intersect, is_zero_vec, lp_minimize, vec
from .chambers import (
    Chamber,
    ChamberComplex,
    RingSpec,
    chamber_decomposition,
    support_cone,
)
from .toric import (
    Fan,
    ToricDivisor,
    build_model,
    effective_cone,
    h0,
    nef_cone,
    stabilized_proj_fan,
    support_function_value,
)
from .exactgeom import strictly_feasible

ZERO = Fraction(0)

DIVISORIAL = "divisorial"
FLIPPING = "flipping"
FIBER_TYPE_BOUNDARY = "fiber_type_boundary"

MINIMAL_MODEL = "minimal_model"
FIBER_TYPE = "fiber_type"


class TargetOutsideSupportError(ValueError):
    """The target class does not lie in the support cone."""


class SupportLacksAmpleError(ValueError):
    """No ample class in the support; the walk has nowhere to start."""


class NonAdjacentChambersError(ValueError):
    """The given wall is not a common facet of the two chambers."""


class WalkError(RuntimeError):
    """Internal walk invariant violated."""


@dataclass(frozen=True)
class WallCrossing:
    wall: Cone
    from_chamber: str
    to_chamber: str
    kind: str
    from_fan: Fan
    to_fan: Fan


@dataclass(frozen=True)
class MMPTrace:
    start_fan: Fan
    target: tuple
    crossings: tuple[WallCrossing, ...]
    status: str
    final_fan: Fan
    final_wall: Cone | None
    chamber_path: tuple[int, ...]


def classify_wall(spec: RingSpec, wall: Cone, from_chamber: Chamber, to_chamber: Chamber) -> str:
    """Wall kinds by fan comparison of the incident chamber models."""
    model = spec.model
    if not (_is_facet_of_chamber(wall, from_chamber) and _is_facet_of_chamber(wall, to_chamber)):
        raise NonAdjacentChambersError("wall is not a common facet of the chambers")
    eff = effective_cone(model)
    wall_big = strictly_feasible(
        eff.facets, list(wall.facets), list(wall.equations), model.class_rank
    )
    if not wall_big:
        return FIBER_TYPE_BOUNDARY
    rays_from = set(from_chamber.model_fan.rays)
    rays_to = set(to_chamber.model_fan.rays)
    if rays_from == rays_to:
        assert from_chamber.model_fan.canonical() != to_chamber.model_fan.canonical(), (
            "chamber models must differ across a genuine wall"
        )
        return FLIPPING
    dropped = rays_from - rays_to
    added = rays_to - rays_from
    if len(dropped) == 1 and not added:
        return DIVISORIAL
    if len(added) == 1 and not dropped:
        return DIVISORIAL
    raise WalkError(f"unexpected ray change across a wall: -{dropped} +{added}")


def _is_facet_of_chamber(wall: Cone, chamber: Chamber) -> bool:
    meet = intersect(wall, chamber.cone)
    return meet == wall and wall.dim == chamber.cone.dim - 1


def _ample_seed(spec: RingSpec) -> tuple:
    """Deterministic rational class interior to both nef cone and support."""
    model = spec.model
    sc = support_cone(spec)
    S = sc.class_cone
    nef = nef_cone(model)
    rank = model.class_rank
    strict = list(nef.facets) + list(S.facets)
    if not strict:
        strict = []
    ineqs = [(tuple(h) + (Fraction(-1),), ZERO) for h in strict]
    total = [sum(Fraction(h[i]) for h in strict) for i in range(rank)] if strict else [ZERO] * rank
    ineqs.append((tuple(-x for x in total) + (ZERO,), Fraction(-1)))
    eqs = [(tuple(e) + (ZERO,), ZERO) for e in S.equations]
    objective = [ZERO] * rank + [Fraction(-1)]
    res = lp_minimize(objective, ineqs, eqs, lexmin=True)
    if res.status != "optimal" or res.value >= 0:
        raise SupportLacksAmpleError("support cone contains no ample class")
    return res.point[:rank]


def run_walk(spec: RingSpec, target) -> MMPTrace:
    """Chamber walk from the nef chamber to the chamber of the target class."""
    model = spec.model
    target = vec(target)
    if len(target) != model.class_rank:
        raise ValueError("target must be a class vector")
    if is_zero_vec(target):
        raise TargetOutsideSupportError("target class is zero")
    cx = chamber_decomposition(spec)
    if not cx.support.class_cone.contains(target):
        raise TargetOutsideSupportError("target class lies outside the support cone")
    x0 = _ample_seed(spec)
    start_idx = next(
        (i for i, ch in enumerate(cx.chambers) if ch.cone.relint_contains(x0)),
        None,
    )
    if start_idx is None:
        start_idx = next(i for i, ch in enumerate(cx.chambers) if ch.cone.contains(x0))
    start = cx.chambers[start_idx]
    assert start.model_fan.same_fan(model.fan), "the nef chamber model is the input model"

    crossings: list[WallCrossing] = []
    path = [start_idx]
    visited = {start_idx}
    current_idx = start_idx
    while not cx.chambers[current_idx].cone.contains(target):
        current = cx.chambers[current_idx]
        exits = []
        for f in current.cone.facets:
            fk, ft = dot(f, x0), dot(f, target)
            if ft < 0:
                t = fk / (fk - ft)
                exits.append((t, f))
        if not exits:
            raise WalkError("target outside the chamber but no exit facet found")
        t_min = min(t for t, _ in exits)
        candidate_walls = []
        for t, f in exits:
            if t != t_min:
                continue
            wall = current.cone.face(f)
            incident = [
                w for w in cx.walls
                if w.cone == wall and current_idx in w.chambers
            ]
            if incident:
                candidate_walls.append((wall.key(), wall, incident[0]))
        if not candidate_walls:
            raise WalkError("exit facet has no neighboring chamber inside the support")
        candidate_walls.sort(key=lambda t: t[0])
        _, wall, wrec = candidate_walls[0]
        nxt_idx = wrec.chambers[0] if wrec.chambers[1] == current_idx else wrec.chambers[1]
        if nxt_idx in visited:
            raise WalkError("walk revisited a chamber")
        nxt = cx.chambers[nxt_idx]
        kind = classify_wall(spec, wall, current, nxt)
        crossings.append(
            WallCrossing(wall, current.model_id, nxt.model_id, kind, current.model_fan, nxt.model_fan)
        )
        if kind == DIVISORIAL:
            assert nxt.model_fan.is_simplicial, "divisorial output must stay simplicial"
        visited.add(nxt_idx)
        path.append(nxt_idx)
        current_idx = nxt_idx
        if len(path) > len(cx.chambers):
            raise WalkError("walk exceeded the chamber count")

    final_chamber = cx.chambers[current_idx]
    rep = model.divisor_with_class(target)
    target_fan, dropped, _ = stabilized_proj_fan(model, rep.coeffs)
    if dropped > 0:
        status = FIBER_TYPE
        final_fan = target_fan
        final_wall = _support_face_containing(cx, target)
    else:
        status = MINIMAL_MODEL
        final_fan = final_chamber.model_fan
        final_wall = None
    return MMPTrace(
        start_fan=model.fan,
        target=target,
        crossings=tuple(crossings),
        status=status,
        final_fan=final_fan,
        final_wall=final_wall,
        chamber_path=tuple(path),
    )


def _support_face_containing(cx: ChamberComplex, cls) -> Cone:
    """Smallest face of the support cone containing the class."""
    S = cx.support.class_cone
    tight = [f for f in S.facets if dot(f, cls) == 0]
    return Cone.from_inequalities(
        list(S.facets), list(S.equations) + tight, S.ambient_dim
    )


def picard_rank_ledger(trace: MMPTrace) -> list[int]:
    """Class-group ranks of the models along the walk."""
    ranks = [len(trace.start_fan.rays) - trace.start_fan.ambient_rank]
    for cr in trace.crossings:
        ranks.append(len(cr.to_fan.rays) - cr.to_fan.ambient_rank)
    for prev, cur, cr in zip(ranks, ranks[1:], trace.crossings):
        if cr.kind == DIVISORIAL:
            assert cur == prev - 1, "divisorial crossing must drop the rank by one"
        elif cr.kind == FLIPPING:
            assert cur == prev, "flipping crossing must preserve the rank"
    return ranks


def pushforward_coeffs(start_model, D: ToricDivisor, final_fan: Fan):
    """Coefficients of the pushforward: delete the contracted rays.

    Also certifies that the divisor dominates the pullback of its pushforward,
    i.e. the discrepancy at every contracted ray is nonnegative.
    """
    ray_index = {r: i for i, r in enumerate(start_model.fan.rays)}
    if final_fan.ambient_rank != start_model.fan.ambient_rank:
        raise ValueError("pushforward needs a birational (same-rank) final model")
    coeffs = []
    for r in final_fan.rays:
        if r not in ray_index:
            raise ValueError(f"final fan ray {r} is not a ray of the start model")
        coeffs.append(D.coeffs[ray_index[r]])
    final_model = build_model(final_fan)
    push = ToricDivisor(final_model, coeffs)
    for r in start_model.fan.rays:
        if r in set(final_fan.rays):
            continue
        pullback_coeff = -support_function_value(final_model, push, vec(r))
        residual = D.coeffs[ray_index[r]] - pullback_coeff
        assert residual >= 0, "contracted ray carries a negative discrepancy"
    return push


def section_preservation_check(spec: RingSpec, trace: MMPTrace, target, k_max: int,
                               pushforward: ToricDivisor | None = None) -> bool:
    """h^0 of multiples of the target agrees on the start and final models."""
    model = spec.model
    target = vec(target)
    if trace.status != MINIMAL_MODEL:
        raise ValueError("section preservation is a birational (minimal model) check")
    if any(Fraction(t).denominator != 1 for t in target):
        raise ValueError("section preservation needs an integral target class")
    D = model.divisor_with_class(target)
    if pushforward is None:
        pushforward = pushforward_coeffs(model, D, trace.final_fan)
    final_model = pushforward.model
    for k in range(1, k_max + 1):
        up = h0(model, D.scale(k))
        down = h0(final_model, pushforward.scale(k))
        if up != down:
            return False
    return True
