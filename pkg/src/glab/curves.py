"""Genus <= 1 curve models with an abstract Jacobian.

The Jacobian is a finitely generated abelian group presentation; a named
point carries its degree-zero class. That is all a curve needs here: h^0 of
a divisor is decided by degree plus, in the boundary case, triviality of the
class, and finite generation of bigraded section rings is decided by torsion
tests on the zero-degree boundary rays of the support cone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .exactgeom import primitive


class UnsupportedClassShapeError(ValueError):
    """The numeric class is not of the ruled-surface shape this model decides."""


# ---------------------------------------------------------------------------
# jacobian arithmetic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JacobianGroup:
    """Finitely generated abelian group Z^r x prod Z/d_i."""

    free_rank: int
    torsion_orders: tuple[int, ...]

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        for d in self.torsion_orders:
            if d < 2:
                raise ValueError("torsion orders must be >= 2")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion_orders

    def element(self, free=(), torsion=()) -> "JacElement":
        free = tuple(int(x) for x in free)
        torsion = tuple(int(x) for x in torsion)
        if len(free) != self.free_rank or len(torsion) != len(self.torsion_orders):
            raise ValueError("element coordinates do not match the presentation")
        torsion = tuple(t % d for t, d in zip(torsion, self.torsion_orders))
        return JacElement(self, free, torsion)

    def zero(self) -> "JacElement":
        return self.element((0,) * self.free_rank, (0,) * len(self.torsion_orders))


@dataclass(frozen=True)
class JacElement:
    group: JacobianGroup
    free: tuple[int, ...]
    torsion: tuple[int, ...]

    def __add__(self, other: "JacElement") -> "JacElement":
        return self.group.element(
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a + b for a, b in zip(self.torsion, other.torsion)),
        )

    def scale(self, k: int) -> "JacElement":
        return self.group.element(
            tuple(k * a for a in self.free), tuple(k * a for a in self.torsion)
        )

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for x in self.free) and all(x == 0 for x in self.torsion)

    def order(self) -> int | None:
        """Order of the element, or None if it has infinite order."""
        if any(x != 0 for x in self.free):
            return None
        o = 1
        for t, d in zip(self.torsion, self.group.torsion_orders):
            o = math.lcm(o, d // gcd(t, d))
        return o

    @property
    def is_torsion(self) -> bool:
        return self.order() is not None


# ---------------------------------------------------------------------------
# curve models and divisors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveModel:
    genus: int
    jacobian: JacobianGroup
    points: tuple[tuple[str, JacElement], ...]

    @staticmethod
    def make(genus, jacobian: JacobianGroup, points: dict) -> "CurveModel":
        if genus not in (0, 1):
            raise ValueError("only genus 0 and 1 curve models are supported")
        if genus == 0 and not jacobian.is_trivial:
            raise ValueError("a genus-0 model must have trivial jacobian")
        pts = tuple(sorted((str(k), v) for k, v in points.items()))
        for _, cls in pts:
            if cls.group != jacobian:
                raise ValueError("point class from a different group presentation")
        return CurveModel(genus, jacobian, pts)

    def point_class(self, name: str) -> JacElement:
        for k, v in self.points:
            if k == name:
                return v
        raise KeyError(f"unknown point {name!r}")

    def divisor(self, multiplicities: dict) -> "CurveDivisor":
        return CurveDivisor.make(self, multiplicities)


@dataclass(frozen=True)
class CurveDivisor:
    model: CurveModel
    multiplicities: tuple[tuple[str, Fraction], ...]

    @staticmethod
    def make(model: CurveModel, multiplicities: dict) -> "CurveDivisor":
        mults = []
        for name, m in multiplicities.items():
            model.point_class(str(name))  # existence check
            m = Fraction(m)
            if m != 0:
                mults.append((str(name), m))
        return CurveDivisor(model, tuple(sorted(mults)))

    @property
    def degree(self) -> Fraction:
        return sum((m for _, m in self.multiplicities), Fraction(0))

    @property
    def is_integral(self) -> bool:
        return all(m.denominator == 1 for _, m in self.multiplicities)

    def floor(self) -> "CurveDivisor":
        return CurveDivisor.make(
            self.model,
            {name: Fraction(math.floor(m)) for name, m in self.multiplicities},
        )

    def jac_class(self) -> JacElement:
        if not self.is_integral:
            raise ValueError("jacobian class needs an integral divisor")
        acc = self.model.jacobian.zero()
        for name, m in self.multiplicities:
            acc = acc + self.model.point_class(name).scale(int(m))
        return acc

    def scale(self, k) -> "CurveDivisor":
        return CurveDivisor.make(
            self.model, {name: Fraction(k) * m for name, m in self.multiplicities}
        )

    def add(self, other: "CurveDivisor") -> "CurveDivisor":
        mults = dict(self.multiplicities)
        for name, m in other.multiplicities:
            mults[name] = mults.get(name, Fraction(0)) + m
        return CurveDivisor.make(self.model, mults)


def riemann_roch_h0(model: CurveModel, D: CurveDivisor) -> int:
    """h^0 of the floor of D, by Riemann-Roch on a genus 0 or 1 curve."""
    D = D.floor()
    deg = int(D.degree)
    if model.genus == 0:
        return deg + 1 if deg >= 0 else 0
    if deg < 0:
        return 0
    if deg == 0:
        return 1 if D.jac_class().is_zero else 0
    return deg


# ---------------------------------------------------------------------------
# bigraded support and finite generation verdicts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BigradedSupport:
    box: int
    pairs: tuple[tuple[int, int], ...]
    finitely_generated: bool
    witness: str


def _positive_part_rays(dx: int, dy: int):
    """Extremal rays of {(x,y) in R_+^2 : x*dx + y*dy >= 0}, primitive.

    Returns (rays, degenerate) where degenerate means the degree functional
    vanishes on the whole cone.
    """
    if dx == 0 and dy == 0:
        return [(1, 0), (0, 1)], True
    if dx >= 0 and dy >= 0:
        return [(1, 0), (0, 1)], False
    if dx < 0 and dy < 0:
        return [], False
    mixed = primitive((dy, -dx)) if dx < 0 else primitive((-dy, dx))
    mixed = tuple(abs(x) for x in mixed)
    if dx < 0:
        return [mixed, (0, 1)], False
    return [(1, 0), mixed], False


def _ray_verdicts(model: CurveModel, D: CurveDivisor, A: CurveDivisor):
    """Zero-degree boundary rays of the support cone with their class orders."""
    dx, dy = int(D.degree), int(A.degree)
    rays, degenerate = _positive_part_rays(dx, dy)
    out = []
    for (p, q) in rays:
        if p * dx + q * dy != 0:
            continue
        cls = D.scale(p).add(A.scale(q)).jac_class()
        out.append(((p, q), cls.order()))
    return rays, out, degenerate


def bigraded_support(model: CurveModel, D: CurveDivisor, A: CurveDivisor, box: int) -> BigradedSupport:
    """Support of the N^2-graded ring of (D, A) on a box, with a verdict.

    The finite-generation verdict is a closed-form torsion test on the
    zero-degree boundary rays of the support cone; the box enumeration is an
    independent witness checked against the predicted pattern.
    """
    if box < 1:
        raise ValueError("box bound must be >= 1")
    if not (D.is_integral and A.is_integral):
        raise ValueError("bigraded support needs integral divisors")
    pairs = tuple(
        (i, j)
        for i in range(box + 1)
        for j in range(box + 1)
        if riemann_roch_h0(model, D.scale(i).add(A.scale(j))) > 0
    )
    rays, zero_rays, degenerate = _ray_verdicts(model, D, A)
    if model.genus == 0 or degenerate:
        fg = True
    else:
        fg = all(order is not None for _, order in zero_rays)
    predicted = _predicted_pattern(model, D, A, box)
    assert set(pairs) == predicted, "case analysis disagrees with the enumeration"
    if degenerate:
        witness = "degree vanishes identically; support is a lattice submonoid, finitely generated"
    elif not zero_rays:
        witness = "no zero-degree boundary rays; support is the full positive-degree cone"
    else:
        parts = []
        for (p, q), order in zero_rays:
            if order is None:
                parts.append(f"ray ({p},{q}) carries a non-torsion class: support omits it")
            else:
                parts.append(f"ray ({p},{q}) carries torsion of order {order}: support meets it in multiples of ({order*p},{order*q})")
        witness = "; ".join(parts)
    return BigradedSupport(box, tuple(sorted(pairs)), fg, witness)


def _predicted_pattern(model, D, A, box):
    """Pattern implied by the ray case analysis (genus-1 closed form)."""
    dx, dy = int(D.degree), int(A.degree)
    pred = set()
    for i in range(box + 1):
        for j in range(box + 1):
            deg = i * dx + j * dy
            if deg > 0:
                pred.add((i, j))
            elif deg == 0:
                if (i, j) == (0, 0):
                    pred.add((i, j))
                elif model.genus == 0:
                    pred.add((i, j))
                else:
                    cls = D.scale(i).add(A.scale(j)).jac_class()
                    if cls.is_zero:
                        pred.add((i, j))
    return pred


def ruled_surface_slice_dims(model: CurveModel, D: CurveDivisor, A: CurveDivisor, k_max: int):
    """h^0 of the k-th powers of the tautological bundle on P(O(D)+O(A)).

    The k-th slice is the direct sum of the (i, j) graded pieces with
    i + j = k.
    """
    if not (D.is_integral and A.is_integral):
        raise ValueError("slice dimensions need integral divisors")
    out = []
    for k in range(k_max + 1):
        out.append(
            sum(
                riemann_roch_h0(model, D.scale(i).add(A.scale(k - i)))
                for i in range(k + 1)
            )
        )
    return out


@dataclass(frozen=True)
class TwistVerdict:
    finitely_generated: bool
    explanation: str
    slice_dims: tuple[int, ...]


def twisted_slice_ring_fg(model, D, A, G, k_max: int) -> TwistVerdict:
    """Finite generation of the section ring of O(1) twisted by a degree-0 pull-back.

    The k-th slice of the twisted bundle is the sum of h^0(iD + jA + kG) over
    i + j = k, which regrades the ring on (D + G, A + G); the verdict is the
    torsion test on the zero-degree boundary rays of that ring's support.
    """
    if not (D.is_integral and A.is_integral and G.is_integral):
        raise ValueError("twists need integral divisors")
    if G.degree != 0:
        raise ValueError("twist must have degree zero")
    dims = []
    for k in range(k_max + 1):
        dims.append(
            sum(
                riemann_roch_h0(model, D.scale(i).add(A.scale(k - i)).add(G.scale(k)))
                for i in range(k + 1)
            )
        )
    Dt, At = D.add(G), A.add(G)
    _, zero_rays, degenerate = _ray_verdicts(model, Dt, At)
    if model.genus == 0 or degenerate:
        fg = True
        why = "degree degenerate or genus zero; support is a finitely generated monoid"
    elif not zero_rays:
        fg = True
        why = "both boundary rays have positive degree"
    else:
        bad = [(r, o) for r, o in zero_rays if o is None]
        fg = not bad
        if bad:
            why = "; ".join(
                f"zero-degree ray ({p},{q}) carries a non-torsion class" for (p, q), _ in bad
            )
        else:
            why = "; ".join(
                f"zero-degree ray ({p},{q}) carries torsion of order {o}" for (p, q), o in zero_rays
            )
    return TwistVerdict(fg, why, tuple(dims))


@dataclass(frozen=True)
class GenVerdict:
    is_gen: bool
    explanation: str


def is_gen_numeric_class(model, D, A, xi_power: int = 1, base: CurveDivisor | None = None) -> GenVerdict:
    """Whether every representative of the numeric class has a f.g. section ring.

    The class shape is xi^e tensor the pull-back of a base divisor on the
    ruled surface P(O(D)+O(A)); representatives differ by a degree-0 base
    twist. On a genus-1 base the jacobian contains non-torsion classes, so a
    zero-degree boundary ray of the support cone can always be broken by some
    twist; the class is gen exactly when no such ray exists.
    """
    if base is None:
        base = CurveDivisor.make(model, {})
    if not isinstance(xi_power, int) or xi_power < 0:
        raise UnsupportedClassShapeError("tautological power must be a nonnegative integer")
    if not (D.is_integral and A.is_integral and base.is_integral):
        raise UnsupportedClassShapeError("class shape needs integral divisors")
    if model.genus == 0:
        return GenVerdict(True, "genus-0 base: trivial jacobian, no non-torsion twists exist")
    e = xi_power
    dD, dA, dB = int(D.degree), int(A.degree), int(base.degree)
    # support cone in (x, k): 0 <= x <= e*k, k >= 0; degree x*dD + (e*k-x)*dA + k*dB
    cx = dD - dA
    ck = e * dA + dB
    if e == 0:
        rays = [(0, 1)]
    else:
        rays = [(0, 1), (e, 1)]
    # intersect with the half plane {x*cx + k*ck >= 0}
    vals = [x * cx + k * ck for x, k in rays]
    zero_rays = []
    if all(v >= 0 for v in vals):
        zero_rays = [r for r, v in zip(rays, vals) if v == 0]
        if all(v == 0 for v in vals) and len(rays) == 2:
            zero_rays = rays  # degree vanishes on the whole cone
    elif all(v <= 0 for v in vals):
        zero_rays = [r for r, v in zip(rays, vals) if v == 0]
    else:
        # the zero-degree line crosses the cone interior
        (x1, k1), (x2, k2) = rays
        v1, v2 = vals
        mid = (v1 * x2 - v2 * x1, v1 * k2 - v2 * k1)
        mid = primitive(mid)
        if mid[1] < 0 or (mid[1] == 0 and mid[0] < 0):
            mid = tuple(-m for m in mid)
        zero_rays = [r for r, v in zip(rays, vals) if v == 0] + [mid]
    if not zero_rays:
        return GenVerdict(True, "every boundary ray of the support cone has nonzero degree")
    descr = ", ".join(f"({x},{k})" for x, k in zero_rays)
    return GenVerdict(
        False,
        f"zero-degree support ray(s) {descr} can be made non-torsion by a degree-0 twist",
    )
